// Copyright 2026 The semsub Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semsub/embeddings.hpp"
#include "semsub/subspace.hpp"

namespace semsub {

struct SubstitutionResult {
  std::string source;
  Vector neutralized;  // unit length, orthogonal to the subspace
  std::vector<Neighbor> candidates;
  SubspaceMode subspace_mode = SubspaceMode::kRaw;
  std::size_t c = 0;
};

// Matches tokens whose lowercase form contains lowercase(source). Lowercasing
// is ASCII-only; other bytes compare as-is.
TokenFilter orthographic_variant_filter(std::string_view source);

// Removes the subspace from the word's vector and returns the k nearest
// neighbours of what remains. The word itself is always excluded; exclude
// defaults to orthographic_variant_filter(word). Pass an empty TokenFilter to
// exclude only the word.
SubstitutionResult substitute(std::string_view word, const EmbeddingTable& table,
                              const Subspace& subspace, std::size_t k,
                              std::optional<TokenFilter> exclude = std::nullopt);

// Nearest neighbours of the unmodified word vector, excluding the word.
std::vector<Neighbor> neighbors_before(std::string_view word,
                                       const EmbeddingTable& table, std::size_t k);

}  // namespace semsub
