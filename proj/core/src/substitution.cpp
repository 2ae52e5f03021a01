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
#include "semsub/substitution.hpp"

#include <algorithm>

namespace semsub {
namespace {

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](char ch) {
    return ch >= 'A' && ch <= 'Z' ? static_cast<char>(ch - 'A' + 'a') : ch;
  });
  return out;
}

}  // namespace

TokenFilter orthographic_variant_filter(std::string_view source) {
  return [needle = ascii_lower(source)](std::string_view token) {
    return ascii_lower(token).find(needle) != std::string::npos;
  };
}

SubstitutionResult substitute(std::string_view word, const EmbeddingTable& table,
                              const Subspace& subspace, std::size_t k,
                              std::optional<TokenFilter> exclude) {
  if (k == 0) throw PreconditionError("substitute: k must be positive");
  const Vector& vec = lookup(table, word);
  if (!exclude) exclude = orthographic_variant_filter(word);

  SubstitutionResult result;
  result.source = std::string(word);
  result.subspace_mode = subspace.mode();
  result.c = subspace.size();
  result.neutralized = remove_subspace(vec, subspace);
  const TokenFilter& extra = *exclude;
  result.candidates = nearest_neighbors(
      table, result.neutralized, k, [&](std::string_view token) {
        return token == word || (extra && extra(token));
      });
  return result;
}

std::vector<Neighbor> neighbors_before(std::string_view word,
                                       const EmbeddingTable& table, std::size_t k) {
  const Vector& vec = lookup(table, word);
  return nearest_neighbors(table, vec, k,
                           [&](std::string_view token) { return token == word; });
}

}  // namespace semsub
