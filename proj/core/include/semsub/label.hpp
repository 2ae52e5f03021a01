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

#include <cstdint>
#include <string>

namespace semsub {

// Two-class label. Pair member A (e.g. the profane word) is kPositive, the
// neutral counterpart is kNegative.
enum class Label : std::uint8_t {
  kNegative = 0,
  kPositive = 1,
};

constexpr int index_of(Label label) { return static_cast<int>(label); }

struct LabelNames {
  std::string negative = "neutral";
  std::string positive = "profane";

  const std::string& name(Label label) const {
    return label == Label::kPositive ? positive : negative;
  }
};

}  // namespace semsub
