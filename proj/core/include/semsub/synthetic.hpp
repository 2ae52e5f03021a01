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
#include <cstdint>

#include "semsub/embeddings.hpp"
#include "semsub/subspace.hpp"

namespace semsub {

// Planted-direction benchmark. A unit direction u carries the contrast; a
// topic subspace T orthogonal to u carries nuisance variation. Source pairs
// are base +- (separation / 2) u plus per-member noise, with base drawn in T;
// the target task draws its topic coordinates around a mean displaced by
// topic_shift and adds isotropic noise of scale noise_scale.
struct SyntheticParams {
  std::size_t dim = 64;
  std::size_t n_pairs = 100;
  std::size_t n_task = 400;
  std::uint64_t seed = 0;
  double topic_shift = 5.0;
  double noise_scale = 0.8;
  std::size_t topic_dim = 0;    // 0 picks min(8, dim - 1)
  double topic_spread = 1.0;    // per-axis std of topic coordinates
  double separation = 3.0;      // distance between the two classes along u
  double pair_noise = 0.3;      // source noise scale on the first axis
  // Per-axis source noise decays geometrically from pair_noise down to
  // pair_noise * pair_noise_floor on the last axis, an anisotropic spectrum
  // like that of trained embeddings. 1 makes it isotropic.
  double pair_noise_floor = 0.01;
};

struct SyntheticBenchmark {
  EmbeddedPairSet pairs;  // RAW, surfaces "pairN_pos" / "pairN_neu"
  LabeledDataset task;    // ids "taskN", labels neutral / profane
  Vector direction;       // planted u
  Matrix topic_basis;     // dim x topic_dim, orthonormal columns
};

// Fully determined by params. Requires dim >= 4, n_pairs >= 5, n_task >= 10.
SyntheticBenchmark generate_synthetic_benchmark(const SyntheticParams& params);

}  // namespace semsub
