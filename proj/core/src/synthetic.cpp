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
#include "semsub/synthetic.hpp"

#include <cmath>

#include <Eigen/QR>

#include "semsub/rng.hpp"

namespace semsub {
namespace {

Vector gaussian(Rng& rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

}  // namespace

SyntheticBenchmark generate_synthetic_benchmark(const SyntheticParams& params) {
  if (params.dim < 4) throw PreconditionError("synthetic benchmark needs dim >= 4");
  if (params.n_pairs < 5) {
    throw PreconditionError("synthetic benchmark needs n_pairs >= 5");
  }
  if (params.n_task < 10) {
    throw PreconditionError("synthetic benchmark needs n_task >= 10");
  }
  const std::size_t topic_dim =
      params.topic_dim == 0 ? std::min<std::size_t>(8, params.dim - 1)
                            : params.topic_dim;
  if (topic_dim >= params.dim) {
    throw PreconditionError("topic_dim must be smaller than dim");
  }
  if (!(params.topic_spread >= 0.0) || !(params.noise_scale >= 0.0) ||
      !(params.pair_noise >= 0.0) || !(params.topic_shift >= 0.0) ||
      !(params.pair_noise_floor > 0.0) ||
      !(params.separation > 0.0)) {
    throw PreconditionError("synthetic benchmark scales must be nonnegative");
  }

  const auto d = static_cast<Eigen::Index>(params.dim);
  const auto t = static_cast<Eigen::Index>(topic_dim);
  Rng rng(params.seed);

  // Orthonormal frame: first column is u, the next topic_dim span T.
  Matrix raw(d, t + 1);
  for (Eigen::Index j = 0; j <= t; ++j) raw.col(j) = gaussian(rng, d);
  const Matrix frame = Eigen::HouseholderQR<Matrix>(raw).householderQ() *
                       Matrix::Identity(d, t + 1);
  SyntheticBenchmark bench;
  bench.direction = frame.col(0);
  bench.topic_basis = frame.rightCols(t);
  const Vector& u = bench.direction;
  const Matrix& topic = bench.topic_basis;
  const double half = 0.5 * params.separation;
  Vector noise_scales(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double frac = static_cast<double>(j) / static_cast<double>(d - 1);
    noise_scales[j] = params.pair_noise * std::pow(params.pair_noise_floor, frac);
  }

  bench.pairs.dim = params.dim;
  bench.pairs.mode = SubspaceMode::kRaw;
  bench.pairs.pairs.reserve(params.n_pairs);
  for (std::size_t i = 0; i < params.n_pairs; ++i) {
    const Vector base = topic * (params.topic_spread * gaussian(rng, t));
    const Vector noise_a = noise_scales.cwiseProduct(gaussian(rng, d));
    const Vector noise_b = noise_scales.cwiseProduct(gaussian(rng, d));
    const std::string stem = "pair" + std::to_string(i);
    bench.pairs.pairs.push_back({base + half * u + noise_a,
                                 base - half * u + noise_b, stem + "_pos",
                                 stem + "_neu"});
  }

  Vector shift_dir = gaussian(rng, t);
  shift_dir /= shift_dir.norm();
  const Vector topic_mean = params.topic_shift * shift_dir;

  bench.task.dim = params.dim;
  bench.task.labels = LabelNames{"neutral", "profane"};
  bench.task.instances.reserve(params.n_task);
  for (std::size_t j = 0; j < params.n_task; ++j) {
    const Label label = j % 2 == 0 ? Label::kPositive : Label::kNegative;
    const double sign = label == Label::kPositive ? 1.0 : -1.0;
    const Vector coords = topic_mean + params.topic_spread * gaussian(rng, t);
    const Vector noise = params.noise_scale * gaussian(rng, d);
    bench.task.instances.push_back(
        {"task" + std::to_string(j), topic * coords + sign * half * u + noise,
         label, std::nullopt});
  }
  return bench;
}

}  // namespace semsub
