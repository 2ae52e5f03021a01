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
// Library-versus-oracle comparisons shared by unit and acceptance tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "convert.hpp"
#include "oracles.hpp"
#include "semsub/classifier.hpp"
#include "semsub/subspace.hpp"

namespace testing {

struct PcaDiff {
  double component_error = 0.0;  // max abs coordinate difference
  double eigenvalue_error = 0.0;  // max abs difference relative to the top eigenvalue
  std::size_t compared = 0;
};

inline void largest_coordinate_positive(oracle::Vec& v) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  }
  if (v[arg] < 0) {
    for (double& x : v) x = -x;
  }
}

// Components are compared only where the oracle eigenvalue is separated from
// its neighbours, since eigenvectors of a repeated eigenvalue are not unique.
inline PcaDiff compare_pca(const semsub::EmbeddedPairSet& set, std::size_t c) {
  const semsub::Subspace s = semsub::learn_subspace(set, c);
  const oracle::Mat points = to_mat(semsub::stack_points(set));
  const oracle::Eigensystem eig = oracle::jacobi_eigen(oracle::covariance(points));
  const double top = std::max(eig.values.front(), 1e-300);
  PcaDiff diff;
  for (std::size_t i = 0; i < c; ++i) {
    diff.eigenvalue_error = std::max(
        diff.eigenvalue_error, std::abs(s.variances()[static_cast<Eigen::Index>(i)] - eig.values[i]) / top);
    const double gap_prev = i == 0 ? top : eig.values[i - 1] - eig.values[i];
    const double gap_next =
        i + 1 < eig.values.size() ? eig.values[i] - eig.values[i + 1] : top;
    if (std::min(gap_prev, gap_next) < 1e-3 * top) continue;
    oracle::Vec expected = eig.vectors[i];
    largest_coordinate_positive(expected);
    const oracle::Vec actual = to_vec(s.components().row(static_cast<Eigen::Index>(i)).transpose());
    for (std::size_t j = 0; j < expected.size(); ++j) {
      diff.component_error = std::max(diff.component_error, std::abs(actual[j] - expected[j]));
    }
    ++diff.compared;
  }
  return diff;
}

// Max relative difference between library and oracle LDA weights, plus the
// bias difference scaled the same way.
inline double lda_relative_error(const semsub::Matrix& rows,
                                 const std::vector<semsub::Label>& labels) {
  const semsub::LdaModel model = semsub::fit_lda(rows, labels);
  std::vector<int> y;
  for (auto l : labels) y.push_back(l == semsub::Label::kPositive ? 1 : 0);
  const oracle::Lda ref = oracle::lda(to_mat(rows), y);
  const double scale = oracle::norm(ref.weights);
  double err = 0.0;
  for (std::size_t j = 0; j < ref.weights.size(); ++j) {
    err = std::max(err, std::abs(model.weights[static_cast<Eigen::Index>(j)] - ref.weights[j]) / scale);
  }
  err = std::max(err, std::abs(model.bias - ref.bias) / std::max(scale, std::abs(ref.bias)));
  return err;
}

}  // namespace testing
