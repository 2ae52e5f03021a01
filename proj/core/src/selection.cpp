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
#include "semsub/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "semsub/parallel.hpp"
#include "semsub/rng.hpp"
#include "semsub/text_io.hpp"

namespace semsub {
namespace {

struct FoldData {
  EmbeddedPairSet train;
  Matrix test_points;
  std::vector<Label> test_labels;
};

std::vector<Label> pair_labels(std::size_t n_pairs) {
  std::vector<Label> labels;
  labels.reserve(2 * n_pairs);
  for (std::size_t i = 0; i < n_pairs; ++i) {
    labels.push_back(Label::kPositive);
    labels.push_back(Label::kNegative);
  }
  return labels;
}

}  // namespace

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double standard_error(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  if (std::all_of(values.begin(), values.end(),
                  [&](double v) { return v == values.front(); })) {
    return 0.0;
  }
  const double mean = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const auto n = static_cast<double>(values.size());
  return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

std::size_t max_selectable_components(std::size_t n_pairs, std::size_t k_folds,
                                      std::size_t dim) {
  if (k_folds < 2 || n_pairs < k_folds) return 0;
  const std::size_t largest_fold = (n_pairs + k_folds - 1) / k_folds;
  const std::size_t smallest_train = n_pairs - largest_fold;
  if (smallest_train == 0) return 0;
  return std::min(2 * smallest_train - 1, dim);
}

std::vector<std::size_t> default_component_grid(std::size_t n_pairs,
                                                std::size_t k_folds,
                                                std::size_t dim,
                                                std::size_t cap) {
  const std::size_t top =
      std::min(max_selectable_components(n_pairs, k_folds, dim), cap);
  std::vector<std::size_t> grid(top);
  std::iota(grid.begin(), grid.end(), std::size_t{1});
  return grid;
}

std::vector<std::size_t> assign_folds(std::size_t n_pairs, std::size_t k_folds,
                                      std::uint64_t seed) {
  if (k_folds < 2) throw PreconditionError("k-fold needs k >= 2");
  std::vector<std::size_t> order(n_pairs);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::size_t> fold(n_pairs);
  for (std::size_t i = 0; i < n_pairs; ++i) fold[order[i]] = i % k_folds;
  return fold;
}

ComponentSelection select_components(const EmbeddedPairSet& set,
                                     std::span<const std::size_t> grid,
                                     const SelectionOptions& options) {
  const std::size_t n = set.size();
  const std::size_t k = options.k_folds;
  if (k < 2) throw PreconditionError("k-fold needs k >= 2, got " + std::to_string(k));
  if (n < k) {
    throw PreconditionError("cross-validation needs at least k pairs: N = " +
                            std::to_string(n) + " < k = " + std::to_string(k));
  }
  if (grid.empty()) throw PreconditionError("component grid is empty");
  const std::size_t max_c = max_selectable_components(n, k, set.dim);
  std::vector<std::size_t> cs(grid.begin(), grid.end());
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  if (cs.front() < 1 || cs.back() > max_c) {
    throw PreconditionError("component grid must lie in [1, " +
                            std::to_string(max_c) + "] for N = " +
                            std::to_string(n) + ", k = " + std::to_string(k));
  }
  const std::size_t c_max = cs.back();

  const auto fold_of = assign_folds(n, k, options.seed);
  std::vector<FoldData> folds(k);
  for (std::size_t f = 0; f < k; ++f) {
    folds[f].train.dim = set.dim;
    folds[f].train.mode = set.mode;
  }
  std::vector<std::vector<std::size_t>> held_out(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < k; ++f) {
      if (f == fold_of[i]) {
        held_out[f].push_back(i);
      } else {
        folds[f].train.pairs.push_back(set.pairs[i]);
      }
    }
  }
  for (std::size_t f = 0; f < k; ++f) {
    EmbeddedPairSet test;
    test.dim = set.dim;
    test.mode = set.mode;
    for (std::size_t i : held_out[f]) test.pairs.push_back(set.pairs[i]);
    folds[f].test_points = stack_points(test);
    folds[f].test_labels = pair_labels(test.size());
  }

  // scores[f][ci]
  std::vector<std::vector<double>> scores(k, std::vector<double>(cs.size()));
  parallel_for(k, options.threads, [&](std::size_t f) {
    const FoldData& fold = folds[f];
    const Subspace subspace = learn_subspace(fold.train, c_max, options.pca);
    const Matrix train_proj = project_rows(stack_points(fold.train), subspace,
                                           options.centered_projection);
    const Matrix test_proj =
        project_rows(fold.test_points, subspace, options.centered_projection);
    const auto train_labels = pair_labels(fold.train.size());
    for (std::size_t ci = 0; ci < cs.size(); ++ci) {
      const auto c = static_cast<Eigen::Index>(cs[ci]);
      const LdaModel model =
          fit_lda(Matrix(train_proj.leftCols(c)), train_labels, options.lda);
      const auto predicted = predict_rows(model, test_proj.leftCols(c));
      scores[f][ci] = evaluate(predicted, fold.test_labels).macro_f1;
    }
  });

  ComponentSelection out;
  out.k_folds = k;
  out.seed = options.seed;
  out.curve.reserve(cs.size());
  double best = -1.0;
  for (std::size_t ci = 0; ci < cs.size(); ++ci) {
    std::vector<double> per_fold(k);
    for (std::size_t f = 0; f < k; ++f) per_fold[f] = scores[f][ci];
    const CurvePoint point{cs[ci], mean_of(per_fold), standard_error(per_fold)};
    if (point.mean_f1 > best) {
      best = point.mean_f1;
      out.chosen_c = point.c;
    }
    out.curve.push_back(point);
  }
  return out;
}

void write_selection_curve(const ComponentSelection& selection, std::ostream& out) {
  out << "c\tmean_f1\tstderr\n";
  for (const auto& p : selection.curve) {
    out << p.c << '\t' << format_double(p.mean_f1) << '\t'
        << format_double(p.std_error) << '\n';
  }
}

}  // namespace semsub
