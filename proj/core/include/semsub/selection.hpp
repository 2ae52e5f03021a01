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
#include <iosfwd>
#include <span>
#include <vector>

#include "semsub/classifier.hpp"
#include "semsub/subspace.hpp"

namespace semsub {

struct SelectionOptions {
  std::size_t k_folds = 5;
  std::uint64_t seed = 0;
  PcaOptions pca;
  LdaOptions lda;
  bool centered_projection = false;
  std::size_t threads = 1;
};

struct CurvePoint {
  std::size_t c = 0;
  double mean_f1 = 0.0;
  double std_error = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct ComponentSelection {
  std::size_t chosen_c = 0;
  std::vector<CurvePoint> curve;
  std::size_t k_folds = 0;
  std::uint64_t seed = 0;
};

// Largest c every training fold supports: the smallest training fold has
// N - ceil(N / k) pairs, hence 2 * (N - ceil(N / k)) - 1 points of rank.
std::size_t max_selectable_components(std::size_t n_pairs, std::size_t k_folds,
                                      std::size_t dim);

// 1..max_selectable_components, capped.
std::vector<std::size_t> default_component_grid(std::size_t n_pairs,
                                                std::size_t k_folds,
                                                std::size_t dim,
                                                std::size_t cap = 128);

// Fold index for every pair: a seeded shuffle dealt round-robin into k folds.
std::vector<std::size_t> assign_folds(std::size_t n_pairs, std::size_t k_folds,
                                      std::uint64_t seed);

// Intrinsic choice of the component count by k-fold cross-validation over
// pairs. Per fold and per c: learn the subspace on the training pairs, fit
// LDA on their projections (positive member vs neutral member) and score
// macro-F1 on the held-out pairs. The best fold-averaged c wins; ties go to
// the smaller c.
ComponentSelection select_components(const EmbeddedPairSet& set,
                                     std::span<const std::size_t> grid,
                                     const SelectionOptions& options = {});

// Tab-separated "c mean_f1 stderr" with a header row.
void write_selection_curve(const ComponentSelection& selection, std::ostream& out);

// Sample standard deviation / sqrt(n); 0 for n < 2.
double standard_error(std::span<const double> values);
double mean_of(std::span<const double> values);

}  // namespace semsub
