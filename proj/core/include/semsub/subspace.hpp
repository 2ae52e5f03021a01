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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semsub/embeddings.hpp"

namespace semsub {

// RAW: pairs as embedded. NORM: each pair shifted by its own mean.
enum class SubspaceMode { kRaw, kNorm };

std::string_view to_string(SubspaceMode mode);
std::optional<SubspaceMode> parse_subspace_mode(std::string_view text);

struct EmbeddedPair {
  Vector a;  // positive member, e.g. the profane word
  Vector b;  // neutral counterpart
  std::optional<std::string> surface_a;
  std::optional<std::string> surface_b;
};

struct EmbeddedPairSet {
  std::size_t dim = 0;
  SubspaceMode mode = SubspaceMode::kRaw;
  std::vector<EmbeddedPair> pairs;

  std::size_t size() const noexcept { return pairs.size(); }
};

using PairList = std::vector<std::pair<std::string, std::string>>;

// "positive<TAB>neutral" per line; blank lines and '#' comments skipped.
PairList load_pair_list(std::istream& in);
PairList load_pair_list(const std::filesystem::path& path);

// Looks up both members of every pair. Throws UnknownToken listing every
// missing token.
EmbeddedPairSet embed_pairs(const PairList& pairs, const EmbeddingTable& table);

// Replaces each pair (a, b) by (a - mu, b - mu) with mu = (a + b) / 2.
EmbeddedPairSet mean_shift(const EmbeddedPairSet& set);

class Subspace;

struct PcaOptions {
  // Subtract the global mean of all 2N points before PCA.
  bool center = true;
};

// PCA over arbitrary rows of points. Requires at least two points and
// 1 <= c <= min(rows - 1, dim).
Subspace learn_subspace(const Matrix& points, std::size_t c,
                        SubspaceMode mode = SubspaceMode::kRaw,
                        const PcaOptions& options = {});

Subspace load_subspace(std::istream& in);

// Ordered orthonormal basis learned by PCA. Rows of components() are the
// principal directions, strongest first.
class Subspace {
 public:
  Subspace() = default;

  // Throws PreconditionError unless the rows are orthonormal within 1e-8.
  // mean defaults to zero.
  static Subspace from_components(Matrix components,
                                  SubspaceMode mode = SubspaceMode::kRaw,
                                  Vector explained_variance_ratio = {},
                                  Vector mean = {});

  const Matrix& components() const noexcept { return components_; }
  const Vector& explained_variance_ratio() const noexcept { return ratios_; }
  // Variance of the training points along each component.
  const Vector& variances() const noexcept { return variances_; }
  // Offset subtracted before PCA; zero when trained without centering.
  const Vector& mean() const noexcept { return mean_; }
  SubspaceMode mode() const noexcept { return mode_; }
  bool centered() const noexcept { return centered_; }

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(components_.rows());
  }
  std::size_t dim() const noexcept {
    return static_cast<std::size_t>(components_.cols());
  }

  // The first c components as a new subspace.
  Subspace truncated(std::size_t c) const;

 private:
  friend Subspace learn_subspace(const Matrix&, std::size_t, SubspaceMode,
                                 const PcaOptions&);
  friend Subspace load_subspace(std::istream&);

  Matrix components_;
  Vector ratios_;
  Vector variances_;
  Vector mean_;
  SubspaceMode mode_ = SubspaceMode::kRaw;
  bool centered_ = true;
};

// PCA over both members of every pair. Requires N >= 2 and
// 1 <= c <= min(2N - 1, dim). Each component is signed so that its
// largest-magnitude coordinate is positive.
Subspace learn_subspace(const EmbeddedPairSet& set, std::size_t c,
                        const PcaOptions& options = {});

// Coordinates in the component basis: C v, or C (v - mean) when centered.
Vector project(const Vector& v, const Subspace& subspace, bool centered = false);

// Row-wise projection of a batch of points (one per row).
Matrix project_rows(const Matrix& points, const Subspace& subspace,
                    bool centered = false);

// Unit-length residual of v after removing its orthogonal projection onto
// the subspace. Throws PreconditionError when the residual norm is <= 1e-10.
Vector remove_subspace(const Vector& v, const Subspace& subspace);

// Self-describing text format; decimal values at 17 significant digits.
void save_subspace(const Subspace& subspace, std::ostream& out);
void save_subspace(const Subspace& subspace, const std::filesystem::path& path);
Subspace load_subspace(const std::filesystem::path& path);

// Stacks the 2N points of a pair set as rows: a_0, b_0, a_1, b_1, ...
Matrix stack_points(const EmbeddedPairSet& set);

}  // namespace semsub
