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
#include "semsub/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "semsub/text_io.hpp"

namespace semsub {
namespace {

constexpr double kOrthonormalTol = 1e-8;
constexpr double kResidualTol = 1e-10;
constexpr std::string_view kMagic = "semsub-subspace";
constexpr int kFormatVersion = 1;

void check_dim(std::size_t expected, Eigen::Index actual) {
  if (static_cast<std::size_t>(actual) != expected) {
    throw DimensionMismatch(expected, static_cast<std::size_t>(actual));
  }
}

// Flips v so that its largest-magnitude coordinate (first on ties) is
// positive.
void apply_sign_convention(Eigen::Ref<Vector> v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  if (v[best] < 0.0) v = -v;
}

// Two passes of modified Gram-Schmidt of column j against columns [0, j).
double orthogonalize_against(Matrix& basis, Eigen::Index j) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index i = 0; i < j; ++i) {
      basis.col(j) -= basis.col(i).dot(basis.col(j)) * basis.col(i);
    }
  }
  return basis.col(j).norm();
}

bool all_rows_identical(const Matrix& points) {
  for (Eigen::Index i = 1; i < points.rows(); ++i) {
    if (points.row(i) != points.row(0)) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(SubspaceMode mode) {
  return mode == SubspaceMode::kNorm ? "NORM" : "RAW";
}

std::optional<SubspaceMode> parse_subspace_mode(std::string_view text) {
  if (text == "RAW" || text == "raw") return SubspaceMode::kRaw;
  if (text == "NORM" || text == "norm") return SubspaceMode::kNorm;
  return std::nullopt;
}

PairList load_pair_list(std::istream& in) {
  PairList pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError("expected exactly two tab-separated fields", line_no);
    }
    const auto first = trim(std::string_view(line).substr(0, tab));
    const auto second = trim(std::string_view(line).substr(tab + 1));
    if (first.empty() || second.empty()) {
      throw ParseError("empty pair member", line_no);
    }
    pairs.emplace_back(std::string(first), std::string(second));
  }
  return pairs;
}

PairList load_pair_list(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return load_pair_list(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

EmbeddedPairSet embed_pairs(const PairList& pairs, const EmbeddingTable& table) {
  std::vector<std::string> missing;
  auto note_missing = [&](const std::string& token) {
    if (!table.contains(token) &&
        std::find(missing.begin(), missing.end(), token) == missing.end()) {
      missing.push_back(token);
    }
  };
  for (const auto& [a, b] : pairs) {
    note_missing(a);
    note_missing(b);
  }
  if (!missing.empty()) throw UnknownToken(std::move(missing));

  EmbeddedPairSet set;
  set.dim = table.dim();
  set.mode = SubspaceMode::kRaw;
  set.pairs.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    set.pairs.push_back({lookup(table, a), lookup(table, b), a, b});
  }
  return set;
}

EmbeddedPairSet mean_shift(const EmbeddedPairSet& set) {
  if (set.mode != SubspaceMode::kRaw) {
    throw PreconditionError("mean_shift expects a RAW pair set");
  }
  EmbeddedPairSet out;
  out.dim = set.dim;
  out.mode = SubspaceMode::kNorm;
  out.pairs.reserve(set.size());
  for (const auto& p : set.pairs) {
    // a - (a+b)/2 and b - (a+b)/2 written as +-(a-b)/2 so the two members
    // cancel exactly.
    const Vector half = 0.5 * (p.a - p.b);
    out.pairs.push_back({half, -half, p.surface_a, p.surface_b});
  }
  return out;
}

Subspace Subspace::from_components(Matrix components, SubspaceMode mode,
                                   Vector explained_variance_ratio,
                                   Vector mean) {
  const Eigen::Index c = components.rows();
  const Eigen::Index d = components.cols();
  if (c == 0 || d == 0) throw PreconditionError("subspace needs at least one component");
  const Matrix gram = components * components.transpose();
  const double err = (gram - Matrix::Identity(c, c)).cwiseAbs().maxCoeff();
  if (!(err < kOrthonormalTol)) {
    throw PreconditionError("subspace components are not orthonormal");
  }
  if (explained_variance_ratio.size() == 0) {
    explained_variance_ratio = Vector::Zero(c);
  }
  check_dim(static_cast<std::size_t>(c), explained_variance_ratio.size());
  if (mean.size() == 0) mean = Vector::Zero(d);
  check_dim(static_cast<std::size_t>(d), mean.size());

  Subspace s;
  s.components_ = std::move(components);
  s.ratios_ = std::move(explained_variance_ratio);
  s.variances_ = Vector::Zero(c);
  s.mean_ = std::move(mean);
  s.mode_ = mode;
  s.centered_ = !s.mean_.isZero(0.0);
  return s;
}

Subspace Subspace::truncated(std::size_t c) const {
  if (c == 0 || c > size()) {
    throw PreconditionError("cannot truncate a " + std::to_string(size()) +
                            "-component subspace to " + std::to_string(c));
  }
  Subspace s = *this;
  const auto n = static_cast<Eigen::Index>(c);
  s.components_ = components_.topRows(n);
  s.ratios_ = ratios_.head(n);
  s.variances_ = variances_.head(n);
  return s;
}

Matrix stack_points(const EmbeddedPairSet& set) {
  const auto d = static_cast<Eigen::Index>(set.dim);
  Matrix points(static_cast<Eigen::Index>(2 * set.size()), d);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& p = set.pairs[i];
    check_dim(set.dim, p.a.size());
    check_dim(set.dim, p.b.size());
    points.row(static_cast<Eigen::Index>(2 * i)) = p.a.transpose();
    points.row(static_cast<Eigen::Index>(2 * i + 1)) = p.b.transpose();
  }
  return points;
}

Subspace learn_subspace(const Matrix& points, std::size_t c, SubspaceMode mode,
                        const PcaOptions& options) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  if (n < 2) throw PreconditionError("PCA needs at least two points");
  const auto max_c = static_cast<std::size_t>(std::min(n - 1, d));
  if (c < 1 || c > max_c) {
    throw PreconditionError("component count " + std::to_string(c) +
                            " out of range [1, " + std::to_string(max_c) + "]");
  }
  if (!points.allFinite()) throw PreconditionError("PCA input is not finite");
  if (all_rows_identical(points)) {
    throw PreconditionError("degenerate PCA input: all points are identical");
  }

  Vector mean = Vector::Zero(d);
  if (options.center) mean = points.colwise().mean().transpose();
  const Matrix centered = points.rowwise() - mean.transpose();
  const double denom = static_cast<double>(n - 1);

  Vector eigenvalues(d);  // descending, clamped at zero
  Matrix basis(d, d);     // columns
  Eigen::Index known = 0; // leading columns of basis that are valid
  if (d <= n) {
    const Matrix cov = (centered.transpose() * centered) / denom;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorKind::kInternal, "covariance eigendecomposition failed");
    }
    eigenvalues = solver.eigenvalues().reverse().cwiseMax(0.0);
    basis = solver.eigenvectors().rowwise().reverse();
    known = d;
  } else {
    // Fewer points than dimensions: diagonalize the n x n Gram matrix and map
    // its eigenvectors back through the data.
    const Matrix gram = (centered * centered.transpose()) / denom;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorKind::kInternal, "Gram eigendecomposition failed");
    }
    const Vector lambdas = solver.eigenvalues().reverse().cwiseMax(0.0);
    const Matrix vectors = solver.eigenvectors().rowwise().reverse();
    const double tol = 1e-10 * lambdas[0];
    eigenvalues.setZero();
    basis.setZero();
    for (Eigen::Index i = 0; i < n && lambdas[i] > tol; ++i) {
      basis.col(known) = centered.transpose() * vectors.col(i);
      const double len = orthogonalize_against(basis, known);
      if (!(len > 0.0)) break;
      basis.col(known) /= len;
      eigenvalues[known] = lambdas[i];
      ++known;
    }
  }

  if (eigenvalues[0] <= 0.0) {
    throw PreconditionError("degenerate PCA input: zero covariance");
  }

  // Null-space directions, when requested, are completed deterministically
  // from the standard basis.
  const auto want = static_cast<Eigen::Index>(c);
  for (Eigen::Index e = 0; known < want && e < d; ++e) {
    basis.col(known) = Vector::Unit(d, e);
    const double len = orthogonalize_against(basis, known);
    if (len > 0.5) {
      basis.col(known) /= len;
      eigenvalues[known] = 0.0;
      ++known;
    }
  }

  const double total = centered.squaredNorm() / denom;
  for (Eigen::Index i = 0; i < want; ++i) apply_sign_convention(basis.col(i));
  Subspace s;
  s.components_ = basis.leftCols(want).transpose();
  s.variances_ = eigenvalues.head(want);
  s.ratios_ = total > 0.0 ? Vector(s.variances_ / total) : Vector::Zero(want);
  s.mean_ = std::move(mean);
  s.mode_ = mode;
  s.centered_ = options.center;
  return s;
}

Subspace learn_subspace(const EmbeddedPairSet& set, std::size_t c,
                        const PcaOptions& options) {
  if (set.size() < 2) {
    throw PreconditionError("learn_subspace needs at least two pairs, got " +
                            std::to_string(set.size()));
  }
  const std::size_t max_c = std::min(2 * set.size() - 1, set.dim);
  if (c < 1 || c > max_c) {
    throw PreconditionError("component count " + std::to_string(c) +
                            " out of range [1, " + std::to_string(max_c) + "]");
  }
  return learn_subspace(stack_points(set), c, set.mode, options);
}

Vector project(const Vector& v, const Subspace& subspace, bool centered) {
  check_dim(subspace.dim(), v.size());
  if (centered) return subspace.components() * (v - subspace.mean());
  return subspace.components() * v;
}

Matrix project_rows(const Matrix& points, const Subspace& subspace,
                    bool centered) {
  check_dim(subspace.dim(), points.cols());
  if (centered) {
    return (points.rowwise() - subspace.mean().transpose()) *
           subspace.components().transpose();
  }
  return points * subspace.components().transpose();
}

Vector remove_subspace(const Vector& v, const Subspace& subspace) {
  check_dim(subspace.dim(), v.size());
  const Matrix& comps = subspace.components();
  Vector residual = v - comps.transpose() * (comps * v);
  // A second pass removes what the first leaves behind through rounding.
  residual -= comps.transpose() * (comps * residual);
  const double len = residual.norm();
  if (!(len > kResidualTol)) {
    throw PreconditionError("vector lies inside the subspace; nothing remains");
  }
  return residual / len;
}

void save_subspace(const Subspace& subspace, std::ostream& out) {
  auto write_row = [&](std::string_view key, const auto& values) {
    out << key;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      out << ' ' << format_double(values[i]);
    }
    out << '\n';
  };
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "mode " << to_string(subspace.mode()) << '\n';
  out << "centered " << (subspace.centered() ? 1 : 0) << '\n';
  out << "dim " << subspace.dim() << '\n';
  out << "c " << subspace.size() << '\n';
  write_row("explained_variance_ratio", subspace.explained_variance_ratio());
  write_row("variances", subspace.variances());
  write_row("mean", subspace.mean());
  for (Eigen::Index i = 0; i < subspace.components().rows(); ++i) {
    write_row("component", subspace.components().row(i));
  }
}

void save_subspace(const Subspace& subspace, const std::filesystem::path& path) {
  auto out = open_output(path);
  save_subspace(subspace, out);
  if (!out) throw IoError("write failed: " + path.string());
}

Subspace load_subspace(std::istream& in) {
  std::size_t line_no = 0;
  std::string line;
  auto next_fields = [&](std::string_view key, std::size_t count) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!trim(line).empty()) break;
    }
    if (!in && line.empty()) {
      throw ParseError("unexpected end of file, expected \"" +
                           std::string(key) + "\"",
                       line_no + 1);
    }
    auto fields = split_whitespace(trim(line));
    if (fields.empty() || fields[0] != key) {
      throw ParseError("expected \"" + std::string(key) + "\"", line_no);
    }
    if (fields.size() != count + 1) {
      throw ParseError("\"" + std::string(key) + "\" expects " +
                           std::to_string(count) + " values",
                       line_no);
    }
    fields.erase(fields.begin());
    return fields;
  };
  auto to_int = [&](std::string_view text) {
    const auto v = parse_int(text);
    if (!v || *v < 0) throw ParseError("expected a nonnegative integer", line_no);
    return static_cast<std::size_t>(*v);
  };
  auto to_vector = [&](const std::vector<std::string_view>& fields) {
    Vector v(static_cast<Eigen::Index>(fields.size()));
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto x = parse_double(fields[i]);
      if (!x) throw ParseError("non-numeric value", line_no);
      v[static_cast<Eigen::Index>(i)] = *x;
    }
    return v;
  };

  const auto magic = next_fields(kMagic, 1);
  if (to_int(magic[0]) != kFormatVersion) {
    throw ParseError("unsupported subspace format version", line_no);
  }
  const auto mode = parse_subspace_mode(next_fields("mode", 1)[0]);
  if (!mode) throw ParseError("unknown mode", line_no);
  const std::size_t centered = to_int(next_fields("centered", 1)[0]);
  const std::size_t dim = to_int(next_fields("dim", 1)[0]);
  const std::size_t c = to_int(next_fields("c", 1)[0]);
  if (dim == 0 || c == 0 || c > dim) throw ParseError("invalid dim/c", line_no);

  Subspace s;
  s.mode_ = *mode;
  s.centered_ = centered != 0;
  s.ratios_ = to_vector(next_fields("explained_variance_ratio", c));
  s.variances_ = to_vector(next_fields("variances", c));
  s.mean_ = to_vector(next_fields("mean", dim));
  s.components_.resize(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < c; ++i) {
    s.components_.row(static_cast<Eigen::Index>(i)) =
        to_vector(next_fields("component", dim)).transpose();
  }
  return s;
}

Subspace load_subspace(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return load_subspace(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace semsub
