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
#include "semsub/classifier.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include <Eigen/Cholesky>

#include "semsub/text_io.hpp"

namespace semsub {
namespace {

void check_dim(std::size_t expected, Eigen::Index actual) {
  if (static_cast<std::size_t>(actual) != expected) {
    throw DimensionMismatch(expected, static_cast<std::size_t>(actual));
  }
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

Label label_from_name(const std::string& name, const LabelNames& names) {
  if (name == names.positive) return Label::kPositive;
  if (name == names.negative) return Label::kNegative;
  throw PreconditionError("label \"" + name + "\" is neither \"" +
                          names.negative + "\" nor \"" + names.positive + "\"");
}

}  // namespace

LdaModel fit_lda(const Matrix& rows, std::span<const Label> labels,
                 const LdaOptions& options) {
  const Eigen::Index n = rows.rows();
  const Eigen::Index m = rows.cols();
  if (static_cast<std::size_t>(n) != labels.size()) {
    throw PreconditionError("fit_lda: " + std::to_string(n) + " rows but " +
                            std::to_string(labels.size()) + " labels");
  }
  if (n < 2) throw PreconditionError("fit_lda: need at least two samples");
  if (m == 0) throw PreconditionError("fit_lda: zero-dimensional features");
  if (!rows.allFinite()) throw PreconditionError("fit_lda: non-finite features");

  std::array<Vector, 2> means{Vector::Zero(m), Vector::Zero(m)};
  std::array<std::size_t, 2> counts{0, 0};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(index_of(labels[static_cast<std::size_t>(i)]));
    means[c] += rows.row(i).transpose();
    ++counts[c];
  }
  if (counts[0] == 0 || counts[1] == 0) {
    throw PreconditionError("fit_lda: both classes must be present");
  }
  for (std::size_t c = 0; c < 2; ++c) means[c] /= static_cast<double>(counts[c]);

  Matrix centered(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(index_of(labels[static_cast<std::size_t>(i)]));
    centered.row(i) = rows.row(i) - means[c].transpose();
  }
  Matrix cov = (centered.transpose() * centered) / static_cast<double>(n);
  const double trace = cov.trace();
  if (trace > 0.0) {
    cov.diagonal().array() += 1e-6 * trace / static_cast<double>(m);
  } else {
    // No within-class spread at all: the rule reduces to nearest class mean.
    cov.setIdentity();
  }

  const Vector diff = means[1] - means[0];
  Eigen::LLT<Matrix> llt(cov);
  Vector weights;
  if (llt.info() == Eigen::Success) {
    weights = llt.solve(diff);
  } else {
    Eigen::LDLT<Matrix> ldlt(cov);
    if (ldlt.info() != Eigen::Success) {
      throw PreconditionError("fit_lda: covariance is not invertible");
    }
    weights = ldlt.solve(diff);
  }
  if (!weights.allFinite()) {
    throw PreconditionError("fit_lda: covariance is not invertible");
  }

  LdaModel model;
  if (options.uniform_priors) {
    model.priors = {0.5, 0.5};
  } else {
    const auto total = static_cast<double>(n);
    model.priors = {static_cast<double>(counts[0]) / total,
                    static_cast<double>(counts[1]) / total};
  }
  model.bias = -0.5 * (means[0] + means[1]).dot(weights) +
               std::log(model.priors[1] / model.priors[0]);
  model.weights = std::move(weights);
  return model;
}

LdaModel fit_lda(std::span<const Vector> xs, std::span<const Label> labels,
                 const LdaOptions& options) {
  if (xs.empty()) throw PreconditionError("fit_lda: need at least two samples");
  const Eigen::Index m = xs.front().size();
  Matrix rows(static_cast<Eigen::Index>(xs.size()), m);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    check_dim(static_cast<std::size_t>(m), xs[i].size());
    rows.row(static_cast<Eigen::Index>(i)) = xs[i].transpose();
  }
  return fit_lda(rows, labels, options);
}

double decision_score(const LdaModel& model, const Vector& x) {
  check_dim(model.dim(), x.size());
  return model.weights.dot(x) + model.bias;
}

Label predict(const LdaModel& model, const Vector& x) {
  return decision_score(model, x) >= 0.0 ? Label::kPositive : Label::kNegative;
}

std::vector<Label> predict_rows(const LdaModel& model, const Matrix& rows) {
  check_dim(model.dim(), rows.cols());
  const Vector scores = (rows * model.weights).array() + model.bias;
  std::vector<Label> out(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    out[static_cast<std::size_t>(i)] =
        scores[i] >= 0.0 ? Label::kPositive : Label::kNegative;
  }
  return out;
}

EvalScores evaluate(std::span<const Label> predicted, std::span<const Label> gold) {
  if (predicted.size() != gold.size()) {
    throw PreconditionError("evaluate: " + std::to_string(predicted.size()) +
                            " predictions for " + std::to_string(gold.size()) +
                            " gold labels");
  }
  if (gold.empty()) throw PreconditionError("evaluate: empty input");

  // confusion[gold][pred]
  std::array<std::array<std::size_t, 2>, 2> confusion{};
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const int g = index_of(gold[i]);
    const int p = index_of(predicted[i]);
    if (g < 0 || g > 1 || p < 0 || p > 1) {
      throw PreconditionError("evaluate: label outside the declared pair");
    }
    ++confusion[static_cast<std::size_t>(g)][static_cast<std::size_t>(p)];
  }

  EvalScores scores;
  for (std::size_t c = 0; c < 2; ++c) {
    const std::size_t other = 1 - c;
    const auto tp = static_cast<double>(confusion[c][c]);
    const auto fp = static_cast<double>(confusion[other][c]);
    const auto fn = static_cast<double>(confusion[c][other]);
    auto& s = scores.per_class[c];
    s.precision = safe_ratio(tp, tp + fp);
    s.recall = safe_ratio(tp, tp + fn);
    s.f1 = safe_ratio(2.0 * s.precision * s.recall, s.precision + s.recall);
    s.support = confusion[c][0] + confusion[c][1];
  }
  scores.macro_f1 = 0.5 * (scores.per_class[0].f1 + scores.per_class[1].f1);
  return scores;
}

EvalScores evaluate(std::span<const std::string> predicted,
                    std::span<const std::string> gold, const LabelNames& names) {
  if (predicted.size() != gold.size()) {
    throw PreconditionError("evaluate: " + std::to_string(predicted.size()) +
                            " predictions for " + std::to_string(gold.size()) +
                            " gold labels");
  }
  std::vector<Label> p;
  std::vector<Label> g;
  p.reserve(predicted.size());
  g.reserve(gold.size());
  for (const auto& s : predicted) p.push_back(label_from_name(s, names));
  for (const auto& s : gold) g.push_back(label_from_name(s, names));
  return evaluate(p, g);
}

void save_lda(const LdaModel& model, std::ostream& out) {
  out << "semsub-lda 1\n";
  out << "labels " << model.labels.negative << ' ' << model.labels.positive << '\n';
  out << "priors " << format_double(model.priors[0]) << ' '
      << format_double(model.priors[1]) << '\n';
  out << "bias " << format_double(model.bias) << '\n';
  out << "weights " << model.weights.size();
  for (double w : model.weights) out << ' ' << format_double(w);
  out << '\n';
}

LdaModel load_lda(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto fields_for = [&](std::string_view key) {
    if (!std::getline(in, line)) {
      throw ParseError("unexpected end of file, expected \"" +
                       std::string(key) + "\"", line_no + 1);
    }
    ++line_no;
    auto fields = split_whitespace(trim(line));
    if (fields.empty() || fields[0] != key) {
      throw ParseError("expected \"" + std::string(key) + "\"", line_no);
    }
    fields.erase(fields.begin());
    return fields;
  };
  auto number = [&](std::string_view text) {
    const auto v = parse_double(text);
    if (!v) throw ParseError("non-numeric value", line_no);
    return *v;
  };

  const auto magic = fields_for("semsub-lda");
  if (magic.size() != 1 || magic[0] != "1") {
    throw ParseError("unsupported model format version", line_no);
  }
  LdaModel model;
  const auto labels = fields_for("labels");
  if (labels.size() != 2) throw ParseError("\"labels\" expects 2 names", line_no);
  model.labels = {std::string(labels[0]), std::string(labels[1])};
  const auto priors = fields_for("priors");
  if (priors.size() != 2) throw ParseError("\"priors\" expects 2 values", line_no);
  model.priors = {number(priors[0]), number(priors[1])};
  const auto bias = fields_for("bias");
  if (bias.size() != 1) throw ParseError("\"bias\" expects 1 value", line_no);
  model.bias = number(bias[0]);
  const auto weights = fields_for("weights");
  const auto count = weights.empty() ? std::nullopt : parse_int(weights[0]);
  if (!count || *count < 1 || static_cast<std::size_t>(*count) + 1 != weights.size()) {
    throw ParseError("\"weights\" expects a count followed by that many values",
                     line_no);
  }
  model.weights.resize(*count);
  for (long long i = 0; i < *count; ++i) {
    model.weights[i] = number(weights[static_cast<std::size_t>(i) + 1]);
  }
  return model;
}

}  // namespace semsub
