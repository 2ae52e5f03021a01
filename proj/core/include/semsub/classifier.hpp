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

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "semsub/embeddings.hpp"
#include "semsub/label.hpp"

namespace semsub {

struct LdaOptions {
  // Use 1/2 priors instead of the empirical class frequencies.
  bool uniform_priors = false;
};

// Two-class linear discriminant: positive iff weights . x + bias >= 0.
struct LdaModel {
  Vector weights;
  double bias = 0.0;
  LabelNames labels;
  std::array<double, 2> priors{0.5, 0.5};  // indexed by Label

  std::size_t dim() const noexcept {
    return static_cast<std::size_t>(weights.size());
  }
};

// Shared-covariance Gaussian LDA. The pooled within-class covariance
// (scatter / n) is regularized by 1e-6 * trace / m on the diagonal; a
// covariance with zero trace falls back to the identity.
LdaModel fit_lda(const Matrix& rows, std::span<const Label> labels,
                 const LdaOptions& options = {});
LdaModel fit_lda(std::span<const Vector> xs, std::span<const Label> labels,
                 const LdaOptions& options = {});

double decision_score(const LdaModel& model, const Vector& x);

// A score of exactly zero maps to the positive class.
Label predict(const LdaModel& model, const Vector& x);
std::vector<Label> predict_rows(const LdaModel& model, const Matrix& rows);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // gold count
};

struct EvalScores {
  double macro_f1 = 0.0;
  std::array<ClassScores, 2> per_class;

  const ClassScores& operator[](Label label) const {
    return per_class[static_cast<std::size_t>(index_of(label))];
  }
};

// Precision, recall and F1 per class with 0/0 taken as 0; macro-F1 is the
// mean of the two class F1 values.
EvalScores evaluate(std::span<const Label> predicted, std::span<const Label> gold);

// String-label form. Throws PreconditionError for a label outside names.
EvalScores evaluate(std::span<const std::string> predicted,
                    std::span<const std::string> gold, const LabelNames& names);

void save_lda(const LdaModel& model, std::ostream& out);
LdaModel load_lda(std::istream& in);

}  // namespace semsub
