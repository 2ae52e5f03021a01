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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "semsub/classifier.hpp"
#include "semsub/embeddings.hpp"
#include "semsub/selection.hpp"
#include "semsub/subspace.hpp"

namespace semsub {

enum class RepresentationKind {
  kBase,     // raw vectors
  kPcaRaw,   // projection onto the subspace of the unshifted pairs
  kPcaNorm,  // projection onto the subspace of the mean-shifted pairs
};

std::string_view to_string(RepresentationKind kind);
std::optional<RepresentationKind> parse_representation_kind(std::string_view text);

// Pick c per training subsample by k-fold cross-validation over its pairs.
// An empty grid means 1..max, capped at cap. Grid values a subsample cannot
// support are dropped; sizes below k_folds use leave-one-pair-out.
struct IntrinsicComponents {
  std::vector<std::size_t> grid;
  std::size_t k_folds = 5;
  std::size_t cap = 128;
};

struct FixedComponents {
  std::size_t c = 1;
};

using ComponentPolicy = std::variant<IntrinsicComponents, FixedComponents>;

struct TargetTask {
  std::string name;
  LabeledDataset data;
};

struct TransferOptions {
  std::vector<std::size_t> sizes;
  std::vector<RepresentationKind> kinds;
  std::vector<std::uint64_t> seeds;
  ComponentPolicy policy = IntrinsicComponents{};
  PcaOptions pca;
  LdaOptions lda;
  bool centered_projection = false;
  std::size_t threads = 1;
};

struct TransferRow {
  RepresentationKind kind = RepresentationKind::kBase;
  std::size_t n_pairs = 0;
  std::string task;
  double mean_macro_f1 = 0.0;
  double std_error = 0.0;
  std::size_t runs = 0;
  std::vector<std::size_t> chosen_c;  // per run, seed order; empty for BASE
  std::vector<double> run_f1;         // per run, seed order
};

struct TransferReport {
  std::vector<TransferRow> rows;  // ordered by (kind, size, task) as given

  const TransferRow* find(RepresentationKind kind, std::size_t n_pairs,
                          std::string_view task) const;
};

// n pairs drawn without replacement by a seeded shuffle.
EmbeddedPairSet subsample_pairs(const EmbeddedPairSet& set, std::size_t n,
                                std::uint64_t seed);

// Zero-shot transfer: for every (seed, size) draw a training subsample, build
// each representation on it alone, fit LDA on its 2 * size vectors and score
// macro-F1 on every task. Task instances never enter training; a task id
// that matches a training pair surface form is rejected.
TransferReport run_transfer(const EmbeddedPairSet& pairs,
                            std::span<const TargetTask> tasks,
                            const TransferOptions& options);

// Tab-separated with header:
// kind n_pairs task mean_macro_f1 std_error runs chosen_c run_f1
void write_transfer_report(const TransferReport& report, std::ostream& out);

// Aligned plain-text table of mean +- stderr (in F1 points).
void write_transfer_table(const TransferReport& report, std::ostream& out);

}  // namespace semsub
