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
#include "semsub/transfer.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "semsub/parallel.hpp"
#include "semsub/rng.hpp"
#include "semsub/text_io.hpp"

namespace semsub {
namespace {

// Outcome of one (seed, size) unit for one representation.
struct KindResult {
  std::size_t c = 0;
  std::vector<double> task_f1;
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

Matrix task_rows(const LabeledDataset& data) {
  Matrix rows(static_cast<Eigen::Index>(data.size()),
              static_cast<Eigen::Index>(data.dim));
  for (std::size_t i = 0; i < data.size(); ++i) {
    rows.row(static_cast<Eigen::Index>(i)) = data.instances[i].vector.transpose();
  }
  return rows;
}

std::vector<Label> task_labels(const LabeledDataset& data) {
  std::vector<Label> labels;
  labels.reserve(data.size());
  for (const auto& inst : data.instances) labels.push_back(inst.label);
  return labels;
}

void check_zero_shot(const EmbeddedPairSet& train,
                     std::span<const TargetTask> tasks) {
  std::unordered_set<std::string_view> train_ids;
  for (const auto& p : train.pairs) {
    if (p.surface_a) train_ids.insert(*p.surface_a);
    if (p.surface_b) train_ids.insert(*p.surface_b);
  }
  if (train_ids.empty()) return;
  for (const auto& task : tasks) {
    for (const auto& inst : task.data.instances) {
      if (train_ids.contains(inst.id)) {
        throw PreconditionError("zero-shot violation: instance \"" + inst.id +
                                "\" of task \"" + task.name +
                                "\" is part of the training pairs");
      }
    }
  }
}

std::size_t choose_components(const EmbeddedPairSet& train,
                              const ComponentPolicy& policy,
                              const TransferOptions& options,
                              std::uint64_t seed) {
  if (const auto* fixed = std::get_if<FixedComponents>(&policy)) {
    return fixed->c;  // learn_subspace validates the range
  }
  const auto& intrinsic = std::get<IntrinsicComponents>(policy);
  const std::size_t n = train.size();
  const std::size_t k = std::min(intrinsic.k_folds, n);
  std::vector<std::size_t> grid;
  if (intrinsic.grid.empty()) {
    grid = default_component_grid(n, k, train.dim, intrinsic.cap);
  } else {
    const std::size_t max_c = max_selectable_components(n, k, train.dim);
    for (std::size_t c : intrinsic.grid) {
      if (c >= 1 && c <= max_c) grid.push_back(c);
    }
  }
  if (grid.empty()) {
    throw PreconditionError("no component count in the grid is feasible for " +
                            std::to_string(n) + " training pairs");
  }
  // Single-candidate grids skip cross-validation.
  if (grid.size() == 1) return grid.front();
  SelectionOptions sel;
  sel.k_folds = k;
  sel.seed = seed;
  sel.pca = options.pca;
  sel.lda = options.lda;
  sel.centered_projection = options.centered_projection;
  return select_components(train, grid, sel).chosen_c;
}

KindResult run_kind(RepresentationKind kind, const EmbeddedPairSet& train,
                    std::span<const TargetTask> tasks,
                    std::span<const Matrix> rows,
                    std::span<const std::vector<Label>> gold,
                    const TransferOptions& options, std::uint64_t seed) {
  KindResult result;
  const auto labels = pair_labels(train.size());
  const Matrix train_points = stack_points(train);

  if (kind == RepresentationKind::kBase) {
    const LdaModel model = fit_lda(train_points, labels, options.lda);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      result.task_f1.push_back(
          evaluate(predict_rows(model, rows[t]), gold[t]).macro_f1);
    }
    return result;
  }

  const EmbeddedPairSet basis_set =
      kind == RepresentationKind::kPcaNorm ? mean_shift(train) : train;
  result.c = choose_components(basis_set, options.policy, options, seed);
  const Subspace subspace = learn_subspace(basis_set, result.c, options.pca);
  // The classifier always sees the training vectors themselves; only the
  // subspace differs between PCA_RAW and PCA_NORM.
  const LdaModel model = fit_lda(
      project_rows(train_points, subspace, options.centered_projection), labels,
      options.lda);
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto predicted = predict_rows(
        model, project_rows(rows[t], subspace, options.centered_projection));
    result.task_f1.push_back(evaluate(predicted, gold[t]).macro_f1);
  }
  return result;
}

}  // namespace

std::string_view to_string(RepresentationKind kind) {
  switch (kind) {
    case RepresentationKind::kBase:
      return "BASE";
    case RepresentationKind::kPcaRaw:
      return "PCA_RAW";
    case RepresentationKind::kPcaNorm:
      return "PCA_NORM";
  }
  return "?";
}

std::optional<RepresentationKind> parse_representation_kind(std::string_view text) {
  std::string upper(text);
  for (auto& ch : upper) {
    if (ch == '-') ch = '_';
    if (ch >= 'a' && ch <= 'z') ch = static_cast<char>(ch - 'a' + 'A');
  }
  if (upper == "BASE") return RepresentationKind::kBase;
  if (upper == "PCA_RAW") return RepresentationKind::kPcaRaw;
  if (upper == "PCA_NORM") return RepresentationKind::kPcaNorm;
  return std::nullopt;
}

const TransferRow* TransferReport::find(RepresentationKind kind,
                                        std::size_t n_pairs,
                                        std::string_view task) const {
  for (const auto& row : rows) {
    if (row.kind == kind && row.n_pairs == n_pairs && row.task == task) return &row;
  }
  return nullptr;
}

EmbeddedPairSet subsample_pairs(const EmbeddedPairSet& set, std::size_t n,
                                std::uint64_t seed) {
  if (n < 1 || n > set.size()) {
    throw PreconditionError("subsample size " + std::to_string(n) +
                            " out of range [1, " + std::to_string(set.size()) +
                            "]");
  }
  std::vector<std::size_t> order(set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  EmbeddedPairSet out;
  out.dim = set.dim;
  out.mode = set.mode;
  out.pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.pairs.push_back(set.pairs[order[i]]);
  return out;
}

TransferReport run_transfer(const EmbeddedPairSet& pairs,
                            std::span<const TargetTask> tasks,
                            const TransferOptions& options) {
  if (pairs.mode != SubspaceMode::kRaw) {
    throw PreconditionError("run_transfer expects the RAW pair set");
  }
  if (options.sizes.empty() || options.kinds.empty() || options.seeds.empty()) {
    throw PreconditionError("run_transfer needs sizes, kinds and seeds");
  }
  if (tasks.empty()) throw PreconditionError("run_transfer needs at least one task");
  for (std::size_t size : options.sizes) {
    if (size < 2 || size > pairs.size()) {
      throw PreconditionError("training size " + std::to_string(size) +
                              " out of range [2, " + std::to_string(pairs.size()) +
                              "]");
    }
  }
  std::vector<Matrix> rows;
  std::vector<std::vector<Label>> gold;
  for (const auto& task : tasks) {
    if (task.data.dim != pairs.dim) {
      throw DimensionMismatch(pairs.dim, task.data.dim);
    }
    if (task.data.instances.empty()) {
      throw PreconditionError("task \"" + task.name + "\" has no instances");
    }
    rows.push_back(task_rows(task.data));
    gold.push_back(task_labels(task.data));
  }

  const std::size_t n_seeds = options.seeds.size();
  const std::size_t n_sizes = options.sizes.size();
  // results[seed * n_sizes + size][kind]
  std::vector<std::vector<KindResult>> results(n_seeds * n_sizes);
  parallel_for(results.size(), options.threads, [&](std::size_t unit) {
    const std::size_t s = unit / n_sizes;
    const std::size_t z = unit % n_sizes;
    const std::size_t size = options.sizes[z];
    const std::uint64_t run_seed = derive_seed(options.seeds[s], size);
    const EmbeddedPairSet train = subsample_pairs(pairs, size, run_seed);
    check_zero_shot(train, tasks);
    auto& slot = results[unit];
    for (RepresentationKind kind : options.kinds) {
      slot.push_back(run_kind(kind, train, tasks, rows, gold, options,
                              derive_seed(run_seed, 1)));
    }
  });

  TransferReport report;
  for (std::size_t ki = 0; ki < options.kinds.size(); ++ki) {
    for (std::size_t z = 0; z < n_sizes; ++z) {
      for (std::size_t t = 0; t < tasks.size(); ++t) {
        TransferRow row;
        row.kind = options.kinds[ki];
        row.n_pairs = options.sizes[z];
        row.task = tasks[t].name;
        row.runs = n_seeds;
        for (std::size_t s = 0; s < n_seeds; ++s) {
          const KindResult& r = results[s * n_sizes + z][ki];
          row.run_f1.push_back(r.task_f1[t]);
          if (row.kind != RepresentationKind::kBase) row.chosen_c.push_back(r.c);
        }
        row.mean_macro_f1 = mean_of(row.run_f1);
        row.std_error = standard_error(row.run_f1);
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

void write_transfer_report(const TransferReport& report, std::ostream& out) {
  out << "kind\tn_pairs\ttask\tmean_macro_f1\tstd_error\truns\tchosen_c\trun_f1\n";
  for (const auto& row : report.rows) {
    out << to_string(row.kind) << '\t' << row.n_pairs << '\t' << row.task << '\t'
        << format_fixed(row.mean_macro_f1, 6) << '\t'
        << format_fixed(row.std_error, 6) << '\t' << row.runs << '\t';
    if (row.chosen_c.empty()) {
      out << '-';
    } else {
      for (std::size_t i = 0; i < row.chosen_c.size(); ++i) {
        out << (i ? ";" : "") << row.chosen_c[i];
      }
    }
    out << '\t';
    for (std::size_t i = 0; i < row.run_f1.size(); ++i) {
      out << (i ? ";" : "") << format_fixed(row.run_f1[i], 6);
    }
    out << '\n';
  }
}

void write_transfer_table(const TransferReport& report, std::ostream& out) {
  std::size_t task_width = 4;
  for (const auto& row : report.rows) task_width = std::max(task_width, row.task.size());
  auto pad = [&](std::string_view text, std::size_t width) {
    out << text;
    for (std::size_t i = text.size(); i < width; ++i) out << ' ';
  };
  pad("kind", 10);
  pad("pairs", 7);
  pad("task", task_width + 2);
  out << "macro-F1\n";
  for (const auto& row : report.rows) {
    pad(to_string(row.kind), 10);
    pad(std::to_string(row.n_pairs), 7);
    pad(row.task, task_width + 2);
    out << format_fixed(100.0 * row.mean_macro_f1, 1) << " +- "
        << format_fixed(100.0 * row.std_error, 1) << '\n';
  }
}

}  // namespace semsub
