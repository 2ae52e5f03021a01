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
#include <doctest.h>

#include <set>
#include <sstream>

#include "convert.hpp"
#include "semsub/synthetic.hpp"
#include "semsub/transfer.hpp"

using namespace semsub;

namespace {

constexpr auto kBase = RepresentationKind::kBase;
constexpr auto kRaw = RepresentationKind::kPcaRaw;
constexpr auto kNorm = RepresentationKind::kPcaNorm;

// No shift and no noise of any kind, the topic spread of the pair bases included.
SyntheticParams clean_params(std::uint64_t seed) {
  SyntheticParams p;
  p.seed = seed;
  p.topic_shift = 0.0;
  p.noise_scale = 0.0;
  p.pair_noise = 0.0;
  p.topic_spread = 0.0;
  return p;
}

std::string report_text(const TransferReport& report) {
  std::ostringstream out;
  write_transfer_report(report, out);
  return out.str();
}

TransferOptions options_for(std::vector<std::size_t> sizes, std::vector<RepresentationKind> kinds,
                            std::size_t runs) {
  TransferOptions o;
  o.sizes = std::move(sizes);
  o.kinds = std::move(kinds);
  o.seeds = expand_seeds(42, runs);
  return o;
}

}  // namespace

TEST_SUITE("subsample_pairs") {
  TEST_CASE("full sample is a permutation") {
    const auto bench = generate_synthetic_benchmark({.dim = 8, .n_pairs = 20, .n_task = 10});
    const auto all = subsample_pairs(bench.pairs, 20, 5);
    REQUIRE(all.size() == 20);
    std::set<std::string> names;
    for (const auto& p : all.pairs) names.insert(*p.surface_a);
    CHECK(names.size() == 20);
    bool moved = false;
    for (std::size_t i = 0; i < 20; ++i) moved |= all.pairs[i].surface_a != bench.pairs.pairs[i].surface_a;
    CHECK(moved);
  }

  TEST_CASE("deterministic per seed") {
    const auto bench = generate_synthetic_benchmark({.dim = 8, .n_pairs = 20, .n_task = 10});
    CHECK(subsample_pairs(bench.pairs, 1, 9).pairs[0].surface_a ==
          subsample_pairs(bench.pairs, 1, 9).pairs[0].surface_a);
    CHECK_THROWS_AS(subsample_pairs(bench.pairs, 0, 9), PreconditionError);
    CHECK_THROWS_AS(subsample_pairs(bench.pairs, 21, 9), PreconditionError);
  }
}

TEST_SUITE("synthetic benchmark") {
  TEST_CASE("shape and planted geometry") {
    const auto b = generate_synthetic_benchmark({.dim = 16, .n_pairs = 12, .n_task = 30, .seed = 4});
    CHECK(b.pairs.size() == 12);
    CHECK(b.pairs.dim == 16);
    CHECK(b.pairs.mode == SubspaceMode::kRaw);
    CHECK(b.task.size() == 30);
    CHECK(b.task.dim == 16);
    CHECK(b.pairs.pairs[3].surface_a == "pair3_pos");
    CHECK(b.pairs.pairs[3].surface_b == "pair3_neu");
    CHECK(b.task.instances[7].id == "task7");
    CHECK(std::abs(b.direction.norm() - 1.0) < 1e-12);
    CHECK((b.topic_basis.transpose() * b.direction).lpNorm<Eigen::Infinity>() < 1e-12);
    std::size_t pos = 0;
    for (const auto& inst : b.task.instances) pos += inst.label == Label::kPositive;
    CHECK(pos == 15);
  }

  TEST_CASE("same seed, same data") {
    const auto a = generate_synthetic_benchmark({.seed = 3});
    const auto b = generate_synthetic_benchmark({.seed = 3});
    const auto c = generate_synthetic_benchmark({.seed = 4});
    CHECK(a.direction == b.direction);
    CHECK(a.pairs.pairs[10].a == b.pairs.pairs[10].a);
    CHECK(a.task.instances[99].vector == b.task.instances[99].vector);
    CHECK(a.direction != c.direction);
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(generate_synthetic_benchmark({.dim = 3}), PreconditionError);
    CHECK_THROWS_AS(generate_synthetic_benchmark({.n_pairs = 4}), PreconditionError);
    CHECK_THROWS_AS(generate_synthetic_benchmark({.n_task = 9}), PreconditionError);
    CHECK_THROWS_AS(generate_synthetic_benchmark({.noise_scale = -1}), PreconditionError);
    CHECK_THROWS_AS(generate_synthetic_benchmark({.dim = 8, .topic_dim = 8}), PreconditionError);
  }

  TEST_CASE("NORM leading component recovers the planted direction") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto b = generate_synthetic_benchmark({.seed = seed});
      const auto s = learn_subspace(mean_shift(b.pairs), 1);
      CHECK(std::abs(s.components().row(0).dot(b.direction)) >= 0.95);
    }
  }

  TEST_CASE("no shift and no target noise: BASE and PCA_RAW are perfect") {
    SyntheticParams p;
    p.seed = 1;
    p.topic_shift = 0.0;
    p.noise_scale = 0.0;
    p.pair_noise = 0.0;
    const auto b = generate_synthetic_benchmark(p);
    const std::vector<TargetTask> tasks{{"clean", b.task}};
    const auto report = run_transfer(b.pairs, tasks, options_for({10, 50}, {kBase, kRaw}, 3));
    for (const auto& row : report.rows) CHECK(row.mean_macro_f1 == 1.0);
  }

  TEST_CASE("no shift and no noise: every kind is perfect at every size") {
    const auto b = generate_synthetic_benchmark(clean_params(1));
    const std::vector<TargetTask> tasks{{"clean", b.task}};
    const auto report =
        run_transfer(b.pairs, tasks, options_for({2, 3, 5, 10, 50}, {kBase, kRaw, kNorm}, 3));
    REQUIRE(report.rows.size() == 15);
    for (const auto& row : report.rows) {
      CHECK(row.mean_macro_f1 == 1.0);
      CHECK(row.std_error == 0.0);
    }
  }

  TEST_CASE("topic shift separates PCA_RAW from BASE") {
    const auto b = generate_synthetic_benchmark({.seed = 2});
    const std::vector<TargetTask> tasks{{"shifted", b.task}};
    const auto report = run_transfer(b.pairs, tasks, options_for({10, 50}, {kBase, kRaw}, 5));
    const auto* raw = report.find(kRaw, 50, "shifted");
    const auto* base = report.find(kBase, 50, "shifted");
    REQUIRE(raw);
    REQUIRE(base);
    CHECK(raw->mean_macro_f1 >= 0.9);
    CHECK(base->mean_macro_f1 <= raw->mean_macro_f1 - 0.1);
  }
}

TEST_SUITE("run_transfer") {
  TEST_CASE("training data as task gives BASE a perfect score") {
    const auto b = generate_synthetic_benchmark(clean_params(5));
    LabeledDataset own;
    own.dim = b.pairs.dim;
    for (std::size_t i = 0; i < b.pairs.size(); ++i) {
      own.instances.push_back({"copy" + std::to_string(i) + "a", b.pairs.pairs[i].a, Label::kPositive, {}});
      own.instances.push_back({"copy" + std::to_string(i) + "b", b.pairs.pairs[i].b, Label::kNegative, {}});
    }
    const std::vector<TargetTask> tasks{{"own", own}};
    const auto report = run_transfer(b.pairs, tasks, options_for({b.pairs.size()}, {kBase}, 1));
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].mean_macro_f1 == 1.0);
    CHECK(report.rows[0].runs == 1);
    CHECK(report.rows[0].std_error == 0.0);
  }

  TEST_CASE("rows are ordered by kind, size, task") {
    const auto b = generate_synthetic_benchmark({.dim = 12, .n_pairs = 20, .n_task = 40});
    const std::vector<TargetTask> tasks{{"t1", b.task}, {"t2", b.task}};
    const auto report = run_transfer(b.pairs, tasks, options_for({5, 10}, {kNorm, kBase}, 2));
    REQUIRE(report.rows.size() == 8);
    CHECK(report.rows[0].kind == kNorm);
    CHECK(report.rows[0].n_pairs == 5);
    CHECK(report.rows[1].task == "t2");
    CHECK(report.rows[2].n_pairs == 10);
    CHECK(report.rows[4].kind == kBase);
    CHECK(report.rows[4].chosen_c.empty());
    CHECK(report.rows[0].chosen_c.size() == 2);
    CHECK(report.rows[0].run_f1.size() == 2);
  }

  TEST_CASE("fixed components policy") {
    const auto b = generate_synthetic_benchmark({.dim = 12, .n_pairs = 20, .n_task = 40});
    const std::vector<TargetTask> tasks{{"t", b.task}};
    auto options = options_for({10}, {kRaw}, 3);
    options.policy = FixedComponents{3};
    const auto report = run_transfer(b.pairs, tasks, options);
    CHECK(report.rows[0].chosen_c == std::vector<std::size_t>{3, 3, 3});
  }

  TEST_CASE("deterministic across reruns and thread counts") {
    const auto b = generate_synthetic_benchmark({.dim = 16, .n_pairs = 30, .n_task = 60, .seed = 8});
    const std::vector<TargetTask> tasks{{"t", b.task}};
    auto options = options_for({5, 20}, {kBase, kRaw, kNorm}, 4);
    const auto one = report_text(run_transfer(b.pairs, tasks, options));
    CHECK(one == report_text(run_transfer(b.pairs, tasks, options)));
    options.threads = 4;
    CHECK(one == report_text(run_transfer(b.pairs, tasks, options)));
  }

  TEST_CASE("errors") {
    const auto b = generate_synthetic_benchmark({.dim = 8, .n_pairs = 10, .n_task = 20});
    std::vector<TargetTask> tasks{{"t", b.task}};
    CHECK_THROWS_AS(run_transfer(b.pairs, tasks, options_for({1}, {kBase}, 1)), PreconditionError);
    CHECK_THROWS_AS(run_transfer(b.pairs, tasks, options_for({11}, {kBase}, 1)), PreconditionError);
    CHECK_THROWS_AS(run_transfer(mean_shift(b.pairs), tasks, options_for({5}, {kBase}, 1)),
                    PreconditionError);

    auto wrong_dim = generate_synthetic_benchmark({.dim = 9, .n_pairs = 10, .n_task = 20});
    const std::vector<TargetTask> bad{{"t", wrong_dim.task}};
    CHECK_THROWS_AS(run_transfer(b.pairs, bad, options_for({5}, {kBase}, 1)), DimensionMismatch);

    LabeledDataset leak = b.task;
    leak.instances[0].id = "pair3_neu";
    const std::vector<TargetTask> leaky{{"t", leak}};
    CHECK_THROWS_AS(run_transfer(b.pairs, leaky, options_for({10}, {kBase}, 1)), PreconditionError);
  }

  TEST_CASE("report export") {
    TransferReport report;
    TransferRow row;
    row.kind = kRaw;
    row.n_pairs = 10;
    row.task = "t";
    row.mean_macro_f1 = 0.875;
    row.std_error = 0.0125;
    row.runs = 2;
    row.chosen_c = {3, 4};
    row.run_f1 = {0.8625, 0.8875};
    report.rows.push_back(row);
    row.kind = kBase;
    row.chosen_c.clear();
    report.rows.push_back(row);
    CHECK(report_text(report) ==
          "kind\tn_pairs\ttask\tmean_macro_f1\tstd_error\truns\tchosen_c\trun_f1\n"
          "PCA_RAW\t10\tt\t0.875000\t0.012500\t2\t3;4\t0.862500;0.887500\n"
          "BASE\t10\tt\t0.875000\t0.012500\t2\t-\t0.862500;0.887500\n");
  }

  TEST_CASE("representation names") {
    CHECK(to_string(kNorm) == "PCA_NORM");
    CHECK(parse_representation_kind("pca-raw") == kRaw);
    CHECK(parse_representation_kind("BASE") == kBase);
    CHECK_FALSE(parse_representation_kind("pca").has_value());
  }
}
