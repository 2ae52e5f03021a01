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
#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "semsub/classifier.hpp"
#include "semsub/embeddings.hpp"
#include "semsub/rng.hpp"
#include "semsub/selection.hpp"
#include "semsub/subspace.hpp"
#include "semsub/substitution.hpp"
#include "semsub/synthetic.hpp"
#include "semsub/text_io.hpp"
#include "semsub/transfer.hpp"

namespace semsub::cli {
namespace {

namespace fs = std::filesystem;

void require(const fs::path& path, std::string_view key) {
  if (path.empty()) {
    throw PreconditionError("missing required setting \"" + std::string(key) + "\"");
  }
}

EmbeddedPairSet load_pair_set(const ExperimentConfig& cfg) {
  require(cfg.pairs, "pairs");
  EmbeddingTable table;
  if (!cfg.embeddings.empty()) {
    table = load_word_vectors(cfg.embeddings);
  } else if (!cfg.sentences.empty()) {
    table = table_from_dataset(load_sentence_embeddings(cfg.sentences, cfg.pair_positive));
  } else {
    throw PreconditionError(
        "missing required setting \"embeddings\" or \"sentences\"");
  }
  if (cfg.normalize_inputs) table = normalized(table);
  return embed_pairs(load_pair_list(cfg.pairs), table);
}

std::vector<TargetTask> load_tasks(const ExperimentConfig& cfg) {
  if (cfg.tasks.empty()) throw PreconditionError("no task.<name> settings given");
  std::vector<TargetTask> tasks;
  for (const auto& spec : cfg.tasks) {
    LabeledDataset data = load_sentence_embeddings(spec.path, spec.positive);
    if (cfg.normalize_inputs) data = normalized(data);
    tasks.push_back({spec.name, std::move(data)});
  }
  return tasks;
}

std::vector<std::size_t> grid_for(const ExperimentConfig& cfg, std::size_t n_pairs,
                                  std::size_t dim) {
  if (!cfg.c_grid.empty()) return cfg.c_grid;
  return default_component_grid(n_pairs, cfg.k_folds, dim, cfg.c_cap);
}

SelectionOptions selection_options(const ExperimentConfig& cfg) {
  SelectionOptions sel;
  sel.k_folds = cfg.k_folds;
  sel.seed = cfg.seed;
  sel.pca.center = cfg.center;
  sel.lda.uniform_priors = cfg.uniform_priors;
  sel.centered_projection = cfg.centered_projection;
  sel.threads = cfg.threads;
  return sel;
}

// Buffers the whole output before the file is opened.
template <typename Fn>
void write_file(const fs::path& path, Fn&& fn) {
  std::ostringstream buf;
  fn(buf);
  auto out = open_output(path);
  out << buf.str();
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::string> load_word_list(const fs::path& path) {
  auto in = open_input(path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto word = trim(line);
    if (word.empty() || word.front() == '#') continue;
    words.emplace_back(word);
  }
  return words;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo:
      return kExitIo;
    case ErrorKind::kParse:
      return kExitParse;
    case ErrorKind::kPrecondition:
      return kExitPrecondition;
    case ErrorKind::kInternal:
      return kExitInternal;
  }
  return kExitInternal;
}

bool is_path_key(const std::string& key) {
  static const std::vector<std::string> kPathKeys = {
      "embeddings", "sentences", "pairs", "subspace", "words",
      "output",     "table",     "out_dir"};
  if (key.starts_with("task.")) return !key.ends_with(".positive");
  return std::find(kPathKeys.begin(), kPathKeys.end(), key) != kPathKeys.end();
}

// Relative paths inside a config file are taken relative to that file.
RawConfig rebase_paths(RawConfig raw, const fs::path& config_path) {
  const fs::path base = config_path.parent_path();
  for (auto& [key, value] : raw) {
    if (value.empty() || !is_path_key(key)) continue;
    const fs::path p(value);
    if (p.is_relative()) value = (base / p).lexically_normal().string();
  }
  return raw;
}

std::string describe(const std::string& key) {
  static const std::map<std::string, std::string> kHelp = {
      {"embeddings", "Word-vector text file"},
      {"sentences", "Sentence-embedding file holding the pair member ids"},
      {"pair_positive", "Label of the first pair member in the sentence file"},
      {"pairs", "Minimal-pair file, one tab-separated pair per line"},
      {"subspace", "Subspace file written by learn"},
      {"words", "Word list, one token per line"},
      {"output", "Main output file (stdout when unset)"},
      {"table", "Human-readable report table"},
      {"out_dir", "Output directory"},
      {"mode", "RAW or NORM"},
      {"kinds", "Comma list of BASE, PCA_RAW, PCA_NORM"},
      {"sizes", "Training sizes in pairs, e.g. 10-100:10"},
      {"runs", "Seeded runs per size"},
      {"k_folds", "Cross-validation folds"},
      {"c", "Fixed component count; 0 selects it by cross-validation"},
      {"c_grid", "Candidate component counts, e.g. 1-32"},
      {"c_cap", "Upper bound of the default grid"},
      {"uniform_priors", "true: equal class priors in LDA"},
      {"centered_projection", "true: subtract the pair mean before projecting"},
      {"neighbors", "Candidates per word"},
      {"exclude_variants", "false: keep tokens containing the source word"},
  };
  if (const auto it = kHelp.find(key); it != kHelp.end()) return it->second;
  return "Benchmark parameter " + key.substr(key.find('.') + 1);
}

std::string flag_name(const std::string& key) {
  std::string name = key.starts_with("bench.") ? key.substr(6) : key;
  std::replace(name.begin(), name.end(), '_', '-');
  return "--" + name;
}

}  // namespace

void cmd_learn(const ExperimentConfig& cfg, std::ostream& out) {
  require(cfg.output, "output");
  EmbeddedPairSet set = load_pair_set(cfg);
  if (cfg.mode == SubspaceMode::kNorm) set = mean_shift(set);

  std::size_t c = cfg.c;
  if (c == 0) {
    const auto grid = grid_for(cfg, set.size(), set.dim);
    const auto selection = select_components(set, grid, selection_options(cfg));
    c = selection.chosen_c;
    out << "selected c = " << c << " by " << cfg.k_folds
        << "-fold cross-validation\n";
  }
  const Subspace subspace = learn_subspace(set, c, PcaOptions{cfg.center});
  write_file(cfg.output, [&](std::ostream& o) { save_subspace(subspace, o); });

  out << "mode " << to_string(subspace.mode()) << ", c = " << subspace.size()
      << ", dim = " << subspace.dim() << ", pairs = " << set.size() << '\n';
  double cumulative = 0.0;
  for (Eigen::Index i = 0; i < subspace.explained_variance_ratio().size(); ++i) {
    cumulative += subspace.explained_variance_ratio()[i];
  }
  out << "explained variance: first " << format_fixed(subspace.explained_variance_ratio()[0], 4)
      << ", cumulative " << format_fixed(cumulative, 4) << '\n';
  out << "wrote " << cfg.output.string() << '\n';
}

void cmd_select(const ExperimentConfig& cfg, std::ostream& out) {
  EmbeddedPairSet set = load_pair_set(cfg);
  if (cfg.mode == SubspaceMode::kNorm) set = mean_shift(set);
  const auto grid = grid_for(cfg, set.size(), set.dim);
  const auto selection = select_components(set, grid, selection_options(cfg));
  if (cfg.output.empty()) {
    write_selection_curve(selection, out);
  } else {
    write_file(cfg.output,
               [&](std::ostream& o) { write_selection_curve(selection, o); });
    out << "wrote " << cfg.output.string() << '\n';
  }
  const auto best = std::find_if(selection.curve.begin(), selection.curve.end(),
                                 [&](const CurvePoint& p) { return p.c == selection.chosen_c; });
  out << "chosen c = " << selection.chosen_c << " (mean macro-F1 "
      << format_fixed(best->mean_f1, 4) << ")\n";
}

void cmd_transfer(const ExperimentConfig& cfg, std::ostream& out) {
  const EmbeddedPairSet pairs = load_pair_set(cfg);
  const auto tasks = load_tasks(cfg);
  if (cfg.runs == 0) throw PreconditionError("runs must be positive");

  TransferOptions options;
  options.sizes = cfg.sizes.empty() ? std::vector<std::size_t>{pairs.size()} : cfg.sizes;
  options.kinds = cfg.kinds;
  options.seeds = expand_seeds(cfg.seed, cfg.runs);
  if (cfg.c == 0) {
    options.policy = IntrinsicComponents{cfg.c_grid, cfg.k_folds, cfg.c_cap};
  } else {
    options.policy = FixedComponents{cfg.c};
  }
  options.pca.center = cfg.center;
  options.lda.uniform_priors = cfg.uniform_priors;
  options.centered_projection = cfg.centered_projection;
  options.threads = cfg.threads;

  const TransferReport report = run_transfer(pairs, tasks, options);
  if (cfg.output.empty()) {
    write_transfer_report(report, out);
  } else {
    write_file(cfg.output, [&](std::ostream& o) { write_transfer_report(report, o); });
  }
  if (!cfg.table.empty()) {
    write_file(cfg.table, [&](std::ostream& o) { write_transfer_table(report, o); });
  }
  write_transfer_table(report, out);
  if (!cfg.output.empty()) out << "wrote " << cfg.output.string() << '\n';
}

std::size_t cmd_substitute(const ExperimentConfig& cfg, std::ostream& out) {
  require(cfg.embeddings, "embeddings");
  require(cfg.subspace, "subspace");
  require(cfg.words, "words");
  if (cfg.neighbors == 0) throw PreconditionError("neighbors must be positive");
  EmbeddingTable table = load_word_vectors(cfg.embeddings);
  if (cfg.normalize_inputs) table = normalized(table);
  const Subspace subspace = load_subspace(cfg.subspace);
  if (subspace.dim() != table.dim()) throw DimensionMismatch(table.dim(), subspace.dim());
  const auto words = load_word_list(cfg.words);

  std::size_t failed = 0;
  std::ostringstream rows;
  rows << "source\trank\tcandidate\tcosine\tstatus\n";
  for (const auto& word : words) {
    try {
      const auto result =
          cfg.exclude_variants
              ? substitute(word, table, subspace, cfg.neighbors)
              : substitute(word, table, subspace, cfg.neighbors, TokenFilter{});
      for (std::size_t r = 0; r < result.candidates.size(); ++r) {
        rows << word << '\t' << r + 1 << '\t' << result.candidates[r].token << '\t'
             << format_fixed(result.candidates[r].cosine, 6) << "\tok\n";
      }
    } catch (const UnknownToken&) {
      ++failed;
      rows << word << "\t-\t-\t-\tunknown\n";
    } catch (const PreconditionError&) {
      ++failed;
      rows << word << "\t-\t-\t-\tinside-subspace\n";
    }
  }
  if (cfg.output.empty()) {
    out << rows.str();
  } else {
    write_file(cfg.output, [&](std::ostream& o) { o << rows.str(); });
    out << "wrote " << cfg.output.string() << '\n';
  }
  out << "substituted " << (words.size() - failed) << " of " << words.size()
      << " words; " << failed << " failed\n";
  return failed;
}

void cmd_gen_bench(const ExperimentConfig& cfg, std::ostream& out) {
  require(cfg.out_dir, "out_dir");
  const SyntheticBenchmark bench = generate_synthetic_benchmark(cfg.bench);
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create directory " + cfg.out_dir.string());

  LabeledDataset pair_vectors;
  pair_vectors.dim = bench.pairs.dim;
  for (const auto& p : bench.pairs.pairs) {
    pair_vectors.instances.push_back({*p.surface_a, p.a, Label::kPositive, std::nullopt});
    pair_vectors.instances.push_back({*p.surface_b, p.b, Label::kNegative, std::nullopt});
  }
  write_file(cfg.out_dir / "pairs.tsv", [&](std::ostream& o) {
    o << "# profane\tneutral\n";
    for (const auto& p : bench.pairs.pairs) o << *p.surface_a << '\t' << *p.surface_b << '\n';
  });
  write_file(cfg.out_dir / "pair_vectors.jsonl",
             [&](std::ostream& o) { save_sentence_embeddings(pair_vectors, o); });
  write_file(cfg.out_dir / "task.jsonl",
             [&](std::ostream& o) { save_sentence_embeddings(bench.task, o); });
  write_file(cfg.out_dir / "direction.txt", [&](std::ostream& o) {
    for (Eigen::Index i = 0; i < bench.direction.size(); ++i) {
      o << (i ? " " : "") << format_double(bench.direction[i]);
    }
    o << '\n';
  });

  ExperimentConfig replay;
  replay.sentences = "pair_vectors.jsonl";
  replay.pairs = "pairs.tsv";
  replay.tasks.push_back({"synthetic", "task.jsonl", "profane"});
  replay.sizes = {10, 50};
  replay.seed = cfg.seed;
  replay.runs = cfg.runs;
  replay.k_folds = cfg.k_folds;
  replay.output = "report.tsv";
  replay.table = "report.txt";
  replay.bench = cfg.bench;
  write_file(cfg.out_dir / "bench.conf", [&](std::ostream& o) {
    o << "# Replay with: semsub transfer --config bench.conf\n";
    write_config(replay, o);
  });
  out << "wrote synthetic benchmark (" << bench.pairs.size() << " pairs, "
      << bench.task.size() << " task instances, dim " << bench.pairs.dim << ") to "
      << cfg.out_dir.string() << '\n';
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Contrastive semantic subspaces from minimal pairs", "semsub"};
  app.require_subcommand(1);
  app.fallthrough();

  RawConfig flags;
  std::string config_path;
  bool dump_config = false;
  app.add_option("--config", config_path, "Key-value config file");
  app.add_option_function<std::string>(
      "--seed", [&](const std::string& v) { flags["seed"] = v; }, "Top-level seed");
  app.add_option_function<std::string>(
      "--threads", [&](const std::string& v) { flags["threads"] = v; },
      "Worker threads for independent runs");
  app.add_flag_callback("--center", [&] { flags["center"] = "true"; },
                        "Center pair points before PCA (default)");
  app.add_flag_callback("--no-center", [&] { flags["center"] = "false"; },
                        "PCA without centering");
  app.add_flag_callback("--normalize-inputs", [&] { flags["normalize_inputs"] = "true"; },
                        "Scale all input vectors to unit length");
  app.add_flag("--dump-config", dump_config, "Print the effective config first");

  std::vector<std::string> task_flags;
  std::vector<std::string> task_positive_flags;
  auto add_keys = [&](CLI::App* sub, std::initializer_list<const char*> keys) {
    for (const char* key : keys) {
      const std::string k = key;
      sub->add_option_function<std::string>(
          flag_name(k), [&flags, k](const std::string& v) { flags[k] = v; },
          describe(k));
    }
  };
  auto add_task_flags = [&](CLI::App* sub) {
    sub->add_option("--task", task_flags, "Target task NAME=PATH (repeatable)");
    sub->add_option("--task-positive", task_positive_flags,
                    "Positive label of a task NAME=LABEL (default profane)");
  };

  auto* learn = app.add_subcommand("learn", "Learn and save a subspace from minimal pairs");
  add_keys(learn, {"embeddings", "sentences", "pair_positive", "pairs", "output", "mode",
                   "c", "c_grid", "c_cap", "k_folds", "uniform_priors"});
  auto* select = app.add_subcommand("select", "Cross-validate the component count");
  add_keys(select, {"embeddings", "sentences", "pair_positive", "pairs", "output",
                    "mode", "c_grid", "c_cap", "k_folds", "uniform_priors",
                    "centered_projection"});
  auto* transfer = app.add_subcommand("transfer", "Zero-shot transfer evaluation");
  add_keys(transfer, {"embeddings", "sentences", "pair_positive", "pairs", "output",
                      "table", "kinds", "sizes", "runs", "k_folds", "c", "c_grid",
                      "c_cap", "uniform_priors", "centered_projection"});
  add_task_flags(transfer);
  auto* subst = app.add_subcommand("substitute", "Neutral substitutes by subspace removal");
  add_keys(subst, {"embeddings", "subspace", "words", "output", "neighbors",
                   "exclude_variants"});
  auto* gen = app.add_subcommand("gen-bench", "Write a synthetic planted-direction benchmark");
  add_keys(gen, {"out_dir", "runs", "k_folds", "bench.dim", "bench.n_pairs",
                 "bench.n_task", "bench.seed", "bench.topic_shift", "bench.noise_scale",
                 "bench.topic_dim", "bench.topic_spread", "bench.separation",
                 "bench.pair_noise", "bench.pair_noise_floor"});

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // argv[0]
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (const auto& spec : task_flags) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ParseError("--task expects NAME=PATH, got \"" + spec + "\"");
      }
      flags["task." + spec.substr(0, eq)] = spec.substr(eq + 1);
    }
    for (const auto& spec : task_positive_flags) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ParseError("--task-positive expects NAME=LABEL, got \"" + spec + "\"");
      }
      flags["task." + spec.substr(0, eq) + ".positive"] = spec.substr(eq + 1);
    }

    RawConfig raw;
    if (!config_path.empty()) raw = rebase_paths(read_config_file(config_path), config_path);
    raw = merge(merge(raw, environment_overrides()), flags);
    const ExperimentConfig cfg = resolve_config(raw);
    if (dump_config) write_config(cfg, out);

    if (learn->parsed()) {
      cmd_learn(cfg, out);
    } else if (select->parsed()) {
      cmd_select(cfg, out);
    } else if (transfer->parsed()) {
      cmd_transfer(cfg, out);
    } else if (subst->parsed()) {
      const std::size_t failed = cmd_substitute(cfg, out);
      if (failed > 0) err << failed << " word(s) could not be substituted\n";
    } else if (gen->parsed()) {
      cmd_gen_bench(cfg, out);
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace semsub::cli
