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
#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <istream>
#include <ostream>

#include "semsub/text_io.hpp"

namespace semsub::cli {
namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
  throw ParseError("config key \"" + key + "\": expected " + expected +
                   ", got \"" + value + "\"");
}

std::size_t to_size(const std::string& key, const std::string& value) {
  const auto v = parse_int(trim(value));
  if (!v || *v < 0) bad_value(key, value, "a nonnegative integer");
  return static_cast<std::size_t>(*v);
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  const auto text = trim(value);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    bad_value(key, value, "an unsigned integer");
  }
  return out;
}

double to_real(const std::string& key, const std::string& value) {
  const auto v = parse_double(trim(value));
  if (!v) bad_value(key, value, "a number");
  return *v;
}

bool to_bool(const std::string& key, const std::string& value) {
  const auto text = std::string(trim(value));
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  bad_value(key, value, "a boolean");
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string::npos ? text.size() : comma;
    const auto item = trim(std::string_view(text).substr(start, end - start));
    if (!item.empty()) items.emplace_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

std::string join_sizes(const std::vector<std::size_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

const std::vector<std::string> kKeys = {
    "embeddings", "sentences", "pair_positive", "pairs", "subspace", "words",
    "output", "table", "out_dir", "mode", "kinds", "sizes", "seed", "runs",
    "threads", "k_folds", "c_grid", "c", "c_cap", "center",
    "centered_projection", "normalize_inputs", "uniform_priors", "neighbors",
    "exclude_variants", "bench.dim", "bench.n_pairs", "bench.n_task",
    "bench.seed", "bench.topic_shift", "bench.noise_scale", "bench.topic_dim",
    "bench.topic_spread", "bench.separation", "bench.pair_noise",
    "bench.pair_noise_floor",
};

}  // namespace

const std::vector<std::string>& known_keys() { return kKeys; }

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& item : split_commas(text)) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(to_size("list", item));
      continue;
    }
    std::string hi_text = item.substr(dash + 1);
    std::size_t step = 1;
    if (const auto colon = hi_text.find(':'); colon != std::string::npos) {
      step = to_size("list", hi_text.substr(colon + 1));
      hi_text = hi_text.substr(0, colon);
    }
    const std::size_t lo = to_size("list", item.substr(0, dash));
    const std::size_t hi = to_size("list", hi_text);
    if (step == 0 || lo > hi) bad_value("list", item, "a range lo-hi[:step]");
    for (std::size_t v = lo; v <= hi; v += step) out.push_back(v);
  }
  return out;
}

RawConfig parse_config_text(std::istream& in) {
  RawConfig raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto eq = content.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected \"key = value\"", line_no);
    }
    const auto key = trim(content.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", line_no);
    raw[std::string(key)] = std::string(trim(content.substr(eq + 1)));
  }
  return raw;
}

RawConfig read_config_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_config_text(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

RawConfig environment_overrides() {
  RawConfig raw;
  for (const auto& key : kKeys) {
    std::string name = "SEMSUB_" + key;
    for (auto& ch : name) {
      if (ch == '.') ch = '_';
      if (ch >= 'a' && ch <= 'z') ch = static_cast<char>(ch - 'a' + 'A');
    }
    if (const char* value = std::getenv(name.c_str())) raw[key] = value;
  }
  return raw;
}

RawConfig merge(const RawConfig& base, const RawConfig& overrides) {
  RawConfig out = base;
  for (const auto& [k, v] : overrides) out[k] = v;
  return out;
}

ExperimentConfig resolve_config(const RawConfig& raw) {
  ExperimentConfig cfg;
  std::map<std::string, TaskSpec> tasks;
  for (const auto& [key, value] : raw) {
    if (key.starts_with("task.")) {
      const std::string rest = key.substr(5);
      if (rest.ends_with(".positive")) {
        const std::string name = rest.substr(0, rest.size() - 9);
        if (name.empty()) bad_value(key, value, "task.<name>.positive");
        tasks[name].positive = value;
      } else {
        if (rest.empty() || rest.find('.') != std::string::npos) {
          bad_value(key, value, "task.<name> = <path>");
        }
        tasks[rest].path = value;
      }
      continue;
    }
    if (key == "embeddings") cfg.embeddings = value;
    else if (key == "sentences") cfg.sentences = value;
    else if (key == "pair_positive") cfg.pair_positive = value;
    else if (key == "pairs") cfg.pairs = value;
    else if (key == "subspace") cfg.subspace = value;
    else if (key == "words") cfg.words = value;
    else if (key == "output") cfg.output = value;
    else if (key == "table") cfg.table = value;
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "mode") {
      const auto mode = parse_subspace_mode(trim(value));
      if (!mode) bad_value(key, value, "RAW or NORM");
      cfg.mode = *mode;
    } else if (key == "kinds") {
      cfg.kinds.clear();
      for (const auto& item : split_commas(value)) {
        const auto kind = parse_representation_kind(item);
        if (!kind) bad_value(key, item, "BASE, PCA_RAW or PCA_NORM");
        cfg.kinds.push_back(*kind);
      }
    } else if (key == "sizes") cfg.sizes = parse_index_list(value);
    else if (key == "seed") cfg.seed = to_u64(key, value);
    else if (key == "runs") cfg.runs = to_size(key, value);
    else if (key == "threads") cfg.threads = to_size(key, value);
    else if (key == "k_folds") cfg.k_folds = to_size(key, value);
    else if (key == "c_grid") cfg.c_grid = parse_index_list(value);
    else if (key == "c") cfg.c = to_size(key, value);
    else if (key == "c_cap") cfg.c_cap = to_size(key, value);
    else if (key == "center") cfg.center = to_bool(key, value);
    else if (key == "centered_projection") cfg.centered_projection = to_bool(key, value);
    else if (key == "normalize_inputs") cfg.normalize_inputs = to_bool(key, value);
    else if (key == "uniform_priors") cfg.uniform_priors = to_bool(key, value);
    else if (key == "neighbors") cfg.neighbors = to_size(key, value);
    else if (key == "exclude_variants") cfg.exclude_variants = to_bool(key, value);
    else if (key == "bench.dim") cfg.bench.dim = to_size(key, value);
    else if (key == "bench.n_pairs") cfg.bench.n_pairs = to_size(key, value);
    else if (key == "bench.n_task") cfg.bench.n_task = to_size(key, value);
    else if (key == "bench.seed") cfg.bench.seed = to_u64(key, value);
    else if (key == "bench.topic_shift") cfg.bench.topic_shift = to_real(key, value);
    else if (key == "bench.noise_scale") cfg.bench.noise_scale = to_real(key, value);
    else if (key == "bench.topic_dim") cfg.bench.topic_dim = to_size(key, value);
    else if (key == "bench.topic_spread") cfg.bench.topic_spread = to_real(key, value);
    else if (key == "bench.separation") cfg.bench.separation = to_real(key, value);
    else if (key == "bench.pair_noise") cfg.bench.pair_noise = to_real(key, value);
    else if (key == "bench.pair_noise_floor") cfg.bench.pair_noise_floor = to_real(key, value);
    else throw ParseError("unknown config key \"" + key + "\"");
  }
  for (auto& [name, spec] : tasks) {
    if (spec.path.empty()) {
      throw ParseError("task \"" + name + "\" has a label but no path");
    }
    spec.name = name;
    cfg.tasks.push_back(std::move(spec));
  }
  return cfg;
}

void write_config(const ExperimentConfig& cfg, std::ostream& out) {
  auto line = [&](std::string_view key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  line("embeddings", cfg.embeddings.string());
  line("sentences", cfg.sentences.string());
  line("pair_positive", cfg.pair_positive);
  line("pairs", cfg.pairs.string());
  for (const auto& task : cfg.tasks) {
    line("task." + task.name, task.path.string());
    line("task." + task.name + ".positive", task.positive);
  }
  line("subspace", cfg.subspace.string());
  line("words", cfg.words.string());
  line("output", cfg.output.string());
  line("table", cfg.table.string());
  line("out_dir", cfg.out_dir.string());
  line("mode", std::string(to_string(cfg.mode)));
  std::string kinds;
  for (std::size_t i = 0; i < cfg.kinds.size(); ++i) {
    if (i) kinds += ',';
    kinds += to_string(cfg.kinds[i]);
  }
  line("kinds", kinds);
  line("sizes", join_sizes(cfg.sizes));
  line("seed", std::to_string(cfg.seed));
  line("runs", std::to_string(cfg.runs));
  line("threads", std::to_string(cfg.threads));
  line("k_folds", std::to_string(cfg.k_folds));
  line("c_grid", join_sizes(cfg.c_grid));
  line("c", std::to_string(cfg.c));
  line("c_cap", std::to_string(cfg.c_cap));
  line("center", flag(cfg.center));
  line("centered_projection", flag(cfg.centered_projection));
  line("normalize_inputs", flag(cfg.normalize_inputs));
  line("uniform_priors", flag(cfg.uniform_priors));
  line("neighbors", std::to_string(cfg.neighbors));
  line("exclude_variants", flag(cfg.exclude_variants));
  line("bench.dim", std::to_string(cfg.bench.dim));
  line("bench.n_pairs", std::to_string(cfg.bench.n_pairs));
  line("bench.n_task", std::to_string(cfg.bench.n_task));
  line("bench.seed", std::to_string(cfg.bench.seed));
  line("bench.topic_shift", format_double(cfg.bench.topic_shift));
  line("bench.noise_scale", format_double(cfg.bench.noise_scale));
  line("bench.topic_dim", std::to_string(cfg.bench.topic_dim));
  line("bench.topic_spread", format_double(cfg.bench.topic_spread));
  line("bench.separation", format_double(cfg.bench.separation));
  line("bench.pair_noise", format_double(cfg.bench.pair_noise));
  line("bench.pair_noise_floor", format_double(cfg.bench.pair_noise_floor));
}

}  // namespace semsub::cli
