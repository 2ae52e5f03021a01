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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "semsub/subspace.hpp"
#include "semsub/synthetic.hpp"
#include "semsub/transfer.hpp"

namespace semsub::cli {

// Flat key -> value settings, as read from a config file, the environment
// or command-line flags.
using RawConfig = std::map<std::string, std::string>;

struct TaskSpec {
  std::string name;
  std::filesystem::path path;
  std::string positive = "profane";
};

// Everything a run depends on besides the input files themselves.
struct ExperimentConfig {
  // Inputs
  std::filesystem::path embeddings;  // word-vector text file
  std::filesystem::path sentences;   // sentence-embedding file for pair ids
  std::string pair_positive = "profane";
  std::filesystem::path pairs;
  std::vector<TaskSpec> tasks;
  std::filesystem::path subspace;
  std::filesystem::path words;

  // Outputs
  std::filesystem::path output;
  std::filesystem::path table;
  std::filesystem::path out_dir;

  // Method
  SubspaceMode mode = SubspaceMode::kRaw;
  std::vector<RepresentationKind> kinds{RepresentationKind::kBase,
                                        RepresentationKind::kPcaRaw,
                                        RepresentationKind::kPcaNorm};
  std::vector<std::size_t> sizes;
  std::uint64_t seed = 0;
  std::size_t runs = 5;
  std::size_t threads = 1;
  std::size_t k_folds = 5;
  std::vector<std::size_t> c_grid;  // empty: all feasible values
  std::size_t c = 0;                // 0: intrinsic cross-validation
  std::size_t c_cap = 128;
  bool center = true;
  bool centered_projection = false;
  bool normalize_inputs = false;
  bool uniform_priors = false;
  std::size_t neighbors = 4;
  bool exclude_variants = true;

  SyntheticParams bench;
};

// "key = value" lines; '#' starts a comment line.
RawConfig parse_config_text(std::istream& in);
RawConfig read_config_file(const std::filesystem::path& path);

// SEMSUB_<KEY> variables for every fixed key ('.' becomes '_', uppercased).
RawConfig environment_overrides();

// Later maps win.
RawConfig merge(const RawConfig& base, const RawConfig& overrides);

// Typed view. Throws ParseError naming the key on bad values or unknown keys.
ExperimentConfig resolve_config(const RawConfig& raw);

// Every key with its effective value, parseable by parse_config_text.
void write_config(const ExperimentConfig& config, std::ostream& out);

// "1,2,4", "1-32", "10-100:10" and mixtures thereof.
std::vector<std::size_t> parse_index_list(const std::string& text);

// Keys accepted in config files and as --flags (with '_' spelled '-').
const std::vector<std::string>& known_keys();

}  // namespace semsub::cli
