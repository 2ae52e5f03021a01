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

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace semsub {

// "%.17g": enough digits for a bit-identical strtod round trip.
std::string format_double(double value);

// Fixed-point with the given number of decimals, for reports.
std::string format_fixed(double value, int decimals);

// Whole-string decimal parse. Rejects empty input and trailing garbage.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

// Splits on runs of spaces and tabs; empty fields are dropped.
std::vector<std::string_view> split_whitespace(std::string_view line);

std::string_view trim(std::string_view text);

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace semsub
