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
#include "semsub/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "semsub/text_io.hpp"

namespace semsub {
namespace {

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ", ";
    out += '"' + t + '"';
  }
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

bool better(const Neighbor& a, const Neighbor& b) {
  if (a.cosine != b.cosine) return a.cosine > b.cosine;
  return a.token < b.token;
}

}  // namespace

UnknownToken::UnknownToken(std::vector<std::string> tokens)
    : PreconditionError("unknown token" +
                        std::string(tokens.size() > 1 ? "s: " : ": ") +
                        join_tokens(tokens)),
      tokens_(std::move(tokens)) {}

EmbeddingTable::EmbeddingTable(
    std::size_t dim, std::vector<std::pair<std::string, Vector>> entries)
    : dim_(dim) {
  tokens_.reserve(entries.size());
  vectors_.reserve(entries.size());
  norms_.reserve(entries.size());
  for (auto& [token, vec] : entries) {
    if (static_cast<std::size_t>(vec.size()) != dim_) {
      throw DimensionMismatch(dim_, static_cast<std::size_t>(vec.size()));
    }
    if (index_.contains(token)) {
      ++duplicates_;
      continue;
    }
    index_.emplace(token, tokens_.size());
    norms_.push_back(vec.norm());
    tokens_.push_back(std::move(token));
    vectors_.push_back(std::move(vec));
  }
}

std::optional<std::size_t> EmbeddingTable::find(std::string_view token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EmbeddingTable load_word_vectors(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header line", 1);
  strip_cr(line);
  const auto header = split_whitespace(line);
  if (header.size() != 2) {
    throw ParseError("malformed header, expected \"<vocab> <dim>\"", 1);
  }
  const auto vocab = parse_int(header[0]);
  const auto dim = parse_int(header[1]);
  if (!vocab || !dim || *vocab < 0 || *dim <= 0) {
    throw ParseError("malformed header, expected \"<vocab> <dim>\"", 1);
  }

  const auto d = static_cast<std::size_t>(*dim);
  std::vector<std::pair<std::string, Vector>> entries;
  entries.reserve(static_cast<std::size_t>(*vocab));
  std::size_t line_no = 1;
  while (entries.size() < static_cast<std::size_t>(*vocab) &&
         std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    const auto fields = split_whitespace(line);
    if (fields.size() != d + 1) {
      throw ParseError("expected a token and " + std::to_string(d) +
                           " coordinates, found " +
                           std::to_string(fields.empty() ? 0
                                                         : fields.size() - 1) +
                           " coordinates",
                       line_no);
    }
    Vector vec(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) {
      const auto value = parse_double(fields[j + 1]);
      if (!value || !std::isfinite(*value)) {
        throw ParseError("non-numeric coordinate \"" +
                             std::string(fields[j + 1]) + "\"",
                         line_no);
      }
      vec[static_cast<Eigen::Index>(j)] = *value;
    }
    entries.emplace_back(std::string(fields[0]), std::move(vec));
  }
  if (entries.size() < static_cast<std::size_t>(*vocab)) {
    throw ParseError("header declares " + std::to_string(*vocab) +
                         " vectors but only " + std::to_string(entries.size()) +
                         " were found",
                     line_no + 1);
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!is_blank(line)) {
      throw ParseError("unexpected content after the declared vectors",
                       line_no);
    }
  }
  return EmbeddingTable(d, std::move(entries));
}

EmbeddingTable load_word_vectors(const std::filesystem::path& path) {
  auto in = open_input(path);
  return load_word_vectors(in);
}

void save_word_vectors(const EmbeddingTable& table, std::ostream& out) {
  out << table.size() << ' ' << table.dim() << '\n';
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.token(i);
    for (double x : table.vector(i)) out << ' ' << format_double(x);
    out << '\n';
  }
}

const Vector& lookup(const EmbeddingTable& table, std::string_view token) {
  const auto idx = table.find(token);
  if (!idx) throw UnknownToken({std::string(token)});
  return table.vector(*idx);
}

Vector mean_pool(std::span<const Vector> vectors) {
  if (vectors.empty()) throw PreconditionError("mean_pool: empty input");
  const Eigen::Index d = vectors.front().size();
  Vector sum = Vector::Zero(d);
  for (const auto& v : vectors) {
    if (v.size() != d) {
      throw DimensionMismatch(static_cast<std::size_t>(d),
                              static_cast<std::size_t>(v.size()));
    }
    sum += v;
  }
  return sum / static_cast<double>(vectors.size());
}

double cosine_similarity(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch(static_cast<std::size_t>(a.size()),
                            static_cast<std::size_t>(b.size()));
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

std::vector<Neighbor> nearest_neighbors(const EmbeddingTable& table,
                                        const Vector& query, std::size_t k,
                                        const TokenFilter& exclude) {
  if (k == 0) throw PreconditionError("nearest_neighbors: k must be positive");
  if (static_cast<std::size_t>(query.size()) != table.dim()) {
    throw DimensionMismatch(table.dim(), static_cast<std::size_t>(query.size()));
  }
  const double qnorm = query.norm();
  if (!(qnorm > 0.0)) {
    throw PreconditionError("nearest_neighbors: query has zero norm");
  }

  std::vector<Neighbor> heap;
  heap.reserve(k + 1);
  // Max-heap under better(): the front is the worst kept candidate.
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::string& token = table.token(i);
    if (exclude && exclude(token)) continue;
    const double n = table.norm(i);
    double cos = 0.0;
    if (n > 0.0) {
      cos = std::clamp(table.vector(i).dot(query) / (n * qnorm), -1.0, 1.0);
    }
    Neighbor cand{token, cos};
    if (heap.size() < k) {
      heap.push_back(std::move(cand));
      std::push_heap(heap.begin(), heap.end(), better);
    } else if (better(cand, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), better);
      heap.back() = std::move(cand);
      std::push_heap(heap.begin(), heap.end(), better);
    }
  }
  std::sort_heap(heap.begin(), heap.end(), better);
  return heap;
}

std::vector<Neighbor> nearest_neighbors(
    const EmbeddingTable& table, const Vector& query, std::size_t k,
    const std::unordered_set<std::string>& exclude) {
  if (exclude.empty()) return nearest_neighbors(table, query, k, TokenFilter{});
  return nearest_neighbors(table, query, k, [&](std::string_view token) {
    return exclude.contains(std::string(token));
  });
}

LabeledDataset load_sentence_embeddings(std::istream& in,
                                        std::string_view positive_label) {
  using nlohmann::json;
  LabeledDataset data;
  data.labels.positive = std::string(positive_label);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed record: ") + e.what(), line_no);
    }
    if (!record.is_object()) throw ParseError("record is not an object", line_no);
    const auto id = record.find("id");
    const auto label = record.find("label");
    const auto vec = record.find("vec");
    if (id == record.end() || !id->is_string()) {
      throw ParseError("missing string field \"id\"", line_no);
    }
    if (label == record.end() || !label->is_string()) {
      throw ParseError("missing string field \"label\"", line_no);
    }
    if (vec == record.end() || !vec->is_array() || vec->empty()) {
      throw ParseError("missing nonempty array field \"vec\"", line_no);
    }

    LabeledInstance inst;
    inst.id = id->get<std::string>();
    const auto label_text = label->get<std::string>();
    if (label_text == data.labels.negative) {
      inst.label = Label::kNegative;
    } else if (label_text == data.labels.positive) {
      inst.label = Label::kPositive;
    } else {
      throw ParseError("unknown label \"" + label_text + "\" (expected \"" +
                           data.labels.negative + "\" or \"" +
                           data.labels.positive + "\")",
                       line_no);
    }
    if (data.instances.empty()) data.dim = vec->size();
    if (vec->size() != data.dim) {
      throw ParseError("inconsistent dimension: expected " +
                           std::to_string(data.dim) + ", found " +
                           std::to_string(vec->size()),
                       line_no);
    }
    inst.vector.resize(static_cast<Eigen::Index>(data.dim));
    for (std::size_t j = 0; j < data.dim; ++j) {
      const auto& x = (*vec)[j];
      if (!x.is_number()) {
        throw ParseError("non-numeric entry in \"vec\"", line_no);
      }
      inst.vector[static_cast<Eigen::Index>(j)] = x.get<double>();
    }
    if (const auto text = record.find("text"); text != record.end()) {
      if (!text->is_string()) {
        throw ParseError("field \"text\" must be a string", line_no);
      }
      inst.text = text->get<std::string>();
    }
    data.instances.push_back(std::move(inst));
  }
  if (data.instances.empty()) throw ParseError("no records found");
  return data;
}

LabeledDataset load_sentence_embeddings(const std::filesystem::path& path,
                                        std::string_view positive_label) {
  auto in = open_input(path);
  try {
    return load_sentence_embeddings(in, positive_label);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_sentence_embeddings(const LabeledDataset& data, std::ostream& out) {
  // Hand-written so coordinates keep 17 significant digits.
  for (const auto& inst : data.instances) {
    out << "{\"id\": " << nlohmann::json(inst.id).dump()
        << ", \"label\": " << nlohmann::json(data.labels.name(inst.label)).dump()
        << ", \"vec\": [";
    for (Eigen::Index j = 0; j < inst.vector.size(); ++j) {
      if (j > 0) out << ", ";
      out << format_double(inst.vector[j]);
    }
    out << ']';
    if (inst.text) out << ", \"text\": " << nlohmann::json(*inst.text).dump();
    out << "}\n";
  }
}

EmbeddingTable table_from_dataset(const LabeledDataset& data) {
  std::vector<std::pair<std::string, Vector>> entries;
  entries.reserve(data.size());
  for (const auto& inst : data.instances) entries.emplace_back(inst.id, inst.vector);
  return EmbeddingTable(data.dim, std::move(entries));
}

EmbeddingTable normalized(const EmbeddingTable& table) {
  std::vector<std::pair<std::string, Vector>> entries;
  entries.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double n = table.norm(i);
    entries.emplace_back(table.token(i),
                         n > 0.0 ? Vector(table.vector(i) / n) : table.vector(i));
  }
  return EmbeddingTable(table.dim(), std::move(entries));
}

LabeledDataset normalized(const LabeledDataset& data) {
  LabeledDataset out = data;
  for (auto& inst : out.instances) {
    const double n = inst.vector.norm();
    if (n > 0.0) inst.vector /= n;
  }
  return out;
}

}  // namespace semsub
