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
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "semsub/error.hpp"
#include "semsub/label.hpp"

namespace semsub {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class UnknownToken : public PreconditionError {
 public:
  explicit UnknownToken(std::vector<std::string> tokens);

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

 private:
  std::vector<std::string> tokens_;
};

// Vocabulary of tokens mapped to fixed-dimension vectors, in insertion order.
// Immutable once built; safe to share between threads.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  // Duplicate tokens keep their first vector and are counted in
  // duplicate_count(). Throws DimensionMismatch on a wrong-length vector.
  EmbeddingTable(std::size_t dim,
                 std::vector<std::pair<std::string, Vector>> entries);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  std::size_t duplicate_count() const noexcept { return duplicates_; }

  std::optional<std::size_t> find(std::string_view token) const;
  bool contains(std::string_view token) const { return find(token).has_value(); }

  const std::string& token(std::size_t i) const { return tokens_[i]; }
  const Vector& vector(std::size_t i) const { return vectors_[i]; }
  double norm(std::size_t i) const { return norms_[i]; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::size_t dim_ = 0;
  std::size_t duplicates_ = 0;
  std::vector<std::string> tokens_;
  std::vector<Vector> vectors_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
};

struct LabeledInstance {
  std::string id;
  Vector vector;
  Label label = Label::kNegative;
  std::optional<std::string> text;
};

// Target-task instances with two classes: "neutral" and a positive class
// such as "profane" or "hate".
struct LabeledDataset {
  std::size_t dim = 0;
  LabelNames labels;
  std::vector<LabeledInstance> instances;

  std::size_t size() const noexcept { return instances.size(); }
};

struct Neighbor {
  std::string token;
  double cosine = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

using TokenFilter = std::function<bool(std::string_view)>;

// Parses the word-vector text format: a "V D" header then V lines of
// "token x1 ... xD". Errors carry the offending line number.
EmbeddingTable load_word_vectors(std::istream& in);
EmbeddingTable load_word_vectors(const std::filesystem::path& path);

// Writes the table back in the same text format with 17 significant digits.
void save_word_vectors(const EmbeddingTable& table, std::ostream& out);

const Vector& lookup(const EmbeddingTable& table, std::string_view token);

// Coordinate-wise mean of a nonempty list of equal-length vectors.
Vector mean_pool(std::span<const Vector> vectors);

// Cosine similarity; 0 if either vector has zero norm.
double cosine_similarity(const Vector& a, const Vector& b);

// Exact top-k by cosine similarity, descending, ties by ascending token.
// Stored zero vectors score 0.
std::vector<Neighbor> nearest_neighbors(const EmbeddingTable& table,
                                        const Vector& query, std::size_t k,
                                        const TokenFilter& exclude = {});
std::vector<Neighbor> nearest_neighbors(
    const EmbeddingTable& table, const Vector& query, std::size_t k,
    const std::unordered_set<std::string>& exclude);

// One JSON object per line: {"id": str, "label": str, "vec": [..], "text"?}.
// Labels must be "neutral" or positive_label.
LabeledDataset load_sentence_embeddings(std::istream& in,
                                        std::string_view positive_label =
                                            "profane");
LabeledDataset load_sentence_embeddings(const std::filesystem::path& path,
                                        std::string_view positive_label =
                                            "profane");
void save_sentence_embeddings(const LabeledDataset& data, std::ostream& out);

// id -> vector view of a dataset, for resolving sentence-level pair files.
EmbeddingTable table_from_dataset(const LabeledDataset& data);

// Copies with every nonzero vector scaled to unit length.
EmbeddingTable normalized(const EmbeddingTable& table);
LabeledDataset normalized(const LabeledDataset& data);

}  // namespace semsub
