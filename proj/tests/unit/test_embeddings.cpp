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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "convert.hpp"
#include "semsub/embeddings.hpp"
#include "semsub/rng.hpp"

using namespace semsub;
using testing::make_vector;

namespace {

EmbeddingTable parse_words(const std::string& text) {
  std::istringstream in(text);
  return load_word_vectors(in);
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse_words(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

EmbeddingTable abc_table() {
  return EmbeddingTable(2, {{"a", make_vector({1, 0})},
                            {"b", make_vector({0, 1})},
                            {"c", make_vector({0.9, 0.1})}});
}

}  // namespace

TEST_SUITE("word vectors") {
  TEST_CASE("minimal file") {
    const auto table = parse_words("2 3\ngood 1 0 0\nbad 0 1 0\n");
    CHECK(table.dim() == 3);
    CHECK(table.size() == 2);
    CHECK(table.token(0) == "good");
    CHECK(lookup(table, "bad") == make_vector({0, 1, 0}));
  }

  TEST_CASE("wrong arity is reported at its line") {
    CHECK(parse_error_line("1 2\na 1 0 0\n") == 2);
    CHECK(parse_error_line("2 2\na 1 0\nb 1\n") == 3);
  }

  TEST_CASE("duplicates keep the first vector") {
    const auto table = parse_words("3 2\na 1 0\na 2 0\nb 0 1\n");
    CHECK(table.size() == 2);
    CHECK(table.duplicate_count() == 1);
    CHECK(lookup(table, "a") == make_vector({1, 0}));
  }

  TEST_CASE("malformed header and coordinates") {
    CHECK(parse_error_line("two 3\n") == 1);
    CHECK(parse_error_line("1\n") == 1);
    CHECK(parse_error_line("1 0\n") == 1);
    CHECK(parse_error_line("1 2\na 1 x\n") == 2);
    CHECK(parse_error_line("1 2\na 1 nan\n") == 2);
    CHECK(parse_error_line("2 2\na 1 0\n") != 0);
    CHECK_THROWS_AS(parse_words(""), ParseError);
  }

  TEST_CASE("tabs and runs of spaces separate fields") {
    const auto table = parse_words("1 3\nx\t1   2\t \t3\n");
    CHECK(lookup(table, "x") == make_vector({1, 2, 3}));
  }

  TEST_CASE("missing file is an io error") {
    CHECK_THROWS_AS(load_word_vectors(std::filesystem::path("/nonexistent/words.txt")),
                    IoError);
  }

  TEST_CASE("save then load is bit exact") {
    Rng rng(11);
    std::vector<std::pair<std::string, Vector>> entries;
    for (int i = 0; i < 50; ++i) {
      entries.emplace_back("tok" + std::to_string(i), testing::gaussian_vector(rng, 7, 1e3));
    }
    const EmbeddingTable table(7, entries);
    std::stringstream buf;
    save_word_vectors(table, buf);
    const auto back = load_word_vectors(buf);
    REQUIRE(back.size() == table.size());
    for (const auto& [token, v] : entries) CHECK(lookup(back, token) == v);
  }
}

TEST_SUITE("lookup") {
  TEST_CASE("present and absent tokens") {
    const EmbeddingTable table(2, {{"a", make_vector({1, 0})}});
    CHECK(lookup(table, "a") == make_vector({1, 0}));
    try {
      lookup(table, "b");
      FAIL("expected UnknownToken");
    } catch (const UnknownToken& e) {
      CHECK(e.tokens() == std::vector<std::string>{"b"});
      CHECK(std::string(e.what()).find("b") != std::string::npos);
    }
  }

  TEST_CASE("table rejects wrong-length vectors") {
    CHECK_THROWS_AS(EmbeddingTable(3, {{"a", make_vector({1, 0})}}), DimensionMismatch);
  }
}

TEST_SUITE("mean_pool") {
  TEST_CASE("examples") {
    const std::vector<Vector> two{make_vector({1, 0}), make_vector({0, 1})};
    CHECK(mean_pool(two) == make_vector({0.5, 0.5}));
    const std::vector<Vector> one{make_vector({2, 2})};
    CHECK(mean_pool(one) == make_vector({2, 2}));
    const std::vector<Vector> three{make_vector({1, 1}), make_vector({1, 1}),
                                    make_vector({4, 1})};
    CHECK(mean_pool(three) == make_vector({2, 1}));
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(mean_pool({}), PreconditionError);
    const std::vector<Vector> ragged{make_vector({1, 1}), make_vector({1})};
    CHECK_THROWS_AS(mean_pool(ragged), DimensionMismatch);
  }

  TEST_CASE("permutation invariance") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Vector> xs;
      const std::size_t n = 1 + rng.below(12);
      for (std::size_t i = 0; i < n; ++i) xs.push_back(testing::gaussian_vector(rng, 5));
      const Vector before = mean_pool(xs);
      rng.shuffle(std::span<Vector>(xs));
      CHECK((mean_pool(xs) - before).lpNorm<Eigen::Infinity>() < 1e-12);
    }
  }
}

TEST_SUITE("nearest_neighbors") {
  TEST_CASE("examples") {
    const auto table = abc_table();
    const auto top = nearest_neighbors(table, make_vector({1, 0}), 1,
                                       std::unordered_set<std::string>{"a"});
    REQUIRE(top.size() == 1);
    CHECK(top[0].token == "c");
    CHECK(top[0].cosine == doctest::Approx(0.9 / std::sqrt(0.82)).epsilon(1e-12));

    const auto exact = nearest_neighbors(table, make_vector({0, 1}), 1);
    REQUIRE(exact.size() == 1);
    CHECK(exact[0].token == "b");
    CHECK(exact[0].cosine == doctest::Approx(1.0));

    CHECK(nearest_neighbors(table, make_vector({1, 0}), 3,
                            std::unordered_set<std::string>{"a", "b", "c"})
              .empty());
  }

  TEST_CASE("ties go to the lexicographically smaller token") {
    const EmbeddingTable table(2, {{"zeta", make_vector({0, 2})},
                                   {"alpha", make_vector({0, 1})},
                                   {"mid", make_vector({0, 3})}});
    const auto top = nearest_neighbors(table, make_vector({0, 1}), 3);
    REQUIRE(top.size() == 3);
    CHECK(top[0].token == "alpha");
    CHECK(top[1].token == "mid");
    CHECK(top[2].token == "zeta");
  }

  TEST_CASE("errors") {
    const auto table = abc_table();
    CHECK_THROWS_AS(nearest_neighbors(table, make_vector({0, 0}), 1), PreconditionError);
    CHECK_THROWS_AS(nearest_neighbors(table, make_vector({1, 0}), 0), PreconditionError);
    CHECK_THROWS_AS(nearest_neighbors(table, make_vector({1, 0, 0}), 1), DimensionMismatch);
  }

  TEST_CASE("stored unit vector finds itself first") {
    Rng rng(5);
    std::vector<std::pair<std::string, Vector>> entries;
    for (int i = 0; i < 40; ++i) {
      entries.emplace_back("w" + std::to_string(i), testing::gaussian_vector(rng, 6).normalized());
    }
    const EmbeddingTable table(6, entries);
    for (std::size_t i = 0; i < table.size(); ++i) {
      const auto top = nearest_neighbors(table, table.vector(i), 1);
      REQUIRE(top.size() == 1);
      CHECK(top[0].token == table.token(i));
      CHECK(std::abs(top[0].cosine - 1.0) <= 1e-12);
    }
  }

  TEST_CASE("results match a full sort") {
    Rng rng(8);
    std::vector<std::pair<std::string, Vector>> entries;
    for (int i = 0; i < 200; ++i) {
      entries.emplace_back("w" + std::to_string(i), testing::gaussian_vector(rng, 4));
    }
    const EmbeddingTable table(4, entries);
    const Vector q = testing::gaussian_vector(rng, 4);
    std::vector<std::pair<double, std::string>> all;
    for (const auto& [t, v] : entries) {
      all.emplace_back(-oracle::dot(testing::to_vec(v), testing::to_vec(q)) /
                           (v.norm() * q.norm()),
                       t);
    }
    std::sort(all.begin(), all.end());
    const auto top = nearest_neighbors(table, q, 10);
    REQUIRE(top.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
      CHECK(top[i].token == all[i].second);
      CHECK(top[i].cosine == doctest::Approx(-all[i].first).epsilon(1e-12));
    }
  }
}

TEST_SUITE("cosine") {
  TEST_CASE("symmetric and bounded") {
    Rng rng(9);
    for (int trial = 0; trial < 1000; ++trial) {
      const Vector a = testing::gaussian_vector(rng, 1 + trial % 5);
      const Vector b = rng.uniform() < 0.1 ? Vector(a * 3.0) : testing::gaussian_vector(rng, a.size());
      const double ab = cosine_similarity(a, b);
      CHECK(ab == cosine_similarity(b, a));
      CHECK(ab <= 1.0 + 1e-12);
      CHECK(ab >= -1.0 - 1e-12);
    }
  }

  TEST_CASE("zero vector scores zero") {
    CHECK(cosine_similarity(make_vector({0, 0}), make_vector({1, 0})) == 0.0);
  }
}

TEST_SUITE("sentence embeddings") {
  LabeledDataset parse(const std::string& text) {
    std::istringstream in(text);
    return load_sentence_embeddings(in);
  }

  TEST_CASE("minimal file") {
    const auto data = parse(
        R"({"id": "s1", "label": "neutral", "vec": [1, 2, 3, 4]})" "\n"
        R"({"id": "s2", "label": "profane", "vec": [0.5, 0, 0, -1], "text": "hi"})" "\n");
    CHECK(data.dim == 4);
    REQUIRE(data.size() == 2);
    CHECK(data.instances[0].label == Label::kNegative);
    CHECK(data.instances[1].label == Label::kPositive);
    CHECK(data.instances[1].text == "hi");
    CHECK(data.instances[1].vector == make_vector({0.5, 0, 0, -1}));
  }

  TEST_CASE("inconsistent dim") {
    CHECK_THROWS_AS(parse(R"({"id": "s1", "label": "neutral", "vec": [1, 2, 3, 4]})" "\n"
                          R"({"id": "s2", "label": "neutral", "vec": [1, 2, 3]})" "\n"),
                    ParseError);
  }

  TEST_CASE("unknown label") {
    CHECK_THROWS_AS(parse(R"({"id": "s1", "label": "maybe", "vec": [1]})" "\n"), ParseError);
  }

  TEST_CASE("malformed record names its line") {
    try {
      parse(R"({"id": "s1", "label": "neutral", "vec": [1]})" "\n" "{not json\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse(R"({"label": "neutral", "vec": [1]})" "\n"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
  }

  TEST_CASE("custom positive label") {
    std::istringstream in(R"({"id": "h", "label": "hate", "vec": [1]})" "\n");
    const auto data = load_sentence_embeddings(in, "hate");
    CHECK(data.instances[0].label == Label::kPositive);
  }

  TEST_CASE("save then load is bit exact") {
    Rng rng(21);
    LabeledDataset data;
    data.dim = 5;
    for (int i = 0; i < 30; ++i) {
      data.instances.push_back({"id" + std::to_string(i), testing::gaussian_vector(rng, 5, 1e-3),
                                i % 3 ? Label::kNegative : Label::kPositive,
                                i % 2 ? std::optional<std::string>("t \"q\"") : std::nullopt});
    }
    std::stringstream buf;
    save_sentence_embeddings(data, buf);
    const auto back = load_sentence_embeddings(buf);
    REQUIRE(back.size() == data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      CHECK(back.instances[i].id == data.instances[i].id);
      CHECK(back.instances[i].vector == data.instances[i].vector);
      CHECK(back.instances[i].label == data.instances[i].label);
      CHECK(back.instances[i].text == data.instances[i].text);
    }
  }
}
