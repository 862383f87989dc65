// Copyright 2026 The divrec Authors.
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

#include <cmath>
#include <numeric>
#include <sstream>

#include "divrec/corpus.hpp"
#include "divrec/datasets.hpp"
#include "support.hpp"

using namespace divrec;
using divrec::testing::make_corpus;

namespace {

std::vector<RawInteraction> log_of(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<RawInteraction> out;
  std::int64_t t = 0;
  for (const auto& [u, v] : pairs) out.push_back({u, v, 4.0, ++t});
  return out;
}

std::vector<RawCategory> cats_of(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<RawCategory> out;
  for (const auto& [v, c] : pairs) out.push_back({v, c});
  return out;
}

}  // namespace

TEST_CASE("ingest keeps a full 3x3 log unfiltered") {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (auto u : {"a", "b", "c"})
    for (auto v : {"x", "y", "z"}) pairs.emplace_back(u, v);
  const auto corpus = ingest(log_of(pairs), cats_of({{"x", "c1"}, {"y", "c2"}, {"z", "c1"}}), 1);
  CHECK(corpus.num_users() == 3);
  CHECK(corpus.num_items() == 3);
  CHECK(corpus.num_categories() == 2);
  CHECK(corpus.train().size() == 9);
  CHECK(corpus.test().empty());
  CHECK(corpus.user_tokens == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("ingest drops a thin user and its orphaned items under 5-core") {
  std::vector<std::pair<std::string, std::string>> pairs;
  const std::vector<std::string> items = {"i1", "i2", "i3", "i4", "i5"};
  for (auto u : {"u1", "u2", "u3", "u4", "u5"})
    for (const auto& v : items) pairs.emplace_back(u, v);
  pairs.emplace_back("thin", "i1");
  pairs.emplace_back("thin", "orphan");
  std::vector<std::pair<std::string, std::string>> cats;
  for (const auto& v : items) cats.emplace_back(v, "c");
  cats.emplace_back("orphan", "d");
  const auto corpus = ingest(log_of(pairs), cats_of(cats), 5);
  CHECK(corpus.num_users() == 5);
  CHECK(corpus.num_items() == 5);
  CHECK(corpus.train().size() == 25);
  CHECK(std::find(corpus.user_tokens.begin(), corpus.user_tokens.end(), "thin") == corpus.user_tokens.end());
  CHECK(std::find(corpus.item_tokens.begin(), corpus.item_tokens.end(), "orphan") == corpus.item_tokens.end());
  for (UserId u = 0; u < corpus.num_users(); ++u) CHECK(corpus.items_of_user(u).size() >= 5);
  for (ItemId v = 0; v < corpus.num_items(); ++v) CHECK(corpus.users_of_item(v).size() >= 5);
}

TEST_CASE("ingest collapses duplicate pairs and binarizes") {
  const auto corpus = ingest(log_of({{"a", "x"}, {"a", "x"}, {"a", "y"}}), cats_of({{"x", "c"}, {"y", "c"}}), 1);
  CHECK(corpus.train().size() == 2);
}

TEST_CASE("ingest errors") {
  CHECK_THROWS_AS(ingest({}, cats_of({{"x", "c"}}), 1), Error);
  try {
    ingest(log_of({{"a", "x"}, {"a", "nocat"}}), cats_of({{"x", "c"}}), 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.module() == "corpus");
    CHECK(std::string(e.what()).find("nocat") != std::string::npos);
  }
}

TEST_CASE("corpus indices are exact inverses over train") {
  const auto corpus = divrec::testing::random_corpus(12, 20, 4, 0.3, 5);
  Index total = 0;
  for (UserId u = 0; u < corpus.num_users(); ++u) {
    for (ItemId v : corpus.items_of_user(u)) {
      const auto users = corpus.users_of_item(v);
      CHECK(std::find(users.begin(), users.end(), u) != users.end());
      CHECK(corpus.is_train_interaction(u, v));
      ++total;
    }
  }
  CHECK(total == static_cast<Index>(corpus.train().size()));
  for (const auto& x : corpus.test()) CHECK_FALSE(corpus.is_train_interaction(x.user, x.item));
}

TEST_CASE("corpus rejects invalid input") {
  CHECK_THROWS_AS(make_corpus(2, 2, 1, {0, 0}, {{0, 2}}), Error);
  CHECK_THROWS_AS(make_corpus(2, 2, 1, {0, 0}, {{0, 1}}, {{0, 1}}), Error);
  CHECK_THROWS_AS(make_corpus(2, 2, 1, {0, 1}, {{0, 1}}), Error);
  CHECK_THROWS_AS(make_corpus(2, 2, 1, {0}, {{0, 1}}), Error);
}

TEST_CASE("recent history keeps the newest entries") {
  const auto corpus = make_corpus(1, 4, 1, {0, 0, 0, 0}, {{0, 2}, {0, 0}, {0, 3}, {0, 1}});
  const auto all = corpus.items_of_user(0);
  CHECK(std::vector<ItemId>(all.begin(), all.end()) == std::vector<ItemId>{2, 0, 3, 1});
  const auto recent = corpus.recent_items_of_user(0, 2);
  CHECK(std::vector<ItemId>(recent.begin(), recent.end()) == std::vector<ItemId>{3, 1});
}

TEST_CASE("split sizes") {
  divrec::testing::Pairs pairs;
  for (int v = 0; v < 10; ++v) pairs.push_back({0, v});
  pairs.push_back({1, 0});
  pairs.push_back({2, 0});
  pairs.push_back({2, 1});
  const auto corpus = make_corpus(3, 10, 1, std::vector<CategoryId>(10, 0), pairs);
  const auto s = split(corpus, 0.8, 42);
  CHECK(s.items_of_user(0).size() == 8);
  CHECK(s.test_items_of_user(0).size() == 2);
  CHECK(s.items_of_user(1).size() == 1);
  CHECK(s.test_items_of_user(1).empty());
  CHECK(s.items_of_user(2).size() == 1);
  CHECK(s.test_items_of_user(2).size() == 1);

  const auto again = split(corpus, 0.8, 42);
  CHECK(std::equal(s.train().begin(), s.train().end(), again.train().begin(), again.train().end()));
  CHECK_THROWS_AS(split(corpus, 1.0, 1), Error);
}

TEST_CASE("user diversity and profile") {
  // user 0: 4 items, 2 categories; user 1: 2 items, 2 categories
  const auto corpus = make_corpus(2, 4, 2, {0, 0, 1, 1}, {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1}, {1, 2}});
  CHECK(user_diversity(corpus, 0) == doctest::Approx(0.5));
  CHECK(user_diversity(corpus, 1) == doctest::Approx(1.0));
  const auto profile = build_diversity_profile(corpus, 0.2);
  CHECK(profile.diversity_of_user == std::vector<double>{0.5, 1.0});
  CHECK(profile.skewed_domain == (profile.skewness >= 0.2));
}

TEST_CASE("skewness oracle") {
  const std::vector<double> x = {0.1, 0.2, 0.2, 0.3, 0.9};
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double m2 = 0, m3 = 0;
  for (double v : x) {
    m2 += (v - mean) * (v - mean) / x.size();
    m3 += (v - mean) * (v - mean) * (v - mean) / x.size();
  }
  CHECK(skewness(x) == doctest::Approx(m3 / std::pow(m2, 1.5)).epsilon(1e-12));
  const std::vector<double> symmetric = {1, 2, 3};
  CHECK(std::abs(skewness(symmetric)) < 1e-12);
  const std::vector<double> flat = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(skewness(flat), Error);
  const std::vector<double> one = {0.5};
  CHECK_THROWS_AS(skewness(one), Error);
}

TEST_CASE("snapshot round trip") {
  auto corpus = split(divrec::testing::random_corpus(8, 12, 3, 0.4, 9), 0.7, 3);
  std::stringstream ss;
  write_snapshot(ss, corpus);
  const auto back = read_snapshot(ss);
  CHECK(back.num_users() == corpus.num_users());
  CHECK(back.num_items() == corpus.num_items());
  CHECK(back.num_categories() == corpus.num_categories());
  CHECK(std::equal(back.train().begin(), back.train().end(), corpus.train().begin(), corpus.train().end()));
  CHECK(std::equal(back.test().begin(), back.test().end(), corpus.test().begin(), corpus.test().end()));
  std::stringstream bad("nonsense\n");
  CHECK_THROWS_AS(read_snapshot(bad), Error);
}

TEST_CASE("subsample keeps whole user histories") {
  const auto corpus = divrec::testing::random_corpus(30, 40, 5, 0.2, 2);
  const auto sub = subsample_users(corpus, 10, 1);
  CHECK(sub.num_users() == 10);
  CHECK(sub.num_categories() == corpus.num_categories());
  Index n = 0;
  for (UserId u = 0; u < sub.num_users(); ++u) n += static_cast<Index>(sub.items_of_user(u).size());
  CHECK(n == static_cast<Index>(sub.train().size()));
}

TEST_CASE("movielens parsers") {
  std::istringstream ratings("1::10::5::978300760\n1::20::3::978302109\n2::10::4::978301968\n");
  std::istringstream movies("10::Toy Story (1995)::Animation|Children's|Comedy\n20::Heat (1995)::Action|Crime\n");
  RawDataset raw;
  parse_movielens_ratings(ratings, raw);
  parse_movielens_movies(movies, raw);
  REQUIRE(raw.interactions.size() == 3);
  CHECK(raw.interactions[1].timestamp == 978302109);
  REQUIRE(raw.categories.size() == 2);
  CHECK(raw.categories[0].category == "Animation");
  const auto corpus = ingest(raw.interactions, raw.categories, 1);
  CHECK(corpus.num_categories() == 2);
}

TEST_CASE("amazon parsers accept json and python literals") {
  std::istringstream reviews(
      "{\"reviewerID\": \"A1\", \"asin\": \"B1\", \"overall\": 5.0, \"unixReviewTime\": 100}\n"
      "{\"reviewerID\": \"A2\", \"asin\": \"B1\", \"overall\": 3.0, \"unixReviewTime\": 200}\n");
  std::istringstream meta(
      "{'asin': 'B1', 'categories': [['CDs & Vinyl', 'Rock', 'Classic Rock']], 'title': \"It's\"}\n"
      "{\"asin\": \"B2\", \"categories\": [[\"CDs & Vinyl\", \"Jazz\"]]}\n");
  RawDataset raw;
  parse_amazon_reviews(reviews, raw);
  parse_amazon_metadata(meta, raw, 1);
  REQUIRE(raw.interactions.size() == 2);
  CHECK(raw.interactions[0].user == "A1");
  REQUIRE(raw.categories.size() == 2);
  CHECK(raw.categories[0].category == "Rock");
  CHECK(raw.categories[1].category == "Jazz");
}

TEST_CASE("canonical tsv round trip") {
  const std::vector<RawInteraction> rows = {{"u1", "i1", 1.0, 5}, {"u2", "i1", 1.0, 6}};
  std::stringstream ss;
  write_canonical_interactions(ss, rows);
  RawDataset raw;
  parse_canonical_interactions(ss, raw);
  REQUIRE(raw.interactions.size() == 2);
  CHECK(raw.interactions[1].user == "u2");
  CHECK(raw.interactions[1].timestamp == 6);
  CHECK_THROWS_AS(parse_dataset_format("parquet"), Error);
}
