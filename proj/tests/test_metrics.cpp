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

#include <sstream>

#include "metric_oracle.hpp"
#include "reference_table.hpp"

using namespace divrec;

namespace {

std::vector<ItemId> ids(std::initializer_list<ItemId> x) { return x; }

}  // namespace

TEST_CASE("recall and ndcg examples") {
  const auto ranked = ids({4, 1, 7, 2, 9});
  const auto truth = ids({1, 9, 3});
  CHECK(recall_at_k(ranked, truth, 5) == doctest::Approx(2.0 / 3.0));
  CHECK(recall_at_k(ranked, truth, 1) == 0.0);
  const double dcg = 1.0 / std::log2(3.0) + 1.0 / std::log2(6.0);
  const double idcg = 1.0 + 1.0 / std::log2(3.0) + 0.5;
  CHECK(ndcg_at_k(ranked, truth, 5) == doctest::Approx(dcg / idcg));
  CHECK(ndcg_at_k(ids({1}), ids({1}), 5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(recall_at_k(ranked, {}, 5), Error);
}

TEST_CASE("ild, coverage and predicted diversity examples") {
  const std::vector<CategoryId> cats = {0, 0, 1, 2, 1};
  CHECK(ild_at_k(ids({0, 1, 2, 3}), cats, 4) == doctest::Approx(5.0 / 6.0));
  CHECK(ild_at_k(ids({0, 1}), cats, 2) == 0.0);
  CHECK_THROWS_AS(ild_at_k(ids({0, 1}), cats, 1), Error);
  const std::vector<CategoryId> mine = {0, 1, 2, 3};
  CHECK(cc_at_k(ids({0, 1, 2}), cats, mine, 3) == doctest::Approx(2.0 / 3.0));
  const std::vector<CategoryId> one = {1};
  CHECK(cc_at_k(ids({2, 4}), cats, one, 2) == doctest::Approx(1.0));
  CHECK(predicted_diversity(ids({0, 1, 2, 3}), cats, 5) == doctest::Approx(3.0 / 5.0));
  CHECK(f_score(0.0, 0.0) == 0.0);
  CHECK(f_score(0.5, 0.5) == doctest::Approx(0.5));
  const std::vector<double> a = {0.2, 0.4}, b = {0.4, 0.4};
  CHECK(diversity_mse(a, b) == doctest::Approx(0.02));
}

TEST_CASE("ranking skips train items and breaks ties by id") {
  const auto corpus = divrec::testing::make_corpus(1, 5, 1, {0, 0, 0, 0, 0}, {{0, 1}});
  const std::vector<double> scores = {0.5, 0.9, 0.5, 0.7, 0.1};
  const auto list = rank_top_k(corpus, 0, scores, 3);
  CHECK(list.items == ids({3, 0, 2}));
  const std::vector<double> bad = {0.5, 0.9, std::nan(""), 0.7, 0.1};
  CHECK_THROWS_AS(rank_top_k(corpus, 0, bad, 3), Error);
}

TEST_CASE("evaluate equals a brute-force evaluator") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto f = divrec::testing::metric_fixture(seed);
    EvaluationOptions options;
    options.cutoffs = {2, 5, 10};
    const auto score = [&](UserId u, std::span<double> out) { std::copy(f.scores[u].begin(), f.scores[u].end(), out.begin()); };
    const auto report = evaluate(score, f.corpus, f.profile, options);
    for (Index k : options.cutoffs) {
      const auto oracle = divrec::testing::brute_force_metrics(f.corpus, f.profile, f.scores, k);
      const auto& got = report.at(k);
      CHECK(got.users == oracle.users);
      CHECK(std::abs(got.recall - oracle.recall) < 1e-12);
      CHECK(std::abs(got.ndcg - oracle.ndcg) < 1e-12);
      CHECK(std::abs(got.ild - oracle.ild) < 1e-12);
      CHECK(std::abs(got.cc - oracle.cc) < 1e-12);
      CHECK(std::abs(got.predicted_diversity - oracle.predicted_diversity) < 1e-12);
      CHECK(std::abs(got.diversity_mse - oracle.diversity_mse) < 1e-12);
    }
  }
}

TEST_CASE("metric invariants") {
  const auto f = divrec::testing::metric_fixture(9);
  const auto score = [&](UserId u, std::span<double> out) { std::copy(f.scores[u].begin(), f.scores[u].end(), out.begin()); };
  EvaluationOptions options;
  options.cutoffs = {5, 10, 20};
  const auto report = evaluate(score, f.corpus, f.profile, options);
  for (const auto& m : report.per_user) {
    for (double x : {m.recall, m.ndcg, m.ild, m.cc, m.predicted_diversity}) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }
  }
  CHECK(report.at(5).recall <= report.at(10).recall);
  CHECK(report.at(10).recall <= report.at(20).recall);
  CHECK(report.per_user.size() == 3 * static_cast<std::size_t>(report.at(5).users));
}

TEST_CASE("evaluation is independent of the thread count") {
  const auto f = divrec::testing::metric_fixture(4);
  const auto score = [&](UserId u, std::span<double> out) { std::copy(f.scores[u].begin(), f.scores[u].end(), out.begin()); };
  EvaluationOptions one, four;
  four.threads = 4;
  std::ostringstream a, b;
  write_metric_csv(a, evaluate(score, f.corpus, f.profile, one));
  write_metric_csv(b, evaluate(score, f.corpus, f.profile, four));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("k,users,recall,ndcg,ild,cc,f1,predicted_diversity,diversity_mse\n", 0) == 0);
}

TEST_CASE("published F1 values are harmonic means of recall and ILD") {
  int checked = 0;
  for (const auto& row : divrec::testing::kReferenceRows) {
    INFO(row.dataset << " " << row.model);
    CHECK(std::abs(f_score(row.recall5, row.ild5) - row.f1_5) <= 5e-5);
    CHECK(std::abs(f_score(row.recall10, row.ild10) - row.f1_10) <= 5e-5);
    checked += 2;
  }
  CHECK(checked == 60);
}
