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

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "divrec/baselines.hpp"
#include "divrec/cli.hpp"
#include "divrec/datasets.hpp"
#include "divrec/synthetic.hpp"
#include "divrec/training.hpp"
#include "gradient_harness.hpp"
#include "metric_oracle.hpp"
#include "reference_table.hpp"

using namespace divrec;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

fs::path data_root() {
  if (const char* env = std::getenv("DIVREC_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return DIVREC_DEFAULT_DATA_DIR;
}

DatasetSource movielens_source() {
  return {DatasetFormat::movielens_1m, data_root() / "ml-1m" / "ratings.dat", data_root() / "ml-1m" / "movies.dat", -1};
}

DatasetSource amazon_source() {
  return {DatasetFormat::amazon_5core_json, data_root() / "amazon-music" / "reviews.json",
          data_root() / "amazon-music" / "meta.json", -1};
}

bool available(const DatasetSource& s) { return fs::exists(s.path) && fs::exists(s.categories); }

std::string missing(const DatasetSource& s) {
  return "dataset not found (" + s.path.string() + ", " + s.categories.string() + "); set DIVREC_DATA_DIR";
}

/// Stand-in corpus used when no real dataset is available.
SyntheticOptions desk_synthetic() {
  SyntheticOptions o;
  o.users = 1000;
  o.items = 1000;
  o.categories = 18;
  o.min_items_per_user = 10;
  o.mean_extra_items = 25;
  o.seed = 3;
  return o;
}

fs::path write_synthetic(const SyntheticOptions& options, const fs::path& dir) {
  fs::create_directories(dir);
  const auto raw = make_synthetic(options);
  std::ofstream interactions(dir / "interactions.tsv");
  std::ofstream categories(dir / "categories.tsv");
  write_canonical_interactions(interactions, raw.interactions);
  write_canonical_categories(categories, raw.categories);
  return dir;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("divrec_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Outcome f1_identity() {
  int rows = 0;
  double worst = 0.0;
  for (const auto& row : divrec::testing::kReferenceRows) {
    worst = std::max(worst, std::abs(f_score(row.recall5, row.ild5) - row.f1_5));
    worst = std::max(worst, std::abs(f_score(row.recall10, row.ild10) - row.f1_10));
    rows += 2;
  }
  return {worst <= 5e-5, std::to_string(rows) + " values, max |2RI/(R+I) - F1| = " + fmt(worst)};
}

Outcome skewness_reproduction() {
  const auto ml = movielens_source();
  const auto amazon = amazon_source();
  if (!available(ml)) return {false, missing(ml)};
  if (!available(amazon)) return {false, missing(amazon)};
  auto measure = [](const DatasetSource& s, Index core) {
    const auto raw = load_dataset(s);
    return build_diversity_profile(ingest(raw.interactions, raw.categories, core)).skewness;
  };
  const double s_ml = measure(ml, 1);
  const double s_amazon = measure(amazon, 5);
  const bool pass = std::abs(s_ml - 0.92) <= 0.05 && std::abs(s_amazon - 0.19) <= 0.05;
  return {pass, "MovieLens-1M " + fmt(s_ml) + " (target 0.92), Amazon Music " + fmt(s_amazon) + " (target 0.19)"};
}

Outcome gradient_correctness() {
  double worst = 0.0;
  int passed = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto report = divrec::testing::probe(divrec::testing::small_instance(seed), 1e-5, 1e-4);
    worst = std::max(worst, report.max_relative_error);
    passed += report.passed();
  }
  return {passed == 10, std::to_string(passed) + "/10 instances, max relative error " + fmt(worst)};
}

Outcome sampler_law() {
  // user 0 has categories 0 (x3), 1 (x1) and 2 (x2)
  divrec::testing::Pairs train = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 6}, {1, 7}};
  const auto corpus = divrec::testing::make_corpus(2, 8, 3, {0, 0, 0, 1, 2, 2, 1, 2}, train);
  const auto profile = build_diversity_profile(corpus);
  const ReversedSampler sampler(corpus, profile);
  const auto law = reversed_category_probs(corpus, 0);
  const double d = profile.diversity_of_user[0];
  Rng rng(2026);
  const int draws = 100000;
  std::map<CategoryId, double> counts;
  for (int i = 0; i < draws; ++i) counts[corpus.category_of_item(sampler.draw_item(0, rng))] += 1.0 / draws;
  double tv_reversed = 0.0;
  for (std::size_t i = 0; i < law.categories.size(); ++i) {
    const double expected = d * law.reversed[i] + (1 - d) * law.original[i];
    tv_reversed += std::abs(counts[law.categories[i]] - expected) / 2;
  }

  divrec::testing::Pairs pairs;
  for (int u = 0; u < 10; ++u)
    for (int v = 0; v < 10; ++v) pairs.push_back({u, v});
  const auto full = divrec::testing::make_corpus(10, 11, 1, std::vector<CategoryId>(11, 0), pairs);
  std::map<std::pair<UserId, ItemId>, double> hits;
  Index total = 0;
  while (total < draws) {
    const auto batch = uniform_sample(full, 1000, 1, rng);
    for (Index t = 0; t < batch.size(); ++t) hits[{batch.users[t], batch.positives[t]}] += 1.0;
    total += batch.size();
  }
  double tv_uniform = 0.0;
  for (int u = 0; u < 10; ++u)
    for (int v = 0; v < 10; ++v) tv_uniform += std::abs(hits[{u, v}] / total - 0.01) / 2;
  const bool pass = tv_reversed < 0.01 && tv_uniform < 0.02;
  return {pass, "reversed TV " + fmt(tv_reversed) + " (< 0.01), uniform TV " + fmt(tv_uniform) + " (< 0.02)"};
}

Outcome metric_oracle() {
  const auto f = divrec::testing::metric_fixture(2026);
  const auto score = [&](UserId u, std::span<double> out) { std::copy(f.scores[u].begin(), f.scores[u].end(), out.begin()); };
  EvaluationOptions options;
  options.cutoffs = {5, 10};
  const auto report = evaluate(score, f.corpus, f.profile, options);
  double worst = 0.0;
  for (Index k : options.cutoffs) {
    const auto o = divrec::testing::brute_force_metrics(f.corpus, f.profile, f.scores, k);
    const auto& m = report.at(k);
    for (double diff : {m.recall - o.recall, m.ndcg - o.ndcg, m.ild - o.ild, m.cc - o.cc,
                        m.predicted_diversity - o.predicted_diversity})
      worst = std::max(worst, std::abs(diff));
  }
  return {worst <= 1e-12, "max deviation from brute force " + fmt(worst) + " over " +
                              std::to_string(report.at(5).users) + " users"};
}

struct RunSummary {
  double recall10 = 0.0;
  double f1_10 = 0.0;
};

RunSummary train_and_score(const PreparedCorpus& data, TrainConfig config) {
  const auto model = train(data.split, data.profile, config);
  const TwoBranchScorer<double> scorer(model.conventional, model.adaptive, model.profiles, data.split, data.profile,
                                       config.scoring_policy());
  const auto report = evaluate([&](UserId u, std::span<double> out) { scorer.score_all(u, out); }, data.split,
                               data.profile);
  return {report.at(10).recall, report.at(10).f1};
}

Outcome ablation_direction() {
  const auto ml = movielens_source();
  if (!available(ml)) return {false, missing(ml)};
  ExperimentConfig c;
  c.dataset = ml;
  c.subsample_users = 1000;
  const auto data = prepare_corpus(c);
  RunSummary full, conv, adp;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    TrainConfig base = c.train;
    base.seed = seed;
    auto conv_only = base;
    conv_only.ablation.disable_adaptive_branch = true;
    auto adp_only = base;
    adp_only.ablation.disable_conventional_branch = true;
    const auto a = train_and_score(data, base);
    const auto b = train_and_score(data, conv_only);
    const auto d = train_and_score(data, adp_only);
    full.f1_10 += a.f1_10 / 3;
    conv.f1_10 += b.f1_10 / 3;
    conv.recall10 += b.recall10 / 3;
    adp.recall10 += d.recall10 / 3;
  }
  const bool pass = full.f1_10 > conv.f1_10 && adp.recall10 < conv.recall10;
  return {pass, "F1@10 full " + fmt(full.f1_10) + " vs conv-only " + fmt(conv.f1_10) + "; Recall@10 adp-only " +
                    fmt(adp.recall10) + " vs conv-only " + fmt(conv.recall10)};
}

Outcome loss_trend() {
  ExperimentConfig c;
  std::string source;
  const auto ml = movielens_source();
  if (available(ml)) {
    c.dataset = ml;
    c.subsample_users = 1000;
    source = "MovieLens-1M, 1000 users";
  } else {
    const auto dir = write_synthetic(desk_synthetic(), scratch("loss"));
    c.dataset.path = dir / "interactions.tsv";
    c.dataset.categories = dir / "categories.tsv";
    source = "synthetic stand-in, 1000 users (MovieLens-1M not found)";
  }
  const auto data = prepare_corpus(c);
  const auto model = train(data.split, data.profile, c.train);
  const auto& first = model.history.front();
  const auto& last = model.history.back();
  bool pass = true;
  std::string detail = source + ":";
  auto term = [&](const char* name, const std::optional<double>& a, const std::optional<double>& b) {
    const bool ok = a && b && *b < *a;
    pass = pass && ok;
    detail += std::string(" ") + name + " " + fmt(a.value_or(NAN)) + " -> " + fmt(b.value_or(NAN)) + (ok ? "" : " (not lower)");
  };
  term("L_B1", first.conventional, last.conventional);
  term("L_B2", first.adaptive, last.adaptive);
  term("L_3", first.consistency, last.consistency);
  return {pass, detail};
}

Outcome mmr_endpoints() {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> unit(0, 1);
  std::uniform_int_distribution<int> cat(0, 7);
  int exact = 0, covering = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s(50);
    std::vector<CategoryId> c(50);
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = unit(rng);
      c[i] = cat(rng);
    }
    const auto corpus = divrec::testing::make_corpus(1, 50, 8, c, {});
    const Index k = 10;
    exact += mmr_rerank(s, c, 1.0, k).items == rank_top_k(corpus, 0, s, k).items;
    const auto diverse = mmr_rerank(s, c, 0.0, k);
    const std::set<CategoryId> present(c.begin(), c.end());
    const auto head = std::min<std::size_t>(static_cast<std::size_t>(k), present.size());
    std::set<CategoryId> seen;
    for (std::size_t i = 0; i < head; ++i) seen.insert(c[diverse.items[i]]);
    covering += seen.size() == head;
  }
  return {exact == 100 && covering == 100, "lambda=1 equals base top-k on " + std::to_string(exact) +
                                               "/100; lambda=0 distinct head on " + std::to_string(covering) + "/100"};
}

Outcome determinism() {
  const auto root = scratch("determinism");
  auto options = desk_synthetic();
  options.users = 300;
  options.items = 400;
  const auto dir = write_synthetic(options, root / "data");
  auto run = [&](const std::string& name) {
    ExperimentConfig c;
    c.dataset.path = dir / "interactions.tsv";
    c.dataset.categories = dir / "categories.tsv";
    c.output_dir = root / name;
    c.threads = 1;
    c.train.max_epochs = 5;
    c.checkpoint_every_epoch = false;
    run_experiment(c);
  };
  run("a");
  run("b");
  auto bytes = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  bool same = true;
  for (const char* name : {"metrics.csv", "per_user.tsv", "loss_history.csv"})
    same = same && bytes(root / "a" / name) == bytes(root / "b" / name) && !bytes(root / "a" / name).empty();
  fs::remove_all(root);
  return {same, same ? "metrics.csv, per_user.tsv and loss_history.csv identical across two runs"
                     : "outputs differ between two identical runs"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> criteria;
  app.add_option("--criterion", criteria, "criterion number(s) 1-9; all when omitted")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);
  if (criteria.empty()) criteria = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  const std::map<int, std::pair<const char*, Outcome (*)()>> checks = {
      {1, {"F1 identity on published numbers", f1_identity}},
      {2, {"skewness reproduction", skewness_reproduction}},
      {3, {"gradient correctness", gradient_correctness}},
      {4, {"sampler law", sampler_law}},
      {5, {"metric oracle equivalence", metric_oracle}},
      {6, {"ablation direction", ablation_direction}},
      {7, {"loss trend", loss_trend}},
      {8, {"MMR endpoints", mmr_endpoints}},
      {9, {"determinism", determinism}},
  };
  int failures = 0;
  for (int n : criteria) {
    const auto& [name, check] = checks.at(n);
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << n << " " << (outcome.pass ? "PASS" : "FAIL") << " [" << name << "] "
              << outcome.detail << " (" << fmt(seconds) << " s)" << std::endl;
    failures += !outcome.pass;
  }
  return failures == 0 ? 0 : 1;
}
