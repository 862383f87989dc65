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

#include "divrec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>

namespace divrec {
namespace {

std::size_t clip(std::span<const ItemId> ranked, Index k) {
  return std::min(ranked.size(), static_cast<std::size_t>(std::max<Index>(k, 0)));
}

bool contains(std::span<const ItemId> items, ItemId v) { return std::find(items.begin(), items.end(), v) != items.end(); }

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

RankedList rank_top_k(const InteractionCorpus& corpus, UserId user, std::span<const double> scores, Index k) {
  if (static_cast<Index>(scores.size()) != corpus.num_items()) throw Error("metrics", "score vector has wrong size");
  std::vector<ItemId> candidates;
  candidates.reserve(scores.size());
  for (ItemId v = 0; v < corpus.num_items(); ++v) {
    const double s = scores[static_cast<std::size_t>(v)];
    if (std::isnan(s)) throw Error("metrics", "NaN score for user " + std::to_string(user) + ", item " + std::to_string(v));
    if (!corpus.is_train_interaction(user, v)) candidates.push_back(v);
  }
  const auto take = std::min(candidates.size(), static_cast<std::size_t>(std::max<Index>(k, 0)));
  auto better = [&](ItemId a, ItemId b) {
    const double sa = scores[static_cast<std::size_t>(a)];
    const double sb = scores[static_cast<std::size_t>(b)];
    return sa != sb ? sa > sb : a < b;
  };
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take), candidates.end(), better);
  RankedList out;
  out.user = user;
  out.items.assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take));
  for (auto v : out.items) out.scores.push_back(scores[static_cast<std::size_t>(v)]);
  return out;
}

double recall_at_k(std::span<const ItemId> ranked, std::span<const ItemId> ground_truth, Index k) {
  if (ground_truth.empty()) throw Error("metrics", "recall needs a nonempty ground truth");
  const auto n = clip(ranked, k);
  Index hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += contains(ground_truth, ranked[i]) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(ground_truth.size());
}

double ndcg_at_k(std::span<const ItemId> ranked, std::span<const ItemId> ground_truth, Index k) {
  if (ground_truth.empty()) throw Error("metrics", "ndcg needs a nonempty ground truth");
  const auto n = clip(ranked, k);
  double dcg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (contains(ground_truth, ranked[i])) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  double idcg = 0.0;
  const auto ideal = std::min(static_cast<std::size_t>(std::max<Index>(k, 0)), ground_truth.size());
  for (std::size_t i = 0; i < ideal; ++i) idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  return idcg > 0.0 ? dcg / idcg : 0.0;
}

double ild_at_k(std::span<const ItemId> ranked, std::span<const CategoryId> category_of_item, Index k) {
  if (k < 2) throw Error("metrics", "ILD needs k >= 2");
  const auto n = clip(ranked, k);
  if (n < 2) return 0.0;
  Index differ = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      differ += category_of_item[static_cast<std::size_t>(ranked[i])] != category_of_item[static_cast<std::size_t>(ranked[j])];
  return static_cast<double>(differ) / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

double cc_at_k(std::span<const ItemId> ranked, std::span<const CategoryId> category_of_item,
               std::span<const CategoryId> user_categories, Index k) {
  if (user_categories.empty()) throw Error("metrics", "category coverage needs at least one user category");
  const auto n = clip(ranked, k);
  std::vector<CategoryId> seen;
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = category_of_item[static_cast<std::size_t>(ranked[i])];
    if (std::find(seen.begin(), seen.end(), c) == seen.end() &&
        std::find(user_categories.begin(), user_categories.end(), c) != user_categories.end()) {
      seen.push_back(c);
    }
  }
  const auto denom = std::min(static_cast<std::size_t>(std::max<Index>(k, 1)), user_categories.size());
  return static_cast<double>(seen.size()) / static_cast<double>(denom);
}

double f_score(double accuracy, double diversity) {
  const double s = accuracy + diversity;
  return s > 0.0 ? 2.0 * accuracy * diversity / s : 0.0;
}

double predicted_diversity(std::span<const ItemId> ranked, std::span<const CategoryId> category_of_item, Index k) {
  if (k < 1) throw Error("metrics", "predicted diversity needs k >= 1");
  const auto n = clip(ranked, k);
  std::vector<CategoryId> cats;
  for (std::size_t i = 0; i < n; ++i) cats.push_back(category_of_item[static_cast<std::size_t>(ranked[i])]);
  std::sort(cats.begin(), cats.end());
  const auto distinct = std::unique(cats.begin(), cats.end()) - cats.begin();
  return static_cast<double>(distinct) / static_cast<double>(k);
}

double diversity_mse(std::span<const double> predicted, std::span<const double> original) {
  if (predicted.size() != original.size()) throw Error("metrics", "predicted and original user sets differ in size");
  if (predicted.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) sum += (predicted[i] - original[i]) * (predicted[i] - original[i]);
  return sum / static_cast<double>(predicted.size());
}

const CutoffMetrics& MetricReport::at(Index k) const {
  for (const auto& c : cutoffs)
    if (c.k == k) return c;
  throw Error("metrics", "no cutoff " + std::to_string(k) + " in report");
}

namespace {

MetricReport evaluate_impl(const ListFunction& lists, const InteractionCorpus& corpus, const DiversityProfile& profile,
                           const EvaluationOptions& options) {
  if (options.cutoffs.empty()) throw Error("metrics", "no cutoffs given");
  for (auto k : options.cutoffs)
    if (k < 2) throw Error("metrics", "cutoffs must be >= 2");
  const Index top = *std::max_element(options.cutoffs.begin(), options.cutoffs.end());

  std::vector<UserId> users;
  for (UserId u = 0; u < corpus.num_users(); ++u)
    if (!corpus.test_items_of_user(u).empty()) users.push_back(u);

  std::vector<RankedList> ranked(users.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) ranked[i] = lists(users[i], top);
  };
  const auto threads = static_cast<std::size_t>(std::max(1, options.threads));
  if (threads == 1 || users.size() < 2) {
    work(0, users.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (users.size() + threads - 1) / threads;
    for (std::size_t b = 0; b < users.size(); b += chunk) pool.emplace_back(work, b, std::min(users.size(), b + chunk));
    for (auto& t : pool) t.join();
  }

  MetricReport report;
  const auto cats = corpus.item_categories();
  for (auto k : options.cutoffs) {
    CutoffMetrics agg;
    agg.k = k;
    std::vector<double> predicted, original;
    for (std::size_t i = 0; i < users.size(); ++i) {
      const UserId u = users[i];
      const auto& items = ranked[i].items;
      UserMetrics um;
      um.k = k;
      um.user = u;
      um.diversity = profile.diversity_of_user.at(static_cast<std::size_t>(u));
      um.recall = recall_at_k(items, corpus.test_items_of_user(u), k);
      um.ndcg = ndcg_at_k(items, corpus.test_items_of_user(u), k);
      um.ild = ild_at_k(items, cats, k);
      um.cc = cc_at_k(items, cats, corpus.categories_of_user(u), k);
      um.predicted_diversity = predicted_diversity(items, cats, k);
      agg.recall += um.recall;
      agg.ndcg += um.ndcg;
      agg.ild += um.ild;
      agg.cc += um.cc;
      agg.predicted_diversity += um.predicted_diversity;
      predicted.push_back(um.predicted_diversity);
      original.push_back(um.diversity);
      report.per_user.push_back(um);
    }
    agg.users = static_cast<Index>(users.size());
    if (agg.users > 0) {
      const auto n = static_cast<double>(agg.users);
      agg.recall /= n;
      agg.ndcg /= n;
      agg.ild /= n;
      agg.cc /= n;
      agg.predicted_diversity /= n;
    }
    agg.f1 = f_score(agg.recall, agg.ild);
    agg.diversity_mse = diversity_mse(predicted, original);
    report.cutoffs.push_back(agg);
  }
  return report;
}

}  // namespace

MetricReport evaluate(const ScoreFunction& score, const InteractionCorpus& corpus, const DiversityProfile& profile,
                      const EvaluationOptions& options) {
  const ListFunction lists = [&](UserId u, Index k) {
    std::vector<double> s(static_cast<std::size_t>(corpus.num_items()));
    score(u, s);
    return rank_top_k(corpus, u, s, k);
  };
  return evaluate_impl(lists, corpus, profile, options);
}

MetricReport evaluate_lists(const ListFunction& lists, const InteractionCorpus& corpus,
                            const DiversityProfile& profile, const EvaluationOptions& options) {
  return evaluate_impl(lists, corpus, profile, options);
}

void write_metric_csv(std::ostream& out, const MetricReport& report) {
  out << "k,users,recall,ndcg,ild,cc,f1,predicted_diversity,diversity_mse\n";
  for (const auto& c : report.cutoffs) {
    out << c.k << ',' << c.users << ',' << number(c.recall) << ',' << number(c.ndcg) << ',' << number(c.ild) << ','
        << number(c.cc) << ',' << number(c.f1) << ',' << number(c.predicted_diversity) << ','
        << number(c.diversity_mse) << '\n';
  }
}

void write_per_user_tsv(std::ostream& out, const MetricReport& report) {
  out << "user\tk\td_u\tpredicted_diversity\trecall\tndcg\tild\tcc\n";
  for (const auto& u : report.per_user) {
    out << u.user << '\t' << u.k << '\t' << number(u.diversity) << '\t' << number(u.predicted_diversity) << '\t'
        << number(u.recall) << '\t' << number(u.ndcg) << '\t' << number(u.ild) << '\t' << number(u.cc) << '\n';
  }
}

}  // namespace divrec
