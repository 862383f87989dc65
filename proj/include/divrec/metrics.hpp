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

#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "divrec/corpus.hpp"

namespace divrec {

/// Top-k recommendation for one user in descending score order.
struct RankedList {
  UserId user = 0;
  std::vector<ItemId> items;
  std::vector<double> scores;
};

/// Top-k items by score, skipping the user's train items. Ties go to the
/// smaller item id. Throws on a NaN score.
RankedList rank_top_k(const InteractionCorpus& corpus, UserId user, std::span<const double> scores, Index k);

// All list metrics read at most the first k entries of `ranked`; shorter
// lists are measured as they are.

double recall_at_k(std::span<const ItemId> ranked, std::span<const ItemId> ground_truth, Index k);
double ndcg_at_k(std::span<const ItemId> ranked, std::span<const ItemId> ground_truth, Index k);
/// Share of item pairs in the top-k whose categories differ. Throws for k < 2.
double ild_at_k(std::span<const ItemId> ranked, std::span<const CategoryId> category_of_item, Index k);
/// Covered user categories over min(k, |user categories|).
double cc_at_k(std::span<const ItemId> ranked, std::span<const CategoryId> category_of_item,
               std::span<const CategoryId> user_categories, Index k);
/// Harmonic mean; 0 when both inputs are 0.
double f_score(double accuracy, double diversity);
/// Distinct categories in the top-k over k.
double predicted_diversity(std::span<const ItemId> ranked, std::span<const CategoryId> category_of_item, Index k);
double diversity_mse(std::span<const double> predicted, std::span<const double> original);

struct CutoffMetrics {
  Index k = 0;
  Index users = 0;
  double recall = 0.0;
  double ndcg = 0.0;
  double ild = 0.0;
  double cc = 0.0;
  double f1 = 0.0;  // f_score(recall, ild) of the means
  double predicted_diversity = 0.0;
  double diversity_mse = 0.0;
};

struct UserMetrics {
  Index k = 0;
  UserId user = 0;
  double diversity = 0.0;
  double predicted_diversity = 0.0;
  double recall = 0.0;
  double ndcg = 0.0;
  double ild = 0.0;
  double cc = 0.0;
};

struct MetricReport {
  std::vector<CutoffMetrics> cutoffs;
  std::vector<UserMetrics> per_user;  // grouped by cutoff, users ascending

  const CutoffMetrics& at(Index k) const;
};

/// Fills `out` (size N) with scores for every item; higher is better.
using ScoreFunction = std::function<void(UserId, std::span<double>)>;
/// Returns a ranked list of up to k items, none of them train items.
using ListFunction = std::function<RankedList(UserId, Index)>;

struct EvaluationOptions {
  std::vector<Index> cutoffs{5, 10};
  int threads = 1;
};

/// Ranks every non-train item for every user with a nonempty test set and
/// averages each metric over those users in user-id order.
MetricReport evaluate(const ScoreFunction& score, const InteractionCorpus& corpus, const DiversityProfile& profile,
                      const EvaluationOptions& options = {});
MetricReport evaluate_lists(const ListFunction& lists, const InteractionCorpus& corpus,
                            const DiversityProfile& profile, const EvaluationOptions& options = {});

void write_metric_csv(std::ostream& out, const MetricReport& report);
void write_per_user_tsv(std::ostream& out, const MetricReport& report);

}  // namespace divrec
