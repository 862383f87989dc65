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

#include <span>
#include <vector>

#include "divrec/corpus.hpp"
#include "divrec/metrics.hpp"
#include "divrec/model.hpp"
#include "divrec/training.hpp"

namespace divrec {

/// Plain metric learning: d(u, v) = |p_u - q_v|^2.
struct CmlParameters {
  RowMatrix<double> user_embeddings;
  RowMatrix<double> item_embeddings;

  double distance(UserId u, ItemId v) const { return (user_embeddings.row(u) - item_embeddings.row(v)).squaredNorm(); }
  /// Negated distances to every item.
  void score_all(UserId u, std::span<double> out) const;

  BranchParameters<double> as_branch() const;
  static CmlParameters from_branch(const BranchParameters<double>& params);
};

struct CmlModel {
  CmlParameters params;
  std::vector<double> loss_history;  // epoch means
};

/// Forward-only hinge training over uniform batches with the same optimizer,
/// clipping and seed streams as the main trainer. Relation and branch
/// settings of the config are ignored.
CmlModel train_cml(const InteractionCorpus& corpus, const TrainConfig& config);

/// Greedy maximal marginal relevance. Each pick maximizes
///   lambda * rel(v) - (1 - lambda) * max_{s selected} [cat(v) == cat(s)]
/// with rel the min-max normalized base score over the candidates. Ties go to
/// the higher base score, then the smaller item id. An empty candidate list
/// means every item.
RankedList mmr_rerank(std::span<const double> base_scores, std::span<const CategoryId> category_of_item, double lambda,
                      Index k, std::span<const ItemId> candidates = {});

}  // namespace divrec
