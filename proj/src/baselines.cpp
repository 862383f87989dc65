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

#include "divrec/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "divrec/gradients.hpp"
#include "divrec/optim.hpp"
#include "divrec/sampling.hpp"

namespace divrec {

void CmlParameters::score_all(UserId u, std::span<double> out) const {
  const auto p = user_embeddings.row(u);
  for (Index v = 0; v < item_embeddings.rows(); ++v) {
    out[static_cast<std::size_t>(v)] = -(p - item_embeddings.row(v)).squaredNorm();
  }
}

BranchParameters<double> CmlParameters::as_branch() const {
  auto b = BranchParameters<double>::zeros(user_embeddings.rows(), item_embeddings.rows(), user_embeddings.cols(), 0);
  b.user_embeddings = user_embeddings;
  b.item_embeddings = item_embeddings;
  return b;
}

CmlParameters CmlParameters::from_branch(const BranchParameters<double>& params) {
  return {params.user_embeddings, params.item_embeddings};
}

CmlModel train_cml(const InteractionCorpus& corpus, const TrainConfig& config) {
  config.validate();
  if (corpus.train().empty()) throw Error("baselines", "corpus has no train interactions");
  const Index d = config.embedding_dim;
  auto init_rng = make_rng(config.seed, SeedStream::cml_init);
  auto params = BranchParameters<double>::gaussian(corpus.num_users(), corpus.num_items(), d, 0, config.init_stddev,
                                                   init_rng);
  auto sampler_rng = make_rng(config.seed, SeedStream::cml_sampler);
  Adam<double> opt(params, AdamOptions{config.learning_rate});
  auto g = GradientSet<double>::like(params);

  const auto train_size = static_cast<Index>(corpus.train().size());
  const Index steps = (train_size + config.batch_size - 1) / config.batch_size;
  const double margin = config.margin;
  CmlModel out;
  for (Index epoch = 1; epoch <= config.max_epochs; ++epoch) {
    double epoch_sum = 0.0;
    for (Index step = 0; step < steps; ++step) {
      const auto batch = uniform_sample(corpus, config.batch_size, config.negatives, sampler_rng);
      const Index b = batch.size();
      const Index pn = batch.num_negatives;
      const double scale = 1.0 / static_cast<double>(b * pn);
      double loss = 0.0;
      for (Index t = 0; t < b; ++t) {
        const UserId u = batch.users[static_cast<std::size_t>(t)];
        const ItemId v = batch.positives[static_cast<std::size_t>(t)];
        const Vector<double> x_pos = (params.user_embeddings.row(u) - params.item_embeddings.row(v)).transpose();
        const double d_pos = x_pos.squaredNorm();
        for (const ItemId n : batch.negatives_of(t)) {
          const Vector<double> x_neg = (params.user_embeddings.row(u) - params.item_embeddings.row(n)).transpose();
          const double h = d_pos - x_neg.squaredNorm() + margin;
          if (h <= 0.0) continue;
          loss += h * scale;
          g.user_row(u).noalias() += (2.0 * scale * (x_pos - x_neg)).transpose();
          g.item_row(v).noalias() -= (2.0 * scale * x_pos).transpose();
          g.item_row(n).noalias() += (2.0 * scale * x_neg).transpose();
        }
      }
      if (!std::isfinite(loss)) {
        throw Error("baselines", "diverged at epoch " + std::to_string(epoch) + " step " + std::to_string(step + 1));
      }
      opt.step(params, g);
      if (config.clip_embeddings) {
        clip_rows_to_unit_ball(params.user_embeddings, g.touched_users);
        clip_rows_to_unit_ball(params.item_embeddings, g.touched_items);
      }
      g.clear();
      epoch_sum += loss;
    }
    out.loss_history.push_back(epoch_sum / static_cast<double>(steps));
  }
  out.params = CmlParameters::from_branch(params);
  return out;
}

RankedList mmr_rerank(std::span<const double> base_scores, std::span<const CategoryId> category_of_item, double lambda,
                      Index k, std::span<const ItemId> candidates) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("baselines", "MMR lambda must lie in [0, 1]");
  std::vector<ItemId> pool;
  if (candidates.empty()) {
    pool.resize(base_scores.size());
    std::iota(pool.begin(), pool.end(), 0);
  } else {
    pool.assign(candidates.begin(), candidates.end());
  }
  RankedList out;
  if (pool.empty() || k < 1) return out;

  double lo = INFINITY, hi = -INFINITY;
  for (auto v : pool) {
    const double s = base_scores[static_cast<std::size_t>(v)];
    if (std::isnan(s)) throw Error("baselines", "NaN base score for item " + std::to_string(v));
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  const double range = hi - lo;
  auto relevance = [&](ItemId v) {
    return range > 0.0 ? (base_scores[static_cast<std::size_t>(v)] - lo) / range : 1.0;
  };

  std::vector<char> covered;  // categories already selected
  auto is_covered = [&](CategoryId c) {
    return static_cast<std::size_t>(c) < covered.size() && covered[static_cast<std::size_t>(c)];
  };
  const auto take = std::min(pool.size(), static_cast<std::size_t>(k));
  while (out.items.size() < take) {
    std::size_t best = pool.size();
    double best_value = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const ItemId v = pool[i];
      const double penalty = is_covered(category_of_item[static_cast<std::size_t>(v)]) ? 1.0 : 0.0;
      const double value = lambda * relevance(v) - (1.0 - lambda) * penalty;
      if (best == pool.size()) {
        best = i;
        best_value = value;
        continue;
      }
      const ItemId b = pool[best];
      const double sv = base_scores[static_cast<std::size_t>(v)];
      const double sb = base_scores[static_cast<std::size_t>(b)];
      if (value > best_value || (value == best_value && (sv > sb || (sv == sb && v < b)))) {
        best = i;
        best_value = value;
      }
    }
    const ItemId chosen = pool[best];
    out.items.push_back(chosen);
    out.scores.push_back(base_scores[static_cast<std::size_t>(chosen)]);
    const auto c = static_cast<std::size_t>(category_of_item[static_cast<std::size_t>(chosen)]);
    if (covered.size() <= c) covered.resize(c + 1, 0);
    covered[c] = 1;
    pool[best] = pool.back();
    pool.pop_back();
  }
  return out;
}

}  // namespace divrec
