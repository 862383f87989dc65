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

#include "divrec/sampling.hpp"

#include <algorithm>
#include <map>

namespace divrec {
namespace {

constexpr const char* kModule = "sampling";

std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) cdf[i] = acc += p[i];
  if (!cdf.empty()) cdf.back() = 1.0;
  return cdf;
}

std::size_t sample_cdf(const std::vector<double>& cdf, double r) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
  return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

}  // namespace

CategoryProbabilities reversed_category_probs(const InteractionCorpus& corpus, UserId user) {
  const auto items = corpus.items_of_user(user);
  if (items.empty()) throw Error(kModule, "user " + std::to_string(user) + " has no train interactions");
  std::map<CategoryId, Index> counts;
  for (ItemId v : items) ++counts[corpus.category_of_item(v)];

  CategoryProbabilities out;
  const double total = static_cast<double>(items.size());
  double weight_sum = 0.0;
  for (const auto& [c, n] : counts) {
    out.categories.push_back(c);
    out.original.push_back(static_cast<double>(n) / total);
    const double w = total / static_cast<double>(n);
    out.reversed.push_back(w);
    weight_sum += w;
  }
  for (double& w : out.reversed) w /= weight_sum;
  return out;
}

std::vector<ItemId> draw_negatives(const InteractionCorpus& corpus, UserId user, Index count, Rng& rng) {
  if (count < 1) throw Error(kModule, "negative count must be >= 1");
  const Index n_items = corpus.num_items();
  const auto seen = static_cast<Index>(corpus.items_of_user(user).size());
  const Index pool = n_items - seen;
  if (pool <= 0) throw Error(kModule, "user " + std::to_string(user) + " interacted with every item");

  std::vector<ItemId> out;
  out.reserve(static_cast<std::size_t>(count));
  if (pool < count) {
    // Too few candidates for distinct draws: sample with replacement.
    std::vector<ItemId> candidates;
    for (ItemId v = 0; v < n_items; ++v) {
      if (!corpus.is_train_interaction(user, v)) candidates.push_back(v);
    }
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    for (Index k = 0; k < count; ++k) out.push_back(candidates[pick(rng)]);
    return out;
  }
  if (pool * 2 < n_items) {
    // Dense user: explicit pool and a partial Fisher-Yates shuffle.
    std::vector<ItemId> candidates;
    candidates.reserve(static_cast<std::size_t>(pool));
    for (ItemId v = 0; v < n_items; ++v) {
      if (!corpus.is_train_interaction(user, v)) candidates.push_back(v);
    }
    for (Index k = 0; k < count; ++k) {
      std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(k), candidates.size() - 1);
      std::swap(candidates[static_cast<std::size_t>(k)], candidates[pick(rng)]);
      out.push_back(candidates[static_cast<std::size_t>(k)]);
    }
    return out;
  }
  std::uniform_int_distribution<ItemId> pick(0, static_cast<ItemId>(n_items - 1));
  while (static_cast<Index>(out.size()) < count) {
    const ItemId v = pick(rng);
    if (corpus.is_train_interaction(user, v)) continue;
    if (std::find(out.begin(), out.end(), v) != out.end()) continue;
    out.push_back(v);
  }
  return out;
}

TrainingBatch uniform_sample(const InteractionCorpus& corpus, Index batch_size, Index num_negatives, Rng& rng) {
  if (batch_size < 1) throw Error(kModule, "batch size must be >= 1");
  const auto pairs = corpus.train();
  if (pairs.empty()) throw Error(kModule, "corpus has no train interactions");
  TrainingBatch batch;
  batch.tag = BranchTag::conventional;
  batch.num_negatives = num_negatives;
  std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
  for (Index t = 0; t < batch_size; ++t) {
    const auto& x = pairs[pick(rng)];
    const auto negs = draw_negatives(corpus, x.user, num_negatives, rng);
    batch.push(x.user, x.item, negs);
  }
  return batch;
}

ReversedSampler::ReversedSampler(const InteractionCorpus& corpus, const DiversityProfile& profile)
    : corpus_(&corpus), diversity_(profile.diversity_of_user) {
  if (static_cast<Index>(diversity_.size()) != corpus.num_users()) {
    throw Error(kModule, "diversity profile does not match the corpus");
  }
  tables_.resize(static_cast<std::size_t>(corpus.num_users()));
  for (UserId u = 0; u < corpus.num_users(); ++u) {
    if (corpus.items_of_user(u).empty()) continue;
    active_users_.push_back(u);
    const auto probs = reversed_category_probs(corpus, u);
    auto& table = tables_[static_cast<std::size_t>(u)];
    table.categories = probs.categories;
    table.reversed_cdf = cumulative(probs.reversed);
    table.original_cdf = cumulative(probs.original);
    table.items_by_category.resize(probs.categories.size());
    for (ItemId v : corpus.items_of_user(u)) {
      const auto c = corpus.category_of_item(v);
      const auto slot = std::lower_bound(table.categories.begin(), table.categories.end(), c) - table.categories.begin();
      table.items_by_category[static_cast<std::size_t>(slot)].push_back(v);
    }
  }
  if (active_users_.empty()) throw Error(kModule, "corpus has no users with train interactions");
}

std::size_t ReversedSampler::draw_slot(const UserTable& table, double diversity, Rng& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double z = unit(rng);
  const auto& cdf = z < diversity ? table.reversed_cdf : table.original_cdf;
  return sample_cdf(cdf, unit(rng));
}

CategoryId ReversedSampler::draw_category(UserId user, Rng& rng) const {
  const auto& table = tables_.at(static_cast<std::size_t>(user));
  if (table.categories.empty()) throw Error(kModule, "user " + std::to_string(user) + " has no train interactions");
  return table.categories[draw_slot(table, diversity_[static_cast<std::size_t>(user)], rng)];
}

ItemId ReversedSampler::draw_item(UserId user, Rng& rng) const {
  const auto& table = tables_.at(static_cast<std::size_t>(user));
  if (table.categories.empty()) throw Error(kModule, "user " + std::to_string(user) + " has no train interactions");
  const auto& items = table.items_by_category[draw_slot(table, diversity_[static_cast<std::size_t>(user)], rng)];
  std::uniform_int_distribution<std::size_t> pick(0, items.size() - 1);
  return items[pick(rng)];
}

TrainingBatch ReversedSampler::sample(Index batch_size, Index num_negatives, Rng& rng) const {
  if (batch_size < 1) throw Error(kModule, "batch size must be >= 1");
  TrainingBatch batch;
  batch.tag = BranchTag::adaptive;
  batch.num_negatives = num_negatives;
  std::uniform_int_distribution<std::size_t> pick_user(0, active_users_.size() - 1);
  for (Index t = 0; t < batch_size; ++t) {
    const UserId u = active_users_[pick_user(rng)];
    const ItemId v = draw_item(u, rng);
    const auto negs = draw_negatives(*corpus_, u, num_negatives, rng);
    batch.push(u, v, negs);
  }
  return batch;
}

}  // namespace divrec
