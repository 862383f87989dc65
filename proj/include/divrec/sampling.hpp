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

namespace divrec {

enum class BranchTag { conventional, adaptive };

/// Positive pairs with a fixed number of negatives each. Negatives are stored
/// row-major: triple t owns negatives [t * P, (t + 1) * P).
struct TrainingBatch {
  std::vector<UserId> users;
  std::vector<ItemId> positives;
  std::vector<ItemId> negatives;
  Index num_negatives = 0;
  BranchTag tag = BranchTag::conventional;

  Index size() const { return static_cast<Index>(users.size()); }
  std::span<const ItemId> negatives_of(Index t) const {
    return std::span<const ItemId>(negatives).subspan(static_cast<std::size_t>(t * num_negatives),
                                                       static_cast<std::size_t>(num_negatives));
  }
  void push(UserId u, ItemId v, std::span<const ItemId> negs) {
    users.push_back(u);
    positives.push_back(v);
    negatives.insert(negatives.end(), negs.begin(), negs.end());
  }
};

/// Category sampling laws for one user, aligned with `categories`.
struct CategoryProbabilities {
  std::vector<CategoryId> categories;
  std::vector<double> reversed;
  std::vector<double> original;
};

/// Reversed (inverse-frequency) and original category laws over the user's
/// train categories.
CategoryProbabilities reversed_category_probs(const InteractionCorpus& corpus, UserId user);

/// `count` items drawn uniformly from the items the user has not interacted
/// with in train. Draws are distinct whenever the pool allows it.
std::vector<ItemId> draw_negatives(const InteractionCorpus& corpus, UserId user, Index count, Rng& rng);

/// Uniform law over observed train pairs (conventional branch input).
TrainingBatch uniform_sample(const InteractionCorpus& corpus, Index batch_size, Index num_negatives, Rng& rng);

/// Reversed sampler (adaptive branch input). Per draw: a user uniformly among
/// users with train interactions, a category from the reversed law when
/// z ~ U(0,1) < d_u and from the original law otherwise, then an item
/// uniformly among the user's train items of that category.
///
/// Holds per-user tables built once; cheap to call repeatedly. Not safe for
/// concurrent use of one instance.
class ReversedSampler {
 public:
  ReversedSampler(const InteractionCorpus& corpus, const DiversityProfile& profile);

  TrainingBatch sample(Index batch_size, Index num_negatives, Rng& rng) const;

  /// Category of one draw for a fixed user; exposed for law checks.
  CategoryId draw_category(UserId user, Rng& rng) const;
  ItemId draw_item(UserId user, Rng& rng) const;

 private:
  struct UserTable {
    std::vector<CategoryId> categories;
    std::vector<double> reversed_cdf;
    std::vector<double> original_cdf;
    std::vector<std::vector<ItemId>> items_by_category;
  };

  std::size_t draw_slot(const UserTable& table, double diversity, Rng& rng) const;

  const InteractionCorpus* corpus_;
  std::vector<double> diversity_;
  std::vector<UserId> active_users_;
  std::vector<UserTable> tables_;
};

}  // namespace divrec
