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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "divrec/common.hpp"

namespace divrec {

struct Interaction {
  UserId user = 0;
  ItemId item = 0;
  std::int64_t timestamp = 0;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

/// One row of a raw interaction log. Every row counts as an observed
/// interaction; the value is kept only for provenance.
struct RawInteraction {
  std::string user;
  std::string item;
  double value = 1.0;
  std::int64_t timestamp = 0;
};

/// item token -> category token. Items may appear several times; the first
/// listed category wins.
struct RawCategory {
  std::string item;
  std::string category;
};

/// Implicit-feedback interaction matrix with its train/test split and the
/// per-entity indices derived from the train part.
///
/// Histories (items_of_user, users_of_item) are ordered by timestamp, ties by
/// position in the train list, so "most recent" prefixes are well defined.
class InteractionCorpus {
 public:
  InteractionCorpus() = default;

  /// Validates every invariant and builds the indices. Throws Error("corpus")
  /// on out-of-range ids, overlapping train/test pairs, or bad categories.
  InteractionCorpus(Index num_users, Index num_items, Index num_categories,
                    std::vector<CategoryId> category_of_item, std::vector<Interaction> train,
                    std::vector<Interaction> test);

  Index num_users() const { return num_users_; }
  Index num_items() const { return num_items_; }
  Index num_categories() const { return num_categories_; }

  std::span<const Interaction> train() const { return train_; }
  std::span<const Interaction> test() const { return test_; }

  std::span<const ItemId> items_of_user(UserId u) const;
  std::span<const UserId> users_of_item(ItemId v) const;
  /// The most recent `limit` entries of the history (all when limit <= 0).
  std::span<const ItemId> recent_items_of_user(UserId u, Index limit) const;
  std::span<const UserId> recent_users_of_item(ItemId v, Index limit) const;
  /// Sorted, distinct categories of the user's train items.
  std::span<const CategoryId> categories_of_user(UserId u) const;
  std::span<const ItemId> test_items_of_user(UserId u) const;

  CategoryId category_of_item(ItemId v) const { return category_of_item_[static_cast<std::size_t>(v)]; }
  std::span<const CategoryId> item_categories() const { return category_of_item_; }

  bool is_train_interaction(UserId u, ItemId v) const;

  /// Token tables, indexed by dense id. Empty when the corpus was built
  /// directly from ids.
  std::vector<std::string> user_tokens;
  std::vector<std::string> item_tokens;
  std::vector<std::string> category_tokens;

 private:
  void build_indices();

  Index num_users_ = 0;
  Index num_items_ = 0;
  Index num_categories_ = 0;
  std::vector<CategoryId> category_of_item_;
  std::vector<Interaction> train_;
  std::vector<Interaction> test_;

  // CSR layouts.
  std::vector<Index> user_offsets_, item_offsets_, user_cat_offsets_, test_offsets_;
  std::vector<ItemId> user_items_;
  std::vector<ItemId> user_items_sorted_;
  std::vector<UserId> item_users_;
  std::vector<CategoryId> user_categories_;
  std::vector<ItemId> test_items_;
};

/// Per-user diversity statistics and the domain-level branch-order decision.
struct DiversityProfile {
  /// d_u = |C_u+| / |V_u+|; 0 for users without train interactions.
  std::vector<double> diversity_of_user;
  double skewness = 0.0;
  bool skewed_domain = false;
  double threshold = 0.2;
};

/// Densely re-indexes tokens (first-appearance order), binarizes, removes
/// duplicate pairs and applies iterative k-core filtering when min_core > 1.
/// All surviving interactions land in the train part.
InteractionCorpus ingest(std::span<const RawInteraction> raw_log, std::span<const RawCategory> category_map,
                         Index min_core);

/// Per-user random split: ceil(f * n) interactions go to train, the rest to
/// test, keeping at least one test interaction for users with n >= 2.
InteractionCorpus split(const InteractionCorpus& corpus, double train_fraction, std::uint64_t seed);

/// Keeps a random subset of users (and the items they touch), re-indexing
/// both. Category ids are preserved.
InteractionCorpus subsample_users(const InteractionCorpus& corpus, Index num_users, std::uint64_t seed);

double user_diversity(const InteractionCorpus& corpus, UserId user);

/// Third standardized moment with population moments.
double skewness(std::span<const double> values);

DiversityProfile build_diversity_profile(const InteractionCorpus& corpus, double skew_threshold = 0.2);

/// Number of train interactions per user, per category (M x |C| counts).
std::vector<std::vector<Index>> user_category_counts(const InteractionCorpus& corpus);

void write_snapshot(std::ostream& out, const InteractionCorpus& corpus);
InteractionCorpus read_snapshot(std::istream& in);

}  // namespace divrec
