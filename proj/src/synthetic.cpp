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

#include "divrec/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace divrec {

RawDataset make_synthetic(const SyntheticOptions& o) {
  if (o.users < 1 || o.items < 1 || o.categories < 1 || o.min_items_per_user < 1) {
    throw Error("synthetic", "users, items, categories and min_items_per_user must be >= 1");
  }
  if (o.categories > o.items) throw Error("synthetic", "more categories than items");
  Rng rng(o.seed);

  // Category sizes follow a mild power law; every category gets one item.
  std::vector<double> category_weight(static_cast<std::size_t>(o.categories));
  for (Index c = 0; c < o.categories; ++c) category_weight[static_cast<std::size_t>(c)] = 1.0 / std::pow(c + 1.0, 0.7);
  std::vector<std::vector<ItemId>> members(static_cast<std::size_t>(o.categories));
  std::vector<CategoryId> category_of(static_cast<std::size_t>(o.items));
  std::discrete_distribution<CategoryId> pick_category(category_weight.begin(), category_weight.end());
  for (ItemId v = 0; v < o.items; ++v) {
    const CategoryId c = v < o.categories ? static_cast<CategoryId>(v) : pick_category(rng);
    category_of[static_cast<std::size_t>(v)] = c;
    members[static_cast<std::size_t>(c)].push_back(v);
  }
  std::vector<std::discrete_distribution<std::size_t>> pick_in_category;
  for (const auto& m : members) {
    std::vector<double> w(m.size());
    for (std::size_t r = 0; r < m.size(); ++r) w[r] = 1.0 / std::pow(static_cast<double>(r) + 1.0, o.popularity_exponent);
    pick_in_category.emplace_back(w.begin(), w.end());
  }

  RawDataset out;
  for (ItemId v = 0; v < o.items; ++v) {
    out.categories.push_back({"i" + std::to_string(v), "c" + std::to_string(category_of[static_cast<std::size_t>(v)])});
  }
  std::geometric_distribution<Index> extra_items(1.0 / (1.0 + o.mean_extra_items));
  std::geometric_distribution<Index> extra_categories(1.0 / (1.0 + o.mean_extra_categories));
  std::gamma_distribution<double> gamma(1.0, 1.0);
  for (UserId u = 0; u < o.users; ++u) {
    const Index n = std::min(o.items, o.min_items_per_user + extra_items(rng));
    const Index breadth = std::min(o.categories, 1 + extra_categories(rng));
    std::vector<CategoryId> liked;
    std::vector<double> remaining = category_weight;
    while (static_cast<Index>(liked.size()) < breadth) {
      std::discrete_distribution<CategoryId> d(remaining.begin(), remaining.end());
      const CategoryId c = d(rng);
      liked.push_back(c);
      remaining[static_cast<std::size_t>(c)] = 0.0;
    }
    std::vector<double> mix(liked.size());
    for (auto& x : mix) x = gamma(rng);
    std::discrete_distribution<std::size_t> pick_liked(mix.begin(), mix.end());

    std::vector<char> seen(static_cast<std::size_t>(o.items), 0);
    Index have = 0;
    for (Index attempt = 0; have < n && attempt < 50 * n; ++attempt) {
      const CategoryId c = liked[pick_liked(rng)];
      const auto& m = members[static_cast<std::size_t>(c)];
      const ItemId v = m[pick_in_category[static_cast<std::size_t>(c)](rng)];
      if (seen[static_cast<std::size_t>(v)]) continue;
      seen[static_cast<std::size_t>(v)] = 1;
      out.interactions.push_back({"u" + std::to_string(u), "i" + std::to_string(v), 1.0, have + 1});
      ++have;
    }
  }
  return out;
}

}  // namespace divrec
