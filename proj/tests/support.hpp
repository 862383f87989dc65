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

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include "divrec/corpus.hpp"
#include "divrec/model.hpp"

namespace divrec::testing {

using Pairs = std::vector<std::pair<int, int>>;

inline std::vector<Interaction> to_interactions(const Pairs& pairs) {
  std::vector<Interaction> out;
  std::int64_t t = 0;
  for (auto [u, v] : pairs) out.push_back({u, v, ++t});
  return out;
}

inline InteractionCorpus make_corpus(Index users, Index items, Index categories, std::vector<CategoryId> category_of,
                                     const Pairs& train, const Pairs& test = {}) {
  return InteractionCorpus(users, items, categories, std::move(category_of), to_interactions(train),
                           to_interactions(test));
}

/// Random corpus in which every user and every item has a train
/// interaction and every user with a free item has one test item.
inline InteractionCorpus random_corpus(Index users, Index items, Index categories, double density,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(density);
  std::vector<CategoryId> cats(static_cast<std::size_t>(items));
  for (Index v = 0; v < items; ++v) cats[static_cast<std::size_t>(v)] = static_cast<CategoryId>(v % categories);
  std::shuffle(cats.begin(), cats.end(), rng);
  std::vector<std::vector<char>> grid(static_cast<std::size_t>(users), std::vector<char>(static_cast<std::size_t>(items), 0));
  for (Index u = 0; u < users; ++u)
    for (Index v = 0; v < items; ++v) grid[u][v] = keep(rng) && v != (u + 1) % items;
  for (Index v = 0; v < items; ++v) grid[static_cast<std::size_t>(v % users)][static_cast<std::size_t>(v)] = 1;
  for (Index u = 0; u < users; ++u) grid[static_cast<std::size_t>(u)][static_cast<std::size_t>(u % items)] = 1;
  Pairs train, test;
  for (Index u = 0; u < users; ++u) {
    std::vector<int> free;
    for (Index v = 0; v < items; ++v) {
      if (grid[u][v]) {
        train.push_back({static_cast<int>(u), static_cast<int>(v)});
      } else {
        free.push_back(static_cast<int>(v));
      }
    }
    if (!free.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
      test.push_back({static_cast<int>(u), free[pick(rng)]});
    }
  }
  return make_corpus(users, items, categories, cats, train, test);
}

}  // namespace divrec::testing
