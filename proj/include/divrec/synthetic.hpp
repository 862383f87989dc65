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

#include "divrec/datasets.hpp"

namespace divrec {

/// Generator settings for a category-structured implicit-feedback log.
/// Users favor a few categories (breadth is geometric, so most users are
/// narrow and a tail is broad) and pick popular items within a category
/// more often.
struct SyntheticOptions {
  Index users = 200;
  Index items = 300;
  Index categories = 12;
  Index min_items_per_user = 8;
  double mean_extra_items = 12.0;
  double mean_extra_categories = 1.5;
  double popularity_exponent = 0.8;
  std::uint64_t seed = 7;
};

/// Interactions carry increasing per-user timestamps; every item has a
/// category row. Tokens are "u<id>", "i<id>" and "c<id>".
RawDataset make_synthetic(const SyntheticOptions& options);

}  // namespace divrec
