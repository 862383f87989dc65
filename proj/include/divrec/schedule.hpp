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
#include <utility>

#include "divrec/corpus.hpp"

namespace divrec {

/// Branch-balancing factor alpha = d_u * T / T_max, clamped to [0, 1].
/// T = 0 is accepted as a pre-training probe and yields 0.
inline double alpha(const DiversityProfile& profile, UserId user, Index epoch, Index total_epochs) {
  if (total_epochs <= 0) return 0.0;
  const double d = profile.diversity_of_user.at(static_cast<std::size_t>(user));
  return std::clamp(d * static_cast<double>(epoch) / static_cast<double>(total_epochs), 0.0, 1.0);
}

/// (w_conventional, w_adaptive). A normal domain puts alpha on the
/// conventional branch, a skewed one puts alpha on the adaptive branch;
/// `reverse_order` swaps the two outcomes.
inline std::pair<double, double> branch_weights(double alpha_value, bool skewed_domain, bool reverse_order = false) {
  const bool skewed = skewed_domain != reverse_order;
  return skewed ? std::pair{1.0 - alpha_value, alpha_value} : std::pair{alpha_value, 1.0 - alpha_value};
}

}  // namespace divrec
