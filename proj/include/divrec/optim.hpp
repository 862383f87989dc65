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

#include <cmath>

#include "divrec/gradients.hpp"
#include "divrec/model.hpp"

namespace divrec {

struct AdamOptions {
  double learning_rate = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam over one branch. Embedding tables are updated lazily: only rows with
/// a gradient this step have their moments and values touched. The dense
/// tensors (attention, aspect tables) are updated every step. Bias correction
/// uses the global step count.
template <typename Scalar>
class Adam {
 public:
  Adam(const BranchParameters<Scalar>& like, AdamOptions options)
      : options_(options), first_(BranchParameters<Scalar>::zeros(like.num_users(), like.num_items(), like.dim(),
                                                                  like.num_aspects())),
        second_(first_) {}

  Index steps() const { return step_; }
  const AdamOptions& options() const { return options_; }

  void step(BranchParameters<Scalar>& params, const GradientSet<Scalar>& g) {
    ++step_;
    const double c1 = 1.0 - std::pow(options_.beta1, static_cast<double>(step_));
    const double c2 = 1.0 - std::pow(options_.beta2, static_cast<double>(step_));
    const Scalar lr = static_cast<Scalar>(options_.learning_rate * std::sqrt(c2) / c1);
    const Scalar eps_hat = static_cast<Scalar>(options_.epsilon * std::sqrt(c2));
    for (auto u : g.touched_users) {
      update(params.user_embeddings.row(u), first_.user_embeddings.row(u), second_.user_embeddings.row(u),
             g.user.row(u), lr, eps_hat);
    }
    for (auto v : g.touched_items) {
      update(params.item_embeddings.row(v), first_.item_embeddings.row(v), second_.item_embeddings.row(v),
             g.item.row(v), lr, eps_hat);
    }
    update(params.attention, first_.attention, second_.attention, g.attention, lr, eps_hat);
    update(params.aspect_mean, first_.aspect_mean, second_.aspect_mean, g.aspect_mean, lr, eps_hat);
    update(params.aspect_std, first_.aspect_std, second_.aspect_std, g.aspect_std, lr, eps_hat);
  }

 private:
  template <typename P, typename M, typename V, typename G>
  void update(P&& p, M&& m, V&& v, const G& g, Scalar lr, Scalar eps_hat) const {
    const Scalar b1 = static_cast<Scalar>(options_.beta1);
    const Scalar b2 = static_cast<Scalar>(options_.beta2);
    m = b1 * m + (Scalar(1) - b1) * g;
    v = b2 * v + (Scalar(1) - b2) * g.cwiseProduct(g);
    p.array() -= lr * m.array() / (v.array().sqrt() + eps_hat);
  }

  AdamOptions options_;
  BranchParameters<Scalar> first_;
  BranchParameters<Scalar> second_;
  Index step_ = 0;
};

}  // namespace divrec
