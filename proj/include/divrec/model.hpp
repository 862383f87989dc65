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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "divrec/common.hpp"
#include "divrec/corpus.hpp"
#include "divrec/schedule.hpp"

namespace divrec {

/// Structural switches shared by training and scoring. The defaults give the
/// full model; the ablation variants flip one of them.
struct ModelSwitches {
  bool attention = true;   // relevance relation h
  bool diversity = true;   // Gaussian diversity relation h'
  bool backward = true;    // item-to-user translation
  Index history_limit = 500;
};

/// One branch's full parameter space.
template <typename Scalar>
struct BranchParameters {
  RowMatrix<Scalar> user_embeddings;  // M x D
  RowMatrix<Scalar> item_embeddings;  // N x D
  Matrix<Scalar> attention;           // D x D
  Matrix<Scalar> aspect_mean;         // K x D
  Matrix<Scalar> aspect_std;          // K x D

  Index num_users() const { return user_embeddings.rows(); }
  Index num_items() const { return item_embeddings.rows(); }
  Index dim() const { return user_embeddings.cols(); }
  Index num_aspects() const { return aspect_mean.rows(); }

  static BranchParameters zeros(Index m, Index n, Index d, Index k) {
    BranchParameters p;
    p.user_embeddings = RowMatrix<Scalar>::Zero(m, d);
    p.item_embeddings = RowMatrix<Scalar>::Zero(n, d);
    p.attention = Matrix<Scalar>::Zero(d, d);
    p.aspect_mean = Matrix<Scalar>::Zero(k, d);
    p.aspect_std = Matrix<Scalar>::Zero(k, d);
    return p;
  }

  /// Every entry from N(0, stddev^2), filled tensor by tensor in row-major
  /// order so the result depends only on the generator state.
  static BranchParameters gaussian(Index m, Index n, Index d, Index k, double stddev, Rng& rng) {
    auto p = zeros(m, n, d, k);
    std::normal_distribution<double> normal(0.0, stddev);
    p.for_each_tensor([&](auto& t) {
      for (Index r = 0; r < t.rows(); ++r)
        for (Index c = 0; c < t.cols(); ++c) t(r, c) = static_cast<Scalar>(normal(rng));
    });
    return p;
  }

  template <typename F>
  void for_each_tensor(F&& f) {
    f(user_embeddings);
    f(item_embeddings);
    f(attention);
    f(aspect_mean);
    f(aspect_std);
  }
  template <typename F>
  void for_each_tensor(F&& f) const {
    f(user_embeddings);
    f(item_embeddings);
    f(attention);
    f(aspect_mean);
    f(aspect_std);
  }

  Index parameter_count() const {
    Index n = 0;
    for_each_tensor([&](const auto& t) { n += t.size(); });
    return n;
  }

  bool all_finite() const {
    bool ok = true;
    for_each_tensor([&](const auto& t) { ok = ok && t.allFinite(); });
    return ok;
  }

  template <typename Other>
  BranchParameters<Other> cast() const {
    BranchParameters<Other> p;
    p.user_embeddings = user_embeddings.template cast<Other>();
    p.item_embeddings = item_embeddings.template cast<Other>();
    p.attention = attention.template cast<Other>();
    p.aspect_mean = aspect_mean.template cast<Other>();
    p.aspect_std = aspect_std.template cast<Other>();
    return p;
  }
};

/// Frozen per-entity aspect distributions (rows are probability vectors).
template <typename Scalar>
struct AspectProfiles {
  RowMatrix<Scalar> user_weights;  // M x K
  RowMatrix<Scalar> item_weights;  // N x K

  template <typename Other>
  AspectProfiles<Other> cast() const {
    return {user_weights.template cast<Other>(), item_weights.template cast<Other>()};
  }
};

enum class AspectReduction {
  svd,       // rank-K truncated SVD of the user x category matrix
  identity,  // no reduction; requires K == |C|
};

/// User rows come from the user x category relative-frequency matrix; item
/// rows from the category mix of all items consumed by the item's audience.
/// Both are projected on the top-K right singular vectors of the user matrix
/// and row-normalized with a softmax. Throws when K > |C|.
AspectProfiles<double> build_aspect_profiles(const InteractionCorpus& corpus, Index num_aspects,
                                             AspectReduction reduction = AspectReduction::svd);

enum class Direction { forward, backward };

template <typename Scalar>
struct Attention {
  Vector<Scalar> relation;
  Vector<Scalar> weights;
};

/// Softmax attention of `query` over the rows of `keys` selected by
/// `history`: weights_j = softmax_j(query^T W keys_j), relation = sum_j
/// weights_j keys_j. The history must be nonempty.
template <typename Scalar, typename Keys, typename Query>
Attention<Scalar> attend(const Eigen::MatrixBase<Keys>& keys, std::span<const std::int32_t> history,
                         const Eigen::MatrixBase<Query>& query, const Matrix<Scalar>& attention_matrix) {
  const Vector<Scalar> projected = attention_matrix.transpose() * query;
  const auto n = static_cast<Index>(history.size());
  Attention<Scalar> out;
  out.weights.resize(n);
  for (Index j = 0; j < n; ++j) out.weights(j) = keys.row(history[static_cast<std::size_t>(j)]).dot(projected);
  const Scalar top = out.weights.maxCoeff();
  out.weights = (out.weights.array() - top).exp();
  out.weights /= out.weights.sum();
  out.relation = Vector<Scalar>::Zero(keys.cols());
  for (Index j = 0; j < n; ++j) {
    out.relation.noalias() += out.weights(j) * keys.row(history[static_cast<std::size_t>(j)]).transpose();
  }
  return out;
}

/// Relevance relation h_uv (forward, attention over the user's items) or
/// h_vu (backward, attention over the item's users). Throws on an empty
/// history.
template <typename Scalar>
Attention<Scalar> relevance_relation(const BranchParameters<Scalar>& params, const InteractionCorpus& corpus,
                                     UserId user, ItemId item, Direction direction, Index history_limit = 500) {
  if (direction == Direction::forward) {
    const auto history = corpus.recent_items_of_user(user, history_limit);
    if (history.empty()) throw Error("model", "user " + std::to_string(user) + " has an empty history");
    return attend<Scalar>(params.item_embeddings, history, params.user_embeddings.row(user).transpose(),
                          params.attention);
  }
  const auto history = corpus.recent_users_of_item(item, history_limit);
  if (history.empty()) throw Error("model", "item " + std::to_string(item) + " has an empty history");
  return attend<Scalar>(params.user_embeddings, history, params.item_embeddings.row(item).transpose(),
                        params.attention);
}

/// Diversity relation h' = mu + eps (.) sigma with mu = T_mu^T w and
/// sigma = |T_sigma^T w|. Without noise it returns mu.
template <typename Scalar, typename Weights>
Vector<Scalar> diversity_relation(const BranchParameters<Scalar>& params, const Eigen::MatrixBase<Weights>& aspect_weights,
                                  const Scalar* noise) {
  Vector<Scalar> out = params.aspect_mean.transpose() * aspect_weights;
  if (noise != nullptr) {
    const Vector<Scalar> sigma = (params.aspect_std.transpose() * aspect_weights).cwiseAbs();
    out.array() += Eigen::Map<const Vector<Scalar>>(noise, params.dim()).array() * sigma.array();
  }
  return out;
}

/// Whether the item-to-user translation exists for this item: it needs the
/// backward direction enabled and, when attention is on, a train audience.
inline bool has_backward(const InteractionCorpus& corpus, ItemId item, const ModelSwitches& switches) {
  return switches.backward && (!switches.attention || !corpus.users_of_item(item).empty());
}

/// Full connective relation r for one entity: attention part plus diversity
/// part, each gated by the switches.
template <typename Scalar>
Vector<Scalar> user_relation(const BranchParameters<Scalar>& params, const AspectProfiles<Scalar>& profiles,
                             const InteractionCorpus& corpus, UserId user, const Scalar* noise,
                             const ModelSwitches& switches) {
  Vector<Scalar> r = Vector<Scalar>::Zero(params.dim());
  if (switches.attention) r += relevance_relation(params, corpus, user, 0, Direction::forward, switches.history_limit).relation;
  if (switches.diversity) r += diversity_relation(params, profiles.user_weights.row(user).transpose(), noise);
  return r;
}

template <typename Scalar>
Vector<Scalar> item_relation(const BranchParameters<Scalar>& params, const AspectProfiles<Scalar>& profiles,
                             const InteractionCorpus& corpus, ItemId item, const Scalar* noise,
                             const ModelSwitches& switches) {
  Vector<Scalar> r = Vector<Scalar>::Zero(params.dim());
  if (switches.attention) r += relevance_relation(params, corpus, 0, item, Direction::backward, switches.history_limit).relation;
  if (switches.diversity) r += diversity_relation(params, profiles.item_weights.row(item).transpose(), noise);
  return r;
}

template <typename Scalar>
struct RelationOutput {
  Vector<Scalar> forward_relation;
  Vector<Scalar> backward_relation;
  Scalar forward_distance = 0;
  Scalar backward_distance = 0;
  Vector<Scalar> attention_weights_fw;
  Vector<Scalar> attention_weights_bw;
};

/// Both translation distances of a (user, item) pair:
///   d(u,v) = |p_u + r_uv - q_v|^2,  d(v,u) = |q_v + r_vu - p_u|^2.
/// Null noise pointers select evaluation mode (h' = mu).
template <typename Scalar>
RelationOutput<Scalar> two_way_distance(const BranchParameters<Scalar>& params, const AspectProfiles<Scalar>& profiles,
                                        const InteractionCorpus& corpus, UserId user, ItemId item,
                                        const Scalar* noise_user, const Scalar* noise_item,
                                        const ModelSwitches& switches = {}) {
  RelationOutput<Scalar> out;
  const auto fw = relevance_relation(params, corpus, user, item, Direction::forward, switches.history_limit);
  const auto bw = relevance_relation(params, corpus, user, item, Direction::backward, switches.history_limit);
  out.attention_weights_fw = fw.weights;
  out.attention_weights_bw = bw.weights;
  out.forward_relation = Vector<Scalar>::Zero(params.dim());
  out.backward_relation = Vector<Scalar>::Zero(params.dim());
  if (switches.attention) {
    out.forward_relation += fw.relation;
    out.backward_relation += bw.relation;
  }
  if (switches.diversity) {
    out.forward_relation += diversity_relation(params, profiles.user_weights.row(user).transpose(), noise_user);
    out.backward_relation += diversity_relation(params, profiles.item_weights.row(item).transpose(), noise_item);
  }
  const auto p = params.user_embeddings.row(user).transpose();
  const auto q = params.item_embeddings.row(item).transpose();
  out.forward_distance = (p + out.forward_relation - q).squaredNorm();
  out.backward_distance = (q + out.backward_relation - p).squaredNorm();
  return out;
}

/// How the two branches are blended at ranking time.
struct ScoringPolicy {
  ModelSwitches switches;
  bool use_conventional = true;
  bool use_adaptive = true;
  bool reverse_order = false;
};

/// Final-epoch branch weights for a user (alpha at T = T_max is d_u). A
/// single enabled branch gets weight 1.
inline std::pair<double, double> ranking_weights(const DiversityProfile& profile, UserId user,
                                                 const ScoringPolicy& policy) {
  if (policy.use_conventional && !policy.use_adaptive) return {1.0, 0.0};
  if (!policy.use_conventional && policy.use_adaptive) return {0.0, 1.0};
  const double a = alpha(profile, user, 1, 1);
  return branch_weights(a, profile.skewed_domain, policy.reverse_order);
}

/// Evaluation-mode scorer over both branches. Item-side translations are
/// precomputed once; scoring a user against the catalog is one pass of dot
/// products per branch. Safe for concurrent readers once built.
///
/// score(u, v) = -sum_b w_b * mean(d_b(u,v), d_b(v,u)), with the backward
/// term dropped for items that have no item-to-user translation.
template <typename Scalar>
class TwoBranchScorer {
 public:
  TwoBranchScorer(const BranchParameters<Scalar>& conventional, const BranchParameters<Scalar>& adaptive,
                  const AspectProfiles<Scalar>& profiles, const InteractionCorpus& corpus,
                  const DiversityProfile& diversity, ScoringPolicy policy)
      : branches_{&conventional, &adaptive},
        profiles_(&profiles),
        corpus_(&corpus),
        diversity_(&diversity),
        policy_(policy) {
    backward_.resize(static_cast<std::size_t>(corpus.num_items()));
    for (ItemId v = 0; v < corpus.num_items(); ++v) {
      backward_[static_cast<std::size_t>(v)] = has_backward(corpus, v, policy.switches);
    }
    for (int b = 0; b < 2; ++b) {
      const auto& params = *branches_[b];
      auto& anchors = item_anchor_[b];
      anchors = params.item_embeddings;
      for (ItemId v = 0; v < corpus.num_items(); ++v) {
        if (!backward_[static_cast<std::size_t>(v)]) continue;
        anchors.row(v) += item_relation(params, profiles, corpus, v, static_cast<const Scalar*>(nullptr), policy.switches).transpose();
      }
    }
  }

  std::pair<double, double> weights(UserId user) const { return ranking_weights(*diversity_, user, policy_); }

  /// Scores of every item for `user` (size N).
  void score_all(UserId user, std::span<double> out) const {
    const auto [w1, w2] = weights(user);
    std::fill(out.begin(), out.end(), 0.0);
    const double w[2] = {w1, w2};
    for (int b = 0; b < 2; ++b) {
      if (w[b] == 0.0) continue;
      const auto& params = *branches_[b];
      const Vector<Scalar> p = params.user_embeddings.row(user).transpose();
      const Vector<Scalar> a = p + user_relation(params, *profiles_, *corpus_, user, static_cast<const Scalar*>(nullptr), policy_.switches);
      for (ItemId v = 0; v < corpus_->num_items(); ++v) {
        const double fw = static_cast<double>((a - params.item_embeddings.row(v).transpose()).squaredNorm());
        double dist = fw;
        if (backward_[static_cast<std::size_t>(v)]) {
          const double bw = static_cast<double>((item_anchor_[b].row(v).transpose() - p).squaredNorm());
          dist = 0.5 * (fw + bw);
        }
        out[static_cast<std::size_t>(v)] -= w[b] * dist;
      }
    }
  }

 private:
  const BranchParameters<Scalar>* branches_[2];
  const AspectProfiles<Scalar>* profiles_;
  const InteractionCorpus* corpus_;
  const DiversityProfile* diversity_;
  ScoringPolicy policy_;
  std::vector<char> backward_;
  RowMatrix<Scalar> item_anchor_[2];  // q_v + r_vu per branch
};

/// Single-pair ranking score, computed directly from the relation operations.
/// Agrees with TwoBranchScorer::score_all.
template <typename Scalar>
double score_for_ranking(const BranchParameters<Scalar>& conventional, const BranchParameters<Scalar>& adaptive,
                         const AspectProfiles<Scalar>& profiles, const InteractionCorpus& corpus,
                         const DiversityProfile& diversity, UserId user, ItemId item,
                         const ScoringPolicy& policy = {}) {
  const auto [w1, w2] = ranking_weights(diversity, user, policy);
  const bool bw = has_backward(corpus, item, policy.switches);
  auto branch_distance = [&](const BranchParameters<Scalar>& params) {
    const Vector<Scalar> p = params.user_embeddings.row(user).transpose();
    const Vector<Scalar> q = params.item_embeddings.row(item).transpose();
    const Vector<Scalar> ru = user_relation(params, profiles, corpus, user, static_cast<const Scalar*>(nullptr), policy.switches);
    const double fw = static_cast<double>((p + ru - q).squaredNorm());
    if (!bw) return fw;
    const Vector<Scalar> rv = item_relation(params, profiles, corpus, item, static_cast<const Scalar*>(nullptr), policy.switches);
    return 0.5 * (fw + static_cast<double>((q + rv - p).squaredNorm()));
  };
  double score = 0.0;
  if (w1 != 0.0) score -= w1 * branch_distance(conventional);
  if (w2 != 0.0) score -= w2 * branch_distance(adaptive);
  return score;
}

/// Projects every embedding row onto the unit ball.
template <typename Scalar>
void clip_rows_to_unit_ball(RowMatrix<Scalar>& m, std::span<const std::int32_t> rows) {
  for (auto r : rows) {
    const Scalar norm = m.row(r).norm();
    if (norm > Scalar(1)) m.row(r) /= norm;
  }
}

template <typename Scalar>
void clip_rows_to_unit_ball(RowMatrix<Scalar>& m) {
  for (Index r = 0; r < m.rows(); ++r) {
    const Scalar norm = m.row(r).norm();
    if (norm > Scalar(1)) m.row(r) /= norm;
  }
}

}  // namespace divrec
