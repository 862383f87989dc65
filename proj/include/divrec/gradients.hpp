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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "divrec/losses.hpp"
#include "divrec/model.hpp"
#include "divrec/sampling.hpp"

namespace divrec {

/// Gradients for one branch. Embedding tables are dense but only touched rows
/// are ever written; clear() resets exactly those rows.
template <typename Scalar>
struct GradientSet {
  RowMatrix<Scalar> user;
  RowMatrix<Scalar> item;
  Matrix<Scalar> attention;
  Matrix<Scalar> aspect_mean;
  Matrix<Scalar> aspect_std;
  std::vector<std::int32_t> touched_users;
  std::vector<std::int32_t> touched_items;

  static GradientSet like(const BranchParameters<Scalar>& p) {
    GradientSet g;
    g.user = RowMatrix<Scalar>::Zero(p.num_users(), p.dim());
    g.item = RowMatrix<Scalar>::Zero(p.num_items(), p.dim());
    g.attention = Matrix<Scalar>::Zero(p.dim(), p.dim());
    g.aspect_mean = Matrix<Scalar>::Zero(p.num_aspects(), p.dim());
    g.aspect_std = Matrix<Scalar>::Zero(p.num_aspects(), p.dim());
    g.user_mark_.assign(static_cast<std::size_t>(p.num_users()), 0);
    g.item_mark_.assign(static_cast<std::size_t>(p.num_items()), 0);
    return g;
  }

  auto user_row(std::int32_t u) {
    if (!user_mark_[static_cast<std::size_t>(u)]) {
      user_mark_[static_cast<std::size_t>(u)] = 1;
      touched_users.push_back(u);
    }
    return user.row(u);
  }
  auto item_row(std::int32_t v) {
    if (!item_mark_[static_cast<std::size_t>(v)]) {
      item_mark_[static_cast<std::size_t>(v)] = 1;
      touched_items.push_back(v);
    }
    return item.row(v);
  }

  void clear() {
    for (auto u : touched_users) {
      user.row(u).setZero();
      user_mark_[static_cast<std::size_t>(u)] = 0;
    }
    for (auto v : touched_items) {
      item.row(v).setZero();
      item_mark_[static_cast<std::size_t>(v)] = 0;
    }
    touched_users.clear();
    touched_items.clear();
    attention.setZero();
    aspect_mean.setZero();
    aspect_std.setZero();
  }

  template <typename F>
  void for_each_tensor(F&& f) const {
    f(user);
    f(item);
    f(attention);
    f(aspect_mean);
    f(aspect_std);
  }

  bool all_finite() const {
    bool ok = true;
    for_each_tensor([&](const auto& t) { ok = ok && t.allFinite(); });
    return ok;
  }

 private:
  std::vector<char> user_mark_;
  std::vector<char> item_mark_;
};

/// Reparameterization noise for one batch: one D-vector for the user, the
/// positive item and each negative item of every triple.
template <typename Scalar>
struct NoiseDraws {
  RowMatrix<Scalar> user;      // B x D
  RowMatrix<Scalar> positive;  // B x D
  RowMatrix<Scalar> negative;  // (B * P) x D

  static NoiseDraws zeros(Index batch, Index negatives, Index dim) {
    return {RowMatrix<Scalar>::Zero(batch, dim), RowMatrix<Scalar>::Zero(batch, dim),
            RowMatrix<Scalar>::Zero(batch * negatives, dim)};
  }
  static NoiseDraws gaussian(Index batch, Index negatives, Index dim, Rng& rng) {
    auto n = zeros(batch, negatives, dim);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto* m : {&n.user, &n.positive, &n.negative}) {
      for (Index i = 0; i < m->size(); ++i) m->data()[i] = static_cast<Scalar>(normal(rng));
    }
    return n;
  }
};

/// Which parts of the objective are active.
struct ObjectiveOptions {
  double margin = 1.0;
  ModelSwitches switches;
  bool conventional = true;
  bool adaptive = true;
  bool consistency = true;
  /// Stop the consistency gradient at the conventional (reference) branch.
  bool consistency_stop_gradient = false;
};

template <typename Scalar>
struct ObjectiveInputs {
  const TrainingBatch* conventional_batch = nullptr;
  const TrainingBatch* adaptive_batch = nullptr;
  std::span<const double> conventional_weights;  // per triple of the conventional batch
  std::span<const double> adaptive_weights;      // per triple of the adaptive batch
  const NoiseDraws<Scalar>* conventional_noise = nullptr;
  const NoiseDraws<Scalar>* adaptive_noise = nullptr;
};

/// Objective value and its unweighted parts (batch means).
struct LossParts {
  double total = 0.0;
  double conventional = 0.0;
  double adaptive = 0.0;
  double consistency = 0.0;
};

namespace detail {

/// Forward state of the relations of one branch within one objective
/// evaluation. Attention parts are computed once per entity and their
/// gradients are accumulated, then pushed through the softmax in flush().
template <typename Scalar>
class RelationTape {
 public:
  struct Trace {
    int slot = -1;  // attention entry, -1 without attention
    bool user_side = true;
    std::int32_t id = 0;
    const Scalar* noise = nullptr;
    Vector<Scalar> sigma_raw;  // T_sigma^T w (before abs)
    Vector<Scalar> relation;
  };

  RelationTape(const BranchParameters<Scalar>& params, const AspectProfiles<Scalar>& profiles,
               const InteractionCorpus& corpus, const ModelSwitches& switches)
      : params_(params), profiles_(profiles), corpus_(corpus), switches_(switches) {}

  Trace trace(bool user_side, std::int32_t id, const Scalar* noise) {
    Trace t;
    t.user_side = user_side;
    t.id = id;
    t.noise = noise;
    if (switches_.attention) {
      t.slot = attention_slot(user_side, id);
      t.relation = entries_[static_cast<std::size_t>(t.slot)].relation;
    } else {
      t.relation = Vector<Scalar>::Zero(params_.dim());
    }
    if (switches_.diversity) {
      const auto w = user_side ? profiles_.user_weights.row(id) : profiles_.item_weights.row(id);
      t.relation.noalias() += params_.aspect_mean.transpose() * w.transpose();
      if (noise != nullptr) {
        t.sigma_raw = params_.aspect_std.transpose() * w.transpose();
        t.relation.array() += Eigen::Map<const Vector<Scalar>>(noise, params_.dim()).array() * t.sigma_raw.array().abs();
      }
    }
    return t;
  }

  /// Adds d(loss)/d(relation) = grad. Diversity gradients are written to
  /// `g` at once; attention gradients wait for flush().
  void backprop(const Trace& t, const Vector<Scalar>& grad, GradientSet<Scalar>& g) {
    if (t.slot >= 0) {
      auto& e = entries_[static_cast<std::size_t>(t.slot)];
      if (e.grad.size() == 0) e.grad = Vector<Scalar>::Zero(params_.dim());
      e.grad += grad;
    }
    if (switches_.diversity) {
      const auto w = t.user_side ? profiles_.user_weights.row(t.id) : profiles_.item_weights.row(t.id);
      g.aspect_mean.noalias() += w.transpose() * grad.transpose();
      if (t.noise != nullptr) {
        const Eigen::Map<const Vector<Scalar>> eps(t.noise, params_.dim());
        Vector<Scalar> g_sigma = grad.cwiseProduct(eps);
        for (Index d = 0; d < g_sigma.size(); ++d) {
          const Scalar s = t.sigma_raw(d);
          g_sigma(d) *= s > Scalar(0) ? Scalar(1) : (s < Scalar(0) ? Scalar(-1) : Scalar(0));
        }
        g.aspect_std.noalias() += w.transpose() * g_sigma.transpose();
      }
    }
  }

  /// Softmax-attention backward pass for every entity that received a
  /// gradient, in first-use order.
  void flush(GradientSet<Scalar>& g) {
    for (auto& e : entries_) {
      if (e.grad.size() == 0) continue;
      const auto& keys = e.user_side ? params_.item_embeddings : params_.user_embeddings;
      const auto n = static_cast<Index>(e.history.size());
      Vector<Scalar> g_logit(n);
      for (Index j = 0; j < n; ++j) g_logit(j) = keys.row(e.history[static_cast<std::size_t>(j)]).dot(e.grad);
      const Scalar mean = e.weights.dot(g_logit);
      g_logit = e.weights.cwiseProduct((g_logit.array() - mean).matrix());
      Vector<Scalar> acc = Vector<Scalar>::Zero(params_.dim());
      for (Index j = 0; j < n; ++j) {
        const auto k = e.history[static_cast<std::size_t>(j)];
        acc.noalias() += g_logit(j) * keys.row(k).transpose();
        auto row = e.user_side ? g.item_row(k) : g.user_row(k);
        row.noalias() += (e.weights(j) * e.grad + g_logit(j) * e.projected).transpose();
      }
      const auto query = e.user_side ? params_.user_embeddings.row(e.id) : params_.item_embeddings.row(e.id);
      auto qrow = e.user_side ? g.user_row(e.id) : g.item_row(e.id);
      qrow.noalias() += (params_.attention * acc).transpose();
      g.attention.noalias() += query.transpose() * acc.transpose();
      e.grad.resize(0);
    }
  }

 private:
  struct Entry {
    bool user_side = true;
    std::int32_t id = 0;
    std::span<const std::int32_t> history;
    Vector<Scalar> projected;  // W^T query
    Vector<Scalar> weights;    // softmax over history
    Vector<Scalar> relation;
    Vector<Scalar> grad;       // accumulated d(loss)/d(relation)
  };

  int attention_slot(bool user_side, std::int32_t id) {
    auto& slots = user_side ? user_slot_ : item_slot_;
    if (slots.empty()) slots.assign(static_cast<std::size_t>(user_side ? params_.num_users() : params_.num_items()), -1);
    int& slot = slots[static_cast<std::size_t>(id)];
    if (slot >= 0) return slot;
    Entry e;
    e.user_side = user_side;
    e.id = id;
    e.history = user_side ? corpus_.recent_items_of_user(id, switches_.history_limit)
                          : corpus_.recent_users_of_item(id, switches_.history_limit);
    if (e.history.empty()) {
      throw Error("gradients", std::string(user_side ? "user " : "item ") + std::to_string(id) + " has an empty history");
    }
    const auto& keys = user_side ? params_.item_embeddings : params_.user_embeddings;
    const auto query = user_side ? params_.user_embeddings.row(id) : params_.item_embeddings.row(id);
    e.projected = params_.attention.transpose() * query.transpose();
    const auto n = static_cast<Index>(e.history.size());
    e.weights.resize(n);
    for (Index j = 0; j < n; ++j) e.weights(j) = keys.row(e.history[static_cast<std::size_t>(j)]).dot(e.projected);
    e.weights = (e.weights.array() - e.weights.maxCoeff()).exp();
    e.weights /= e.weights.sum();
    e.relation = Vector<Scalar>::Zero(params_.dim());
    for (Index j = 0; j < n; ++j) e.relation.noalias() += e.weights(j) * keys.row(e.history[static_cast<std::size_t>(j)]).transpose();
    slot = static_cast<int>(entries_.size());
    entries_.push_back(std::move(e));
    return slot;
  }

  const BranchParameters<Scalar>& params_;
  const AspectProfiles<Scalar>& profiles_;
  const InteractionCorpus& corpus_;
  ModelSwitches switches_;
  std::vector<Entry> entries_;
  std::vector<int> user_slot_;
  std::vector<int> item_slot_;
};

/// Gradient of KL(softmax(a) || softmax(b)) w.r.t. a and b.
template <typename Scalar>
Scalar softmax_kl_with_grad(const Vector<Scalar>& a, const Vector<Scalar>& b, Vector<Scalar>& grad_a,
                            Vector<Scalar>& grad_b) {
  const Vector<Scalar> lp = log_softmax(a);
  const Vector<Scalar> lq = log_softmax(b);
  const Vector<Scalar> p = lp.array().exp();
  const Vector<Scalar> q = lq.array().exp();
  const Vector<Scalar> log_ratio = lp - lq;
  const Scalar kl = p.dot(log_ratio);
  grad_a = p.cwiseProduct((log_ratio.array() - kl).matrix());
  grad_b = q - p;
  return kl;
}

/// Mean over triples of the per-triple margin loss, averaged over negatives.
/// Returns the unweighted mean; `weighted` receives sum_t w_t l_t / B and the
/// gradients (if requested) are those of the weighted mean.
template <typename Scalar>
double branch_margin_loss(const BranchParameters<Scalar>& params, RelationTape<Scalar>& tape,
                          const InteractionCorpus& corpus, const TrainingBatch& batch, std::span<const double> weights,
                          const NoiseDraws<Scalar>* noise, const ObjectiveOptions& opt, const char* branch_name,
                          GradientSet<Scalar>* g, double& weighted) {
  const Index batch_size = batch.size();
  const Index num_neg = batch.num_negatives;
  if (batch_size == 0 || num_neg < 1) throw Error("gradients", "empty batch or no negatives");
  if (static_cast<Index>(weights.size()) != batch_size) throw Error("gradients", "weight count does not match batch");
  const auto& sw = opt.switches;
  const Scalar margin = static_cast<Scalar>(opt.margin);
  auto noise_row = [&](const RowMatrix<Scalar> NoiseDraws<Scalar>::*table, Index r) -> const Scalar* {
    return noise == nullptr ? nullptr : (noise->*table).row(r).data();
  };

  double plain_sum = 0.0, weighted_sum = 0.0;
  const Index dim = params.dim();
  Vector<Scalar> g_anchor(dim), g_user(dim), g_rel(dim);
  for (Index t = 0; t < batch_size; ++t) {
    const UserId u = batch.users[static_cast<std::size_t>(t)];
    const ItemId v = batch.positives[static_cast<std::size_t>(t)];
    const auto negs = batch.negatives_of(t);
    const Scalar scale = static_cast<Scalar>(weights[static_cast<std::size_t>(t)] /
                                             static_cast<double>(batch_size * num_neg));

    const auto tu = tape.trace(true, u, noise_row(&NoiseDraws<Scalar>::user, t));
    const Vector<Scalar> p = params.user_embeddings.row(u).transpose();
    const Vector<Scalar> anchor = p + tu.relation;
    const Vector<Scalar> x_pos = anchor - params.item_embeddings.row(v).transpose();
    const Scalar d_pos = x_pos.squaredNorm();

    const bool pos_backward = has_backward(corpus, v, sw);
    typename RelationTape<Scalar>::Trace tv;
    Vector<Scalar> y_pos;
    Scalar db_pos = 0;
    if (pos_backward) {
      tv = tape.trace(false, v, noise_row(&NoiseDraws<Scalar>::positive, t));
      y_pos = params.item_embeddings.row(v).transpose() + tv.relation - p;
      db_pos = y_pos.squaredNorm();
    }

    Scalar triple = 0;
    Scalar fw_active = 0, bw_active = 0;
    if (g) {
      g_anchor.setZero();
      g_user.setZero();
    }
    for (Index k = 0; k < num_neg; ++k) {
      const ItemId n = negs[static_cast<std::size_t>(k)];
      const Vector<Scalar> x_neg = anchor - params.item_embeddings.row(n).transpose();
      const Scalar fw = d_pos - x_neg.squaredNorm() + margin;
      if (fw > Scalar(0)) {
        triple += fw;
        if (g) {
          fw_active += scale;
          g_anchor.noalias() -= Scalar(2) * scale * x_neg;
          g->item_row(n).noalias() += (Scalar(2) * scale * x_neg).transpose();
        }
      }
      if (pos_backward && has_backward(corpus, n, sw)) {
        const auto tn = tape.trace(false, n, noise_row(&NoiseDraws<Scalar>::negative, t * num_neg + k));
        const Vector<Scalar> y_neg = params.item_embeddings.row(n).transpose() + tn.relation - p;
        const Scalar bw = db_pos - y_neg.squaredNorm() + margin;
        if (bw > Scalar(0)) {
          triple += bw;
          if (g) {
            bw_active += scale;
            g_rel = Scalar(-2) * scale * y_neg;
            g->item_row(n).noalias() += g_rel.transpose();
            g_user.noalias() -= g_rel;
            tape.backprop(tn, g_rel, *g);
          }
        }
      }
    }
    const double triple_loss = static_cast<double>(triple) / static_cast<double>(num_neg);
    if (!std::isfinite(triple_loss)) {
      throw Error("gradients", std::string("non-finite loss in ") + branch_name + " triple " + std::to_string(t) +
                                   " (user " + std::to_string(u) + ", item " + std::to_string(v) + ")");
    }
    plain_sum += triple_loss;
    weighted_sum += weights[static_cast<std::size_t>(t)] * triple_loss;

    if (g) {
      if (fw_active != Scalar(0)) {
        g_anchor.noalias() += Scalar(2) * fw_active * x_pos;
        g->item_row(v).noalias() -= (Scalar(2) * fw_active * x_pos).transpose();
      }
      if (bw_active != Scalar(0)) {
        g_rel = Scalar(2) * bw_active * y_pos;
        g->item_row(v).noalias() += g_rel.transpose();
        g_user.noalias() -= g_rel;
        tape.backprop(tv, g_rel, *g);
      }
      g_user += g_anchor;
      g->user_row(u).noalias() += g_user.transpose();
      tape.backprop(tu, g_anchor, *g);
    }
  }
  weighted = weighted_sum / static_cast<double>(batch_size);
  return plain_sum / static_cast<double>(batch_size);
}

/// Mean over the conventional batch's (u, v) pairs of
/// KL(U_fw || R_fw) + KL(U_bw || R_bw), both branches sharing the noise.
template <typename Scalar>
double consistency_term(RelationTape<Scalar>& conventional, RelationTape<Scalar>& adaptive,
                        const InteractionCorpus& corpus, const TrainingBatch& batch, const NoiseDraws<Scalar>* noise,
                        const ObjectiveOptions& opt, GradientSet<Scalar>* g1, GradientSet<Scalar>* g2) {
  const auto& sw = opt.switches;
  const Index batch_size = batch.size();
  const Scalar scale = Scalar(1) / static_cast<Scalar>(batch_size);
  double sum = 0.0;
  Vector<Scalar> ga, gb;
  auto one_side = [&](bool user_side, std::int32_t id, const Scalar* eps) {
    const auto r1 = conventional.trace(user_side, id, eps);
    const auto r2 = adaptive.trace(user_side, id, eps);
    const Scalar kl = softmax_kl_with_grad(r1.relation, r2.relation, ga, gb);
    if (g1 && !opt.consistency_stop_gradient) conventional.backprop(r1, Vector<Scalar>(scale * ga), *g1);
    if (g2) adaptive.backprop(r2, Vector<Scalar>(scale * gb), *g2);
    return static_cast<double>(kl);
  };
  for (Index t = 0; t < batch_size; ++t) {
    const UserId u = batch.users[static_cast<std::size_t>(t)];
    const ItemId v = batch.positives[static_cast<std::size_t>(t)];
    double term = one_side(true, u, noise ? noise->user.row(t).data() : nullptr);
    if (has_backward(corpus, v, sw)) term += one_side(false, v, noise ? noise->positive.row(t).data() : nullptr);
    if (!std::isfinite(term)) {
      throw Error("gradients", "non-finite consistency loss at triple " + std::to_string(t) + " (user " +
                                   std::to_string(u) + ", item " + std::to_string(v) + ")");
    }
    sum += term;
  }
  return sum / static_cast<double>(batch_size);
}

}  // namespace detail

/// Full objective
///   L = mean_t w_conv(u_t) L_B1(t) + mean_t w_adp(u_t) L_B2(t) + L_3
/// and its exact gradients for both branches. Either gradient pointer may be
/// null to skip that branch's gradients; both null evaluates the loss only.
/// The hinge subgradient at exactly zero is zero.
template <typename Scalar>
LossParts loss_and_gradients(const BranchParameters<Scalar>& conventional, const BranchParameters<Scalar>& adaptive,
                             const AspectProfiles<Scalar>& profiles, const InteractionCorpus& corpus,
                             const ObjectiveInputs<Scalar>& in, const ObjectiveOptions& opt,
                             GradientSet<Scalar>* g_conventional, GradientSet<Scalar>* g_adaptive) {
  if (!(opt.margin > 0.0)) throw Error("gradients", "margin must be positive");
  LossParts parts;
  detail::RelationTape<Scalar> tape1(conventional, profiles, corpus, opt.switches);
  detail::RelationTape<Scalar> tape2(adaptive, profiles, corpus, opt.switches);
  if (opt.conventional) {
    if (!in.conventional_batch) throw Error("gradients", "conventional batch missing");
    double weighted = 0.0;
    parts.conventional = detail::branch_margin_loss(conventional, tape1, corpus, *in.conventional_batch,
                                                    in.conventional_weights, in.conventional_noise, opt,
                                                    "conventional", g_conventional, weighted);
    parts.total += weighted;
  }
  if (opt.adaptive) {
    if (!in.adaptive_batch) throw Error("gradients", "adaptive batch missing");
    double weighted = 0.0;
    parts.adaptive = detail::branch_margin_loss(adaptive, tape2, corpus, *in.adaptive_batch, in.adaptive_weights,
                                                in.adaptive_noise, opt, "adaptive", g_adaptive, weighted);
    parts.total += weighted;
  }
  if (opt.consistency && opt.conventional && opt.adaptive) {
    parts.consistency = detail::consistency_term(tape1, tape2, corpus, *in.conventional_batch, in.conventional_noise,
                                                 opt, g_conventional, g_adaptive);
    parts.total += parts.consistency;
  }
  if (g_conventional) tape1.flush(*g_conventional);
  if (g_adaptive) tape2.flush(*g_adaptive);
  if (!std::isfinite(parts.total)) throw Error("gradients", "non-finite objective");
  return parts;
}

enum class ProbeStatus { passed, failed, degenerate };

struct FiniteDifferenceReport {
  ProbeStatus status = ProbeStatus::failed;
  double max_relative_error = 0.0;
  Index parameters_probed = 0;
  std::string worst_parameter;
  std::string message;

  bool passed() const { return status == ProbeStatus::passed; }
};

/// Compares analytic gradients against central differences over every
/// parameter of both branches. `loss` must be deterministic (noise frozen).
/// Relative error is |a - n| / max(|a|, |n|, 1e-6).
template <typename Scalar>
FiniteDifferenceReport finite_difference_check(
    BranchParameters<Scalar> conventional, BranchParameters<Scalar> adaptive,
    const std::function<double(const BranchParameters<Scalar>&, const BranchParameters<Scalar>&)>& loss,
    const std::function<void(const BranchParameters<Scalar>&, const BranchParameters<Scalar>&, GradientSet<Scalar>&,
                             GradientSet<Scalar>&)>& gradient,
    double step, double tolerance, Index max_parameters = 1000) {
  FiniteDifferenceReport report;
  if (!(step != 0.0) || !std::isfinite(step)) {
    report.status = ProbeStatus::degenerate;
    report.message = "degenerate probe: finite-difference step must be nonzero";
    return report;
  }
  const Index total = conventional.parameter_count() + adaptive.parameter_count();
  if (total > max_parameters) {
    throw Error("gradients", "instance too large for dense probing (" + std::to_string(total) + " parameters)");
  }
  auto g1 = GradientSet<Scalar>::like(conventional);
  auto g2 = GradientSet<Scalar>::like(adaptive);
  gradient(conventional, adaptive, g1, g2);

  const char* names[] = {"user_embeddings", "item_embeddings", "attention", "aspect_mean", "aspect_std"};
  auto probe_branch = [&](BranchParameters<Scalar>& target, const GradientSet<Scalar>& grads, const char* branch) {
    std::vector<const Scalar*> analytic;
    grads.for_each_tensor([&](const auto& t) { analytic.push_back(t.data()); });
    int tensor = 0;
    target.for_each_tensor([&](auto& t) {
      for (Index i = 0; i < t.size(); ++i) {
        Scalar& x = t.data()[i];
        const Scalar saved = x;
        x = saved + static_cast<Scalar>(step);
        const double up = loss(conventional, adaptive);
        x = saved - static_cast<Scalar>(step);
        const double down = loss(conventional, adaptive);
        x = saved;
        const double numeric = (up - down) / (2.0 * step);
        const double exact = static_cast<double>(analytic[static_cast<std::size_t>(tensor)][i]);
        const double denom = std::max({std::abs(exact), std::abs(numeric), 1e-6});
        const double rel = std::abs(exact - numeric) / denom;
        ++report.parameters_probed;
        if (rel > report.max_relative_error || !std::isfinite(rel)) {
          report.max_relative_error = std::isfinite(rel) ? rel : INFINITY;
          report.worst_parameter = std::string(branch) + "." + names[tensor] + "[" + std::to_string(i) + "]";
        }
      }
      ++tensor;
    });
  };
  probe_branch(conventional, g1, "conventional");
  probe_branch(adaptive, g2, "adaptive");
  report.status = report.max_relative_error <= tolerance ? ProbeStatus::passed : ProbeStatus::failed;
  return report;
}

}  // namespace divrec
