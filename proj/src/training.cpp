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

#include "divrec/training.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "divrec/gradients.hpp"
#include "divrec/optim.hpp"
#include "divrec/sampling.hpp"
#include "divrec/schedule.hpp"

namespace divrec {

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error("training", what); };
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (max_epochs < 1) fail("max_epochs must be >= 1");
  if (embedding_dim < 1) fail("embedding_dim must be >= 1");
  if (num_aspects < 1) fail("num_aspects must be >= 1");
  if (negatives < 1) fail("negatives must be >= 1");
  if (history_limit < 1) fail("history_limit must be >= 1");
  if (!(learning_rate > 0.0)) fail("learning_rate must be > 0");
  if (!(margin > 0.0)) fail("margin must be > 0");
  if (!(skew_threshold >= 0.0)) fail("skew_threshold must be >= 0");
  if (!(init_stddev >= 0.0)) fail("init_stddev must be >= 0");
  if (ablation.disable_adaptive_branch && ablation.disable_conventional_branch) fail("both branches disabled");
}

ModelSwitches TrainConfig::switches() const {
  return {!ablation.drop_attention, !ablation.drop_diversity_relation, !ablation.drop_backward_direction,
          history_limit};
}

ScoringPolicy TrainConfig::scoring_policy() const {
  return {switches(), !ablation.disable_conventional_branch, !ablation.disable_adaptive_branch,
          ablation.reverse_order};
}

Index TrainConfig::effective_aspects(const InteractionCorpus& corpus) const {
  return std::min(num_aspects, corpus.num_categories());
}

TrainedModel train(const InteractionCorpus& corpus, const DiversityProfile& profile, const TrainConfig& config,
                   const EpochCallback& on_epoch) {
  config.validate();
  if (corpus.train().empty()) throw Error("training", "corpus has no train interactions");

  const Index m = corpus.num_users();
  const Index n = corpus.num_items();
  const Index d = config.embedding_dim;
  const Index k = config.effective_aspects(corpus);

  TrainedModel state;
  state.profiles = build_aspect_profiles(corpus, k);
  {
    auto rng1 = make_rng(config.seed, SeedStream::init_conventional);
    auto rng2 = make_rng(config.seed, SeedStream::init_adaptive);
    state.conventional = BranchParameters<double>::gaussian(m, n, d, k, config.init_stddev, rng1);
    state.adaptive = BranchParameters<double>::gaussian(m, n, d, k, config.init_stddev, rng2);
  }

  const bool use_conv = !config.ablation.disable_conventional_branch;
  const bool use_adp = !config.ablation.disable_adaptive_branch;
  ObjectiveOptions options;
  options.margin = config.margin;
  options.switches = config.switches();
  options.conventional = use_conv;
  options.adaptive = use_adp;
  options.consistency = use_conv && use_adp && !config.ablation.drop_consistency_loss;
  options.consistency_stop_gradient = config.consistency_stop_gradient;

  const AdamOptions adam{config.learning_rate};
  Adam<double> opt1(state.conventional, adam);
  Adam<double> opt2(state.adaptive, adam);
  auto g1 = GradientSet<double>::like(state.conventional);
  auto g2 = GradientSet<double>::like(state.adaptive);

  const ReversedSampler reversed(corpus, profile);
  auto rng_conv = make_rng(config.seed, SeedStream::sampler_conventional);
  auto rng_adp = make_rng(config.seed, SeedStream::sampler_adaptive);
  auto rng_noise = make_rng(config.seed, SeedStream::noise);

  const auto train_size = static_cast<Index>(corpus.train().size());
  const Index steps = (train_size + config.batch_size - 1) / config.batch_size;
  const bool noisy = options.switches.diversity;

  auto finish_step = [&](BranchParameters<double>& params, Adam<double>& opt, GradientSet<double>& g) {
    opt.step(params, g);
    if (config.clip_embeddings) {
      clip_rows_to_unit_ball(params.user_embeddings, g.touched_users);
      clip_rows_to_unit_ball(params.item_embeddings, g.touched_items);
    }
    g.clear();
  };

  std::vector<double> w_conv, w_adp;
  for (Index epoch = 1; epoch <= config.max_epochs; ++epoch) {
    double sum1 = 0.0, sum2 = 0.0, sum3 = 0.0;
    for (Index step = 0; step < steps; ++step) {
      TrainingBatch conv_batch, adp_batch;
      NoiseDraws<double> conv_noise, adp_noise;
      ObjectiveInputs<double> in;
      auto weights_for = [&](const TrainingBatch& batch, bool conventional_side, std::vector<double>& out) {
        out.resize(static_cast<std::size_t>(batch.size()));
        for (Index t = 0; t < batch.size(); ++t) {
          if (!(use_conv && use_adp)) {
            out[static_cast<std::size_t>(t)] = 1.0;
            continue;
          }
          const UserId u = batch.users[static_cast<std::size_t>(t)];
          const auto [wc, wa] = branch_weights(alpha(profile, u, epoch, config.max_epochs), profile.skewed_domain,
                                               config.ablation.reverse_order);
          out[static_cast<std::size_t>(t)] = conventional_side ? wc : wa;
        }
      };
      // The conventional batch also feeds the consistency term, so it is
      // drawn whenever either needs it.
      if (use_conv) {
        conv_batch = uniform_sample(corpus, config.batch_size, config.negatives, rng_conv);
        weights_for(conv_batch, true, w_conv);
        in.conventional_batch = &conv_batch;
        in.conventional_weights = w_conv;
        if (noisy) {
          conv_noise = NoiseDraws<double>::gaussian(conv_batch.size(), config.negatives, d, rng_noise);
          in.conventional_noise = &conv_noise;
        }
      }
      if (use_adp) {
        adp_batch = reversed.sample(config.batch_size, config.negatives, rng_adp);
        weights_for(adp_batch, false, w_adp);
        in.adaptive_batch = &adp_batch;
        in.adaptive_weights = w_adp;
        if (noisy) {
          adp_noise = NoiseDraws<double>::gaussian(adp_batch.size(), config.negatives, d, rng_noise);
          in.adaptive_noise = &adp_noise;
        }
      }
      LossParts parts;
      try {
        parts = loss_and_gradients(state.conventional, state.adaptive, state.profiles, corpus, in, options,
                                   use_conv ? &g1 : nullptr, use_adp ? &g2 : nullptr);
      } catch (const Error& e) {
        throw Error("training", "diverged at epoch " + std::to_string(epoch) + " step " + std::to_string(step + 1) +
                                    ": " + e.what());
      }
      if (use_conv) finish_step(state.conventional, opt1, g1);
      if (use_adp) finish_step(state.adaptive, opt2, g2);
      if (!state.conventional.all_finite() || !state.adaptive.all_finite()) {
        throw Error("training", "non-finite parameters at epoch " + std::to_string(epoch) + " step " +
                                    std::to_string(step + 1));
      }
      sum1 += parts.conventional;
      sum2 += parts.adaptive;
      sum3 += parts.consistency;
    }
    LossRecord record;
    record.epoch = epoch;
    const auto denom = static_cast<double>(steps);
    if (use_conv) record.conventional = sum1 / denom;
    if (use_adp) record.adaptive = sum2 / denom;
    if (options.consistency) record.consistency = sum3 / denom;
    state.history.push_back(record);
    if (on_epoch) on_epoch(epoch, state);
  }
  return state;
}

}  // namespace divrec
