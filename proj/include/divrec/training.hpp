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
#include <functional>
#include <optional>
#include <vector>

#include "divrec/corpus.hpp"
#include "divrec/model.hpp"

namespace divrec {

struct AblationSwitches {
  bool disable_adaptive_branch = false;
  bool disable_conventional_branch = false;
  bool reverse_order = false;
  bool drop_attention = false;
  bool drop_diversity_relation = false;
  bool drop_backward_direction = false;
  bool drop_consistency_loss = false;
};

struct TrainConfig {
  Index batch_size = 128;
  Index max_epochs = 20;
  double learning_rate = 5e-4;
  double margin = 1.0;
  Index embedding_dim = 50;
  Index num_aspects = 20;
  Index negatives = 20;
  std::uint64_t seed = 2026;
  double skew_threshold = 0.2;
  double init_stddev = 0.01;
  Index history_limit = 500;
  bool clip_embeddings = true;
  bool consistency_stop_gradient = false;
  AblationSwitches ablation;

  /// Throws Error("training", ...) naming the first offending field.
  void validate() const;
  ModelSwitches switches() const;
  ScoringPolicy scoring_policy() const;
  /// Aspect count actually used on a corpus: min(K, |C|).
  Index effective_aspects(const InteractionCorpus& corpus) const;
};

/// Epoch means of the unweighted branch and consistency losses. A missing
/// value means the term is disabled by the configuration.
struct LossRecord {
  Index epoch = 0;
  std::optional<double> conventional;
  std::optional<double> adaptive;
  std::optional<double> consistency;
};

struct TrainedModel {
  BranchParameters<double> conventional;
  BranchParameters<double> adaptive;
  AspectProfiles<double> profiles;
  std::vector<LossRecord> history;
};

using EpochCallback = std::function<void(Index epoch, const TrainedModel& state)>;

/// Bilateral training for `config.max_epochs` epochs. The diversity profile
/// decides the branch order. Deterministic for a fixed seed.
TrainedModel train(const InteractionCorpus& corpus, const DiversityProfile& profile, const TrainConfig& config,
                   const EpochCallback& on_epoch = {});

}  // namespace divrec
