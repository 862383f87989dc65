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

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "divrec/corpus.hpp"
#include "divrec/datasets.hpp"
#include "divrec/metrics.hpp"
#include "divrec/training.hpp"

namespace divrec {

enum class ModelKind { taml, cml, cml_mmr };

ModelKind parse_model_kind(const std::string& name);
std::string to_string(ModelKind kind);

struct ExperimentConfig {
  DatasetSource dataset;
  /// Pre-built corpus snapshot; when set, the raw dataset is not read.
  std::filesystem::path corpus_snapshot;
  Index min_core = 1;
  Index subsample_users = 0;  // 0 keeps every user
  double train_fraction = 0.8;
  std::filesystem::path output_dir;
  bool overwrite = false;
  /// Existing run directory read by `evaluate` and `report`.
  std::filesystem::path run_dir;
  TrainConfig train;
  ModelKind model = ModelKind::taml;
  double mmr_lambda = 0.8;
  std::vector<Index> cutoffs{5, 10};
  int threads = 1;
  bool checkpoint_every_epoch = true;
  std::string sweep_parameter;  // dim, negatives or aspects
  std::vector<Index> sweep_values;
};

/// One settable field. Keys are dotted, e.g. "train.batch_size".
struct ConfigKey {
  std::string name;
  std::string help;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::vector<ConfigKey>& config_keys();

/// "train.batch_size" -> "DIVREC_TRAIN_BATCH_SIZE".
std::string environment_name(const std::string& key);

void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Flat `key=value` lines; blank lines and lines starting with '#' are
/// skipped. Throws on malformed lines or unknown keys.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path);
/// Applies every DIVREC_* variable that names a known key.
void apply_environment(ExperimentConfig& config);
void write_config(std::ostream& out, const ExperimentConfig& config);

struct PreparedCorpus {
  InteractionCorpus full;   // after ingestion and subsampling, before the split
  InteractionCorpus split;  // train/test
  DiversityProfile full_profile;
  DiversityProfile profile;  // on the train split; drives training
};

PreparedCorpus prepare_corpus(const ExperimentConfig& config);

/// The seven ablation variants in table order, with the configuration each
/// one applies on top of the base config for a given domain.
struct AblationVariant {
  std::string name;
  AblationSwitches switches;
  bool is_default = false;
};
std::vector<AblationVariant> ablation_variants(bool skewed_domain);

using Log = std::function<void(const std::string&)>;

// Each command writes into a staging directory next to `output_dir` and
// renames it into place on success, so a failed run leaves no partial
// output behind.
void run_ingest(const ExperimentConfig& config, const Log& log = {});
/// ingest, split, profile, train and evaluate.
void run_experiment(const ExperimentConfig& config, const Log& log = {});
void run_evaluate(const ExperimentConfig& config, const Log& log = {});
void run_ablation_suite(const ExperimentConfig& config, const Log& log = {});
void run_sweep(const ExperimentConfig& config, const Log& log = {});
/// Prints the CSV tables found in `run_dir` as aligned text.
void print_report(const std::filesystem::path& run_dir, std::ostream& out);

}  // namespace divrec
