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

#include "divrec/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "divrec/baselines.hpp"
#include "divrec/checkpoint.hpp"
#include "divrec/model.hpp"

namespace divrec {
namespace fs = std::filesystem;

namespace {

constexpr const char* kModule = "cli";

std::string trim(std::string s) {
  auto space = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), space));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), space).base(), s.end());
  return s;
}

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

Index parse_count(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return static_cast<Index>(v);
  } catch (const std::exception&) {
    throw Error(kModule, key + ": expected an integer, got '" + value + "'");
  }
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size() || value.front() == '-') throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(kModule, key + ": expected a nonnegative integer, got '" + value + "'");
  }
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(kModule, key + ": expected a number, got '" + value + "'");
  }
}

bool parse_flag(const std::string& key, const std::string& value) {
  std::string v = value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw Error(kModule, key + ": expected a boolean, got '" + value + "'");
}

std::vector<Index> parse_counts(const std::string& key, const std::string& value) {
  std::vector<Index> out;
  std::stringstream in(value);
  std::string part;
  while (std::getline(in, part, ',')) {
    part = trim(part);
    if (!part.empty()) out.push_back(parse_count(key, part));
  }
  return out;
}

std::string join(const std::vector<Index>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
  return out;
}

std::string show(bool b) { return b ? "true" : "false"; }

template <typename T, typename Parse>
ConfigKey field(std::string name, std::string help, T ExperimentConfig::*member, Parse parse) {
  return {name, std::move(help),
          [member, parse, name](ExperimentConfig& c, const std::string& v) { c.*member = parse(name, v); },
          [member](const ExperimentConfig& c) {
            if constexpr (std::is_same_v<T, bool>) {
              return show(c.*member);
            } else if constexpr (std::is_same_v<T, double>) {
              return number(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          }};
}

template <typename T, typename Parse>
ConfigKey train_field(std::string name, std::string help, T TrainConfig::*member, Parse parse) {
  return {name, std::move(help),
          [member, parse, name](ExperimentConfig& c, const std::string& v) { c.train.*member = parse(name, v); },
          [member](const ExperimentConfig& c) {
            if constexpr (std::is_same_v<T, bool>) {
              return show(c.train.*member);
            } else if constexpr (std::is_same_v<T, double>) {
              return number(c.train.*member);
            } else {
              return std::to_string(c.train.*member);
            }
          }};
}

ConfigKey ablation_field(std::string name, std::string help, bool AblationSwitches::*member) {
  return {name, std::move(help),
          [member, name](ExperimentConfig& c, const std::string& v) { c.train.ablation.*member = parse_flag(name, v); },
          [member](const ExperimentConfig& c) { return show(c.train.ablation.*member); }};
}

ConfigKey path_field(std::string name, std::string help, fs::path ExperimentConfig::*member) {
  return {name, std::move(help), [member](ExperimentConfig& c, const std::string& v) { c.*member = v; },
          [member](const ExperimentConfig& c) { return (c.*member).string(); }};
}

std::vector<ConfigKey> build_keys() {
  std::vector<ConfigKey> k;
  k.push_back({"dataset.path", "dataset file or directory",
               [](ExperimentConfig& c, const std::string& v) { c.dataset.path = v; },
               [](const ExperimentConfig& c) { return c.dataset.path.string(); }});
  k.push_back({"dataset.format", "movielens-1m, amazon-5core-json or canonical-tsv",
               [](ExperimentConfig& c, const std::string& v) { c.dataset.format = parse_dataset_format(v); },
               [](const ExperimentConfig& c) { return std::string(to_string(c.dataset.format)); }});
  k.push_back({"dataset.categories", "category file (amazon metadata or canonical item\\tcategory)",
               [](ExperimentConfig& c, const std::string& v) { c.dataset.categories = v; },
               [](const ExperimentConfig& c) { return c.dataset.categories.string(); }});
  k.push_back({"dataset.category_depth", "index into an amazon category path, -1 for the leaf",
               [](ExperimentConfig& c, const std::string& v) {
                 c.dataset.category_depth = static_cast<int>(parse_count("dataset.category_depth", v));
               },
               [](const ExperimentConfig& c) { return std::to_string(c.dataset.category_depth); }});
  k.push_back(field("dataset.min_core", "iterative k-core threshold", &ExperimentConfig::min_core, parse_count));
  k.push_back(field("dataset.subsample_users", "keep this many random users (0 keeps all)",
                    &ExperimentConfig::subsample_users, parse_count));
  k.push_back(path_field("input.corpus", "corpus snapshot to use instead of the raw dataset",
                         &ExperimentConfig::corpus_snapshot));
  k.push_back(path_field("input.run_dir", "existing run directory (evaluate, report)", &ExperimentConfig::run_dir));
  k.push_back(field("split.train_fraction", "per-user train share", &ExperimentConfig::train_fraction, parse_real));
  k.push_back(path_field("output.dir", "output directory", &ExperimentConfig::output_dir));
  k.push_back(field("output.overwrite", "replace an existing nonempty output directory", &ExperimentConfig::overwrite,
                    parse_flag));
  k.push_back(field("output.checkpoint_every_epoch", "write checkpoints after every epoch",
                    &ExperimentConfig::checkpoint_every_epoch, parse_flag));
  k.push_back({"model", "taml, cml or cml+mmr",
               [](ExperimentConfig& c, const std::string& v) { c.model = parse_model_kind(v); },
               [](const ExperimentConfig& c) { return to_string(c.model); }});
  k.push_back(field("mmr.lambda", "MMR relevance/diversity trade-off", &ExperimentConfig::mmr_lambda, parse_real));
  k.push_back({"eval.cutoffs", "comma-separated top-k cutoffs",
               [](ExperimentConfig& c, const std::string& v) { c.cutoffs = parse_counts("eval.cutoffs", v); },
               [](const ExperimentConfig& c) { return join(c.cutoffs); }});
  k.push_back({"eval.threads", "evaluation threads",
               [](ExperimentConfig& c, const std::string& v) { c.threads = static_cast<int>(parse_count("eval.threads", v)); },
               [](const ExperimentConfig& c) { return std::to_string(c.threads); }});
  k.push_back(train_field("train.batch_size", "triples per batch", &TrainConfig::batch_size, parse_count));
  k.push_back(train_field("train.max_epochs", "number of epochs", &TrainConfig::max_epochs, parse_count));
  k.push_back(train_field("train.learning_rate", "Adam learning rate", &TrainConfig::learning_rate, parse_real));
  k.push_back(train_field("train.margin", "hinge margin", &TrainConfig::margin, parse_real));
  k.push_back(train_field("train.embedding_dim", "embedding dimension", &TrainConfig::embedding_dim, parse_count));
  k.push_back(train_field("train.num_aspects", "aspect count (capped at the category count)",
                          &TrainConfig::num_aspects, parse_count));
  k.push_back(train_field("train.negatives", "negatives per positive", &TrainConfig::negatives, parse_count));
  k.push_back(train_field("train.seed", "experiment seed", &TrainConfig::seed, parse_seed));
  k.push_back(train_field("train.skew_threshold", "skewness at which the domain counts as skewed",
                          &TrainConfig::skew_threshold, parse_real));
  k.push_back(train_field("train.init_stddev", "initialization standard deviation", &TrainConfig::init_stddev,
                          parse_real));
  k.push_back(train_field("train.history_limit", "most recent history entries used by attention",
                          &TrainConfig::history_limit, parse_count));
  k.push_back(train_field("train.clip_embeddings", "clip embedding rows to the unit ball",
                          &TrainConfig::clip_embeddings, parse_flag));
  k.push_back(train_field("train.consistency_stop_gradient", "keep the consistency gradient out of the conventional branch",
                          &TrainConfig::consistency_stop_gradient, parse_flag));
  k.push_back(ablation_field("ablation.disable_adaptive_branch", "train the conventional branch only",
                             &AblationSwitches::disable_adaptive_branch));
  k.push_back(ablation_field("ablation.disable_conventional_branch", "train the adaptive branch only",
                             &AblationSwitches::disable_conventional_branch));
  k.push_back(ablation_field("ablation.reverse_order", "swap the branch weighting order",
                             &AblationSwitches::reverse_order));
  k.push_back(ablation_field("ablation.drop_attention", "remove the relevance relation",
                             &AblationSwitches::drop_attention));
  k.push_back(ablation_field("ablation.drop_diversity_relation", "remove the diversity relation",
                             &AblationSwitches::drop_diversity_relation));
  k.push_back(ablation_field("ablation.drop_backward_direction", "score the user-to-item direction only",
                             &AblationSwitches::drop_backward_direction));
  k.push_back(ablation_field("ablation.drop_consistency_loss", "remove the consistency loss",
                             &AblationSwitches::drop_consistency_loss));
  k.push_back({"sweep.parameter", "dim, negatives or aspects",
               [](ExperimentConfig& c, const std::string& v) { c.sweep_parameter = v; },
               [](const ExperimentConfig& c) { return c.sweep_parameter; }});
  k.push_back({"sweep.values", "comma-separated sweep values",
               [](ExperimentConfig& c, const std::string& v) { c.sweep_values = parse_counts("sweep.values", v); },
               [](const ExperimentConfig& c) { return join(c.sweep_values); }});
  return k;
}

/// Output directory written through a sibling staging directory.
class Staging {
 public:
  Staging(const fs::path& target, bool overwrite) : target_(target), overwrite_(overwrite) {
    if (target.empty()) throw Error(kModule, "output.dir is not set");
    if (fs::exists(target) && !(fs::is_directory(target) && fs::is_empty(target)) && !overwrite) {
      throw Error(kModule, "output directory " + target.string() + " exists and is not empty (set output.overwrite)");
    }
    const fs::path absolute = fs::absolute(target);
    fs::create_directories(absolute.parent_path());
    dir_ = absolute.parent_path() / ("." + absolute.filename().string() + ".staging");
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;
  ~Staging() {
    if (!committed_) {
      std::error_code ec;
      fs::remove_all(dir_, ec);
    }
  }

  const fs::path& dir() const { return dir_; }

  void commit() {
    if (fs::exists(target_)) {
      if (!overwrite_ && !fs::is_empty(target_)) throw Error(kModule, "output directory appeared during the run");
      fs::remove_all(target_);
    }
    fs::rename(dir_, target_);
    committed_ = true;
  }

 private:
  fs::path target_;
  fs::path dir_;
  bool overwrite_;
  bool committed_ = false;
};

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(kModule, "cannot write " + path.string());
  return out;
}

void write_corpus_outputs(const PreparedCorpus& data, const ExperimentConfig& config, const fs::path& dir) {
  {
    auto out = open_out(dir / "corpus.tsv");
    write_snapshot(out, data.split);
  }
  {
    auto out = open_out(dir / "diversity_profile.tsv");
    out << "user\ttrain_items\ttrain_categories\td_u\n";
    for (UserId u = 0; u < data.split.num_users(); ++u) {
      out << u << '\t' << data.split.items_of_user(u).size() << '\t' << data.split.categories_of_user(u).size()
          << '\t' << number(data.profile.diversity_of_user[static_cast<std::size_t>(u)]) << '\n';
    }
  }
  {
    constexpr int bins = 20;
    std::vector<Index> full(bins, 0), train(bins, 0);
    auto bin_of = [](double d) { return std::clamp(static_cast<int>(std::ceil(d * bins)) - 1, 0, bins - 1); };
    for (UserId u = 0; u < data.full.num_users(); ++u) {
      if (!data.full.items_of_user(u).empty()) ++full[static_cast<std::size_t>(bin_of(data.full_profile.diversity_of_user[static_cast<std::size_t>(u)]))];
    }
    for (UserId u = 0; u < data.split.num_users(); ++u) {
      if (!data.split.items_of_user(u).empty()) ++train[static_cast<std::size_t>(bin_of(data.profile.diversity_of_user[static_cast<std::size_t>(u)]))];
    }
    auto out = open_out(dir / "diversity_histogram.csv");
    out << "bin_low,bin_high,users_all,users_train\n";
    for (int b = 0; b < bins; ++b) {
      out << number(b / static_cast<double>(bins)) << ',' << number((b + 1) / static_cast<double>(bins)) << ','
          << full[static_cast<std::size_t>(b)] << ',' << train[static_cast<std::size_t>(b)] << '\n';
    }
  }
  {
    auto out = open_out(dir / "diversity_summary.csv");
    out << "scope,users,items,categories,interactions,skewness,skewed_domain,branch_order\n";
    auto row = [&](const char* scope, const InteractionCorpus& c, const DiversityProfile& p) {
      const bool skewed = p.skewed_domain != config.train.ablation.reverse_order;
      out << scope << ',' << c.num_users() << ',' << c.num_items() << ',' << c.num_categories() << ','
          << c.train().size() + c.test().size() << ',' << number(p.skewness) << ',' << show(p.skewed_domain) << ','
          << (skewed ? "conv->adp" : "adp->conv") << '\n';
    };
    row("all", data.full, data.full_profile);
    row("train", data.split, data.profile);
  }
}

void write_loss_history(const fs::path& path, const std::vector<LossRecord>& history) {
  auto out = open_out(path);
  out << "epoch,l_b1,l_b2,l_3\n";
  auto cell = [](const std::optional<double>& x) { return x ? number(*x) : std::string(); };
  for (const auto& r : history) {
    out << r.epoch << ',' << cell(r.conventional) << ',' << cell(r.adaptive) << ',' << cell(r.consistency) << '\n';
  }
}

void write_reports(const fs::path& dir, const MetricReport& report) {
  {
    auto out = open_out(dir / "metrics.csv");
    write_metric_csv(out, report);
  }
  auto out = open_out(dir / "per_user.tsv");
  write_per_user_tsv(out, report);
}

EvaluationOptions eval_options(const ExperimentConfig& config) {
  EvaluationOptions o;
  o.cutoffs = config.cutoffs;
  o.threads = config.threads;
  return o;
}

MetricReport evaluate_taml(const BranchParameters<double>& conventional, const BranchParameters<double>& adaptive,
                           const AspectProfiles<double>& profiles, const InteractionCorpus& corpus,
                           const DiversityProfile& profile, const ExperimentConfig& config) {
  const TwoBranchScorer<double> scorer(conventional, adaptive, profiles, corpus, profile,
                                       config.train.scoring_policy());
  return evaluate([&](UserId u, std::span<double> out) { scorer.score_all(u, out); }, corpus, profile,
                  eval_options(config));
}

MetricReport evaluate_cml(const CmlParameters& params, const InteractionCorpus& corpus,
                          const DiversityProfile& profile, const ExperimentConfig& config) {
  if (config.model == ModelKind::cml_mmr) {
    return evaluate_lists(
        [&](UserId u, Index k) {
          std::vector<double> scores(static_cast<std::size_t>(corpus.num_items()));
          params.score_all(u, scores);
          std::vector<ItemId> candidates;
          for (ItemId v = 0; v < corpus.num_items(); ++v)
            if (!corpus.is_train_interaction(u, v)) candidates.push_back(v);
          auto list = mmr_rerank(scores, corpus.item_categories(), config.mmr_lambda, k, candidates);
          list.user = u;
          return list;
        },
        corpus, profile, eval_options(config));
  }
  return evaluate([&](UserId u, std::span<double> out) { params.score_all(u, out); }, corpus, profile,
                  eval_options(config));
}

/// Trains the configured model on `data`, writes checkpoints, loss history
/// and metric files into `dir`, and returns the report.
MetricReport train_and_evaluate(const PreparedCorpus& data, const ExperimentConfig& config, const fs::path& dir,
                                const Log& log) {
  fs::create_directories(dir / "checkpoints");
  const auto seed = config.train.seed;
  MetricReport report;
  if (config.model == ModelKind::taml) {
    const EpochCallback on_epoch = [&](Index epoch, const TrainedModel& state) {
      const auto& r = state.history.back();
      if (log) {
        std::string line = "epoch " + std::to_string(epoch);
        if (r.conventional) line += " L_B1=" + number(*r.conventional);
        if (r.adaptive) line += " L_B2=" + number(*r.adaptive);
        if (r.consistency) line += " L_3=" + number(*r.consistency);
        log(line);
      }
      if (config.checkpoint_every_epoch) {
        char name[32];
        std::snprintf(name, sizeof name, "epoch_%03lld", static_cast<long long>(epoch));
        write_checkpoint(dir / "checkpoints" / (std::string(name) + "_conventional.ckpt"), state.conventional,
                         CheckpointTag::conventional, seed);
        write_checkpoint(dir / "checkpoints" / (std::string(name) + "_adaptive.ckpt"), state.adaptive,
                         CheckpointTag::adaptive, seed);
      }
    };
    const auto model = train(data.split, data.profile, config.train, on_epoch);
    write_checkpoint(dir / "checkpoints" / "conventional.ckpt", model.conventional, CheckpointTag::conventional, seed);
    write_checkpoint(dir / "checkpoints" / "adaptive.ckpt", model.adaptive, CheckpointTag::adaptive, seed);
    write_loss_history(dir / "loss_history.csv", model.history);
    report = evaluate_taml(model.conventional, model.adaptive, model.profiles, data.split, data.profile, config);
  } else {
    const auto model = train_cml(data.split, config.train);
    write_checkpoint(dir / "checkpoints" / "cml.ckpt", model.params.as_branch(), CheckpointTag::cml, seed);
    auto out = open_out(dir / "loss_history.csv");
    out << "epoch,loss\n";
    for (std::size_t e = 0; e < model.loss_history.size(); ++e) out << e + 1 << ',' << number(model.loss_history[e]) << '\n';
    if (log) log("cml final loss " + number(model.loss_history.back()));
    report = evaluate_cml(model.params, data.split, data.profile, config);
  }
  write_reports(dir, report);
  {
    auto out = open_out(dir / "config.txt");
    write_config(out, config);
  }
  return report;
}

void check_inputs(const ExperimentConfig& config) {
  if (!config.corpus_snapshot.empty()) {
    if (!fs::exists(config.corpus_snapshot)) {
      throw Error(kModule, "missing corpus snapshot: " + config.corpus_snapshot.string());
    }
    return;
  }
  check_dataset_paths(config.dataset);
}

std::vector<std::string> metric_columns(const std::vector<Index>& cutoffs) {
  std::vector<std::string> cols;
  for (auto k : cutoffs) {
    for (const char* m : {"recall", "ndcg", "ild", "cc", "f1"}) cols.push_back(std::string(m) + "@" + std::to_string(k));
  }
  return cols;
}

std::string metric_cells(const MetricReport& report) {
  std::string out;
  for (const auto& c : report.cutoffs) {
    for (double x : {c.recall, c.ndcg, c.ild, c.cc, c.f1}) out += "," + number(x);
  }
  return out;
}

}  // namespace

ModelKind parse_model_kind(const std::string& name) {
  if (name == "taml") return ModelKind::taml;
  if (name == "cml") return ModelKind::cml;
  if (name == "cml+mmr") return ModelKind::cml_mmr;
  throw Error(kModule, "unknown model '" + name + "' (expected taml, cml or cml+mmr)");
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::taml:
      return "taml";
    case ModelKind::cml:
      return "cml";
    case ModelKind::cml_mmr:
      return "cml+mmr";
  }
  return "?";
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = build_keys();
  return keys;
}

std::string environment_name(const std::string& key) {
  std::string out = "DIVREC_";
  for (char c : key) out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& value) {
  for (const auto& k : config_keys()) {
    if (k.name == key) {
      k.set(config, trim(value));
      return;
    }
  }
  throw Error(kModule, "unknown config key '" + key + "'");
}

std::map<std::string, std::string> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(kModule, "cannot read config file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(kModule, path.string() + ":" + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = trim(line.substr(0, eq));
    const bool known = std::any_of(config_keys().begin(), config_keys().end(),
                                   [&](const ConfigKey& k) { return k.name == key; });
    if (!known) throw Error(kModule, path.string() + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_config_file(ExperimentConfig& config, const fs::path& path) {
  for (const auto& [key, value] : read_config_file(path)) set_config_value(config, key, value);
}

void apply_environment(ExperimentConfig& config) {
  for (const auto& k : config_keys()) {
    if (const char* v = std::getenv(environment_name(k.name).c_str())) k.set(config, trim(v));
  }
}

void write_config(std::ostream& out, const ExperimentConfig& config) {
  for (const auto& k : config_keys()) out << k.name << '=' << k.get(config) << '\n';
}

PreparedCorpus prepare_corpus(const ExperimentConfig& config) {
  check_inputs(config);
  PreparedCorpus data;
  if (!config.corpus_snapshot.empty()) {
    std::ifstream in(config.corpus_snapshot);
    data.split = read_snapshot(in);
    std::vector<Interaction> all(data.split.train().begin(), data.split.train().end());
    all.insert(all.end(), data.split.test().begin(), data.split.test().end());
    std::vector<CategoryId> cats(data.split.item_categories().begin(), data.split.item_categories().end());
    data.full = InteractionCorpus(data.split.num_users(), data.split.num_items(), data.split.num_categories(),
                                  std::move(cats), std::move(all), {});
  } else {
    const auto raw = load_dataset(config.dataset);
    data.full = ingest(raw.interactions, raw.categories, config.min_core);
    if (config.subsample_users > 0) data.full = subsample_users(data.full, config.subsample_users, config.train.seed);
    data.split = split(data.full, config.train_fraction, config.train.seed);
  }
  data.full_profile = build_diversity_profile(data.full, config.train.skew_threshold);
  data.profile = build_diversity_profile(data.split, config.train.skew_threshold);
  return data;
}

std::vector<AblationVariant> ablation_variants(bool skewed_domain) {
  std::vector<AblationVariant> v(7);
  v[0].name = "TAML_conv->adp";
  v[0].switches.reverse_order = !skewed_domain;
  v[0].is_default = skewed_domain;
  v[1].name = "TAML_adp->conv";
  v[1].switches.reverse_order = skewed_domain;
  v[1].is_default = !skewed_domain;
  v[2].name = "TAML_conv-only";
  v[2].switches.disable_adaptive_branch = true;
  v[3].name = "TAML_adp-only";
  v[3].switches.disable_conventional_branch = true;
  v[4].name = "TAML_w/o-dist";
  v[4].switches.drop_diversity_relation = true;
  v[5].name = "TAML_w/o-attn";
  v[5].switches.drop_attention = true;
  v[6].name = "TAML_w/o-twoway";
  v[6].switches.drop_backward_direction = true;
  return v;
}

void run_ingest(const ExperimentConfig& config, const Log& log) {
  const auto data = prepare_corpus(config);
  Staging staging(config.output_dir, config.overwrite);
  write_corpus_outputs(data, config, staging.dir());
  {
    auto out = open_out(staging.dir() / "config.txt");
    write_config(out, config);
  }
  staging.commit();
  if (log) {
    log("users=" + std::to_string(data.full.num_users()) + " items=" + std::to_string(data.full.num_items()) +
        " categories=" + std::to_string(data.full.num_categories()) + " skewness=" + number(data.full_profile.skewness));
  }
}

void run_experiment(const ExperimentConfig& config, const Log& log) {
  config.train.validate();
  const auto data = prepare_corpus(config);
  Staging staging(config.output_dir, config.overwrite);
  write_corpus_outputs(data, config, staging.dir());
  const auto report = train_and_evaluate(data, config, staging.dir(), log);
  staging.commit();
  if (log) {
    for (const auto& c : report.cutoffs) {
      log("@" + std::to_string(c.k) + " recall=" + number(c.recall) + " ndcg=" + number(c.ndcg) +
          " ild=" + number(c.ild) + " cc=" + number(c.cc) + " f1=" + number(c.f1));
    }
  }
}

void run_evaluate(const ExperimentConfig& config, const Log& log) {
  if (config.run_dir.empty()) throw Error(kModule, "evaluate needs input.run_dir");
  const fs::path run = config.run_dir;
  for (const char* f : {"config.txt", "corpus.tsv"}) {
    if (!fs::exists(run / f)) throw Error(kModule, "missing " + (run / f).string());
  }
  ExperimentConfig base;
  apply_config_file(base, run / "config.txt");
  base.cutoffs = config.cutoffs;
  base.threads = config.threads;
  base.mmr_lambda = config.mmr_lambda;
  if (config.model == ModelKind::cml_mmr && base.model == ModelKind::cml) base.model = ModelKind::cml_mmr;

  std::ifstream in(run / "corpus.tsv");
  const auto corpus = read_snapshot(in);
  const auto profile = build_diversity_profile(corpus, base.train.skew_threshold);
  MetricReport report;
  if (base.model == ModelKind::taml) {
    CheckpointHeader header;
    const auto conventional = read_checkpoint(run / "checkpoints" / "conventional.ckpt", &header);
    const auto adaptive = read_checkpoint(run / "checkpoints" / "adaptive.ckpt");
    if (header.num_users != corpus.num_users() || header.num_items != corpus.num_items()) {
      throw Error(kModule, "checkpoint shape does not match the corpus snapshot");
    }
    const auto profiles = build_aspect_profiles(corpus, static_cast<Index>(header.num_aspects));
    report = evaluate_taml(conventional, adaptive, profiles, corpus, profile, base);
  } else {
    const auto params = CmlParameters::from_branch(read_checkpoint(run / "checkpoints" / "cml.ckpt"));
    report = evaluate_cml(params, corpus, profile, base);
  }
  Staging staging(config.output_dir, config.overwrite);
  write_reports(staging.dir(), report);
  staging.commit();
  if (log) log("evaluated " + std::to_string(report.cutoffs.front().users) + " users");
}

void run_ablation_suite(const ExperimentConfig& config, const Log& log) {
  config.train.validate();
  if (config.model != ModelKind::taml) throw Error(kModule, "ablation runs need model=taml");
  const auto data = prepare_corpus(config);
  Staging staging(config.output_dir, config.overwrite);
  write_corpus_outputs(data, config, staging.dir());
  std::ofstream table = open_out(staging.dir() / "ablation.csv");
  table << "variant,default";
  for (const auto& c : metric_columns(config.cutoffs)) table << ',' << c;
  table << '\n';
  for (const auto& variant : ablation_variants(data.profile.skewed_domain)) {
    if (log) log("variant " + variant.name);
    ExperimentConfig run = config;
    run.train.ablation = variant.switches;
    run.checkpoint_every_epoch = false;
    std::string slug;
    for (char c : variant.name.substr(5)) slug += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    const auto report = train_and_evaluate(data, run, staging.dir() / slug, log);
    table << variant.name << ',' << (variant.is_default ? 1 : 0) << metric_cells(report) << '\n';
  }
  table.close();
  {
    auto out = open_out(staging.dir() / "config.txt");
    write_config(out, config);
  }
  staging.commit();
}

void run_sweep(const ExperimentConfig& config, const Log& log) {
  const auto& p = config.sweep_parameter;
  if (p != "dim" && p != "negatives" && p != "aspects") {
    throw Error(kModule, "sweep.parameter must be dim, negatives or aspects");
  }
  if (config.sweep_values.empty()) throw Error(kModule, "sweep.values is empty");
  config.train.validate();
  const auto data = prepare_corpus(config);
  Staging staging(config.output_dir, config.overwrite);
  write_corpus_outputs(data, config, staging.dir());
  std::ofstream table = open_out(staging.dir() / "sweep.csv");
  table << "parameter,value";
  for (const auto& c : metric_columns(config.cutoffs)) table << ',' << c;
  table << '\n';
  for (const Index value : config.sweep_values) {
    ExperimentConfig run = config;
    run.checkpoint_every_epoch = false;
    if (p == "dim") run.train.embedding_dim = value;
    if (p == "negatives") run.train.negatives = value;
    if (p == "aspects") run.train.num_aspects = value;
    run.train.validate();
    if (log) log(p + "=" + std::to_string(value));
    const auto report = train_and_evaluate(data, run, staging.dir() / (p + "_" + std::to_string(value)), log);
    table << p << ',' << value << metric_cells(report) << '\n';
  }
  table.close();
  {
    auto out = open_out(staging.dir() / "config.txt");
    write_config(out, config);
  }
  staging.commit();
}

void print_report(const fs::path& run_dir, std::ostream& out) {
  if (!fs::is_directory(run_dir)) throw Error(kModule, "not a run directory: " + run_dir.string());
  bool any = false;
  for (const char* name : {"diversity_summary.csv", "loss_history.csv", "metrics.csv", "ablation.csv", "sweep.csv"}) {
    std::ifstream in(run_dir / name);
    if (!in) continue;
    any = true;
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      if (!line.empty() && line.back() == ',') cells.emplace_back();
      rows.push_back(std::move(cells));
    }
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
      if (width.size() < r.size()) width.resize(r.size(), 0);
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    out << "== " << name << " ==\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        out << r[i];
        if (i + 1 < r.size()) out << std::string(width[i] - r[i].size() + 2, ' ');
      }
      out << '\n';
    }
    out << '\n';
  }
  if (!any) throw Error(kModule, "no result tables in " + run_dir.string());
}

}  // namespace divrec
