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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "divrec/cli.hpp"

using namespace divrec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("divrec_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExperimentConfig toy_config(const fs::path& out) {
  ExperimentConfig c;
  c.dataset.path = fs::path(DIVREC_SOURCE_DIR) / "data/toy/interactions.tsv";
  c.dataset.categories = fs::path(DIVREC_SOURCE_DIR) / "data/toy/categories.tsv";
  c.output_dir = out;
  c.train.max_epochs = 2;
  c.train.embedding_dim = 8;
  c.train.negatives = 4;
  c.train.batch_size = 32;
  c.checkpoint_every_epoch = false;
  return c;
}

std::vector<std::string> lines_of(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("environment names") {
  CHECK(environment_name("train.batch_size") == "DIVREC_TRAIN_BATCH_SIZE");
  CHECK(environment_name("model") == "DIVREC_MODEL");
}

TEST_CASE("config file, environment and flags apply in order") {
  const auto dir = scratch("precedence");
  {
    std::ofstream f(dir / "run.cfg");
    f << "# comment\ntrain.batch_size=64\ntrain.margin=0.5\nmodel=cml\n";
  }
  ExperimentConfig c;
  apply_config_file(c, dir / "run.cfg");
  CHECK(c.train.batch_size == 64);
  ::setenv("DIVREC_TRAIN_BATCH_SIZE", "32", 1);
  apply_environment(c);
  ::unsetenv("DIVREC_TRAIN_BATCH_SIZE");
  CHECK(c.train.batch_size == 32);
  CHECK(c.train.margin == 0.5);
  set_config_value(c, "train.batch_size", "16");
  CHECK(c.train.batch_size == 16);
  CHECK(c.model == ModelKind::cml);

  CHECK_THROWS_AS(set_config_value(c, "train.nonsense", "1"), Error);
  CHECK_THROWS_AS(set_config_value(c, "train.batch_size", "many"), Error);
  {
    std::ofstream f(dir / "bad.cfg");
    f << "no equals sign\n";
  }
  CHECK_THROWS_AS(apply_config_file(c, dir / "bad.cfg"), Error);
  fs::remove_all(dir);
}

TEST_CASE("written configs read back to the same values") {
  ExperimentConfig c;
  set_config_value(c, "train.embedding_dim", "12");
  set_config_value(c, "eval.cutoffs", "3,7");
  set_config_value(c, "ablation.drop_attention", "true");
  std::ostringstream out;
  write_config(out, c);
  const auto dir = scratch("roundtrip");
  {
    std::ofstream f(dir / "config.txt");
    f << out.str();
  }
  ExperimentConfig back;
  apply_config_file(back, dir / "config.txt");
  std::ostringstream again;
  write_config(again, back);
  CHECK(again.str() == out.str());
  fs::remove_all(dir);
}

TEST_CASE("model kind names") {
  CHECK(parse_model_kind("cml+mmr") == ModelKind::cml_mmr);
  CHECK(to_string(ModelKind::taml) == "taml");
  CHECK_THROWS_AS(parse_model_kind("bpr"), Error);
}

TEST_CASE("end-to-end toy run writes every artifact") {
  const auto root = scratch("toy");
  const auto out = root / "run";
  auto c = toy_config(out);
  c.checkpoint_every_epoch = true;
  run_experiment(c);
  for (const char* name : {"corpus.tsv", "diversity_profile.tsv", "diversity_histogram.csv", "diversity_summary.csv",
                           "loss_history.csv", "metrics.csv", "per_user.tsv", "config.txt",
                           "checkpoints/conventional.ckpt", "checkpoints/adaptive.ckpt"}) {
    CHECK_MESSAGE(fs::exists(out / name), name);
  }
  const auto loss = lines_of(out / "loss_history.csv");
  REQUIRE(loss.size() == 3);
  CHECK(loss[0] == "epoch,l_b1,l_b2,l_3");
  const auto metrics = lines_of(out / "metrics.csv");
  CHECK(metrics.size() == 3);

  CHECK_THROWS_AS(run_experiment(c), Error);
  c.overwrite = true;
  run_experiment(c);
  CHECK(lines_of(out / "metrics.csv") == metrics);

  ExperimentConfig eval;
  eval.run_dir = out;
  eval.output_dir = root / "eval";
  run_evaluate(eval);
  CHECK(lines_of(root / "eval" / "metrics.csv") == metrics);

  std::ostringstream report;
  print_report(out, report);
  CHECK(report.str().find("recall") != std::string::npos);
  fs::remove_all(root);
}

TEST_CASE("baseline models run end to end") {
  const auto root = scratch("baselines");
  for (const char* model : {"cml", "cml+mmr"}) {
    auto c = toy_config(root / model);
    c.model = parse_model_kind(model);
    run_experiment(c);
    CHECK(lines_of(root / model / "metrics.csv").size() == 3);
    CHECK(lines_of(root / model / "loss_history.csv")[0] == "epoch,loss");
  }
  fs::remove_all(root);
}

TEST_CASE("a missing dataset leaves no output behind") {
  const auto root = scratch("missing");
  auto c = toy_config(root / "run");
  c.dataset.path = root / "absent.tsv";
  try {
    run_experiment(c);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("absent.tsv") != std::string::npos);
  }
  CHECK_FALSE(fs::exists(root / "run"));
  CHECK(fs::is_empty(root));
  fs::remove_all(root);
}

TEST_CASE("dimension sweep writes one report per value") {
  const auto root = scratch("sweep");
  auto c = toy_config(root / "sweep");
  c.train.max_epochs = 1;
  c.sweep_parameter = "dim";
  c.sweep_values = {10, 30, 50, 70, 90};
  run_sweep(c);
  for (Index d : c.sweep_values) CHECK(fs::exists(root / "sweep" / ("dim_" + std::to_string(d)) / "metrics.csv"));
  CHECK(lines_of(root / "sweep" / "sweep.csv").size() == 6);
  c.sweep_parameter = "depth";
  c.overwrite = true;
  CHECK_THROWS_AS(run_sweep(c), Error);
  fs::remove_all(root);
}

TEST_CASE("ablation suite writes seven rows with one default") {
  const auto root = scratch("ablation");
  auto c = toy_config(root / "ablation");
  c.train.max_epochs = 1;
  run_ablation_suite(c);
  const auto rows = lines_of(root / "ablation" / "ablation.csv");
  REQUIRE(rows.size() == 8);
  int defaults = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) defaults += rows[i].find(",1,") != std::string::npos;
  CHECK(defaults == 1);
  CHECK(ablation_variants(false).size() == 7);
  fs::remove_all(root);
}
