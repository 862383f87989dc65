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

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "divrec/cli.hpp"

namespace {

struct Command {
  CLI::App* app = nullptr;
  std::string config_file;
  std::map<std::string, std::string> flags;
};

Command add_command(CLI::App& root, const std::string& name, const std::string& description) {
  Command c;
  c.app = root.add_subcommand(name, description);
  return c;
}

void add_config_options(Command& c) {
  c.app->add_option("--config", c.config_file, "key=value config file")->check(CLI::ExistingFile);
  for (const auto& key : divrec::config_keys()) {
    c.app->add_option_function<std::string>(
        "--" + key.name, [&c, name = key.name](const std::string& v) { c.flags[name] = v; },
        key.help + " [env " + divrec::environment_name(key.name) + "]");
  }
}

divrec::ExperimentConfig resolve(const Command& c) {
  divrec::ExperimentConfig config;
  if (!c.config_file.empty()) divrec::apply_config_file(config, c.config_file);
  divrec::apply_environment(config);
  for (const auto& [key, value] : c.flags) divrec::set_config_value(config, key, value);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diversified recommendation experiments"};
  app.require_subcommand(1);
  // Commands are stored by address inside the option callbacks.
  std::map<std::string, Command> commands;
  const std::pair<const char*, const char*> specs[] = {
      {"ingest", "load a dataset, split it and write the corpus and diversity profile"},
      {"train", "ingest, train, evaluate and write every artifact"},
      {"evaluate", "re-evaluate the checkpoints of an existing run"},
      {"ablate", "run the seven ablation variants"},
      {"sweep", "grid over embedding dimension, negatives or aspects"},
      {"report", "print the result tables of a run directory"},
  };
  for (const auto& [name, description] : specs) {
    commands[name] = add_command(app, name, description);
    add_config_options(commands[name]);
  }
  std::string report_dir;
  commands["report"].app->add_option("run_dir", report_dir, "run directory");

  CLI11_PARSE(app, argc, argv);

  const divrec::Log log = [](const std::string& line) { std::cerr << line << '\n'; };
  try {
    for (auto& [name, command] : commands) {
      if (!command.app->parsed()) continue;
      auto config = resolve(command);
      if (name == "ingest") divrec::run_ingest(config, log);
      if (name == "train") divrec::run_experiment(config, log);
      if (name == "evaluate") divrec::run_evaluate(config, log);
      if (name == "ablate") divrec::run_ablation_suite(config, log);
      if (name == "sweep") divrec::run_sweep(config, log);
      if (name == "report") divrec::print_report(report_dir.empty() ? config.run_dir : std::filesystem::path(report_dir), std::cout);
    }
  } catch (const divrec::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
