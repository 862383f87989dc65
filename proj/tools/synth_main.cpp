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

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "divrec/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write a synthetic category-structured interaction log as canonical TSV"};
  divrec::SyntheticOptions o;
  std::filesystem::path out_dir = ".";
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--users", o.users, "number of users");
  app.add_option("--items", o.items, "number of items");
  app.add_option("--categories", o.categories, "number of categories");
  app.add_option("--min-items", o.min_items_per_user, "minimum interactions per user");
  app.add_option("--mean-extra-items", o.mean_extra_items, "mean of the geometric extra interactions");
  app.add_option("--mean-extra-categories", o.mean_extra_categories, "mean of the geometric extra categories");
  app.add_option("--seed", o.seed, "generator seed");
  CLI11_PARSE(app, argc, argv);
  try {
    const auto data = divrec::make_synthetic(o);
    std::filesystem::create_directories(out_dir);
    std::ofstream interactions(out_dir / "interactions.tsv");
    std::ofstream categories(out_dir / "categories.tsv");
    interactions << "# user\titem\tvalue\ttimestamp\n";
    categories << "# item\tcategory\n";
    divrec::write_canonical_interactions(interactions, data.interactions);
    divrec::write_canonical_categories(categories, data.categories);
    if (!interactions || !categories) throw divrec::Error("synthetic", "write failed under " + out_dir.string());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
