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
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "divrec/corpus.hpp"

namespace divrec {

enum class DatasetFormat { movielens_1m, amazon_5core_json, canonical_tsv };

DatasetFormat parse_dataset_format(std::string_view name);
std::string_view to_string(DatasetFormat format);

struct RawDataset {
  std::vector<RawInteraction> interactions;
  std::vector<RawCategory> categories;
};

// Stream parsers. Each one appends to `out`.

/// "UserID::MovieID::Rating::Timestamp" lines.
void parse_movielens_ratings(std::istream& in, RawDataset& out);
/// "MovieID::Title::Genre1|Genre2|..." lines; the first genre is the category.
void parse_movielens_movies(std::istream& in, RawDataset& out);
/// One review object per line with reviewerID, asin, overall, unixReviewTime.
void parse_amazon_reviews(std::istream& in, RawDataset& out);
/// One metadata object per line with asin and categories (list of category
/// paths). Python-literal lines (single quotes) are accepted as well. The
/// category is the element at `category_depth` of the first path, clamped to
/// the path length; depth < 0 means the last element.
void parse_amazon_metadata(std::istream& in, RawDataset& out, int category_depth = -1);
/// "user<TAB>item<TAB>value<TAB>timestamp"; value and timestamp optional.
void parse_canonical_interactions(std::istream& in, RawDataset& out);
/// "item<TAB>category".
void parse_canonical_categories(std::istream& in, RawDataset& out);

void write_canonical_interactions(std::ostream& out, const std::vector<RawInteraction>& rows);
void write_canonical_categories(std::ostream& out, const std::vector<RawCategory>& rows);

/// Where a dataset lives on disk.
///  movielens-1m:      `path` is the directory with ratings.dat and movies.dat.
///  amazon-5core-json: `path` is the review file, `categories` the metadata file.
///  canonical-tsv:     `path` is the interaction file, `categories` the item table.
struct DatasetSource {
  DatasetFormat format = DatasetFormat::canonical_tsv;
  std::filesystem::path path;
  std::filesystem::path categories;
  int category_depth = -1;
};

/// Throws Error("datasets") when any referenced file is missing.
void check_dataset_paths(const DatasetSource& source);
RawDataset load_dataset(const DatasetSource& source);

}  // namespace divrec
