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

#include "divrec/datasets.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace divrec {
namespace {

constexpr const char* kModule = "datasets";

std::vector<std::string> split_on(const std::string& line, std::string_view sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(line.substr(start));
      return parts;
    }
    parts.push_back(line.substr(start, pos - start));
    start = pos + sep.size();
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Rewrites a Python dict literal into JSON: single-quoted strings become
// double-quoted, True/False/None become JSON literals.
std::string python_literal_to_json(const std::string& src) {
  std::string out;
  out.reserve(src.size() + 16);
  for (std::size_t i = 0; i < src.size(); ++i) {
    const char c = src[i];
    if (c == '\'' || c == '"') {
      const char quote = c;
      out.push_back('"');
      for (++i; i < src.size() && src[i] != quote; ++i) {
        if (src[i] == '\\' && i + 1 < src.size()) {
          const char next = src[++i];
          if (next == '\'') {
            out.push_back('\'');
          } else {
            out.push_back('\\');
            out.push_back(next);
          }
        } else if (src[i] == '"') {
          out += "\\\"";
        } else {
          out.push_back(src[i]);
        }
      }
      out.push_back('"');
    } else if (src.compare(i, 4, "True") == 0) {
      out += "true";
      i += 3;
    } else if (src.compare(i, 5, "False") == 0) {
      out += "false";
      i += 4;
    } else if (src.compare(i, 4, "None") == 0) {
      out += "null";
      i += 3;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

nlohmann::json parse_object_line(const std::string& line, std::size_t line_no) {
  auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded()) j = nlohmann::json::parse(python_literal_to_json(line), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(kModule, "line " + std::to_string(line_no) + ": not a JSON object");
  }
  return j;
}

std::ifstream open_or_throw(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(kModule, "cannot open " + p.string());
  return in;
}

}  // namespace

DatasetFormat parse_dataset_format(std::string_view name) {
  if (name == "movielens-1m") return DatasetFormat::movielens_1m;
  if (name == "amazon-5core-json") return DatasetFormat::amazon_5core_json;
  if (name == "canonical-tsv") return DatasetFormat::canonical_tsv;
  throw Error(kModule, "unknown dataset format '" + std::string(name) +
                           "' (expected movielens-1m, amazon-5core-json or canonical-tsv)");
}

std::string_view to_string(DatasetFormat format) {
  switch (format) {
    case DatasetFormat::movielens_1m:
      return "movielens-1m";
    case DatasetFormat::amazon_5core_json:
      return "amazon-5core-json";
    case DatasetFormat::canonical_tsv:
      return "canonical-tsv";
  }
  return "?";
}

void parse_movielens_ratings(std::istream& in, RawDataset& out) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_on(line, "::");
    if (f.size() < 3) throw Error(kModule, "ratings line " + std::to_string(line_no) + ": expected 4 fields");
    RawInteraction r{f[0], f[1], std::stod(f[2]), f.size() > 3 ? std::stoll(f[3]) : 0};
    out.interactions.push_back(std::move(r));
  }
}

void parse_movielens_movies(std::istream& in, RawDataset& out) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_on(line, "::");
    if (f.size() < 3) throw Error(kModule, "movies line " + std::to_string(line_no) + ": expected 3 fields");
    const auto genres = split_on(f.back(), "|");
    out.categories.push_back({f[0], genres.front()});
  }
}

void parse_amazon_reviews(std::istream& in, RawDataset& out) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto j = parse_object_line(line, line_no);
    if (!j.contains("reviewerID") || !j.contains("asin")) {
      throw Error(kModule, "review line " + std::to_string(line_no) + ": missing reviewerID/asin");
    }
    RawInteraction r;
    r.user = j["reviewerID"].get<std::string>();
    r.item = j["asin"].get<std::string>();
    r.value = j.value("overall", 1.0);
    r.timestamp = j.value("unixReviewTime", std::int64_t{0});
    out.interactions.push_back(std::move(r));
  }
}

void parse_amazon_metadata(std::istream& in, RawDataset& out, int category_depth) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto j = parse_object_line(line, line_no);
    if (!j.contains("asin")) continue;
    const auto asin = j["asin"].get<std::string>();
    std::vector<std::string> path;
    if (j.contains("categories") && j["categories"].is_array() && !j["categories"].empty()) {
      const auto& first = j["categories"][0];
      if (first.is_array()) {
        for (const auto& c : first) path.push_back(c.get<std::string>());
      } else if (first.is_string()) {
        for (const auto& c : j["categories"]) path.push_back(c.get<std::string>());
      }
    } else if (j.contains("category") && j["category"].is_array()) {
      for (const auto& c : j["category"]) path.push_back(c.get<std::string>());
    }
    if (path.empty()) continue;
    const auto last = static_cast<int>(path.size()) - 1;
    const int at = category_depth < 0 ? last : std::min(category_depth, last);
    out.categories.push_back({asin, path[static_cast<std::size_t>(at)]});
  }
}

void parse_canonical_interactions(std::istream& in, RawDataset& out) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty() || line.front() == '#') continue;
    const auto f = split_on(line, "\t");
    if (f.size() < 2) throw Error(kModule, "interaction line " + std::to_string(line_no) + ": expected >= 2 fields");
    RawInteraction r{f[0], f[1], 1.0, 0};
    if (f.size() > 2 && !f[2].empty()) r.value = std::stod(f[2]);
    if (f.size() > 3 && !f[3].empty()) r.timestamp = std::stoll(f[3]);
    out.interactions.push_back(std::move(r));
  }
}

void parse_canonical_categories(std::istream& in, RawDataset& out) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty() || line.front() == '#') continue;
    const auto f = split_on(line, "\t");
    if (f.size() < 2) throw Error(kModule, "category line " + std::to_string(line_no) + ": expected 2 fields");
    out.categories.push_back({f[0], f[1]});
  }
}

void write_canonical_interactions(std::ostream& out, const std::vector<RawInteraction>& rows) {
  for (const auto& r : rows) out << r.user << '\t' << r.item << '\t' << r.value << '\t' << r.timestamp << '\n';
}

void write_canonical_categories(std::ostream& out, const std::vector<RawCategory>& rows) {
  for (const auto& r : rows) out << r.item << '\t' << r.category << '\n';
}

void check_dataset_paths(const DatasetSource& source) {
  namespace fs = std::filesystem;
  auto need = [](const fs::path& p) {
    if (p.empty() || !fs::exists(p)) throw Error(kModule, "missing dataset file: " + p.string());
  };
  switch (source.format) {
    case DatasetFormat::movielens_1m:
      need(source.path / "ratings.dat");
      need(source.path / "movies.dat");
      break;
    case DatasetFormat::amazon_5core_json:
    case DatasetFormat::canonical_tsv:
      need(source.path);
      need(source.categories);
      break;
  }
}

RawDataset load_dataset(const DatasetSource& source) {
  check_dataset_paths(source);
  RawDataset data;
  switch (source.format) {
    case DatasetFormat::movielens_1m: {
      auto ratings = open_or_throw(source.path / "ratings.dat");
      parse_movielens_ratings(ratings, data);
      auto movies = open_or_throw(source.path / "movies.dat");
      parse_movielens_movies(movies, data);
      break;
    }
    case DatasetFormat::amazon_5core_json: {
      auto reviews = open_or_throw(source.path);
      parse_amazon_reviews(reviews, data);
      auto meta = open_or_throw(source.categories);
      parse_amazon_metadata(meta, data, source.category_depth);
      break;
    }
    case DatasetFormat::canonical_tsv: {
      auto log = open_or_throw(source.path);
      parse_canonical_interactions(log, data);
      auto cats = open_or_throw(source.categories);
      parse_canonical_categories(cats, data);
      break;
    }
  }
  return data;
}

}  // namespace divrec
