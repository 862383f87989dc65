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

#include "divrec/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace divrec {
namespace {

constexpr const char* kModule = "corpus";
constexpr const char* kSnapshotMagic = "#divrec-corpus";
constexpr int kSnapshotVersion = 1;

std::uint64_t pair_key(UserId u, ItemId v) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) | static_cast<std::uint32_t>(v);
}

// Stable sort of interaction indices by (entity, timestamp).
template <typename Key>
std::vector<std::size_t> order_by(const std::vector<Interaction>& rows, Key key) {
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ka = key(rows[a]);
    const auto kb = key(rows[b]);
    if (ka != kb) return ka < kb;
    return rows[a].timestamp < rows[b].timestamp;
  });
  return order;
}

}  // namespace

InteractionCorpus::InteractionCorpus(Index num_users, Index num_items, Index num_categories,
                                     std::vector<CategoryId> category_of_item, std::vector<Interaction> train,
                                     std::vector<Interaction> test)
    : num_users_(num_users),
      num_items_(num_items),
      num_categories_(num_categories),
      category_of_item_(std::move(category_of_item)),
      train_(std::move(train)),
      test_(std::move(test)) {
  if (num_users < 0 || num_items < 0 || num_categories < 0) throw Error(kModule, "negative dimension");
  if (static_cast<Index>(category_of_item_.size()) != num_items) {
    throw Error(kModule, "category table has " + std::to_string(category_of_item_.size()) + " rows for " +
                             std::to_string(num_items) + " items");
  }
  for (std::size_t v = 0; v < category_of_item_.size(); ++v) {
    if (category_of_item_[v] < 0 || category_of_item_[v] >= num_categories) {
      throw Error(kModule, "item " + std::to_string(v) + " has category id out of range");
    }
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(train_.size() + test_.size());
  auto check = [&](const Interaction& x, const char* part) {
    if (x.user < 0 || x.user >= num_users || x.item < 0 || x.item >= num_items) {
      throw Error(kModule, std::string("out-of-range pair in ") + part + ": (" + std::to_string(x.user) + ", " +
                               std::to_string(x.item) + ")");
    }
    if (!seen.insert(pair_key(x.user, x.item)).second) {
      throw Error(kModule, std::string("duplicate or train/test-overlapping pair in ") + part + ": (" +
                               std::to_string(x.user) + ", " + std::to_string(x.item) + ")");
    }
  };
  for (const auto& x : train_) check(x, "train");
  for (const auto& x : test_) check(x, "test");
  build_indices();
}

void InteractionCorpus::build_indices() {
  const auto m = static_cast<std::size_t>(num_users_);
  const auto n = static_cast<std::size_t>(num_items_);

  user_offsets_.assign(m + 1, 0);
  item_offsets_.assign(n + 1, 0);
  for (const auto& x : train_) {
    ++user_offsets_[static_cast<std::size_t>(x.user) + 1];
    ++item_offsets_[static_cast<std::size_t>(x.item) + 1];
  }
  std::partial_sum(user_offsets_.begin(), user_offsets_.end(), user_offsets_.begin());
  std::partial_sum(item_offsets_.begin(), item_offsets_.end(), item_offsets_.begin());

  user_items_.resize(train_.size());
  item_users_.resize(train_.size());
  {
    auto cursor = user_offsets_;
    for (std::size_t i : order_by(train_, [](const Interaction& x) { return x.user; })) {
      user_items_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(train_[i].user)]++)] = train_[i].item;
    }
  }
  {
    auto cursor = item_offsets_;
    for (std::size_t i : order_by(train_, [](const Interaction& x) { return x.item; })) {
      item_users_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(train_[i].item)]++)] = train_[i].user;
    }
  }

  user_items_sorted_ = user_items_;
  user_cat_offsets_.assign(m + 1, 0);
  user_categories_.clear();
  for (std::size_t u = 0; u < m; ++u) {
    auto first = user_items_sorted_.begin() + user_offsets_[u];
    auto last = user_items_sorted_.begin() + user_offsets_[u + 1];
    std::sort(first, last);
    std::vector<CategoryId> cats;
    for (auto it = first; it != last; ++it) cats.push_back(category_of_item_[static_cast<std::size_t>(*it)]);
    std::sort(cats.begin(), cats.end());
    cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
    user_categories_.insert(user_categories_.end(), cats.begin(), cats.end());
    user_cat_offsets_[u + 1] = static_cast<Index>(user_categories_.size());
  }

  test_offsets_.assign(m + 1, 0);
  for (const auto& x : test_) ++test_offsets_[static_cast<std::size_t>(x.user) + 1];
  std::partial_sum(test_offsets_.begin(), test_offsets_.end(), test_offsets_.begin());
  test_items_.resize(test_.size());
  {
    auto cursor = test_offsets_;
    for (const auto& x : test_) {
      test_items_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(x.user)]++)] = x.item;
    }
    for (std::size_t u = 0; u < m; ++u) {
      std::sort(test_items_.begin() + test_offsets_[u], test_items_.begin() + test_offsets_[u + 1]);
    }
  }
}

std::span<const ItemId> InteractionCorpus::items_of_user(UserId u) const {
  const auto i = static_cast<std::size_t>(u);
  return {user_items_.data() + user_offsets_[i], static_cast<std::size_t>(user_offsets_[i + 1] - user_offsets_[i])};
}

std::span<const UserId> InteractionCorpus::users_of_item(ItemId v) const {
  const auto i = static_cast<std::size_t>(v);
  return {item_users_.data() + item_offsets_[i], static_cast<std::size_t>(item_offsets_[i + 1] - item_offsets_[i])};
}

std::span<const ItemId> InteractionCorpus::recent_items_of_user(UserId u, Index limit) const {
  auto all = items_of_user(u);
  if (limit <= 0 || static_cast<Index>(all.size()) <= limit) return all;
  return all.last(static_cast<std::size_t>(limit));
}

std::span<const UserId> InteractionCorpus::recent_users_of_item(ItemId v, Index limit) const {
  auto all = users_of_item(v);
  if (limit <= 0 || static_cast<Index>(all.size()) <= limit) return all;
  return all.last(static_cast<std::size_t>(limit));
}

std::span<const CategoryId> InteractionCorpus::categories_of_user(UserId u) const {
  const auto i = static_cast<std::size_t>(u);
  return {user_categories_.data() + user_cat_offsets_[i],
          static_cast<std::size_t>(user_cat_offsets_[i + 1] - user_cat_offsets_[i])};
}

std::span<const ItemId> InteractionCorpus::test_items_of_user(UserId u) const {
  const auto i = static_cast<std::size_t>(u);
  return {test_items_.data() + test_offsets_[i], static_cast<std::size_t>(test_offsets_[i + 1] - test_offsets_[i])};
}

bool InteractionCorpus::is_train_interaction(UserId u, ItemId v) const {
  const auto i = static_cast<std::size_t>(u);
  auto first = user_items_sorted_.begin() + user_offsets_[i];
  auto last = user_items_sorted_.begin() + user_offsets_[i + 1];
  return std::binary_search(first, last, v);
}

InteractionCorpus ingest(std::span<const RawInteraction> raw_log, std::span<const RawCategory> category_map,
                         Index min_core) {
  if (raw_log.empty()) throw Error(kModule, "empty interaction log");
  if (category_map.empty()) throw Error(kModule, "empty category map");

  std::unordered_map<std::string, std::string> category_token;
  category_token.reserve(category_map.size());
  for (const auto& row : category_map) category_token.try_emplace(row.item, row.category);

  // Unknown items are a hard error; list a bounded number of them.
  {
    std::vector<std::string> missing;
    std::unordered_set<std::string> reported;
    for (const auto& row : raw_log) {
      if (!category_token.contains(row.item) && reported.insert(row.item).second) missing.push_back(row.item);
    }
    if (!missing.empty()) {
      std::ostringstream msg;
      msg << missing.size() << " item(s) missing from category map:";
      for (std::size_t i = 0; i < missing.size() && i < 10; ++i) msg << ' ' << missing[i];
      if (missing.size() > 10) msg << " ...";
      throw Error(kModule, msg.str());
    }
  }

  // Provisional ids in first-appearance order, duplicates dropped (earliest
  // timestamp kept).
  std::unordered_map<std::string, UserId> user_id;
  std::unordered_map<std::string, ItemId> item_id;
  std::vector<std::string> user_tok, item_tok;
  std::vector<Interaction> rows;
  std::unordered_map<std::uint64_t, std::size_t> row_of_pair;
  rows.reserve(raw_log.size());
  for (const auto& r : raw_log) {
    auto [uit, unew] = user_id.try_emplace(r.user, static_cast<UserId>(user_tok.size()));
    if (unew) user_tok.push_back(r.user);
    auto [iit, inew] = item_id.try_emplace(r.item, static_cast<ItemId>(item_tok.size()));
    if (inew) item_tok.push_back(r.item);
    const auto key = pair_key(uit->second, iit->second);
    auto [pit, pnew] = row_of_pair.try_emplace(key, rows.size());
    if (pnew) {
      rows.push_back({uit->second, iit->second, r.timestamp});
    } else {
      auto& kept = rows[pit->second];
      kept.timestamp = std::min(kept.timestamp, r.timestamp);
    }
  }

  // Iterative k-core to a fixed point.
  std::vector<char> alive(rows.size(), 1);
  if (min_core > 1) {
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<Index> ucount(user_tok.size(), 0), icount(item_tok.size(), 0);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!alive[i]) continue;
        ++ucount[static_cast<std::size_t>(rows[i].user)];
        ++icount[static_cast<std::size_t>(rows[i].item)];
      }
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!alive[i]) continue;
        if (ucount[static_cast<std::size_t>(rows[i].user)] < min_core ||
            icount[static_cast<std::size_t>(rows[i].item)] < min_core) {
          alive[i] = 0;
          changed = true;
        }
      }
    }
  }

  // Final dense ids, again in first-appearance order over surviving rows.
  std::vector<UserId> new_user(user_tok.size(), -1);
  std::vector<ItemId> new_item(item_tok.size(), -1);
  std::unordered_map<std::string, CategoryId> cat_id;
  std::vector<std::string> out_users, out_items, out_cats;
  std::vector<CategoryId> category_of_item;
  std::vector<Interaction> train;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!alive[i]) continue;
    auto& nu = new_user[static_cast<std::size_t>(rows[i].user)];
    if (nu < 0) {
      nu = static_cast<UserId>(out_users.size());
      out_users.push_back(user_tok[static_cast<std::size_t>(rows[i].user)]);
    }
    auto& ni = new_item[static_cast<std::size_t>(rows[i].item)];
    if (ni < 0) {
      ni = static_cast<ItemId>(out_items.size());
      const auto& tok = item_tok[static_cast<std::size_t>(rows[i].item)];
      out_items.push_back(tok);
      const auto& ctok = category_token.at(tok);
      auto [cit, cnew] = cat_id.try_emplace(ctok, static_cast<CategoryId>(out_cats.size()));
      if (cnew) out_cats.push_back(ctok);
      category_of_item.push_back(cit->second);
    }
    train.push_back({nu, ni, rows[i].timestamp});
  }
  if (train.empty()) throw Error(kModule, "no interactions survive " + std::to_string(min_core) + "-core filtering");

  InteractionCorpus corpus(static_cast<Index>(out_users.size()), static_cast<Index>(out_items.size()),
                           static_cast<Index>(out_cats.size()), std::move(category_of_item), std::move(train), {});
  corpus.user_tokens = std::move(out_users);
  corpus.item_tokens = std::move(out_items);
  corpus.category_tokens = std::move(out_cats);
  return corpus;
}

InteractionCorpus split(const InteractionCorpus& corpus, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(kModule, "train fraction must lie in (0, 1), got " + std::to_string(train_fraction));
  }
  std::vector<std::vector<Interaction>> per_user(static_cast<std::size_t>(corpus.num_users()));
  for (const auto& x : corpus.train()) per_user[static_cast<std::size_t>(x.user)].push_back(x);
  for (const auto& x : corpus.test()) per_user[static_cast<std::size_t>(x.user)].push_back(x);

  Rng rng = make_rng(seed, SeedStream::split);
  std::vector<Interaction> train, test;
  for (auto& rows : per_user) {
    // Canonical order first so the shuffle depends only on content and seed.
    std::sort(rows.begin(), rows.end(), [](const Interaction& a, const Interaction& b) { return a.item < b.item; });
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto n = static_cast<Index>(rows.size());
    auto n_train = static_cast<Index>(std::ceil(train_fraction * static_cast<double>(n) - 1e-9));
    if (n >= 2) n_train = std::min(n_train, n - 1);
    n_train = std::clamp<Index>(n_train, 0, n);
    train.insert(train.end(), rows.begin(), rows.begin() + n_train);
    test.insert(test.end(), rows.begin() + n_train, rows.end());
  }
  InteractionCorpus out(corpus.num_users(), corpus.num_items(), corpus.num_categories(),
                        {corpus.item_categories().begin(), corpus.item_categories().end()}, std::move(train),
                        std::move(test));
  out.user_tokens = corpus.user_tokens;
  out.item_tokens = corpus.item_tokens;
  out.category_tokens = corpus.category_tokens;
  return out;
}

InteractionCorpus subsample_users(const InteractionCorpus& corpus, Index num_users, std::uint64_t seed) {
  if (num_users <= 0) throw Error(kModule, "subsample size must be positive");
  if (num_users >= corpus.num_users()) return corpus;
  std::vector<UserId> users(static_cast<std::size_t>(corpus.num_users()));
  std::iota(users.begin(), users.end(), UserId{0});
  Rng rng = make_rng(seed, SeedStream::subsample);
  std::shuffle(users.begin(), users.end(), rng);
  users.resize(static_cast<std::size_t>(num_users));
  std::sort(users.begin(), users.end());

  std::vector<UserId> new_user(static_cast<std::size_t>(corpus.num_users()), -1);
  for (std::size_t i = 0; i < users.size(); ++i) new_user[static_cast<std::size_t>(users[i])] = static_cast<UserId>(i);

  std::vector<ItemId> new_item(static_cast<std::size_t>(corpus.num_items()), -1);
  std::vector<CategoryId> cats;
  std::vector<std::string> item_tokens;
  auto remap = [&](std::span<const Interaction> rows) {
    std::vector<Interaction> out;
    for (const auto& x : rows) {
      const UserId u = new_user[static_cast<std::size_t>(x.user)];
      if (u < 0) continue;
      auto& v = new_item[static_cast<std::size_t>(x.item)];
      if (v < 0) {
        v = static_cast<ItemId>(cats.size());
        cats.push_back(corpus.category_of_item(x.item));
        if (!corpus.item_tokens.empty()) item_tokens.push_back(corpus.item_tokens[static_cast<std::size_t>(x.item)]);
      }
      out.push_back({u, v, x.timestamp});
    }
    return out;
  };
  auto train = remap(corpus.train());
  auto test = remap(corpus.test());
  const auto n_items = static_cast<Index>(cats.size());
  InteractionCorpus out(num_users, n_items, corpus.num_categories(), std::move(cats), std::move(train),
                        std::move(test));
  if (!corpus.user_tokens.empty()) {
    for (UserId u : users) out.user_tokens.push_back(corpus.user_tokens[static_cast<std::size_t>(u)]);
  }
  out.item_tokens = std::move(item_tokens);
  out.category_tokens = corpus.category_tokens;
  return out;
}

double user_diversity(const InteractionCorpus& corpus, UserId user) {
  const auto items = corpus.items_of_user(user).size();
  if (items == 0) throw Error(kModule, "user " + std::to_string(user) + " has no train interactions");
  return static_cast<double>(corpus.categories_of_user(user).size()) / static_cast<double>(items);
}

double skewness(std::span<const double> values) {
  if (values.size() < 2) throw Error(kModule, "skewness needs at least two values");
  const double n = static_cast<double>(values.size());
  double mean = 0.0, scale = 0.0;
  for (double x : values) {
    mean += x;
    scale = std::max(scale, std::abs(x));
  }
  mean /= n;
  double m2 = 0.0, m3 = 0.0;
  for (double x : values) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  const double sigma = std::sqrt(m2);
  if (sigma <= 1e-12 * std::max(1.0, scale)) throw Error(kModule, "skewness of a degenerate distribution (sigma = 0)");
  return m3 / (sigma * sigma * sigma);
}

DiversityProfile build_diversity_profile(const InteractionCorpus& corpus, double skew_threshold) {
  DiversityProfile profile;
  profile.threshold = skew_threshold;
  profile.diversity_of_user.assign(static_cast<std::size_t>(corpus.num_users()), 0.0);
  std::vector<double> active;
  for (UserId u = 0; u < corpus.num_users(); ++u) {
    if (corpus.items_of_user(u).empty()) continue;
    const double d = user_diversity(corpus, u);
    profile.diversity_of_user[static_cast<std::size_t>(u)] = d;
    active.push_back(d);
  }
  profile.skewness = skewness(active);
  profile.skewed_domain = profile.skewness >= skew_threshold;
  return profile;
}

std::vector<std::vector<Index>> user_category_counts(const InteractionCorpus& corpus) {
  std::vector<std::vector<Index>> counts(static_cast<std::size_t>(corpus.num_users()),
                                         std::vector<Index>(static_cast<std::size_t>(corpus.num_categories()), 0));
  for (const auto& x : corpus.train()) {
    ++counts[static_cast<std::size_t>(x.user)][static_cast<std::size_t>(corpus.category_of_item(x.item))];
  }
  return counts;
}

// Snapshot layout (tab separated, one section per '#' header):
//   #divrec-corpus <version>
//   #dims <users> <items> <categories>
//   #users / #items / #categories   token per line, in id order
//   #item_category                  category id per item
//   #train / #test                  user item timestamp
void write_snapshot(std::ostream& out, const InteractionCorpus& corpus) {
  out << kSnapshotMagic << '\t' << kSnapshotVersion << '\n';
  out << "#dims\t" << corpus.num_users() << '\t' << corpus.num_items() << '\t' << corpus.num_categories() << '\n';
  auto tokens = [&](const char* name, const std::vector<std::string>& toks) {
    out << '#' << name << '\t' << toks.size() << '\n';
    for (const auto& t : toks) out << t << '\n';
  };
  tokens("users", corpus.user_tokens);
  tokens("items", corpus.item_tokens);
  tokens("categories", corpus.category_tokens);
  out << "#item_category\t" << corpus.num_items() << '\n';
  for (CategoryId c : corpus.item_categories()) out << c << '\n';
  auto rows = [&](const char* name, std::span<const Interaction> xs) {
    out << '#' << name << '\t' << xs.size() << '\n';
    for (const auto& x : xs) out << x.user << '\t' << x.item << '\t' << x.timestamp << '\n';
  };
  rows("train", corpus.train());
  rows("test", corpus.test());
}

InteractionCorpus read_snapshot(std::istream& in) {
  std::string line;
  auto header = [&](const std::string& name) -> std::size_t {
    if (!std::getline(in, line) || line.rfind("#" + name + "\t", 0) != 0) {
      throw Error(kModule, "snapshot: expected section #" + name);
    }
    return static_cast<std::size_t>(std::stoull(line.substr(name.size() + 2)));
  };
  if (!std::getline(in, line)) throw Error(kModule, "snapshot: empty input");
  {
    std::istringstream ss(line);
    std::string magic;
    int version = 0;
    ss >> magic >> version;
    if (magic != kSnapshotMagic) throw Error(kModule, "snapshot: bad magic");
    if (version != kSnapshotVersion) throw Error(kModule, "snapshot: unsupported version " + std::to_string(version));
  }
  Index m = 0, n = 0, c = 0;
  {
    if (!std::getline(in, line) || line.rfind("#dims\t", 0) != 0) throw Error(kModule, "snapshot: missing #dims");
    std::istringstream ss(line.substr(6));
    ss >> m >> n >> c;
  }
  auto tokens = [&](const std::string& name) {
    std::vector<std::string> toks(header(name));
    for (auto& t : toks) {
      if (!std::getline(in, t)) throw Error(kModule, "snapshot: truncated #" + name);
    }
    return toks;
  };
  auto users = tokens("users");
  auto items = tokens("items");
  auto cats = tokens("categories");
  std::vector<CategoryId> category_of_item(header("item_category"));
  for (auto& x : category_of_item) {
    if (!std::getline(in, line)) throw Error(kModule, "snapshot: truncated #item_category");
    x = static_cast<CategoryId>(std::stol(line));
  }
  auto rows = [&](const std::string& name) {
    std::vector<Interaction> xs(header(name));
    for (auto& x : xs) {
      if (!std::getline(in, line)) throw Error(kModule, "snapshot: truncated #" + name);
      std::istringstream ss(line);
      ss >> x.user >> x.item >> x.timestamp;
      if (!ss) throw Error(kModule, "snapshot: malformed row in #" + name);
    }
    return xs;
  };
  auto train = rows("train");
  auto test = rows("test");
  InteractionCorpus corpus(m, n, c, std::move(category_of_item), std::move(train), std::move(test));
  corpus.user_tokens = std::move(users);
  corpus.item_tokens = std::move(items);
  corpus.category_tokens = std::move(cats);
  return corpus;
}

}  // namespace divrec
