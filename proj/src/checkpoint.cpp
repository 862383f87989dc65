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

#include "divrec/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>

namespace divrec {
namespace {

constexpr std::array<char, 8> kMagic = {'D', 'V', 'R', 'C', 'K', 'P', 'T', '\0'};

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& path) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) throw Error("checkpoint", "truncated file " + path);
  return value;
}

template <typename M>
void put_matrix(std::ostream& out, const M& m) {
  const RowMatrix<double> row_major = m;
  out.write(reinterpret_cast<const char*>(row_major.data()),
            static_cast<std::streamsize>(row_major.size() * static_cast<Index>(sizeof(double))));
}

template <typename M>
void get_matrix(std::istream& in, M& m, const std::string& path) {
  RowMatrix<double> row_major(m.rows(), m.cols());
  const auto bytes = static_cast<std::streamsize>(row_major.size() * static_cast<Index>(sizeof(double)));
  if (!in.read(reinterpret_cast<char*>(row_major.data()), bytes)) throw Error("checkpoint", "truncated file " + path);
  m = row_major;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const BranchParameters<double>& params, CheckpointTag tag,
                      std::uint64_t seed) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("checkpoint", "cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, 1);
  put<std::int64_t>(out, params.num_users());
  put<std::int64_t>(out, params.num_items());
  put<std::int64_t>(out, params.dim());
  put<std::int64_t>(out, tag == CheckpointTag::cml ? 0 : params.num_aspects());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(tag));
  put<std::uint64_t>(out, seed);
  put_matrix(out, params.user_embeddings);
  put_matrix(out, params.item_embeddings);
  if (tag != CheckpointTag::cml) {
    put_matrix(out, params.attention);
    put_matrix(out, params.aspect_mean);
    put_matrix(out, params.aspect_std);
  }
  if (!out) throw Error("checkpoint", "write failed for " + path.string());
}

BranchParameters<double> read_checkpoint(const std::filesystem::path& path, CheckpointHeader* header) {
  const std::string name = path.string();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("checkpoint", "cannot open " + name);
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw Error("checkpoint", name + " is not a checkpoint");
  CheckpointHeader h;
  h.version = get<std::uint32_t>(in, name);
  if (h.version != 1) throw Error("checkpoint", "unsupported checkpoint version " + std::to_string(h.version));
  h.num_users = get<std::int64_t>(in, name);
  h.num_items = get<std::int64_t>(in, name);
  h.dim = get<std::int64_t>(in, name);
  h.num_aspects = get<std::int64_t>(in, name);
  const auto tag = get<std::uint32_t>(in, name);
  if (tag > 2) throw Error("checkpoint", "unknown branch tag " + std::to_string(tag));
  h.tag = static_cast<CheckpointTag>(tag);
  h.seed = get<std::uint64_t>(in, name);
  if (h.num_users < 0 || h.num_items < 0 || h.dim < 1 || h.num_aspects < 0) {
    throw Error("checkpoint", "invalid dimensions in " + name);
  }
  auto params = BranchParameters<double>::zeros(h.num_users, h.num_items, h.dim, h.num_aspects);
  get_matrix(in, params.user_embeddings, name);
  get_matrix(in, params.item_embeddings, name);
  if (h.tag != CheckpointTag::cml) {
    get_matrix(in, params.attention, name);
    get_matrix(in, params.aspect_mean, name);
    get_matrix(in, params.aspect_std, name);
  }
  if (header) *header = h;
  return params;
}

}  // namespace divrec
