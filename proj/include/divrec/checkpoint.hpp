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
#include <filesystem>

#include "divrec/model.hpp"

namespace divrec {

enum class CheckpointTag : std::uint32_t { conventional = 0, adaptive = 1, cml = 2 };

struct CheckpointHeader {
  std::uint32_t version = 1;
  std::int64_t num_users = 0;
  std::int64_t num_items = 0;
  std::int64_t dim = 0;
  std::int64_t num_aspects = 0;
  CheckpointTag tag = CheckpointTag::conventional;
  std::uint64_t seed = 0;
};

/// Binary layout: 8-byte magic, header fields in little-endian order, then
/// the user and item tables and (except for cml) the attention, aspect mean
/// and aspect std matrices, all as row-major doubles.
void write_checkpoint(const std::filesystem::path& path, const BranchParameters<double>& params, CheckpointTag tag,
                      std::uint64_t seed);
BranchParameters<double> read_checkpoint(const std::filesystem::path& path, CheckpointHeader* header = nullptr);

}  // namespace divrec
