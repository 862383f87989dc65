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
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace divrec {

using Index = std::ptrdiff_t;
using UserId = std::int32_t;
using ItemId = std::int32_t;
using CategoryId = std::int32_t;

using Rng = std::mt19937_64;

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Error raised by any library module. The message is prefixed with the
/// module name so failures surfacing at the CLI carry their origin.
class Error : public std::runtime_error {
 public:
  Error(const std::string& module, const std::string& message)
      : std::runtime_error(module + ": " + message), module_(module) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Named random streams derived from the single experiment seed.
enum class SeedStream : std::uint64_t {
  split = 1,
  init_conventional = 2,
  init_adaptive = 3,
  sampler_conventional = 4,
  sampler_adaptive = 5,
  noise = 6,
  cml_init = 7,
  cml_sampler = 8,
  subsample = 9,
};

/// Deterministic sub-seeding: each stream gets an independent generator
/// seeded from (seed, stream) through std::seed_seq.
inline Rng make_rng(std::uint64_t seed, SeedStream stream) {
  const auto s = static_cast<std::uint64_t>(stream);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(s), 0x9e3779b9u};
  return Rng(seq);
}

}  // namespace divrec
