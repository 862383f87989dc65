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

#include <array>

namespace divrec::testing {

/// Published top-k results: recall, ILD and F1 at cutoffs 5 and 10.
struct ReferenceRow {
  const char* dataset;
  const char* model;
  double recall5, recall10, ild5, ild10, f1_5, f1_10;
};

inline constexpr std::array<ReferenceRow, 30> kReferenceRows = {{
    {"Music", "LFM", 0.1264, 0.1822, 0.5904, 0.6237, 0.2082, 0.2820},
    {"Music", "NCF", 0.1156, 0.1668, 0.6556, 0.6809, 0.1965, 0.2680},
    {"Music", "CML", 0.1579, 0.2204, 0.5871, 0.6366, 0.2489, 0.3274},
    {"Music", "TransCF", 0.1598, 0.2242, 0.5377, 0.5801, 0.2464, 0.3234},
    {"Music", "ENMF", 0.1560, 0.2179, 0.5960, 0.6418, 0.2473, 0.3253},
    {"Music", "MMR", 0.0690, 0.1029, 0.7557, 0.7822, 0.1265, 0.1819},
    {"Music", "DPP", 0.0771, 0.1528, 0.6769, 0.6800, 0.1384, 0.2495},
    {"Music", "PD-GAN", 0.1435, 0.2068, 0.6030, 0.6376, 0.2318, 0.3123},
    {"Music", "BGCF", 0.1340, 0.1934, 0.6023, 0.6246, 0.2192, 0.2953},
    {"Music", "Ours", 0.1685, 0.2327, 0.6412, 0.6893, 0.2669, 0.3479},
    {"Beauty", "LFM", 0.0505, 0.0781, 0.7452, 0.7510, 0.0946, 0.1415},
    {"Beauty", "NCF", 0.0399, 0.0654, 0.7498, 0.7719, 0.0758, 0.1206},
    {"Beauty", "CML", 0.0605, 0.0977, 0.7336, 0.7513, 0.1118, 0.1729},
    {"Beauty", "TransCF", 0.0621, 0.0970, 0.6934, 0.7130, 0.1140, 0.1708},
    {"Beauty", "ENMF", 0.0675, 0.1037, 0.7084, 0.7257, 0.1233, 0.1815},
    {"Beauty", "MMR", 0.0424, 0.0791, 0.7450, 0.7509, 0.0802, 0.1431},
    {"Beauty", "DPP", 0.0382, 0.0800, 0.7785, 0.7854, 0.0728, 0.1452},
    {"Beauty", "PD-GAN", 0.0580, 0.0899, 0.7309, 0.7487, 0.1075, 0.1605},
    {"Beauty", "BGCF", 0.0525, 0.0867, 0.7492, 0.7524, 0.0981, 0.1555},
    {"Beauty", "Ours", 0.0721, 0.1071, 0.7675, 0.7923, 0.1318, 0.1887},
    {"Movielens", "LFM", 0.0835, 0.1391, 0.7928, 0.8048, 0.1511, 0.2372},
    {"Movielens", "NCF", 0.0855, 0.1431, 0.7636, 0.7798, 0.1538, 0.2418},
    {"Movielens", "CML", 0.0953, 0.1578, 0.7868, 0.8012, 0.1700, 0.2637},
    {"Movielens", "TransCF", 0.0939, 0.1562, 0.7699, 0.7869, 0.1674, 0.2607},
    {"Movielens", "ENMF", 0.0928, 0.1546, 0.7737, 0.7863, 0.1657, 0.2584},
    {"Movielens", "MMR", 0.0435, 0.0798, 0.7950, 0.8033, 0.0825, 0.1452},
    {"Movielens", "DPP", 0.0594, 0.1071, 0.8157, 0.8131, 0.1107, 0.1893},
    {"Movielens", "PD-GAN", 0.0849, 0.1443, 0.7577, 0.7750, 0.1527, 0.2433},
    {"Movielens", "BGCF", 0.0744, 0.1257, 0.8022, 0.8117, 0.1362, 0.2177},
    {"Movielens", "Ours", 0.0975, 0.1613, 0.8672, 0.8735, 0.1753, 0.2723},
}};

}  // namespace divrec::testing
