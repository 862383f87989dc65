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

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Core>

#include "divrec/common.hpp"

namespace divrec {

template <typename Scalar>
Scalar hinge(Scalar x) {
  return x > Scalar(0) ? x : Scalar(0);
}

/// Two-way pairwise margin loss for one positive and one negative:
/// [d(u,v) - d(u,v-) + m]_+ + [d(v,u) - d(v-,u) + m]_+.
inline double margin_loss(std::pair<double, double> positive, std::pair<double, double> negative, double margin) {
  return hinge(positive.first - negative.first + margin) + hinge(positive.second - negative.second + margin);
}

template <typename Derived>
Vector<typename Derived::Scalar> log_softmax(const Eigen::MatrixBase<Derived>& logits) {
  using S = typename Derived::Scalar;
  const S top = logits.maxCoeff();
  const S lse = top + std::log((logits.array() - top).exp().sum());
  return (logits.array() - lse).matrix();
}

template <typename Derived>
Vector<typename Derived::Scalar> softmax(const Eigen::MatrixBase<Derived>& logits) {
  return log_softmax(logits).array().exp().matrix();
}

/// KL(softmax(reference) || softmax(other)).
template <typename A, typename B>
typename A::Scalar softmax_kl(const Eigen::MatrixBase<A>& reference, const Eigen::MatrixBase<B>& other) {
  const auto lp = log_softmax(reference);
  const auto lq = log_softmax(other);
  return (lp.array().exp() * (lp - lq).array()).sum();
}

/// Consistency between two branches' translations in both directions, with
/// the conventional branch as the reference distribution.
template <typename Scalar>
Scalar consistency_loss(const Vector<Scalar>& conventional_fw, const Vector<Scalar>& conventional_bw,
                        const Vector<Scalar>& adaptive_fw, const Vector<Scalar>& adaptive_bw) {
  return softmax_kl(conventional_fw, adaptive_fw) + softmax_kl(conventional_bw, adaptive_bw);
}

}  // namespace divrec
