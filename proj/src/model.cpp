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

#include "divrec/model.hpp"

#include <Eigen/SVD>

namespace divrec {
namespace {

void softmax_rows(RowMatrix<double>& m) {
  for (Index r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    row.array() -= row.maxCoeff();
    row = row.array().exp().matrix();
    row /= row.sum();
  }
}

void normalize_rows(RowMatrix<double>& m) {
  for (Index r = 0; r < m.rows(); ++r) {
    const double s = m.row(r).sum();
    if (s > 0.0) m.row(r) /= s;
  }
}

}  // namespace

AspectProfiles<double> build_aspect_profiles(const InteractionCorpus& corpus, Index num_aspects,
                                             AspectReduction reduction) {
  const Index m = corpus.num_users();
  const Index n = corpus.num_items();
  const Index c = corpus.num_categories();
  if (num_aspects < 1) throw Error("model", "number of aspects must be >= 1");
  if (num_aspects > c) {
    throw Error("model", "number of aspects (" + std::to_string(num_aspects) + ") exceeds number of categories (" +
                             std::to_string(c) + ")");
  }
  if (reduction == AspectReduction::identity && num_aspects != c) {
    throw Error("model", "identity reduction requires K == |C|");
  }

  RowMatrix<double> user_counts = RowMatrix<double>::Zero(m, c);
  for (const auto& x : corpus.train()) user_counts(x.user, corpus.category_of_item(x.item)) += 1.0;

  // Audience profile: category mix of everything the item's users consumed.
  RowMatrix<double> item_freq = RowMatrix<double>::Zero(n, c);
  for (const auto& x : corpus.train()) item_freq.row(x.item) += user_counts.row(x.user);

  RowMatrix<double> user_freq = user_counts;
  normalize_rows(user_freq);
  normalize_rows(item_freq);

  AspectProfiles<double> out;
  if (reduction == AspectReduction::identity) {
    out.user_weights = user_freq;
    out.item_weights = item_freq;
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(user_freq, Eigen::ComputeFullV);
    Eigen::MatrixXd basis = svd.matrixV().leftCols(num_aspects);
    // Sign convention: the largest-magnitude entry of each basis vector is
    // positive, so the projection does not depend on solver internals.
    for (Index k = 0; k < basis.cols(); ++k) {
      Index arg = 0;
      basis.col(k).cwiseAbs().maxCoeff(&arg);
      if (basis(arg, k) < 0.0) basis.col(k) *= -1.0;
    }
    out.user_weights = user_freq * basis;
    out.item_weights = item_freq * basis;
  }
  softmax_rows(out.user_weights);
  softmax_rows(out.item_weights);
  return out;
}

}  // namespace divrec
