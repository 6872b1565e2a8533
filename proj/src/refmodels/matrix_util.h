// Copyright 2026 The PaRCE Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Internal helpers shared by the reference model trainers.

#ifndef PARCE_SRC_REFMODELS_MATRIX_UTIL_H_
#define PARCE_SRC_REFMODELS_MATRIX_UTIL_H_

#include <cmath>
#include <span>

#include <Eigen/Dense>

#include "parce/refmodels/image.h"
#include "parce/refmodels/rng.h"

namespace parce::refmodels::internal {

inline Eigen::Map<const Eigen::VectorXd> AsVector(const ImageTensor& image) {
  return {image.pixels.data(), static_cast<Eigen::Index>(image.pixels.size())};
}

// Stacks images as columns.
inline Eigen::MatrixXd StackColumns(std::span<const ImageTensor* const> images) {
  const Eigen::Index dim = images.empty() ? 0 : images[0]->value_count();
  Eigen::MatrixXd out(dim, static_cast<Eigen::Index>(images.size()));
  for (size_t j = 0; j < images.size(); ++j) out.col(j) = AsVector(*images[j]);
  return out;
}

inline Eigen::MatrixXd RandomMatrix(Eigen::Index rows, Eigen::Index cols,
                                    double scale, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  // Column-major fill order is part of the determinism contract.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = scale * rng.Normal();
  }
  return m;
}

// Adam moment state for one parameter block.
template <typename T>
class AdamSlot {
 public:
  explicit AdamSlot(const T& like)
      : m_(T::Zero(like.rows(), like.cols())),
        v_(T::Zero(like.rows(), like.cols())) {}

  void Step(T& param, const T& grad, double lr, int t) {
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
    m_ = kBeta1 * m_ + (1.0 - kBeta1) * grad;
    v_ = kBeta2 * v_ + (1.0 - kBeta2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(kBeta1, t);
    const double c2 = 1.0 - std::pow(kBeta2, t);
    param.array() -=
        lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + kEps);
  }

 private:
  T m_;
  T v_;
};

inline bool AllFinite(const Eigen::MatrixXd& m) { return m.allFinite(); }

}  // namespace parce::refmodels::internal

#endif  // PARCE_SRC_REFMODELS_MATRIX_UTIL_H_
