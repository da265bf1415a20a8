#pragma once

#include "imaginenet/types.hpp"

#include <cmath>
#include <vector>

namespace imagine::nn {

template <typename S>
struct LossResult {
  S value = S(0);
  MatrixX<S> dlogits;  // d(value)/d(logits)
};

// Mean binary cross entropy with logits over all N*C entries, computed in
// log-sum-exp form so large |z| cannot overflow. Targets must be 0/1.
template <typename S>
LossResult<S> bce_loss(const MatrixX<S>& logits, const MatrixX<S>& targets) {
  require(logits.rows() == targets.rows() && logits.cols() == targets.cols(),
          "bce_loss: shape mismatch");
  const S count = static_cast<S>(logits.size());
  LossResult<S> out;
  out.dlogits.resize(logits.rows(), logits.cols());
  S total = S(0);
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
      const S z = logits(i, j);
      const S t = targets(i, j);
      if (t != S(0) && t != S(1)) throw ValidationError("bce_loss: target outside {0,1}");
      total += std::max(z, S(0)) - z * t + std::log1p(std::exp(-std::abs(z)));
      const S sig = S(1) / (S(1) + std::exp(-z));
      out.dlogits(i, j) = (sig - t) / count;
    }
  }
  out.value = total / count;
  return out;
}

// Mean softmax cross entropy over rows; loss_i = logsumexp(z_i) - z_i[y_i].
template <typename S>
LossResult<S> ce_loss(const MatrixX<S>& logits, const std::vector<int>& classes) {
  require(static_cast<Eigen::Index>(classes.size()) == logits.rows(), "ce_loss: batch mismatch");
  const S inv_n = S(1) / static_cast<S>(logits.rows());
  LossResult<S> out;
  out.dlogits.resize(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const int y = classes[i];
    require(y >= 0 && y < logits.cols(), "ce_loss: class index out of range");
    const S zmax = logits.row(i).maxCoeff();
    RowVectorX<S> e = (logits.row(i).array() - zmax).exp();
    const S sum = e.sum();
    out.value += (std::log(sum) + zmax - logits(i, y)) * inv_n;
    out.dlogits.row(i) = (e / sum) * inv_n;
    out.dlogits(i, y) -= inv_n;
  }
  return out;
}

// Per row: mean over j != y of max(0, margin - z_y + z_j); batch mean.
template <typename S>
LossResult<S> multi_margin_loss(const MatrixX<S>& logits, const std::vector<int>& classes,
                                S margin = S(1)) {
  require(static_cast<Eigen::Index>(classes.size()) == logits.rows(),
          "multi_margin_loss: batch mismatch");
  require(logits.cols() >= 2, "multi_margin_loss: needs at least two classes");
  const S scale = S(1) / (static_cast<S>(logits.cols() - 1) * static_cast<S>(logits.rows()));
  LossResult<S> out;
  out.dlogits = MatrixX<S>::Zero(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const int y = classes[i];
    require(y >= 0 && y < logits.cols(), "multi_margin_loss: class index out of range");
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
      if (j == y) continue;
      const S slack = margin - logits(i, y) + logits(i, j);
      if (slack > S(0)) {
        out.value += slack * scale;
        out.dlogits(i, j) += scale;
        out.dlogits(i, y) -= scale;
      }
    }
  }
  return out;
}

template <typename S>
MatrixX<S> sigmoid(const MatrixX<S>& z) {
  return (S(1) / (S(1) + (-z.array()).exp())).matrix();
}

}  // namespace imagine::nn
