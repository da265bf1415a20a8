#pragma once

#include "imaginenet/types.hpp"

#include <functional>
#include <vector>

namespace imagine::nn {

// One tensor being checked: the live value the loss closure reads, and the
// analytic gradient the backward pass produced at the unperturbed point.
struct GradCheckEntry {
  Mat* value;
  const Mat* analytic;
};

inline double rel_err(double a, double b) {
  return std::abs(a - b) / (std::abs(a) + std::abs(b) + 1e-12);
}

// Central-difference check of d(loss)/d(entry) against the analytic gradient,
// entry by entry. Returns the max relative error across all coefficients.
inline double grad_check(const std::function<double()>& loss,
                         const std::vector<GradCheckEntry>& entries, double eps = 1e-5) {
  double worst = 0.0;
  for (const auto& e : entries) {
    require(e.value->rows() == e.analytic->rows() && e.value->cols() == e.analytic->cols(),
            "grad_check: analytic gradient shape mismatch");
    for (Eigen::Index i = 0; i < e.value->rows(); ++i) {
      for (Eigen::Index j = 0; j < e.value->cols(); ++j) {
        const double saved = (*e.value)(i, j);
        (*e.value)(i, j) = saved + eps;
        const double hi = loss();
        (*e.value)(i, j) = saved - eps;
        const double lo = loss();
        (*e.value)(i, j) = saved;
        const double fd = (hi - lo) / (2.0 * eps);
        worst = std::max(worst, rel_err(fd, (*e.analytic)(i, j)));
      }
    }
  }
  return worst;
}

}  // namespace imagine::nn
