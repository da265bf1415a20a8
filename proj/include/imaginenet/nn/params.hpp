#pragma once

#include "imaginenet/rng.hpp"
#include "imaginenet/types.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace imagine::nn {

struct ParamTensor {
  std::string name;
  Mat value;
  Mat grad;

  ParamTensor() = default;
  ParamTensor(std::string n, Eigen::Index rows, Eigen::Index cols)
      : name(std::move(n)), value(Mat::Zero(rows, cols)), grad(Mat::Zero(rows, cols)) {}

  void zero_grad() { grad.setZero(); }
  Vec row_view() const { return value.row(0); }
};

// uniform(-1/sqrt(fan_in), +1/sqrt(fan_in))
inline void init_uniform_fanin(ParamTensor& p, int fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (Eigen::Index i = 0; i < p.value.rows(); ++i)
    for (Eigen::Index j = 0; j < p.value.cols(); ++j)
      p.value(i, j) = rng.uniform(-bound, bound);
}

struct ScheduleStep {
  int epoch;
  double multiplier;
};

struct SgdOptions {
  double lr = 1e-3;
  double momentum = 0.0;
  std::vector<ScheduleStep> schedule;  // epochs strictly increasing
};

// Classical momentum SGD with a multiplicative step schedule. Gradients are
// zeroed after each step.
class Sgd {
 public:
  explicit Sgd(SgdOptions opt) : opt_(std::move(opt)) {
    require(opt_.lr > 0.0, "sgd: lr must be positive");
    for (std::size_t i = 1; i < opt_.schedule.size(); ++i)
      require(opt_.schedule[i].epoch > opt_.schedule[i - 1].epoch,
              "sgd: schedule epochs must be strictly increasing");
  }

  // base lr times every multiplier whose epoch has been reached
  double effective_lr(int epoch) const {
    double lr = opt_.lr;
    for (const auto& s : opt_.schedule)
      if (epoch >= s.epoch) lr *= s.multiplier;
    return lr;
  }

  void step(const std::vector<ParamTensor*>& params, int epoch) {
    if (velocity_.empty())
      for (const auto* p : params) velocity_.push_back(Mat::Zero(p->value.rows(), p->value.cols()));
    require(velocity_.size() == params.size(), "sgd: parameter list changed between steps");
    const double lr = effective_lr(epoch);
    for (std::size_t i = 0; i < params.size(); ++i) {
      ParamTensor& p = *params[i];
      if (opt_.momentum != 0.0) {
        velocity_[i] = opt_.momentum * velocity_[i] + p.grad;
        p.value -= lr * velocity_[i];
      } else {
        p.value -= lr * p.grad;
      }
      p.zero_grad();
    }
  }

  const SgdOptions& options() const { return opt_; }

 private:
  SgdOptions opt_;
  std::vector<Mat> velocity_;
};

}  // namespace imagine::nn
