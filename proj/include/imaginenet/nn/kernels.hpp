#pragma once

#include "imaginenet/types.hpp"

#include <cmath>

// Dense kernels with hand-written backward passes. The model is a fixed
// shallow pipeline, so per-op gradients are spelled out instead of going
// through a graph; every backward here is covered by finite-difference
// checks in the test suite.
namespace imagine::nn {

template <typename S>
void check_finite(const MatrixX<S>& m, const char* what) {
  if (!m.allFinite()) throw ValidationError(std::string(what) + ": non-finite values");
}

// ---- linear: y = x W + b ----------------------------------------------

template <typename S>
MatrixX<S> linear(const MatrixX<S>& x, const MatrixX<S>& w, const RowVectorX<S>& b) {
  require(x.cols() == w.rows() && w.cols() == b.cols(), "linear: shape mismatch");
  MatrixX<S> y = (x * w).rowwise() + b;
  check_finite(y, "linear");
  return y;
}

template <typename S>
struct LinearGrads {
  MatrixX<S> dx, dw;
  RowVectorX<S> db;
};

template <typename S>
LinearGrads<S> linear_backward(const MatrixX<S>& x, const MatrixX<S>& w, const MatrixX<S>& dy) {
  LinearGrads<S> g;
  g.dw = x.transpose() * dy;
  g.db = dy.colwise().sum();
  g.dx = dy * w.transpose();
  return g;
}

// ---- softmax over rows --------------------------------------------------

template <typename S>
MatrixX<S> softmax_rows(const MatrixX<S>& x) {
  MatrixX<S> y(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    auto row = x.row(i);
    RowVectorX<S> e = (row.array() - row.maxCoeff()).exp();
    y.row(i) = e / e.sum();
  }
  return y;
}

// y is the softmax output; dx_i = y_i * (dy_i - <dy_i, y_i>)
template <typename S>
MatrixX<S> softmax_rows_backward(const MatrixX<S>& y, const MatrixX<S>& dy) {
  MatrixX<S> dx(y.rows(), y.cols());
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    S dot = y.row(i).dot(dy.row(i));
    dx.row(i) = y.row(i).array() * (dy.row(i).array() - dot);
  }
  return dx;
}

// ---- layer normalization -------------------------------------------------

template <typename S>
struct LayerNormCache {
  MatrixX<S> xhat;                           // normalized pre-affine rows
  Eigen::Matrix<S, Eigen::Dynamic, 1> inv_std;  // per row
};

inline constexpr double kLayerNormEps = 1e-5;

template <typename S>
MatrixX<S> layer_norm(const MatrixX<S>& x, const RowVectorX<S>& gain, const RowVectorX<S>& bias,
                      LayerNormCache<S>* cache = nullptr) {
  require(x.cols() >= 2, "layer_norm: needs at least two columns");
  require(gain.cols() == x.cols() && bias.cols() == x.cols(), "layer_norm: affine shape mismatch");
  MatrixX<S> xhat(x.rows(), x.cols());
  Eigen::Matrix<S, Eigen::Dynamic, 1> inv_std(x.rows());
  const S n = static_cast<S>(x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    S mu = x.row(i).mean();
    S var = (x.row(i).array() - mu).square().sum() / n;
    inv_std(i) = S(1) / std::sqrt(var + static_cast<S>(kLayerNormEps));
    xhat.row(i) = (x.row(i).array() - mu) * inv_std(i);
  }
  MatrixX<S> y = (xhat.array().rowwise() * gain.array()).rowwise() + bias.array();
  if (cache) {
    cache->xhat = std::move(xhat);
    cache->inv_std = std::move(inv_std);
  }
  check_finite(y, "layer_norm");
  return y;
}

template <typename S>
struct LayerNormGrads {
  MatrixX<S> dx;
  RowVectorX<S> dgain, dbias;
};

template <typename S>
LayerNormGrads<S> layer_norm_backward(const LayerNormCache<S>& cache, const RowVectorX<S>& gain,
                                      const MatrixX<S>& dy) {
  LayerNormGrads<S> g;
  g.dgain = (dy.array() * cache.xhat.array()).colwise().sum();
  g.dbias = dy.colwise().sum();
  MatrixX<S> dxhat = dy.array().rowwise() * gain.array();
  g.dx.resize(dy.rows(), dy.cols());
  for (Eigen::Index i = 0; i < dy.rows(); ++i) {
    S m1 = dxhat.row(i).mean();
    S m2 = (dxhat.row(i).array() * cache.xhat.row(i).array()).mean();
    g.dx.row(i) =
        cache.inv_std(i) * (dxhat.row(i).array() - m1 - cache.xhat.row(i).array() * m2);
  }
  return g;
}

// ---- single-head scaled dot-product attention ----------------------------
//
// softmax(Q K^T / sqrt(d)) V with the raw inputs as Q/K/V; no projections.

template <typename S>
struct AttentionCache {
  MatrixX<S> attn;  // row-stochastic weights
};

template <typename S>
MatrixX<S> scaled_dot_attention(const MatrixX<S>& q, const MatrixX<S>& k, const MatrixX<S>& v,
                                AttentionCache<S>* cache = nullptr) {
  require(q.cols() == k.cols() && k.rows() == v.rows(), "attention: shape mismatch");
  const S scale = S(1) / std::sqrt(static_cast<S>(q.cols()));
  MatrixX<S> attn = softmax_rows<S>((q * k.transpose()) * scale);
  MatrixX<S> y = attn * v;
  if (cache) cache->attn = std::move(attn);
  check_finite(y, "attention");
  return y;
}

template <typename S>
struct AttentionGrads {
  MatrixX<S> dq, dk, dv;
};

template <typename S>
AttentionGrads<S> attention_backward(const MatrixX<S>& q, const MatrixX<S>& k,
                                     const MatrixX<S>& v, const AttentionCache<S>& cache,
                                     const MatrixX<S>& dy) {
  const S scale = S(1) / std::sqrt(static_cast<S>(q.cols()));
  AttentionGrads<S> g;
  g.dv = cache.attn.transpose() * dy;
  MatrixX<S> dattn = dy * v.transpose();
  MatrixX<S> dscores = softmax_rows_backward(cache.attn, dattn);
  g.dq = dscores * k * scale;
  g.dk = dscores.transpose() * q * scale;
  return g;
}

// ---- ReLU ----------------------------------------------------------------

template <typename S>
MatrixX<S> relu(const MatrixX<S>& x) {
  return x.cwiseMax(S(0));
}

template <typename S>
MatrixX<S> relu_backward(const MatrixX<S>& pre, const MatrixX<S>& dy) {
  return (pre.array() > S(0)).template cast<S>() * dy.array();
}

// ---- position-wise feed-forward: relu(x W1 + b1) W2 + b2 ------------------

template <typename S>
struct FeedForwardCache {
  MatrixX<S> pre;  // x W1 + b1
  MatrixX<S> act;  // relu(pre)
};

template <typename S>
MatrixX<S> feed_forward(const MatrixX<S>& x, const MatrixX<S>& w1, const RowVectorX<S>& b1,
                        const MatrixX<S>& w2, const RowVectorX<S>& b2,
                        FeedForwardCache<S>* cache = nullptr) {
  MatrixX<S> pre = linear(x, w1, b1);
  MatrixX<S> act = relu(pre);
  MatrixX<S> y = linear(act, w2, b2);
  if (cache) {
    cache->pre = std::move(pre);
    cache->act = std::move(act);
  }
  return y;
}

template <typename S>
struct FeedForwardGrads {
  MatrixX<S> dx, dw1, dw2;
  RowVectorX<S> db1, db2;
};

template <typename S>
FeedForwardGrads<S> feed_forward_backward(const MatrixX<S>& x, const MatrixX<S>& w1,
                                          const MatrixX<S>& w2, const FeedForwardCache<S>& cache,
                                          const MatrixX<S>& dy) {
  FeedForwardGrads<S> g;
  LinearGrads<S> g2 = linear_backward(cache.act, w2, dy);
  g.dw2 = std::move(g2.dw);
  g.db2 = std::move(g2.db);
  MatrixX<S> dpre = relu_backward(cache.pre, g2.dx);
  LinearGrads<S> g1 = linear_backward(x, w1, dpre);
  g.dw1 = std::move(g1.dw);
  g.db1 = std::move(g1.db);
  g.dx = std::move(g1.dx);
  return g;
}

// ---- learned positional embedding -----------------------------------------

template <typename S>
MatrixX<S> positional_embedding(const MatrixX<S>& x, const MatrixX<S>& table, bool enabled) {
  if (!enabled) return x;
  require(x.rows() == table.rows() && x.cols() == table.cols(),
          "positional_embedding: table shape mismatch");
  return x + table;
}
// gradient of the table equals the upstream gradient when enabled

}  // namespace imagine::nn
