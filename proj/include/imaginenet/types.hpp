#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace imagine {

// Dense row-major types. Clip features are T x D with frames as rows, so
// row-major keeps the on-disk layout and the in-memory layout identical.
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using RowVectorX = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using Mat = MatrixX<double>;
using Vec = RowVectorX<double>;
using Mat32 = MatrixX<float>;

// Invalid or inconsistent runtime values (bad labels, shape mismatches, ...).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Unusable configuration files or fields.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

inline void ensure_finite(const Mat& m, const char* what) {
  if (!m.allFinite()) throw ValidationError(std::string(what) + ": non-finite values");
}

// FNV-1a, used for config hashes and label directory names.
inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

std::string to_hex(std::uint64_t v);

}  // namespace imagine
