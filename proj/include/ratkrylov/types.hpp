#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace rk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Inner product convention used throughout: (x, y) = y^H x.
/// Linear in the first argument, conjugate-linear in the second.
inline Complex inner(const Vector& x, const Vector& y) { return y.dot(x); }

/// Spectral norm by dense SVD. Everything here is desk scale.
inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace rk
