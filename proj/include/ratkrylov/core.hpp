#pragma once

#include <vector>

#include "ratkrylov/types.hpp"

namespace rk {

/// A core transformation: the identity with a 2x2 unitary block
///   [ c       s     ]
///   [ -conj(s) conj(c) ]
/// embedded on rows/columns (index, index+1). Indices are 0-based, so a core
/// acting on an n x n matrix needs 0 <= index <= n-2. The (c, s) pair is
/// renormalized to |c|^2 + |s|^2 = 1 on construction.
class CoreTransformation {
 public:
  CoreTransformation() : index_(0), c_(1.0, 0.0), s_(0.0, 0.0) {}
  CoreTransformation(Index index, Complex c, Complex s);

  Index index() const { return index_; }
  Complex c() const { return c_; }
  Complex s() const { return s_; }

  /// A core is trivial when its rotation part vanishes.
  bool trivial(double tol = 1e-14) const { return std::abs(s_) < tol; }

  Eigen::Matrix2cd block() const;
  CoreTransformation adjoint() const;
  CoreTransformation shifted(Index offset) const;

  /// Dense n x n embedding.
  Matrix embed(Index n) const;

  /// Fuse with another core at the same index: result = (*this) * other.
  CoreTransformation fuse(const CoreTransformation& other) const;

  /// Core G with G * [x; y] = [r; 0], r >= 0 real.
  static CoreTransformation annihilate_second(Index index, Complex x, Complex y);
  /// Core G with [a, b] * G = [r, 0] acting on columns (index, index+1).
  static CoreTransformation annihilate_right_second(Index index, Complex a, Complex b);
  /// Core G with [a, b] * G = [0, r] acting on columns (index, index+1).
  static CoreTransformation annihilate_right_first(Index index, Complex a, Complex b);

 private:
  Index index_;
  Complex c_, s_;
};

/// Row transformation m <- C * m (touches rows index, index+1 only).
void apply_core_left(const CoreTransformation& c, Matrix& m);
Matrix apply_core_left_copy(const CoreTransformation& c, const Matrix& m);

/// Column transformation m <- m * C (touches columns index, index+1 only).
void apply_core_right(Matrix& m, const CoreTransformation& c);
Matrix apply_core_right_copy(const Matrix& m, const CoreTransformation& c);

enum class Transition { Descending, Ascending };

/// Per-adjacent-index orientation of a shape: entry k records whether the
/// core with index k appears before (Descending) or after (Ascending) the
/// core with index k+1. Length is dim-2 for a shape of dim-1 cores.
struct StructureDescriptor {
  std::vector<Transition> transitions;
  bool operator==(const StructureDescriptor&) const = default;
};

/// An ordered product of core transformations C_{i1} C_{i2} ... acting on
/// dimension dim. The list order is the product order, left factor first.
struct CorePattern {
  std::vector<CoreTransformation> cores;
  Index dim = 0;

  Matrix dense() const;
  void apply_left(Matrix& m) const;           // m <- P * m
  void apply_right(Matrix& m) const;          // m <- m * P
  void apply_adjoint_right(Matrix& m) const;  // m <- m * P^H

  /// True when every index 0..dim-2 occurs exactly once.
  bool is_full_shape() const;
};

/// Orientation of a full shape; throws if the pattern is not a full shape.
StructureDescriptor classify_shape(const CorePattern& p);

/// QR factorization of an upper-Hessenberg matrix as a descending pattern
/// times an upper-triangular factor, h = C_0 C_1 ... C_{n-2} R. R has real
/// nonnegative diagonal. Throws if h is not numerically Hessenberg.
struct HessenbergQR {
  CorePattern q;
  Matrix r;
};
HessenbergQR qr_hessenberg(const Matrix& h, double tol = 1e-14);

/// Turnover: refactor g1*g2*g3 with indices (i-1, i, i-1) into an equal
/// product with indices (i, i-1, i). Exact for unitary cores.
struct Turnover {
  CoreTransformation first, second, third;
};
Turnover turnover(const CoreTransformation& g1, const CoreTransformation& g2,
                  const CoreTransformation& g3);

enum class TransferDirection { LeftToRight, RightToLeft };

/// Move a pattern through an upper-triangular factor without changing the
/// index sequence: P * R = R' * P' (LeftToRight) or R * P = P' * R'
/// (RightToLeft). Throws if r is numerically singular.
struct TransferResult {
  Matrix r;
  CorePattern pattern;
};
TransferResult transfer_through(const CorePattern& p, const Matrix& r,
                                TransferDirection direction);

/// Numerical ranks of the overlapping lower-left blocks z(i:m, 0:i) for
/// i = 1..m-1 (0-based row split points), at relative tolerance tol.
std::vector<Index> rank_profile_lower(const Matrix& z, double tol = 1e-10);

}  // namespace rk
