#pragma once

#include <vector>

#include "ratkrylov/core.hpp"
#include "ratkrylov/poles.hpp"

namespace rk {

/// A pair of upper-Hessenberg matrices of equal size, either square n x n or
/// extended (n+1) x n. Ratios of subdiagonal entries H(i+1,i)/K(i+1,i) carry
/// the poles of the generating rational Krylov subspace.
struct HessenbergPencil {
  Matrix h;
  Matrix k;

  Index steps() const { return h.cols(); }
  bool extended() const { return h.rows() == h.cols() + 1; }

  /// No index with both subdiagonal entries numerically zero.
  bool proper(double tol = 1e-14) const;
};

/// Poles read from the subdiagonals; throws on an improper pencil.
std::vector<ProjectivePole> pole_sequence(const HessenbergPencil& p, double tol = 1e-14);

/// Normalization convention for pencil comparisons: scale column j of (H, K)
/// jointly by the first entry of largest magnitude, which becomes exactly 1.
void normalize_pencil_columns(Matrix& h, Matrix& k);

struct SingleMatrixResult {
  Matrix z;
  double k_rcond;
  double residual;  // ||Z K - H||
};

/// Z = H K^{-1} for a square pencil; throws if K is numerically singular.
SingleMatrixResult single_matrix_from_pencil(const HessenbergPencil& p, double rcond_tol = 1e-14);

/// Diagonal factor of the single-matrix decomposition Z = QR + D. Entries at
/// pole slots equal the (finite) poles; the remaining ones are free and are
/// fixed to zero by convention.
struct PoleDiagonal {
  Vector values;
  std::vector<bool> is_pole;

  Matrix dense() const;
};

PoleDiagonal pole_diagonal(const std::vector<ProjectivePole>& poles, Index n);

/// Shape prescribed by a pole sequence: ascending transition where the pole
/// is finite, descending where it is infinite.
StructureDescriptor descriptor_from_poles(const std::vector<ProjectivePole>& poles);

struct QRPlusD {
  CorePattern pattern;
  Matrix r;
  PoleDiagonal d;
};

/// Factor z = Q R + D where Q is the shape prescribed by the poles and D the
/// pole diagonal. Throws when z does not carry the prescribed structure to
/// within tol (relative).
QRPlusD decompose_qr_plus_d(const Matrix& z, const std::vector<ProjectivePole>& poles,
                            double tol = 1e-10);

/// Rewrite a proper square Hessenberg pencil as an equivalent inv-Hessenberg
/// pencil (H C, K C): QR-factor both sides, pull K's pattern across, turn the
/// resulting V shape over into a wedge, and push the descending part back.
HessenbergPencil to_inv_hessenberg(const HessenbergPencil& p);

/// Tridiagonal pencil (T, S), stored by diagonals; rows = cols (square) or
/// cols + 1 (extended). Subdiagonal ratios carry the first pole set, the
/// superdiagonal ratios the conjugate of the second one.
struct TridiagonalPencil {
  Index rows = 0;
  Index cols = 0;
  Vector t_sub, t_main, t_super;
  Vector s_sub, s_main, s_super;

  Matrix t_dense() const;
  Matrix s_dense() const;
  /// Leading n x n square part.
  TridiagonalPencil leading(Index n) const;

  static TridiagonalPencil from_dense(const Matrix& t, const Matrix& s);
};

}  // namespace rk
