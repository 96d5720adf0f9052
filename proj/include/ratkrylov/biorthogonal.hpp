#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ratkrylov/arnoldi.hpp"

namespace rk {

struct BreakdownReport {
  bool occurred = false;
  Index step = -1;
  std::string kind;
};

/// Non-pivoted LR (Gaussian) factorization. Stops at the first principal
/// minor whose pivot is numerically zero; partial completion is a result,
/// not an error. L is unit-lower-triangular, both factors completed x completed.
struct LRFactors {
  Matrix l;
  Matrix r;
  Index completed = 0;
};

LRFactors lr_decompose(const Matrix& m, double pivot_tol = 1e-12);

/// Biorthogonal nested bases W^H V = I for a pair of rational Krylov
/// subspaces, together with the triangular connectors to the orthonormal
/// bases they came from (V = Vhat R^{-1}, W = What L^{-H}).
struct BiorthogonalPair {
  Matrix v;
  Matrix w;
  Matrix r_factor;
  Matrix l_factor;
  std::vector<ProjectivePole> xi;
  std::vector<ProjectivePole> psi;
  BreakdownReport breakdown;

  Index size() const { return v.cols(); }
  double biorthogonality() const;
};

/// Build the biorthogonal pair from orthonormal nested bases via the
/// non-pivoted LR factorization of What^H Vhat. A stop before the full size
/// is a serious breakdown; the pair is truncated and flagged.
BiorthogonalPair biorthogonalize(const Matrix& vhat, const Matrix& what,
                                 std::vector<ProjectivePole> xi = {},
                                 std::vector<ProjectivePole> psi = {},
                                 double pivot_tol = 1e-12);

/// Check the single-matrix structure of an oblique projection: below the
/// diagonal the pattern prescribed by xi, above (on z^H) the one prescribed
/// by psi. Returns a description of the first violation, if any.
std::optional<std::string> oblique_structure_violation(const Matrix& z,
                                                       const std::vector<ProjectivePole>& xi,
                                                       const std::vector<ProjectivePole>& psi,
                                                       double tol = 1e-8);

/// Z = W^H A V; throws when the structure validator fails.
Matrix oblique_single(const Matrix& a, const BiorthogonalPair& pair, double tol = 1e-8);

/// Tridiagonal pencil of the oblique projection, built from the V-side
/// Hessenberg pencil and the LR connector: T = R Hv Rb, S = R Kv Rb with the
/// upper-triangular Rb chosen column by column so both products come out
/// tridiagonal. first_super fixes the free (0,1) entries: the pair (mu, nu)
/// forces conj(nu) T(0,1) = conj(mu) S(0,1).
struct ObliquePencilResult {
  TridiagonalPencil pencil;
  Matrix rb;
  double projection_residual = 0.0;  // ||W^H A V S - T|| / ||A||
  double tridiagonality = 0.0;       // off-tridiagonal mass, relative
  double superdiag_pole_error = 0.0; // against dec_w poles, free entries excluded
  bool ok = false;
  std::string message;
};

ObliquePencilResult oblique_pencil(const Matrix& a, const BiorthogonalPair& pair,
                                   const KrylovDecomposition& dec_v,
                                   const KrylovDecomposition& dec_w,
                                   ProjectivePole first_super = ProjectivePole::infinity(),
                                   double tol = 1e-9);

}  // namespace rk
