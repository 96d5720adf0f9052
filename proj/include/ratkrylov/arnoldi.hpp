#pragma once

#include <optional>
#include <vector>

#include "ratkrylov/pencils.hpp"

namespace rk {

/// Orthonormal rational Krylov decomposition A V K = V H with V m x (n+1)
/// and an extended (n+1) x n Hessenberg pencil. On lucky breakdown the
/// decomposition is truncated and flagged.
struct KrylovDecomposition {
  Matrix v;
  Matrix hext;
  Matrix kext;
  std::vector<ProjectivePole> poles;
  bool breakdown = false;
  Index breakdown_step = -1;

  Index steps() const { return hext.cols(); }
  double orthonormality_error() const;
  double residual(const Matrix& a) const;  // ||A V K - V H|| / ||A||
  HessenbergPencil pencil() const { return HessenbergPencil{hext, kext}; }
};

/// Gram-Schmidt rational Arnoldi: step k applies
/// (nu_k A - mu_k I)^{-1} (rho_k A - eta_k I) to the latest basis vector,
/// orthogonalizes twice, and assembles the pencil columns
/// K(:,k) = nu_k h - rho_k e_k, H(:,k) = mu_k h - eta_k e_k.
KrylovDecomposition rational_arnoldi(
    const Matrix& a, const Vector& start, const std::vector<ProjectivePole>& poles,
    const std::optional<std::vector<ContinuationPair>>& continuation = std::nullopt,
    double breakdown_tol = 1e-13);

struct Reorthogonalized {
  Vector vec;
  Vector coeffs;
};

/// Two-pass Gram-Schmidt of a candidate against orthonormal columns.
Reorthogonalized reorthogonalize(const Matrix& v, const Vector& candidate);

/// Essential-uniqueness comparison of two decompositions built from the same
/// (A, v, Xi): columns must agree up to unimodular scalars and the pencils up
/// to that scaling and a shared upper-triangular right factor.
struct ImplicitQReport {
  bool dimensions_match = false;
  RealVector column_correlations;
  double max_correlation_deviation = 0.0;
  double max_pole_distance = 0.0;
  double pencil_residual = 0.0;   // relative, after the unimodular correction
  double factor_lower_norm = 0.0; // relative strictly-lower mass of the right factor
  bool essentially_equal = false;
};

ImplicitQReport implicit_q_compare(const KrylovDecomposition& d1, const KrylovDecomposition& d2,
                                   double tol = 1e-10);

}  // namespace rk
