#include "ratkrylov/arnoldi.hpp"

#include <cmath>

namespace rk {

double KrylovDecomposition::orthonormality_error() const {
  const Index c = v.cols();
  return spectral_norm(v.adjoint() * v - Matrix::Identity(c, c));
}

double KrylovDecomposition::residual(const Matrix& a) const {
  const double na = spectral_norm(a);
  return spectral_norm(a * v * kext - v * hext) / std::max(na, 1e-300);
}

KrylovDecomposition rational_arnoldi(const Matrix& a, const Vector& start,
                                     const std::vector<ProjectivePole>& poles,
                                     const std::optional<std::vector<ContinuationPair>>& continuation,
                                     double breakdown_tol) {
  require(a.rows() == a.cols(), "rational_arnoldi: square matrix required");
  const Index m = a.rows();
  const Index n = static_cast<Index>(poles.size());
  require(start.size() == m, "rational_arnoldi: start vector size mismatch");
  require(n >= 1 && n < m, "rational_arnoldi: need 1 <= #poles < m");
  if (continuation)
    require(static_cast<Index>(continuation->size()) == n,
            "rational_arnoldi: one continuation pair per pole");
  const double vn = start.norm();
  require(vn > 0.0, "rational_arnoldi: zero start vector");

  Matrix v(m, n + 1);
  v.col(0) = start / vn;
  Matrix hext = Matrix::Zero(n + 1, n);
  Matrix kext = Matrix::Zero(n + 1, n);

  KrylovDecomposition out;
  for (Index k = 0; k < n; ++k) {
    const ProjectivePole& pole = poles[k];
    const ContinuationPair cont =
        continuation ? (*continuation)[k] : ContinuationPair::default_for(pole);
    require(cont.admissible_for(pole),
            "rational_arnoldi: continuation pair coincides with the pole");

    Vector x = cont.rho * (a * v.col(k)) - cont.eta * v.col(k);
    Eigen::PartialPivLU<Matrix> lu(pole.nu() * a - pole.mu() * Matrix::Identity(m, m));
    require(lu.rcond() > 1e-15, "rational_arnoldi: pole lies on the spectrum of A");
    Vector y = lu.solve(x);
    const double y0 = y.norm();

    Vector h = Vector::Zero(n + 1);
    auto basis = v.leftCols(k + 1);
    for (int pass = 0; pass < 2; ++pass) {
      Vector coeff = basis.adjoint() * y;
      y -= basis * coeff;
      h.head(k + 1) += coeff;
    }
    const double nrm = y.norm();
    if (nrm <= breakdown_tol * std::max(y0, 1e-300)) {
      out.breakdown = true;
      out.breakdown_step = k;
      out.v = v.leftCols(k + 1);
      out.hext = hext.topLeftCorner(k + 1, k);
      out.kext = kext.topLeftCorner(k + 1, k);
      out.poles.assign(poles.begin(), poles.begin() + k);
      return out;
    }
    h(k + 1) = nrm;
    v.col(k + 1) = y / nrm;

    kext.col(k) = pole.nu() * h;
    kext(k, k) -= cont.rho;
    hext.col(k) = pole.mu() * h;
    hext(k, k) -= cont.eta;
  }

  out.v = std::move(v);
  out.hext = std::move(hext);
  out.kext = std::move(kext);
  out.poles = poles;
  return out;
}

Reorthogonalized reorthogonalize(const Matrix& v, const Vector& candidate) {
  require(v.rows() == candidate.size(), "reorthogonalize: size mismatch");
  Reorthogonalized out;
  out.vec = candidate;
  out.coeffs = Vector::Zero(v.cols());
  for (int pass = 0; pass < 2; ++pass) {
    Vector c = v.adjoint() * out.vec;
    out.vec -= v * c;
    out.coeffs += c;
  }
  return out;
}

ImplicitQReport implicit_q_compare(const KrylovDecomposition& d1, const KrylovDecomposition& d2,
                                   double tol) {
  ImplicitQReport rep;
  rep.dimensions_match = d1.v.rows() == d2.v.rows() && d1.v.cols() == d2.v.cols() &&
                         d1.steps() == d2.steps();
  require(rep.dimensions_match, "implicit_q_compare: dimension mismatch");

  const Index cols = d1.v.cols();
  rep.column_correlations.resize(cols);
  Vector theta(cols);
  for (Index i = 0; i < cols; ++i) {
    const Complex t = inner(d2.v.col(i), d1.v.col(i));  // v1_i^H v2_i
    theta(i) = t;
    rep.column_correlations(i) = std::abs(t);
    rep.max_correlation_deviation =
        std::max(rep.max_correlation_deviation, std::abs(std::abs(t) - 1.0));
  }
  for (size_t i = 0; i < d1.poles.size(); ++i)
    rep.max_pole_distance = std::max(rep.max_pole_distance, d1.poles[i].distance(d2.poles[i]));

  // With V2 = V1 Theta, the pencils must satisfy [Theta H2; Theta K2] =
  // [H1; K1] U for one upper-triangular U.
  const Index n = d1.steps();
  Matrix p1(2 * (n + 1), n), p2(2 * (n + 1), n);
  p1 << d1.hext, d1.kext;
  p2 << theta.asDiagonal() * d2.hext, theta.asDiagonal() * d2.kext;
  Matrix u = p1.householderQr().solve(p2);
  const double scale = std::max(p2.norm(), 1e-300);
  rep.pencil_residual = (p1 * u - p2).norm() / scale;
  rep.factor_lower_norm =
      Matrix(u.triangularView<Eigen::StrictlyLower>()).norm() / std::max(u.norm(), 1e-300);

  rep.essentially_equal = rep.max_correlation_deviation <= tol &&
                          rep.max_pole_distance <= std::max(tol, 1e-12) &&
                          rep.pencil_residual <= 1e-8 && rep.factor_lower_norm <= 1e-8;
  return rep;
}

}  // namespace rk
