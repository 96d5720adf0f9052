#include "ratkrylov/biorthogonal.hpp"

#include <cmath>
#include <sstream>

namespace rk {

LRFactors lr_decompose(const Matrix& m, double pivot_tol) {
  require(m.rows() == m.cols(), "lr_decompose: square input required");
  const Index n = m.rows();
  const double scale = std::max(m.norm(), 1e-300);

  Matrix l = Matrix::Identity(n, n);
  Matrix u = m;
  Index completed = n;
  for (Index k = 0; k < n; ++k) {
    const Complex piv = u(k, k);
    if (std::abs(piv) < pivot_tol * scale) {
      completed = k;
      break;
    }
    for (Index r = k + 1; r < n; ++r) {
      const Complex f = u(r, k) / piv;
      l(r, k) = f;
      u.row(r) -= f * u.row(k);
    }
  }

  LRFactors out;
  out.completed = completed;
  out.l = l.topLeftCorner(completed, completed);
  out.r = u.topLeftCorner(completed, completed);
  out.r.triangularView<Eigen::StrictlyLower>().setZero();
  return out;
}

double BiorthogonalPair::biorthogonality() const {
  const Index s = v.cols();
  return spectral_norm(w.adjoint() * v - Matrix::Identity(s, s));
}

BiorthogonalPair biorthogonalize(const Matrix& vhat, const Matrix& what,
                                 std::vector<ProjectivePole> xi, std::vector<ProjectivePole> psi,
                                 double pivot_tol) {
  require(vhat.rows() == what.rows() && vhat.cols() == what.cols(),
          "biorthogonalize: basis shapes must match");
  const Index n = vhat.cols();
  const Matrix moment = what.adjoint() * vhat;
  LRFactors lr = lr_decompose(moment, pivot_tol);

  BiorthogonalPair pair;
  pair.xi = std::move(xi);
  pair.psi = std::move(psi);
  const Index s = lr.completed;
  if (s < n) {
    pair.breakdown.occurred = true;
    pair.breakdown.step = s;
    pair.breakdown.kind = "serious";
  }
  // V = Vhat R^{-1}, W = What L^{-H} on the completed block.
  pair.v = lr.r.triangularView<Eigen::Upper>()
               .transpose()
               .solve(vhat.leftCols(s).transpose())
               .transpose();
  pair.w = lr.l.triangularView<Eigen::Lower>()
               .adjoint()
               .solve<Eigen::OnTheRight>(what.leftCols(s));
  pair.r_factor = lr.r;
  pair.l_factor = lr.l;
  return pair;
}

namespace {

Index block_rank(const Matrix& block, double cutoff) {
  const auto sv = Eigen::JacobiSVD<Matrix>(block).singularValues();
  Index rank = 0;
  for (Index k = 0; k < sv.size(); ++k)
    if (sv(k) > cutoff) ++rank;
  return rank;
}

// Lower-triangular structure of z against one pole sequence: an infinite pole
// xi_k forces zeros strictly below the subdiagonal in its leading columns, a
// finite one a rank-1 block of z - D crossing the diagonal.
std::optional<std::string> lower_structure_violation(const Matrix& z,
                                                     const std::vector<ProjectivePole>& poles,
                                                     double tol) {
  const Index n = z.rows();
  const double scale = std::max(spectral_norm(z), 1e-300);
  const Matrix zd = z - pole_diagonal(poles, n).dense();
  for (Index k = 0; k + 1 < n; ++k) {
    if (poles[k].is_infinite()) {
      if (k + 2 < n) {
        const double mass = z.block(k + 2, 0, n - k - 2, k + 1).cwiseAbs().maxCoeff();
        if (mass > tol * scale) {
          std::ostringstream os;
          os << "zero pattern violated below subdiagonal at step " << k << " (|entry| = " << mass
             << ")";
          return os.str();
        }
      }
    } else {
      const Matrix block = zd.block(k + 1, 0, n - k - 1, k + 2);
      const Index rank = block_rank(block, tol * scale);
      if (rank > 1) {
        std::ostringstream os;
        os << "rank " << rank << " > 1 in lower block at step " << k;
        return os.str();
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> oblique_structure_violation(const Matrix& z,
                                                       const std::vector<ProjectivePole>& xi,
                                                       const std::vector<ProjectivePole>& psi,
                                                       double tol) {
  require(z.rows() == z.cols(), "oblique_structure_violation: square input required");
  require(static_cast<Index>(xi.size()) >= z.rows() - 1 &&
              static_cast<Index>(psi.size()) >= z.rows() - 1,
          "oblique_structure_violation: need n-1 poles per side");
  std::vector<ProjectivePole> xi_n(xi.begin(), xi.begin() + (z.rows() - 1));
  std::vector<ProjectivePole> psi_n(psi.begin(), psi.begin() + (z.rows() - 1));
  if (auto v = lower_structure_violation(z, xi_n, tol)) return "K side: " + *v;
  // The upper part of z is governed by psi through z^H, whose pole diagonal
  // carries the psi values themselves (projection of A^H onto L).
  if (auto v = lower_structure_violation(z.adjoint(), psi_n, tol)) return "L side: " + *v;
  return std::nullopt;
}

Matrix oblique_single(const Matrix& a, const BiorthogonalPair& pair, double tol) {
  require(a.rows() == a.cols() && a.rows() == pair.v.rows(), "oblique_single: size mismatch");
  Matrix z = pair.w.adjoint() * a * pair.v;
  if (!pair.xi.empty() && !pair.psi.empty()) {
    auto violation = oblique_structure_violation(z, pair.xi, pair.psi, tol);
    require(!violation, "oblique_single: structure violation (upstream breakdown or bug)");
  }
  return z;
}

ObliquePencilResult oblique_pencil(const Matrix& a, const BiorthogonalPair& pair,
                                   const KrylovDecomposition& dec_v,
                                   const KrylovDecomposition& dec_w,
                                   ProjectivePole first_super, double tol) {
  ObliquePencilResult out;
  const Index nn = pair.size();          // basis vectors available
  const Index n = nn - 1;                // pencil columns
  require(n >= 1, "oblique_pencil: need at least two basis vectors");
  require(dec_v.steps() >= n, "oblique_pencil: dec_v too short");
  require(dec_w.steps() + 1 >= nn, "oblique_pencil: dec_w too short");
  require(pair.r_factor.rows() == nn, "oblique_pencil: pair/basis size mismatch");

  const Matrix f = pair.r_factor * dec_v.hext.topLeftCorner(nn, n);
  const Matrix g = pair.r_factor * dec_v.kext.topLeftCorner(nn, n);

  // Column k of Rb kills rows 0..k-3 of both F Rb and G Rb; the k = 1 column
  // additionally realizes the free-entry convention for the (0, 1) slot.
  Matrix rb = Matrix::Zero(n, n);
  rb(0, 0) = 1.0;
  double min_diag = 1.0;
  for (Index k = 1; k < n; ++k) {
    const Index nc = 2 * (k - 1) + (k == 1 ? 1 : 0);
    Matrix c(nc, k + 1);
    Index row = 0;
    for (Index j = 0; j + 2 <= k; ++j) {
      c.row(row++) = f.block(j, 0, 1, k + 1);
      c.row(row++) = g.block(j, 0, 1, k + 1);
    }
    if (k == 1)
      c.row(row++) = std::conj(first_super.nu()) * f.block(0, 0, 1, 2) -
                     std::conj(first_super.mu()) * g.block(0, 0, 1, 2);
    Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullV);
    Vector rcol = svd.matrixV().col(k);
    rb.col(k).head(k + 1) = rcol;
    min_diag = std::min(min_diag, std::abs(rcol(k)) / rcol.norm());
  }
  out.rb = rb;

  if (min_diag < 1e-12) {
    out.ok = false;
    out.message = "RL split does not exist: produced a singular triangular factor";
    return out;
  }

  const Matrix t = f * rb;
  const Matrix s = g * rb;
  out.pencil = TridiagonalPencil::from_dense(t, s);

  const double pscale = std::max(t.norm() + s.norm(), 1e-300);
  double off = 0.0;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < nn; ++i)
      if (i > j + 1 || j > i + 1) off = std::max(off, std::max(std::abs(t(i, j)), std::abs(s(i, j))));
  out.tridiagonality = off / pscale;

  const double na = std::max(spectral_norm(a), 1e-300);
  out.projection_residual =
      spectral_norm(pair.w.adjoint() * a * pair.v * s - t) / na;

  // Superdiagonal entries against the W-side poles (conjugated), (0,1) excluded.
  const auto psi = dec_w.poles;
  for (Index j = 1; j + 1 < n; ++j) {
    if (std::norm(t(j, j + 1)) + std::norm(s(j, j + 1)) < 1e-300) {
      out.superdiag_pole_error = 1.0;
      break;
    }
    const ProjectivePole found(t(j, j + 1), s(j, j + 1));
    out.superdiag_pole_error =
        std::max(out.superdiag_pole_error, found.distance(psi[j - 1].conj()));
  }

  out.ok = out.tridiagonality <= 1e-10 && out.projection_residual <= tol &&
           out.superdiag_pole_error <= 1e-8;
  if (!out.ok) {
    std::ostringstream os;
    os << "oblique pencil checks failed: tridiag " << out.tridiagonality << ", residual "
       << out.projection_residual << ", superdiag " << out.superdiag_pole_error;
    out.message = os.str();
  }
  return out;
}

}  // namespace rk
