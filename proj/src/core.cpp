#include "ratkrylov/core.hpp"

#include <algorithm>
#include <cmath>

namespace rk {

namespace {

double hypot2(Complex x, Complex y) { return std::sqrt(std::norm(x) + std::norm(y)); }

}  // namespace

CoreTransformation::CoreTransformation(Index index, Complex c, Complex s)
    : index_(index), c_(c), s_(s) {
  require(index >= 0, "core transformation index must be nonnegative");
  const double n = hypot2(c_, s_);
  require(n > 0.0, "core transformation block must be nonzero");
  c_ /= n;
  s_ /= n;
}

Eigen::Matrix2cd CoreTransformation::block() const {
  Eigen::Matrix2cd b;
  b << c_, s_, -std::conj(s_), std::conj(c_);
  return b;
}

CoreTransformation CoreTransformation::adjoint() const {
  // [[c,s],[-conj(s),conj(c)]]^H = [[conj(c),-s],[conj(s),c]] which is again
  // a core block with (c', s') = (conj(c), -s).
  return CoreTransformation(index_, std::conj(c_), -s_);
}

CoreTransformation CoreTransformation::shifted(Index offset) const {
  return CoreTransformation(index_ + offset, c_, s_);
}

Matrix CoreTransformation::embed(Index n) const {
  require(index_ + 1 < n, "core transformation index out of range");
  Matrix m = Matrix::Identity(n, n);
  m.block<2, 2>(index_, index_) = block();
  return m;
}

CoreTransformation CoreTransformation::fuse(const CoreTransformation& other) const {
  require(index_ == other.index_, "fuse requires equal indices");
  const Eigen::Matrix2cd b = block() * other.block();
  return CoreTransformation(index_, b(0, 0), b(0, 1));
}

CoreTransformation CoreTransformation::annihilate_second(Index index, Complex x, Complex y) {
  const double n = hypot2(x, y);
  if (n < 1e-300) return CoreTransformation(index, 1.0, 0.0);
  return CoreTransformation(index, std::conj(x) / n, std::conj(y) / n);
}

CoreTransformation CoreTransformation::annihilate_right_second(Index index, Complex a, Complex b) {
  const double n = hypot2(a, b);
  if (n < 1e-300) return CoreTransformation(index, 1.0, 0.0);
  return CoreTransformation(index, std::conj(a) / n, -b / n);
}

CoreTransformation CoreTransformation::annihilate_right_first(Index index, Complex a, Complex b) {
  const double n = hypot2(a, b);
  if (n < 1e-300) return CoreTransformation(index, 1.0, 0.0);
  return CoreTransformation(index, b / n, std::conj(a) / n);
}

void apply_core_left(const CoreTransformation& c, Matrix& m) {
  const Index i = c.index();
  require(i + 1 < m.rows(), "apply_core_left: index out of range");
  const Eigen::Matrix2cd b = c.block();
  m.middleRows(i, 2) = (b * m.middleRows(i, 2)).eval();
}

Matrix apply_core_left_copy(const CoreTransformation& c, const Matrix& m) {
  Matrix out = m;
  apply_core_left(c, out);
  return out;
}

void apply_core_right(Matrix& m, const CoreTransformation& c) {
  const Index i = c.index();
  require(i + 1 < m.cols(), "apply_core_right: index out of range");
  const Eigen::Matrix2cd b = c.block();
  m.middleCols(i, 2) = (m.middleCols(i, 2) * b).eval();
}

Matrix apply_core_right_copy(const Matrix& m, const CoreTransformation& c) {
  Matrix out = m;
  apply_core_right(out, c);
  return out;
}

Matrix CorePattern::dense() const {
  Matrix m = Matrix::Identity(dim, dim);
  apply_left(m);
  return m;
}

void CorePattern::apply_left(Matrix& m) const {
  for (auto it = cores.rbegin(); it != cores.rend(); ++it) apply_core_left(*it, m);
}

void CorePattern::apply_right(Matrix& m) const {
  for (const auto& c : cores) apply_core_right(m, c);
}

void CorePattern::apply_adjoint_right(Matrix& m) const {
  for (auto it = cores.rbegin(); it != cores.rend(); ++it) apply_core_right(m, it->adjoint());
}

bool CorePattern::is_full_shape() const {
  if (dim < 2 || static_cast<Index>(cores.size()) != dim - 1) return false;
  std::vector<bool> seen(dim - 1, false);
  for (const auto& c : cores) {
    if (c.index() >= dim - 1 || seen[c.index()]) return false;
    seen[c.index()] = true;
  }
  return true;
}

StructureDescriptor classify_shape(const CorePattern& p) {
  require(p.is_full_shape(), "classify_shape requires a full shape");
  std::vector<Index> pos(p.dim - 1);
  for (Index t = 0; t < static_cast<Index>(p.cores.size()); ++t) pos[p.cores[t].index()] = t;
  StructureDescriptor d;
  d.transitions.reserve(p.dim > 2 ? p.dim - 2 : 0);
  for (Index k = 0; k + 1 < p.dim - 1; ++k)
    d.transitions.push_back(pos[k] < pos[k + 1] ? Transition::Descending : Transition::Ascending);
  return d;
}

HessenbergQR qr_hessenberg(const Matrix& h, double tol) {
  require(h.rows() == h.cols() && h.rows() >= 1, "qr_hessenberg: square input required");
  const Index n = h.rows();
  const double scale = h.norm();
  for (Index j = 0; j + 2 < n; ++j)
    require(h.col(j).tail(n - j - 2).norm() <= tol * std::max(scale, 1e-300),
            "qr_hessenberg: input is not upper-Hessenberg");

  HessenbergQR out;
  out.q.dim = n;
  out.r = h;
  for (Index j = 0; j + 1 < n; ++j) {
    auto g = CoreTransformation::annihilate_second(j, out.r(j, j), out.r(j + 1, j));
    apply_core_left(g, out.r);
    out.r(j + 1, j) = 0.0;
    out.q.cores.push_back(g.adjoint());
  }
  out.r.triangularView<Eigen::StrictlyLower>().setZero();
  return out;
}

Turnover turnover(const CoreTransformation& g1, const CoreTransformation& g2,
                  const CoreTransformation& g3) {
  require(g2.index() == g1.index() + 1 && g3.index() == g1.index(),
          "turnover requires the (i-1, i, i-1) index pattern");
  const Index base = g1.index();

  Matrix w = Matrix::Identity(3, 3);
  w.block<2, 2>(0, 0) = g1.block();
  Matrix tmp = Matrix::Identity(3, 3);
  tmp.block<2, 2>(1, 1) = g2.block();
  w = w * tmp;
  tmp.setIdentity();
  tmp.block<2, 2>(0, 0) = g3.block();
  w = w * tmp;

  // Peel a trailing core at local index 1 so that (W * o3^H)(0, 2) = 0.
  const double rho = hypot2(w(0, 1), w(0, 2));
  CoreTransformation o3 = rho < 1e-300
                              ? CoreTransformation(1, 1.0, 0.0)
                              : CoreTransformation(1, w(0, 1) / rho, w(0, 2) / rho);
  tmp.setIdentity();
  tmp.block<2, 2>(1, 1) = o3.adjoint().block();
  Matrix wp = w * tmp;

  // Row 0 of W' is now (gamma, sigma, 0) with unit norm; it fixes the middle core.
  CoreTransformation o2(0, wp(0, 0), wp(0, 1));
  tmp.setIdentity();
  tmp.block<2, 2>(0, 0) = o2.adjoint().block();
  Matrix rest = wp * tmp;  // a core at local index 1, up to roundoff

  CoreTransformation o1(1, rest(1, 1), rest(1, 2));

  Turnover t;
  t.first = o1.shifted(base);   // index i
  t.second = o2.shifted(base);  // index i-1
  t.third = o3.shifted(base);   // index i
  return t;
}

TransferResult transfer_through(const CorePattern& p, const Matrix& r,
                                TransferDirection direction) {
  require(r.rows() == r.cols(), "transfer_through: square triangular factor required");
  require(p.dim == r.rows(), "transfer_through: dimension mismatch");
  const double scale = r.norm();
  for (Index j = 0; j < r.cols(); ++j)
    require(std::abs(r(j, j)) >= 1e-14 * std::max(scale, 1e-300),
            "transfer_through: triangular factor is numerically singular");

  TransferResult out;
  out.r = r;
  out.r.triangularView<Eigen::StrictlyLower>().setZero();
  out.pattern.dim = p.dim;
  out.pattern.cores.resize(p.cores.size());

  if (direction == TransferDirection::LeftToRight) {
    // P * R = R' * P': absorb cores from the right end of the pattern.
    for (Index t = static_cast<Index>(p.cores.size()) - 1; t >= 0; --t) {
      const auto& c = p.cores[t];
      const Index i = c.index();
      apply_core_left(c, out.r);
      auto e = CoreTransformation::annihilate_right_first(i, out.r(i + 1, i), out.r(i + 1, i + 1));
      apply_core_right(out.r, e);
      out.r(i + 1, i) = 0.0;
      out.pattern.cores[t] = e.adjoint();
    }
  } else {
    // R * P = P' * R': absorb cores from the left end.
    for (size_t t = 0; t < p.cores.size(); ++t) {
      const auto& c = p.cores[t];
      const Index i = c.index();
      apply_core_right(out.r, c);
      auto g = CoreTransformation::annihilate_second(i, out.r(i, i), out.r(i + 1, i));
      apply_core_left(g, out.r);
      out.r(i + 1, i) = 0.0;
      out.pattern.cores[t] = g.adjoint();
    }
  }
  return out;
}

std::vector<Index> rank_profile_lower(const Matrix& z, double tol) {
  require(z.rows() == z.cols(), "rank_profile_lower: square input required");
  const Index m = z.rows();
  const double scale = spectral_norm(z);
  std::vector<Index> ranks;
  ranks.reserve(m > 0 ? m - 1 : 0);
  for (Index i = 0; i + 1 < m; ++i) {
    const Matrix blockm = z.block(i, 0, m - i, i + 1);
    const auto sv = Eigen::JacobiSVD<Matrix>(blockm).singularValues();
    Index rank = 0;
    for (Index k = 0; k < sv.size(); ++k)
      if (sv(k) > tol * std::max(scale, 1e-300)) ++rank;
    ranks.push_back(rank);
  }
  return ranks;
}

}  // namespace rk
