#include "ratkrylov/pencils.hpp"

#include <cmath>
#include <deque>

namespace rk {

namespace {

void require_hessenberg_pair(const HessenbergPencil& p) {
  require(p.h.rows() == p.k.rows() && p.h.cols() == p.k.cols(), "pencil matrices must match in size");
  require(p.h.rows() == p.h.cols() || p.h.rows() == p.h.cols() + 1,
          "pencil must be square or extended by one row");
  require(p.h.cols() >= 1, "empty pencil");
}

}  // namespace

bool HessenbergPencil::proper(double tol) const {
  const double scale = h.norm() + k.norm();
  const Index nsub = std::min(h.rows() - 1, h.cols());
  for (Index i = 0; i < nsub; ++i)
    if (std::abs(h(i + 1, i)) < tol * scale && std::abs(k(i + 1, i)) < tol * scale) return false;
  return true;
}

std::vector<ProjectivePole> pole_sequence(const HessenbergPencil& p, double tol) {
  require_hessenberg_pair(p);
  require(p.proper(tol), "pole_sequence: improper pencil");
  std::vector<ProjectivePole> poles;
  const Index nsub = std::min(p.h.rows() - 1, p.h.cols());
  poles.reserve(nsub);
  for (Index i = 0; i < nsub; ++i) poles.emplace_back(p.h(i + 1, i), p.k(i + 1, i));
  return poles;
}

void normalize_pencil_columns(Matrix& h, Matrix& k) {
  require(h.rows() == k.rows() && h.cols() == k.cols(), "pencil matrices must match in size");
  for (Index j = 0; j < h.cols(); ++j) {
    Complex best = 0.0;
    for (Index i = 0; i < h.rows(); ++i) {
      if (std::abs(h(i, j)) > std::abs(best)) best = h(i, j);
      if (std::abs(k(i, j)) > std::abs(best)) best = k(i, j);
    }
    if (std::abs(best) > 0.0) {
      h.col(j) /= best;
      k.col(j) /= best;
    }
  }
}

SingleMatrixResult single_matrix_from_pencil(const HessenbergPencil& p, double rcond_tol) {
  require_hessenberg_pair(p);
  require(!p.extended(), "single_matrix_from_pencil: square pencil required");
  Eigen::PartialPivLU<Matrix> lu(p.k);
  const double rc = lu.rcond();
  require(rc >= rcond_tol, "single_matrix_from_pencil: K is numerically singular");
  SingleMatrixResult out;
  out.k_rcond = rc;
  // Z K = H  <=>  K^H Z^H = H^H.
  const Matrix zt = lu.adjoint().solve(p.h.adjoint());
  out.z = zt.adjoint();
  out.residual = (out.z * p.k - p.h).norm();
  return out;
}

Matrix PoleDiagonal::dense() const {
  Matrix d = Matrix::Zero(values.size(), values.size());
  d.diagonal() = values;
  return d;
}

PoleDiagonal pole_diagonal(const std::vector<ProjectivePole>& poles, Index n) {
  require(static_cast<Index>(poles.size()) == n - 1, "pole_diagonal: need n-1 poles");
  PoleDiagonal d;
  d.values = Vector::Zero(n);
  d.is_pole.assign(n, false);
  for (Index kk = 0; kk + 1 < n; ++kk) {
    if (!poles[kk].is_infinite()) {
      d.values(kk + 1) = poles[kk].value();  // pole xi_k sits at diagonal slot k+1
      d.is_pole[kk + 1] = true;
    }
  }
  return d;
}

StructureDescriptor descriptor_from_poles(const std::vector<ProjectivePole>& poles) {
  StructureDescriptor d;
  if (poles.size() < 2) return d;
  d.transitions.reserve(poles.size() - 1);
  for (size_t kk = 0; kk + 1 < poles.size(); ++kk)
    d.transitions.push_back(poles[kk].is_infinite() ? Transition::Descending
                                                    : Transition::Ascending);
  return d;
}

namespace {

// Peel the prescribed shape off a unitary matrix q. Works on the core-index
// range [lo, hi); cores are appended to out in product order, the peeled sink
// last. Rows lo..i of columns (i, i+1) of q are rank one when q conforms.
void peel_shape(Matrix& q, const std::vector<Transition>& trans, Index lo, Index hi,
                std::vector<CoreTransformation>& out) {
  if (lo >= hi) return;
  Index sink = hi - 1;
  for (Index i = lo; i < hi; ++i) {
    const bool left_ok = (i == lo) || trans[i - 1] == Transition::Descending;
    const bool right_ok = (i == hi - 1) || trans[i] == Transition::Ascending;
    if (left_ok && right_ok) {
      sink = i;
      break;
    }
  }
  Index best_row = lo;
  double best = -1.0;
  for (Index r = lo; r <= sink; ++r) {
    const double m = std::sqrt(std::norm(q(r, sink)) + std::norm(q(r, sink + 1)));
    if (m > best) {
      best = m;
      best_row = r;
    }
  }
  CoreTransformation core = best < 1e-300
                                ? CoreTransformation(sink, 1.0, 0.0)
                                : CoreTransformation(sink, q(best_row, sink), q(best_row, sink + 1));
  apply_core_right(q, core.adjoint());

  std::vector<CoreTransformation> left, right;
  peel_shape(q, trans, lo, sink, left);
  peel_shape(q, trans, sink + 1, hi, right);
  out.insert(out.end(), left.begin(), left.end());
  out.insert(out.end(), right.begin(), right.end());
  out.push_back(core);
}

}  // namespace

QRPlusD decompose_qr_plus_d(const Matrix& z, const std::vector<ProjectivePole>& poles,
                            double tol) {
  require(z.rows() == z.cols() && z.rows() >= 1, "decompose_qr_plus_d: square input required");
  const Index n = z.rows();
  require(static_cast<Index>(poles.size()) == n - 1, "decompose_qr_plus_d: need n-1 poles");

  QRPlusD out;
  out.d = pole_diagonal(poles, n);
  const Matrix m = z - out.d.dense();

  Eigen::HouseholderQR<Matrix> house(m);
  Matrix q = house.householderQ();

  const StructureDescriptor desc = descriptor_from_poles(poles);
  out.pattern.dim = n;
  peel_shape(q, desc.transitions, 0, n - 1, out.pattern.cores);

  // R is fixed by the extracted pattern; the structure test is that it comes
  // out upper-triangular.
  Matrix r = m;
  Matrix qd = out.pattern.dense();
  r = qd.adjoint() * m;
  const double scale = std::max(m.norm(), 1e-300);
  const double lower = Matrix(r.triangularView<Eigen::StrictlyLower>()).norm();
  require(lower <= tol * scale,
          "decompose_qr_plus_d: input does not carry the structure prescribed by the poles");
  r.triangularView<Eigen::StrictlyLower>().setZero();
  out.r = r;
  return out;
}

HessenbergPencil to_inv_hessenberg(const HessenbergPencil& p) {
  require_hessenberg_pair(p);
  require(!p.extended(), "to_inv_hessenberg: square pencil required");
  require(p.proper(), "to_inv_hessenberg: proper pencil required");
  const Index n = p.steps();
  if (n == 1) return p;

  // H = Rh * Qh', K = Rk * Qk' with descending patterns on the right.
  HessenbergQR qh = qr_hessenberg(p.h);
  HessenbergQR qk = qr_hessenberg(p.k);
  TransferResult th = transfer_through(qh.q, qh.r, TransferDirection::LeftToRight);
  TransferResult tk = transfer_through(qk.q, qk.r, TransferDirection::LeftToRight);

  // P = Qh' * Qk'^H: descending 0..n-2 followed by ascending n-2..0; the two
  // cores at n-2 fuse.
  std::vector<CoreTransformation> chain = th.pattern.cores;  // indices 0..n-2
  chain[n - 2] = chain[n - 2].fuse(tk.pattern.cores[n - 2].adjoint());
  std::vector<CoreTransformation> tail;  // indices n-3..0
  for (Index j = n - 3; j >= 0; --j) tail.push_back(tk.pattern.cores[j].adjoint());

  // Turn the V shape into a wedge: P = (ascending n-2..0) * (descending 1..n-2).
  std::vector<CoreTransformation> asc;
  std::deque<CoreTransformation> desc;
  for (Index j = n - 3; j >= 0; --j) {
    const CoreTransformation& t = tail[n - 3 - j];  // index j
    Turnover to = turnover(chain[j], chain[j + 1], t);
    asc.push_back(to.first);        // index j+1
    desc.push_front(to.third);      // index j+1
    chain[j] = to.second;           // index j
    chain.pop_back();
  }
  asc.push_back(chain[0]);

  CorePattern asc_pattern{asc, n};
  CorePattern desc_pattern{std::vector<CoreTransformation>(desc.begin(), desc.end()), n};

  // Z * Rk * D^H = Rh * A  with A ascending, D descending.
  HessenbergPencil out;
  out.k = tk.r;
  desc_pattern.apply_adjoint_right(out.k);
  out.h = th.r;
  asc_pattern.apply_right(out.h);
  return out;
}

Matrix TridiagonalPencil::t_dense() const {
  Matrix m = Matrix::Zero(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    m(j, j) = t_main(j);
    if (j + 1 < rows) m(j + 1, j) = t_sub(j);
    if (j + 1 < cols) m(j, j + 1) = t_super(j);
  }
  return m;
}

Matrix TridiagonalPencil::s_dense() const {
  Matrix m = Matrix::Zero(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    m(j, j) = s_main(j);
    if (j + 1 < rows) m(j + 1, j) = s_sub(j);
    if (j + 1 < cols) m(j, j + 1) = s_super(j);
  }
  return m;
}

TridiagonalPencil TridiagonalPencil::leading(Index n) const {
  require(n >= 1 && n <= cols && n <= rows, "leading: size out of range");
  TridiagonalPencil out;
  out.rows = n;
  out.cols = n;
  out.t_main = t_main.head(n);
  out.s_main = s_main.head(n);
  out.t_sub = t_sub.head(n - 1);
  out.s_sub = s_sub.head(n - 1);
  out.t_super = t_super.head(n - 1);
  out.s_super = s_super.head(n - 1);
  return out;
}

TridiagonalPencil TridiagonalPencil::from_dense(const Matrix& t, const Matrix& s) {
  require(t.rows() == s.rows() && t.cols() == s.cols(), "pencil matrices must match in size");
  require(t.rows() == t.cols() || t.rows() == t.cols() + 1,
          "pencil must be square or extended by one row");
  TridiagonalPencil out;
  out.rows = t.rows();
  out.cols = t.cols();
  const Index nsub = std::min(out.rows - 1, out.cols);
  out.t_main = t.diagonal();
  out.s_main = s.diagonal();
  out.t_sub = Vector::Zero(nsub);
  out.s_sub = Vector::Zero(nsub);
  for (Index j = 0; j < nsub; ++j) {
    out.t_sub(j) = t(j + 1, j);
    out.s_sub(j) = s(j + 1, j);
  }
  out.t_super = Vector::Zero(out.cols - 1);
  out.s_super = Vector::Zero(out.cols - 1);
  for (Index j = 0; j + 1 < out.cols; ++j) {
    out.t_super(j) = t(j, j + 1);
    out.s_super(j) = s(j, j + 1);
  }
  return out;
}

}  // namespace rk
