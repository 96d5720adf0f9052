#include "ratkrylov/lanczos.hpp"

#include <cmath>

namespace rk {

ShiftedSolveCache::ShiftedSolveCache(const Matrix& a) : a_(a) {}

const Eigen::PartialPivLU<Matrix>& ShiftedSolveCache::factor(Complex p, Complex q) {
  const double n1 = std::sqrt(std::norm(p) + std::norm(q));
  for (const auto& e : entries_) {
    const double n2 = std::sqrt(std::norm(e.p) + std::norm(e.q));
    if (std::abs(p * e.q - q * e.p) / (n1 * n2) <= 1e-14) {
      // Same projective pair; the caller rescales.
      return *e.lu;
    }
  }
  Entry e;
  e.p = p;
  e.q = q;
  e.lu = std::make_unique<Eigen::PartialPivLU<Matrix>>(
      p * a_ - q * Matrix::Identity(a_.rows(), a_.rows()));
  require(e.lu->rcond() > 1e-15, "shifted solve: pole lies on the spectrum of A");
  entries_.push_back(std::move(e));
  return *entries_.back().lu;
}

Vector ShiftedSolveCache::solve(Complex p, Complex q, const Vector& x) {
  const double n1 = std::sqrt(std::norm(p) + std::norm(q));
  for (const auto& e : entries_) {
    const double n2 = std::sqrt(std::norm(e.p) + std::norm(e.q));
    if (std::abs(p * e.q - q * e.p) / (n1 * n2) <= 1e-14) {
      const Complex scale = std::abs(e.p) >= std::abs(e.q) ? p / e.p : q / e.q;
      return e.lu->solve(x) / scale;
    }
  }
  factor(p, q);
  return entries_.back().lu->solve(x);
}

Vector ShiftedSolveCache::adjoint_solve(Complex p, Complex q, const Vector& x) {
  // (p A^H - q I) = (conj(p) A - conj(q) I)^H.
  const Complex pc = std::conj(p), qc = std::conj(q);
  const double n1 = std::sqrt(std::norm(pc) + std::norm(qc));
  for (const auto& e : entries_) {
    const double n2 = std::sqrt(std::norm(e.p) + std::norm(e.q));
    if (std::abs(pc * e.q - qc * e.p) / (n1 * n2) <= 1e-14) {
      const Complex scale = std::abs(e.p) >= std::abs(e.q) ? pc / e.p : qc / e.q;
      const Vector y = e.lu->adjoint().solve(x);
      return y / std::conj(scale);
    }
  }
  factor(pc, qc);
  const Vector y = entries_.back().lu->adjoint().solve(x);
  return y;
}

RatLanStepper::RatLanStepper(const Matrix& a, Vector v, Vector w,
                             std::vector<ProjectivePole> xi, std::vector<ProjectivePole> psi,
                             RatLanOptions options)
    : a_(a), cache_(a_), xi_(std::move(xi)), psi_(std::move(psi)), opt_(options), step_(1) {
  require(a_.rows() == a_.cols(), "rat_lan: square matrix required");
  require(v.size() == a_.rows() && w.size() == a_.rows(), "rat_lan: vector size mismatch");
  require(xi_.size() == psi_.size() && !xi_.empty(), "rat_lan: pole lists must match and be nonempty");
  require(std::norm(opt_.lambda1) + std::norm(opt_.beta1) > 0.0,
          "rat_lan: (lambda1, beta1) must not be (0, 0)");
  require(std::norm(opt_.l1) + std::norm(opt_.b1) > 0.0, "rat_lan: (l1, b1) must not be (0, 0)");
  v_curr_ = std::move(v);
  w_curr_ = std::move(w);
  av_curr_ = a_ * v_curr_;
}

RatLanStepper::StepResult RatLanStepper::advance(const Cleaner& cleaner) {
  require(step_ <= max_steps(), "rat_lan: pole lists exhausted");
  const Index i = step_;
  StepResult res;

  // Pole pair consumed by this step: xi_i = (b_{i+1}, l_{i+1}), psi likewise.
  const Complex b_next = xi_[i - 1].mu(), l_next = xi_[i - 1].nu();
  const Complex lam_next = psi_[i - 1].mu(), beta_next = psi_[i - 1].nu();

  Vector vhat, what_;
  Complex hist_t_up{0, 0}, hist_s_up{0, 0};  // coefficient of v_{i-1} in the column relation

  if (i == 1) {
    Vector vbar = cache_.solve(l_next, b_next, v_curr_);
    Vector wbar = cache_.adjoint_solve(beta_next, lam_next, w_curr_);
    Vector avbar = a_ * vbar;
    const Complex temp1 = inner(vbar, w_curr_) / inner(avbar, w_curr_);
    const Complex temp2 = inner(wbar, v_curr_) / inner(wbar, av_curr_);
    Vector ahwbar = a_.adjoint() * wbar;
    vhat = -temp1 * avbar + vbar;
    what_ = -temp2 * ahwbar + wbar;
    if (cleaner) cleaner(vhat, what_);

    const double vh_scale = std::abs(temp1) * avbar.norm() + vbar.norm();
    if (vhat.norm() <= opt_.breakdown_tol * std::max(vh_scale, 1e-300)) {
      res.status = StepResult::Status::LuckyV;
      // M vhat_2 = -temp1 A v_1 + v_1 = 0, so A (temp1 v_1) = v_1.
      res.s_term_diag = temp1;
      res.t_term_diag = 1.0;
      return res;
    }
    const double wh_scale = std::abs(temp2) * ahwbar.norm() + wbar.norm();
    if (what_.norm() <= opt_.breakdown_tol * std::max(wh_scale, 1e-300)) {
      res.status = StepResult::Status::LuckyW;
      return res;
    }
    const Complex prod = inner(vhat, what_);
    if (std::abs(prod) <= opt_.breakdown_tol * vhat.norm() * what_.norm()) {
      res.status = StepResult::Status::Serious;
      return res;
    }
    const Complex pi = 1.0 / prod;
    const double mag = std::sqrt(std::abs(pi));
    const Complex d1 = mag;                 // r = sigma = 1; |d1| = |gamma1|
    const Complex gamma1 = std::conj(pi) / mag;
    res.v_next = d1 * vhat;
    res.w_next = gamma1 * what_;
    res.t_diag = d1;
    res.s_diag = d1 * temp1;  // c_1
    res.t_down = b_next;
    res.s_down = l_next;
    res.normalization_product = std::conj(gamma1) * d1 * prod;
  } else {
    // Pole pairs from two steps back; at i = 2 these are the free parameters.
    const Complex lam_hist = (i == 2) ? opt_.lambda1 : psi_[i - 3].mu();
    const Complex beta_hist = (i == 2) ? opt_.beta1 : psi_[i - 3].nu();
    const Complex l_hist = (i == 2) ? opt_.l1 : xi_[i - 3].nu();
    const Complex b_hist = (i == 2) ? opt_.b1 : xi_[i - 3].mu();

    const bool beta_nonzero =
        std::abs(beta_hist) > 1e-14 * std::sqrt(std::norm(lam_hist) + std::norm(beta_hist));
    const bool l_nonzero =
        std::abs(l_hist) > 1e-14 * std::sqrt(std::norm(l_hist) + std::norm(b_hist));

    Vector vtil, wtil;
    if (beta_nonzero) {
      vtil = cache_.solve(l_next, b_next,
                          std::conj(beta_hist) * av_prev_ - std::conj(lam_hist) * v_prev_) /
             std::conj(beta_hist);
      hist_s_up = 1.0;
      hist_t_up = std::conj(lam_hist) / std::conj(beta_hist);
    } else {
      vtil = -cache_.solve(l_next, b_next, lam_hist * v_prev_);
      hist_s_up = 0.0;
      hist_t_up = lam_hist;
    }
    if (l_nonzero) {
      wtil = cache_.adjoint_solve(beta_next, lam_next,
                                  std::conj(l_hist) * (a_.adjoint() * w_prev_) -
                                      std::conj(b_hist) * w_prev_) /
             std::conj(l_hist);
    } else {
      wtil = -cache_.adjoint_solve(beta_next, lam_next, std::conj(b_hist) * w_prev_);
    }

    Vector vbar = cache_.solve(l_next, b_next, v_curr_);
    Vector wbar = cache_.adjoint_solve(beta_next, lam_next, w_curr_);
    Vector avbar = a_ * vbar;

    const Complex den_v = inner(vbar, w_prev_) * inner(avbar, w_curr_) -
                          inner(vbar, w_curr_) * inner(avbar, w_prev_);
    const Complex tempv1 = (inner(vtil, w_prev_) * inner(avbar, w_curr_) -
                            inner(vtil, w_curr_) * inner(avbar, w_prev_)) /
                           den_v;
    const Complex tempv2 = tempv1 * inner(vbar, w_curr_) / inner(avbar, w_curr_) -
                           inner(vtil, w_curr_) / inner(avbar, w_curr_);
    const Complex den_w = inner(wbar, v_prev_) * inner(wbar, av_curr_) -
                          inner(wbar, v_curr_) * inner(wbar, av_prev_);
    const Complex tempw1 = (inner(wtil, v_prev_) * inner(wbar, av_curr_) -
                            inner(wtil, v_curr_) * inner(wbar, av_prev_)) /
                           den_w;
    const Complex tempw2 = tempw1 * inner(wbar, v_curr_) / inner(wbar, av_curr_) -
                           inner(wtil, v_curr_) / inner(wbar, av_curr_);

    Vector ahwbar = a_.adjoint() * wbar;
    vhat = -tempv2 * avbar + tempv1 * vbar - vtil;
    what_ = -tempw2 * ahwbar + tempw1 * wbar - wtil;
    if (cleaner) cleaner(vhat, what_);

    const double vh_scale =
        std::abs(tempv2) * avbar.norm() + std::abs(tempv1) * vbar.norm() + vtil.norm();
    if (vhat.norm() <= opt_.breakdown_tol * std::max(vh_scale, 1e-300)) {
      res.status = StepResult::Status::LuckyV;
      // A (v_{i-1} * s_up + tempv2 v_i) = t_up v_{i-1} + tempv1 v_i.
      res.s_term_up = hist_s_up;
      res.t_term_up = hist_t_up;
      res.s_term_diag = tempv2;
      res.t_term_diag = tempv1;
      return res;
    }
    const double wh_scale =
        std::abs(tempw2) * ahwbar.norm() + std::abs(tempw1) * wbar.norm() + wtil.norm();
    if (what_.norm() <= opt_.breakdown_tol * std::max(wh_scale, 1e-300)) {
      res.status = StepResult::Status::LuckyW;
      return res;
    }
    const Complex prod = inner(vhat, what_);
    if (std::abs(prod) <= opt_.breakdown_tol * vhat.norm() * what_.norm()) {
      res.status = StepResult::Status::Serious;
      return res;
    }
    const Complex pi = 1.0 / prod;
    const double mag = std::sqrt(std::abs(pi));
    const Complex u = mag;
    const Complex alpha = std::conj(pi) / mag;
    res.v_next = u * vhat;
    res.w_next = alpha * what_;
    res.s_up = u * hist_s_up;
    res.t_up = u * hist_t_up;
    res.s_diag = u * tempv2;  // c_i
    res.t_diag = u * tempv1;  // d_i
    res.s_down = l_next;
    res.t_down = b_next;
    res.normalization_product = std::conj(alpha) * u * prod;
  }

  // Shift the six-term window.
  v_prev_ = std::move(v_curr_);
  w_prev_ = std::move(w_curr_);
  av_prev_ = std::move(av_curr_);
  v_curr_ = res.v_next;
  w_curr_ = res.w_next;
  av_curr_ = a_ * v_curr_;
  ++step_;
  return res;
}

RatLanResult rat_lan(const Matrix& a, const Vector& v, const Vector& w, Index n,
                     const std::vector<ProjectivePole>& xi, const std::vector<ProjectivePole>& psi,
                     RatLanOptions options) {
  require(a.rows() == a.cols(), "rat_lan: square matrix required");
  const Index m = a.rows();
  require(n >= 1 && n <= m, "rat_lan: need 1 <= n <= m");
  require(static_cast<Index>(xi.size()) == n && static_cast<Index>(psi.size()) == n,
          "rat_lan: pole lists must have length n");

  Vector v1 = v;
  const double vn = v1.norm();
  require(vn > 0.0, "rat_lan: zero start vector");
  v1 /= vn;
  Vector w1 = w;
  const Complex c = inner(v1, w1);  // w^H v
  require(std::abs(c) > 1e-14 * w1.norm(), "rat_lan: w^H v = 0");
  w1 /= std::conj(c);

  Matrix vbasis(m, n + 1), wbasis(m, n + 1);
  vbasis.col(0) = v1;
  wbasis.col(0) = w1;
  Vector t_sub = Vector::Zero(n), s_sub = Vector::Zero(n);
  Vector t_main = Vector::Zero(n), s_main = Vector::Zero(n);
  Vector t_super = Vector::Zero(n > 1 ? n - 1 : 0), s_super = Vector::Zero(n > 1 ? n - 1 : 0);

  RatLanResult out;
  out.xi = xi;
  out.psi = psi;

  RatLanStepper stepper(a, v1, w1, xi, psi, options);
  RatLanStepper::Cleaner cleaner;
  if (options.rebiorthogonalize) {
    cleaner = [&](Vector& vh, Vector& wh) {
      const Index have = stepper.step();
      auto vb = vbasis.leftCols(have);
      auto wb = wbasis.leftCols(have);
      vh -= vb * (wb.adjoint() * vh);
      wh -= wb * (vb.adjoint() * wh);
    };
  }

  Index completed = 0;       // pencil columns written
  Index vectors = 1;         // basis vectors available
  bool square = false;
  for (Index i = 1; i <= n; ++i) {
    auto res = stepper.advance(cleaner);
    if (res.status == RatLanStepper::StepResult::Status::Ok) {
      vbasis.col(i) = res.v_next;
      wbasis.col(i) = res.w_next;
      ++vectors;
      const Index col = i - 1;
      t_main(col) = res.t_diag;
      s_main(col) = res.s_diag;
      t_sub(col) = res.t_down;
      s_sub(col) = res.s_down;
      if (col >= 1) {
        t_super(col - 1) = res.t_up;
        s_super(col - 1) = res.s_up;
      }
      out.normalization_products.push_back(res.normalization_product);
      ++completed;
      continue;
    }
    out.breakdown.occurred = true;
    out.breakdown.step = i;
    if (res.status == RatLanStepper::StepResult::Status::LuckyV) {
      out.breakdown.kind = "lucky_v";
      // Terminal square column: the subspace is invariant at dimension i.
      const Index col = i - 1;
      t_main(col) = res.t_term_diag;
      s_main(col) = res.s_term_diag;
      if (col >= 1) {
        t_super(col - 1) = res.t_term_up;
        s_super(col - 1) = res.s_term_up;
      }
      ++completed;
      square = true;
    } else {
      out.breakdown.kind =
          res.status == RatLanStepper::StepResult::Status::LuckyW ? "lucky_w" : "serious";
    }
    break;
  }

  out.v = vbasis.leftCols(vectors);
  out.w = wbasis.leftCols(vectors);
  if (!square && completed > vectors - 1) completed = vectors - 1;

  TridiagonalPencil p;
  p.cols = completed;
  p.rows = square ? completed : completed + 1;
  p.t_main = t_main.head(completed);
  p.s_main = s_main.head(completed);
  const Index nsub = square ? std::max<Index>(completed - 1, 0) : completed;
  p.t_sub = t_sub.head(nsub);
  p.s_sub = s_sub.head(nsub);
  const Index nsup = std::max<Index>(completed - 1, 0);
  p.t_super = t_super.head(nsup);
  p.s_super = s_super.head(nsup);

  // Free (0,1) entries: pin T(0,1) so that row 0 of W^H A V S = T is exact.
  if (p.cols >= 2) {
    const Matrix sd = p.s_dense();
    const Vector col1 = out.v.leftCols(p.rows) * sd.col(1);
    p.t_super(0) = inner(Vector(a * col1), Vector(out.w.col(0)));
  }
  out.pencil = std::move(p);
  out.xi.resize(completed);
  out.psi.resize(completed);
  return out;
}

std::vector<ProjectivePole> recover_poles_sub(const TridiagonalPencil& p, double tol) {
  std::vector<ProjectivePole> poles;
  const double scale = std::max({p.t_sub.size() ? p.t_sub.cwiseAbs().maxCoeff() : 0.0,
                                 p.s_sub.size() ? p.s_sub.cwiseAbs().maxCoeff() : 0.0, 1e-300});
  for (Index j = 0; j < p.t_sub.size(); ++j) {
    require(std::abs(p.t_sub(j)) > tol * scale || std::abs(p.s_sub(j)) > tol * scale,
            "recover_poles_sub: improper pencil (both subdiagonal entries vanish)");
    poles.emplace_back(p.t_sub(j), p.s_sub(j));
  }
  return poles;
}

std::vector<ProjectivePole> recover_poles_super(const TridiagonalPencil& p, double tol) {
  std::vector<ProjectivePole> poles;
  const double scale = std::max({p.t_super.size() ? p.t_super.cwiseAbs().maxCoeff() : 0.0,
                                 p.s_super.size() ? p.s_super.cwiseAbs().maxCoeff() : 0.0, 1e-300});
  for (Index j = 1; j < p.t_super.size(); ++j) {
    require(std::abs(p.t_super(j)) > tol * scale || std::abs(p.s_super(j)) > tol * scale,
            "recover_poles_super: improper pencil (both superdiagonal entries vanish)");
    poles.emplace_back(p.t_super(j), p.s_super(j));
  }
  return poles;
}

}  // namespace rk
