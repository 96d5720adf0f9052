#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "ratkrylov/biorthogonal.hpp"
#include "ratkrylov/pencils.hpp"

namespace rk {

/// Dense LU factorizations of shifted operators (p A - q I), cached per
/// distinct projective pair. The adjoint solve serves the A^H side, since
/// (conj(p) A - conj(q) I)^H = p A^H - q I.
class ShiftedSolveCache {
 public:
  explicit ShiftedSolveCache(const Matrix& a);

  Vector solve(Complex p, Complex q, const Vector& x);
  Vector adjoint_solve(Complex p, Complex q, const Vector& x);

 private:
  const Eigen::PartialPivLU<Matrix>& factor(Complex p, Complex q);

  const Matrix& a_;
  struct Entry {
    Complex p, q;
    std::unique_ptr<Eigen::PartialPivLU<Matrix>> lu;
  };
  std::vector<Entry> entries_;
};

struct RatLanOptions {
  /// Free parameters of the first step; each may be anything except (0, 0).
  /// (lambda_1, beta_1) also fixes which of the free (0,1) pencil entries
  /// vanishes; the default puts the zero in S.
  Complex lambda1{1.0, 0.0};
  Complex beta1{0.0, 0.0};
  Complex l1{1.0, 0.0};
  Complex b1{0.0, 0.0};
  /// Serious-breakdown threshold on |<v_hat, w_hat>| relative to the norms.
  double breakdown_tol = 1e-13;
  /// Debug toggle: project candidates against all previous basis vectors.
  bool rebiorthogonalize = false;
};

/// One-step state of the six-term recurrence. Holds the last two basis
/// vectors per side plus auxiliaries; it never sees the accumulated bases.
class RatLanStepper {
 public:
  /// Cleaner hook applied to the candidate pair before normalization (used
  /// by the driver's debug rebiorthogonalization).
  using Cleaner = std::function<void(Vector&, Vector&)>;

  RatLanStepper(const Matrix& a, Vector v, Vector w, std::vector<ProjectivePole> xi,
                std::vector<ProjectivePole> psi, RatLanOptions options = {});

  struct StepResult {
    enum class Status { Ok, LuckyV, LuckyW, Serious } status = Status::Ok;
    Vector v_next, w_next;
    /// Column entries of the extended pencil produced by this step:
    /// (T, S)(step-1, step), (step, step), (step+1, step), 0-based column = step-1.
    Complex t_up{0, 0}, s_up{0, 0}, t_diag{0, 0}, s_diag{0, 0}, t_down{0, 0}, s_down{0, 0};
    /// On lucky termination: the terminal square column (rows step-1, step).
    Complex t_term_up{0, 0}, s_term_up{0, 0}, t_term_diag{0, 0}, s_term_diag{0, 0};
    /// Normalization bookkeeping: alpha_bar * u * <v_hat, w_hat>, 1 in exact
    /// arithmetic.
    Complex normalization_product{1, 0};
  };

  /// Advance from step i to i+1 (first call builds v_2, w_2). The step index
  /// of the NEXT vector to build is step() + 1.
  StepResult advance(const Cleaner& cleaner = nullptr);

  Index step() const { return step_; }
  Index max_steps() const { return static_cast<Index>(xi_.size()); }

 private:
  const Matrix& a_;
  ShiftedSolveCache cache_;
  std::vector<ProjectivePole> xi_, psi_;  // xi_[k-1] = (b_{k+1}, l_{k+1})
  RatLanOptions opt_;
  Index step_ = 0;
  Vector v_prev_, v_curr_, w_prev_, w_curr_;
  Vector av_prev_, av_curr_;  // A v_{i-1}, A v_i for the w-side temps
};

/// Output of the rational Lanczos iteration. With s completed steps the
/// bases hold s+1 vectors and the pencil is (s+1) x s; on lucky termination
/// at step s the bases hold s vectors and the pencil is square s x s.
struct RatLanResult {
  Matrix v;
  Matrix w;
  TridiagonalPencil pencil;
  std::vector<ProjectivePole> xi, psi;
  BreakdownReport breakdown;
  std::vector<Complex> normalization_products;

  Index steps() const { return pencil.cols; }
};

/// Run the iteration for n steps: bases for K_{n+1}(A, v; Xi) and
/// L_{n+1}(A^H, w; Psi) with W^H V = I, plus the extended tridiagonal pencil
/// satisfying A V S = V T exactly and W^H A V S ~ T while biorthogonality
/// lasts. Requires w^H v != 0 (w is rescaled so that w^H v = 1).
RatLanResult rat_lan(const Matrix& a, const Vector& v, const Vector& w, Index n,
                     const std::vector<ProjectivePole>& xi,
                     const std::vector<ProjectivePole>& psi, RatLanOptions options = {});

/// Poles of K from the subdiagonal ratios T(i+1,i)/S(i+1,i).
std::vector<ProjectivePole> recover_poles_sub(const TridiagonalPencil& p, double tol = 1e-14);

/// Conjugated poles of L from the superdiagonal ratios T(i,i+1)/S(i,i+1),
/// i >= 1; the free (0,1) entries are excluded.
std::vector<ProjectivePole> recover_poles_super(const TridiagonalPencil& p, double tol = 1e-14);

}  // namespace rk
