#pragma once

#include <string>
#include <vector>

#include "ratkrylov/types.hpp"

namespace rk {

/// A pole xi = mu/nu on the extended complex plane, stored projectively so
/// that infinity (nu = 0) needs no special casing anywhere in the math.
class ProjectivePole {
 public:
  ProjectivePole() : mu_(1.0, 0.0), nu_(0.0, 0.0) {}  // infinity
  ProjectivePole(Complex mu, Complex nu);

  static ProjectivePole infinity() { return ProjectivePole(1.0, 0.0); }
  static ProjectivePole finite(Complex value) { return ProjectivePole(value, 1.0); }

  Complex mu() const { return mu_; }
  Complex nu() const { return nu_; }
  bool is_infinite(double tol = 1e-14) const;

  /// mu/nu; only meaningful for finite poles.
  Complex value() const { return mu_ / nu_; }

  ProjectivePole conj() const { return ProjectivePole(std::conj(mu_), std::conj(nu_)); }

  /// Chordal distance on the projective line: |mu1 nu2 - mu2 nu1| with both
  /// pairs normalized to unit length. Zero iff the poles coincide.
  double distance(const ProjectivePole& other) const;
  bool equals(const ProjectivePole& other, double tol = 1e-12) const {
    return distance(other) <= tol;
  }

  std::string str() const;

 private:
  Complex mu_, nu_;
};

/// Expansion operator parameters (rho A - eta I); must not represent the same
/// projective point as the step's pole (nu, mu), or the operator collapses to
/// a multiple of the identity.
struct ContinuationPair {
  Complex rho{1.0, 0.0};
  Complex eta{0.0, 0.0};

  static ContinuationPair default_for(const ProjectivePole& pole);
  bool admissible_for(const ProjectivePole& pole, double tol = 1e-12) const;
};

/// Parse a comma-separated pole list. Accepted literals: `inf`, real numbers,
/// `a+bi` / `a-bi`, and pure imaginary `bi` / `-i`.
std::vector<ProjectivePole> parse_pole_list(const std::string& text);

/// Cycle a nonempty pole list to the requested length.
std::vector<ProjectivePole> cycle_poles(const std::vector<ProjectivePole>& poles, Index count);

}  // namespace rk
