#pragma once

// Closed-form optimal UD success probability for three phase-symmetric
// coherent states. Linear dependence of the failure states forces
// det(G - p_s I) = 0, which for N = 3 reduces to the depressed cubic
//
//   q^3 - 3 q + 2 cos(phi) = 0,   q = (1 - p_s) e^{3 a^2 / 2},
//
// with Berry phase phi = 3 sqrt(3) a^2 / 2. Writing theta = sqrt(3) a^2 / 2:
//
//   p1 = 1 + 2 e^{-3a^2/2} cos(theta)
//   p2 = 1 - e^{-3a^2/2} (cos(theta) - sqrt(3) sin(theta))
//   p3 = 1 - e^{-3a^2/2} (cos(theta) + sqrt(3) sin(theta))
//
// The physical root is the one with q >= 1. It switches branch every time
// phi crosses a multiple of 2 pi, i.e. every 4 pi / (3 sqrt 3) in a^2, cycling
// p3 -> p1 -> p2 -> p3 ...

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "cvdisc/types.hpp"

namespace cvdisc {

template <typename Real = double>
constexpr Real kink_period_n3() {
  return Real(4) * std::numbers::pi_v<Real> / (Real(3) * std::numbers::sqrt3_v<Real>);
}

template <typename Real = double>
Real berry_phase_n3(Real alpha_sq) {
  return Real(3) * std::numbers::sqrt3_v<Real> * alpha_sq / Real(2);
}

template <typename Real = double>
struct CubicSolution {
  Real alpha_sq = 0;
  Real berry_phase = 0;
  std::array<Real, 3> roots{};  // p_s^(1), p_s^(2), p_s^(3)
  int selected = 3;             // 1-based branch label
  Real p_s = 0;
  Real q_tilde = 0;             // (1 - p_s) e^{3 a^2 / 2} of the selected branch
};

// Branch label (1, 2 or 3) that is physical on [m T, (m+1) T), T the kink period.
inline int physical_branch_n3(long long interval) {
  static constexpr std::array<int, 3> cycle{3, 1, 2};
  return cycle[static_cast<std::size_t>(interval % 3)];
}

template <typename Real = double>
CubicSolution<Real> solve_n3(Real alpha_sq) {
  if (!(alpha_sq >= Real(0)) || !std::isfinite(static_cast<double>(alpha_sq)))
    throw DomainError("alpha^2 must be finite and nonnegative");
  CubicSolution<Real> s;
  s.alpha_sq = alpha_sq;
  s.berry_phase = berry_phase_n3(alpha_sq);
  const Real decay = std::exp(Real(-3) * alpha_sq / Real(2));
  const Real theta = std::numbers::sqrt3_v<Real> * alpha_sq / Real(2);
  const Real ct = std::cos(theta);
  const Real st = std::numbers::sqrt3_v<Real> * std::sin(theta);
  s.roots[0] = Real(1) + Real(2) * decay * ct;
  s.roots[1] = Real(1) - decay * (ct - st);
  s.roots[2] = Real(1) - decay * (ct + st);

  const auto interval = static_cast<long long>(std::floor(alpha_sq / kink_period_n3<Real>()));
  s.selected = physical_branch_n3(interval);
  s.p_s = s.roots[static_cast<std::size_t>(s.selected - 1)];
  s.q_tilde = (Real(1) - s.p_s) / decay;
  return s;
}

// Residual of the cubic at the scaled failure probability of a root.
template <typename Real = double>
Real cubic_residual_n3(Real alpha_sq, Real p_s) {
  const Real q = (Real(1) - p_s) * std::exp(Real(3) * alpha_sq / Real(2));
  return q * q * q - Real(3) * q + Real(2) * std::cos(berry_phase_n3(alpha_sq));
}

// Kinks 4 pi m / (3 sqrt 3) (phi = 2 pi m), m >= 1, up to alpha_sq_max.
template <typename Real = double>
std::vector<Real> kinks_n3(Real alpha_sq_max) {
  if (!(alpha_sq_max > Real(0))) throw DomainError("alpha^2 bound must be positive");
  std::vector<Real> out;
  for (long long m = 1;; ++m) {
    const Real k = Real(m) * kink_period_n3<Real>();
    if (k > alpha_sq_max) break;
    out.push_back(k);
  }
  return out;
}

}  // namespace cvdisc
