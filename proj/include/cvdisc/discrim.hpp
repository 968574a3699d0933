#pragma once

// Figures of merit for the information-recycling receiver: optimal UD via a
// diagonal state-separation map, followed by minimum-error discrimination of
// the failure states. The failure-branch gauge is fixed to the identity, so
// failure states keep the phase-symmetric form
//
//   |beta_k> = sum_j b_j w^{kj} |phi_j>,  b_j = sqrt((c_j^2 - P_s/N) / (1 - P_s)).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "cvdisc/ensemble.hpp"
#include "cvdisc/types.hpp"

namespace cvdisc {

template <typename Real = double>
struct FailureProfile {
  int n = 0;
  Vector<Real> b;
  Real p_s = 0;
  int failure_dim = 0;
};

template <typename Real = double>
struct DiscriminationReport {
  Real p_s = 0;
  Real p_c_med = 0;
  Real p_c_med_beta = 0;
  Real p_c_ir = 0;
  Real fidelity = 0;
  Real infidelity = 0;
  Real error_bound = 0;
  Real confidence_success = 1;
  Real confidence_failure = 0;
  int failure_dim = 0;
  // Failure branch empty; failure-side fields are NaN, p_c_ir = 1.
  bool full_separation = false;
};

template <typename Real = double>
struct JointDistribution {
  Matrix<Real> success;  // success(k', k) = p(k', s | alpha_k)
  Matrix<Real> failure;  // failure(k', k) = p(k', f | alpha_k)
};

// Kraus pair of the separation map, diagonal in the phi-basis.
template <typename Real = double>
struct SeparationOperators {
  Vector<Real> a_success_diag;
  Vector<Real> a_failure_diag;
};

// Helstrom bound (1/N)(sum_j c_j)^2.
template <typename Real = double>
Real helstrom_med(const CoefficientProfile<Real>& profile) {
  return profile.c.sum() * profile.c.sum() / Real(profile.n);
}

template <typename Real = double>
Real ud_success(const CoefficientProfile<Real>& profile) {
  if (profile.degenerate) return Real(0);
  return Real(profile.n) * profile.c_min * profile.c_min;
}

template <typename Real = double>
SeparationOperators<Real> separation_operators(const CoefficientProfile<Real>& profile) {
  if (profile.degenerate) throw DegenerateEnsemble("separation map undefined for the vacuum");
  const int n = profile.n;
  SeparationOperators<Real> ops;
  ops.a_success_diag.resize(n);
  ops.a_failure_diag.resize(n);
  for (int j = 0; j < n; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    if (profile.zero_mask[sj]) {
      // no support on this phi_j; route everything to failure
      ops.a_success_diag(j) = 0;
      ops.a_failure_diag(j) = 1;
    } else if (profile.min_mask[sj]) {
      ops.a_success_diag(j) = 1;
      ops.a_failure_diag(j) = 0;
    } else {
      const Real r = profile.c_min / profile.c(j);
      ops.a_success_diag(j) = r;
      ops.a_failure_diag(j) = std::sqrt(std::max(Real(0), Real(1) - r * r));
    }
  }
  return ops;
}

template <typename Real = double>
FailureProfile<Real> failure_profile(const CoefficientProfile<Real>& profile) {
  const int n = profile.n;
  const Real ps = ud_success(profile);
  if (Real(1) - ps < Real(kFullSeparationFloor))
    throw FullSeparation("failure branch is empty (1 - P_s below floor)");
  FailureProfile<Real> f;
  f.n = n;
  f.p_s = ps;
  f.b = Vector<Real>::Zero(n);
  for (int j = 0; j < n; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    if (profile.zero_mask[sj] || (!profile.degenerate && profile.min_mask[sj])) continue;
    f.b(j) = std::max(Real(0), profile.c_sq(j) - ps / Real(n));
  }
  // The numerators sum to 1 - P_s exactly; dividing by their computed sum
  // keeps b normalized when 1 - P_s is itself a small difference.
  const Real denom = f.b.sum();
  if (!(denom > Real(0))) throw FullSeparation("failure branch is empty");
  f.b = (f.b / denom).cwiseSqrt();
  f.failure_dim = static_cast<int>((f.b.array() > Real(0)).count());
  return f;
}

template <typename Real = double>
Real failure_med(const FailureProfile<Real>& fail) {
  if (fail.failure_dim <= 1) return Real(1) / Real(fail.n);
  return fail.b.sum() * fail.b.sum() / Real(fail.n);
}

// <beta_j|beta_k> = sum_l b_l^2 w^{l(k-j)}
template <typename Real = double>
std::complex<Real> failure_overlap(const FailureProfile<Real>& fail, int j, int k) {
  std::complex<Real> s{0, 0};
  for (int l = 0; l < fail.n; ++l)
    s += fail.b(l) * fail.b(l) * root_of_unity<Real>(fail.n, static_cast<long long>(l) * (k - j));
  return s;
}

// <alpha_j|beta_k> = sum_l c_l b_l w^{l(k-j)}
template <typename Real = double>
std::complex<Real> overlap_alpha_beta(const CoefficientProfile<Real>& profile,
                                      const FailureProfile<Real>& fail, int j, int k) {
  std::complex<Real> s{0, 0};
  for (int l = 0; l < profile.n; ++l)
    s += profile.c(l) * fail.b(l) *
         root_of_unity<Real>(profile.n, static_cast<long long>(l) * (k - j));
  return s;
}

template <typename Real = double>
std::complex<Real> overlap_alpha_beta(const EnsembleSpec<Real>& spec, int j, int k,
                                      const Tolerances& tol = {}) {
  const int n = spec.n_states();
  if (j < 0 || j >= n || k < 0 || k >= n) throw DomainError("state index out of range");
  const auto profile = coefficients(spec, tol);
  return overlap_alpha_beta(profile, failure_profile(profile), j, k);
}

template <typename Real = double>
DiscriminationReport<Real> ir_report(const CoefficientProfile<Real>& profile) {
  DiscriminationReport<Real> r;
  r.p_s = ud_success(profile);
  r.p_c_med = helstrom_med(profile);
  r.confidence_success = 1;
  FailureProfile<Real> fail;
  try {
    fail = failure_profile(profile);
  } catch (const FullSeparation&) {
    const Real nan = std::numeric_limits<Real>::quiet_NaN();
    r.full_separation = true;
    r.p_c_ir = 1;
    r.p_c_med_beta = nan;
    r.fidelity = nan;
    r.infidelity = nan;
    r.error_bound = nan;
    r.confidence_failure = nan;
    r.failure_dim = 0;
    return r;
  }
  r.p_c_med_beta = failure_med(fail);
  r.p_c_ir = r.p_s + (Real(1) - r.p_s) * r.p_c_med_beta;
  const Real overlap = profile.c.dot(fail.b);
  r.fidelity = overlap * overlap;
  r.infidelity = Real(1) - r.fidelity;
  r.error_bound = std::max(Real(0), Real(1) - r.fidelity / r.p_c_med);
  r.confidence_failure = r.p_c_med_beta;
  r.failure_dim = fail.failure_dim;
  return r;
}

template <typename Real = double>
DiscriminationReport<Real> ir_report(const EnsembleSpec<Real>& spec, const Tolerances& tol = {}) {
  return ir_report(coefficients(spec, tol));
}

template <typename Real = double>
JointDistribution<Real> joint_distribution(const CoefficientProfile<Real>& profile) {
  if (profile.degenerate) throw DegenerateEnsemble("joint distribution undefined for the vacuum");
  const int n = profile.n;
  const Real ps = ud_success(profile);
  JointDistribution<Real> d;
  d.success = Matrix<Real>::Identity(n, n) * ps;
  d.failure = Matrix<Real>::Zero(n, n);

  FailureProfile<Real> fail;
  try {
    fail = failure_profile(profile);
  } catch (const FullSeparation&) {
    return d;
  }
  const auto w = roots_of_unity<Real>(n);
  for (int kp = 0; kp < n; ++kp) {
    for (int k = 0; k < n; ++k) {
      std::complex<Real> s{0, 0};
      for (int m = 0; m < n; ++m)
        for (int l = 0; l < n; ++l)
          s += w[static_cast<std::size_t>(
                   ((static_cast<long long>(kp - k) * (l - m)) % n + n) % n)] *
               fail.b(l) * fail.b(m);
      d.failure(kp, k) = std::max(Real(0), (Real(1) - ps) / Real(n) * s.real());
    }
  }
  return d;
}

template <typename Real = double>
JointDistribution<Real> joint_distribution(const EnsembleSpec<Real>& spec,
                                           const Tolerances& tol = {}) {
  return joint_distribution(coefficients(spec, tol));
}

}  // namespace cvdisc
