#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>

#include "cvdisc/discrim.hpp"
#include "cvdisc/ensemble.hpp"
#include "cvdisc/types.hpp"

namespace cvdisc {

template <typename Real = double>
struct PosteriorVector {
  Vector<Real> probs;  // p(alpha_k | outcome 0, failure)
};

// All quantities in bits.
template <typename Real = double>
struct InfoReport {
  Real i_ud = 0;
  Real i_ir = 0;
  Real gain = 0;
  Real h_fail = 0;
};

// -sum p log2 p, with 0 log 0 = 0.
template <typename Real = double>
Real shannon_entropy(std::span<const Real> probs) {
  Real sum = 0;
  Real h = 0;
  for (Real p : probs) {
    if (p < Real(-1e-12) || p > Real(1) + Real(1e-12) || !std::isfinite(static_cast<double>(p)))
      throw DomainError("probability out of range: " + std::to_string(static_cast<double>(p)));
    sum += p;
    if (p > Real(0)) h -= p * std::log2(p);
  }
  if (std::abs(sum - Real(1)) > Real(1e-8)) throw DomainError("probabilities do not sum to one");
  return h;
}

template <typename Real = double>
Real shannon_entropy(const Vector<Real>& probs) {
  return shannon_entropy(std::span<const Real>(probs.data(), static_cast<std::size_t>(probs.size())));
}

template <typename Real = double>
PosteriorVector<Real> failure_posterior(const FailureProfile<Real>& fail) {
  const int n = fail.n;
  const auto w = roots_of_unity<Real>(n);
  PosteriorVector<Real> post;
  post.probs.resize(n);
  for (int k = 0; k < n; ++k) {
    std::complex<Real> s{0, 0};
    for (int m = 0; m < n; ++m)
      for (int l = 0; l < n; ++l)
        s += w[static_cast<std::size_t>(((-static_cast<long long>(k) * (l - m)) % n + n) % n)] *
             fail.b(l) * fail.b(m);
    post.probs(k) = std::max(Real(0), s.real() / Real(n));
  }
  if (fail.failure_dim <= 1)
    post.probs.setConstant(Real(1) / Real(n));
  else
    post.probs /= post.probs.sum();
  return post;
}

template <typename Real = double>
InfoReport<Real> info_report(const CoefficientProfile<Real>& profile) {
  const int n = profile.n;
  const Real log_n = std::log2(Real(n));
  InfoReport<Real> r;
  if (profile.degenerate) {
    r.h_fail = log_n;
    return r;
  }
  const Real ps = ud_success(profile);
  r.i_ud = ps * log_n;
  FailureProfile<Real> fail;
  try {
    fail = failure_profile(profile);
  } catch (const FullSeparation&) {
    r.i_ir = r.i_ud;
    r.gain = 0;
    r.h_fail = 0;
    return r;
  }
  r.h_fail = shannon_entropy(failure_posterior(fail).probs);
  r.i_ir = log_n - (Real(1) - ps) * r.h_fail;
  r.gain = (Real(1) - ps) * (log_n - r.h_fail);
  return r;
}

template <typename Real = double>
InfoReport<Real> info_report(const EnsembleSpec<Real>& spec, const Tolerances& tol = {}) {
  return info_report(coefficients(spec, tol));
}

}  // namespace cvdisc
