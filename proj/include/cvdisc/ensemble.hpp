#pragma once

// Phase-symmetric coherent-state alphabet {|alpha w^k>}, w = exp(2 pi i / N),
// and its exact decomposition on the orthonormal phi-basis:
//
//   |alpha_k> = sum_j c_j w^{kj} |phi_j>,
//   c_j^2     = (1/N) sum_l w^{-jl} exp(alpha^2 (w^l - 1)).
//
// All states are handled through alpha^2 only; alpha is taken real.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cvdisc/types.hpp"

namespace cvdisc {

template <typename Real = double>
class EnsembleSpec {
 public:
  EnsembleSpec(int n_states, Real alpha_sq) : n_(n_states), alpha_sq_(alpha_sq) {
    if (n_states < 2) throw DomainError("ensemble needs at least two states");
    if (!std::isfinite(static_cast<double>(alpha_sq)) || alpha_sq < Real(0))
      throw DomainError("alpha^2 must be finite and nonnegative");
  }

  int n_states() const { return n_; }
  Real alpha_sq() const { return alpha_sq_; }
  std::complex<Real> omega(long long power = 1) const { return root_of_unity<Real>(n_, power); }

 private:
  int n_;
  Real alpha_sq_;
};

template <typename Real = double>
struct CoefficientProfile {
  int n = 0;
  Real alpha_sq = 0;
  Vector<Real> c_sq;
  Vector<Real> c;
  Real c_min = 0;
  int multiplicity = 0;
  std::vector<bool> zero_mask;
  // true where c_j is degenerate with c_min (inside the degeneracy band)
  std::vector<bool> min_mask;
  // only one coefficient survives the zero mask (alpha = 0)
  bool degenerate = false;
  // some coefficient sits within 10x of the degeneracy band edge
  bool near_band_edge = false;
  Real max_imag_residue = 0;

  int nonzero_count() const {
    return static_cast<int>(std::count(zero_mask.begin(), zero_mask.end(), false));
  }
};

template <typename Real = double>
CoefficientProfile<Real> coefficients(const EnsembleSpec<Real>& spec, const Tolerances& tol = {}) {
  if (!(tol.zero_threshold > 0 && tol.zero_threshold < 1))
    throw DomainError("zero threshold must lie in (0, 1)");
  const int n = spec.n_states();
  const Real a2 = spec.alpha_sq();
  const auto w = roots_of_unity<Real>(n);

  // exp(alpha^2 (w^l - 1)) for each l
  std::vector<std::complex<Real>> e(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    const auto& wl = w[static_cast<std::size_t>(l)];
    e[static_cast<std::size_t>(l)] =
        std::polar(std::exp(a2 * (wl.real() - Real(1))), a2 * wl.imag());
  }

  CoefficientProfile<Real> p;
  p.n = n;
  p.alpha_sq = a2;
  p.c_sq.resize(n);
  p.c.resize(n);
  p.zero_mask.assign(static_cast<std::size_t>(n), false);
  p.min_mask.assign(static_cast<std::size_t>(n), false);

  for (int j = 0; j < n; ++j) {
    std::complex<Real> s{0, 0};
    for (int l = 0; l < n; ++l)
      s += w[static_cast<std::size_t>(((-static_cast<long long>(j) * l) % n + n) % n)] *
           e[static_cast<std::size_t>(l)];
    s /= Real(n);
    p.max_imag_residue = std::max(p.max_imag_residue, std::abs(s.imag()));
    if (std::abs(s.imag()) >= Real(1e-10))
      throw DomainError("imaginary residue in coefficient sum: " +
                        std::to_string(static_cast<double>(s.imag())));
    if (s.real() < Real(-1e-12))
      throw DomainError("coefficient c_j^2 is negative beyond rounding");
    const Real v = std::max(s.real(), Real(0));
    p.c_sq(j) = v;
    p.c(j) = std::sqrt(v);
    p.zero_mask[static_cast<std::size_t>(j)] = v < Real(tol.zero_threshold);
  }

  Real min_sq = std::numeric_limits<Real>::infinity();
  for (int j = 0; j < n; ++j)
    if (!p.zero_mask[static_cast<std::size_t>(j)]) min_sq = std::min(min_sq, p.c_sq(j));
  p.c_min = std::sqrt(min_sq);

  const Real band = Real(tol.degeneracy) * std::max(min_sq, Real(1e-300));
  for (int j = 0; j < n; ++j) {
    if (p.zero_mask[static_cast<std::size_t>(j)]) continue;
    const Real gap = std::abs(p.c_sq(j) - min_sq);
    if (gap <= band) {
      p.min_mask[static_cast<std::size_t>(j)] = true;
      ++p.multiplicity;
    } else if (gap <= Real(10) * band) {
      p.near_band_edge = true;
    }
  }
  p.degenerate = p.nonzero_count() == 1;
  return p;
}

template <typename Real = double>
struct GramMatrix {
  CMatrix<Real> entries;

  std::complex<Real> operator()(int j, int k) const { return entries(j, k); }
  int size() const { return static_cast<int>(entries.rows()); }
};

// <alpha_j|alpha_k> = exp(alpha^2 (w^{k-j} - 1))
template <typename Real = double>
GramMatrix<Real> gram(const EnsembleSpec<Real>& spec) {
  const int n = spec.n_states();
  const Real a2 = spec.alpha_sq();
  GramMatrix<Real> g;
  g.entries.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const auto w = spec.omega(k - j);
      g.entries(j, k) = std::polar(std::exp(a2 * (w.real() - Real(1))), a2 * w.imag());
    }
  }
  return g;
}

// Smallest cutoff >= min_cutoff whose discarded Poisson(alpha^2) weight is
// below tail_eps. Returns {cutoff, discarded weight}.
template <typename Real = double>
std::pair<int, Real> poisson_cutoff(Real alpha_sq, int min_cutoff, Real tail_eps,
                                    std::size_t hard_cap = kDefaultHardCutoff) {
  if (alpha_sq == Real(0)) return {min_cutoff, Real(0)};
  if (alpha_sq > Real(hard_cap))
    throw CutoffOverflow("alpha^2 exceeds the Fock cutoff cap", hard_cap);
  const std::size_t len = 2 * hard_cap + 64;
  const Real log_a2 = std::log(alpha_sq);
  std::vector<Real> pmf(len);
  for (std::size_t m = 0; m < len; ++m) {
    const Real nn = Real(m);
    pmf[m] = std::exp(-alpha_sq + nn * log_a2 - std::lgamma(nn + Real(1)));
  }
  // suffix[m] = sum_{n >= m} pmf[n], accumulated from the small end
  std::vector<Real> suffix(len + 1, Real(0));
  for (std::size_t m = len; m-- > 0;) suffix[m] = suffix[m + 1] + pmf[m];

  for (std::size_t m = static_cast<std::size_t>(std::max(min_cutoff, 0)); m <= hard_cap; ++m)
    if (suffix[m + 1] < tail_eps) return {static_cast<int>(m), suffix[m + 1]};
  throw CutoffOverflow("Poisson tail above tolerance at the Fock cutoff cap", hard_cap);
}

// Fock amplitude e^{-a^2/2} a^n / sqrt(n!) of |alpha> (alpha real), log space.
template <typename Real = double>
Real coherent_magnitude(Real alpha_sq, int n) {
  if (alpha_sq == Real(0)) return n == 0 ? Real(1) : Real(0);
  const Real nn = Real(n);
  return std::exp(-alpha_sq / Real(2) + nn / Real(2) * std::log(alpha_sq) -
                  std::lgamma(nn + Real(1)) / Real(2));
}

// Fock amplitudes of |alpha_k> on levels 0..cutoff.
template <typename Real = double>
CVector<Real> coherent_state(const EnsembleSpec<Real>& spec, int k, int cutoff) {
  CVector<Real> v(cutoff + 1);
  for (int m = 0; m <= cutoff; ++m)
    v(m) = coherent_magnitude(spec.alpha_sq(), m) * spec.omega(static_cast<long long>(k) * m);
  return v;
}

template <typename Real = double>
struct BasisAmplitudes {
  int cutoff = 0;
  Matrix<Real> amps;  // row j holds <n|phi_j>, n = 0..cutoff
  Real tail_mass = 0;
};

template <typename Real = double>
BasisAmplitudes<Real> basis_amplitudes(const CoefficientProfile<Real>& profile, Real tail_eps,
                                       std::size_t hard_cap = kDefaultHardCutoff) {
  if (!(tail_eps > Real(0) && tail_eps <= Real(1e-6)))
    throw DomainError("tail_eps must lie in (0, 1e-6]");
  if (profile.nonzero_count() == 0) throw DomainError("no nonzero coefficient");
  const int n = profile.n;
  const auto [cutoff, tail] = poisson_cutoff(profile.alpha_sq, n - 1, tail_eps, hard_cap);

  BasisAmplitudes<Real> b;
  b.cutoff = cutoff;
  b.tail_mass = tail;
  b.amps = Matrix<Real>::Zero(n, cutoff + 1);
  for (int j = 0; j < n; ++j) {
    if (profile.zero_mask[static_cast<std::size_t>(j)]) continue;
    for (int m = j; m <= cutoff; m += n)
      b.amps(j, m) = coherent_magnitude(profile.alpha_sq, m) / profile.c(j);
  }
  return b;
}

template <typename Real = double>
BasisAmplitudes<Real> basis_amplitudes(const EnsembleSpec<Real>& spec, Real tail_eps,
                                       std::size_t hard_cap = kDefaultHardCutoff,
                                       const Tolerances& tol = {}) {
  return basis_amplitudes(coefficients(spec, tol), tail_eps, hard_cap);
}

}  // namespace cvdisc
