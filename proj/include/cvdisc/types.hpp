#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cvdisc {

template <typename Real>
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <typename Real>
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

// Error hierarchy. Everything thrown by the library derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Operation is undefined because all states coincide (alpha = 0).
class DegenerateEnsemble : public Error {
 public:
  using Error::Error;
};

// Fock truncation would need more levels than the configured cap.
class CutoffOverflow : public Error {
 public:
  CutoffOverflow(const std::string& what, std::size_t cap)
      : Error(what), cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

// 1 - P_s is below the resolvable floor; the failure branch is empty.
class FullSeparation : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class CertificationFailure : public Error {
 public:
  CertificationFailure(const std::string& what, int state_index, double eigenvalue)
      : Error(what), state_index_(state_index), eigenvalue_(eigenvalue) {}
  int state_index() const { return state_index_; }
  double eigenvalue() const { return eigenvalue_; }

 private:
  int state_index_;
  double eigenvalue_;
};

// Numerical bands used to decide "zero" and "degenerate" coefficients.
struct Tolerances {
  double zero_threshold = 1e-12;  // on c_j^2
  double degeneracy = 1e-9;       // relative band on |c_j^2 - c_min^2|
};

inline constexpr std::size_t kDefaultHardCutoff = 4096;
inline constexpr double kFullSeparationFloor = 1e-15;

// exp(2 pi i m / N) with m reduced mod N first, so that equal residues give
// bit-identical values.
template <typename Real>
std::complex<Real> root_of_unity(int n, long long m) {
  long long r = m % n;
  if (r < 0) r += n;
  const Real angle = Real(2) * std::numbers::pi_v<Real> * Real(r) / Real(n);
  return std::polar(Real(1), angle);
}

template <typename Real>
std::vector<std::complex<Real>> roots_of_unity(int n) {
  std::vector<std::complex<Real>> w(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) w[static_cast<std::size_t>(m)] = root_of_unity<Real>(n, m);
  return w;
}

}  // namespace cvdisc
