#pragma once

// Brute-force verification layer. Every state and operator of the receiver is
// assembled explicitly, either in the N-dimensional phi-basis or in a
// truncated Fock basis, and all probabilities are re-derived as traces
// Tr(Pi rho). Nothing here calls the closed forms in discrim.hpp or
// infotheory.hpp, so the two routes can be compared.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cvdisc/discrim.hpp"
#include "cvdisc/ensemble.hpp"
#include "cvdisc/types.hpp"

namespace cvdisc {

enum class Basis { phi, fock };
enum class MedTarget { inputs, failure_states };

template <typename Real = double>
struct MatrixWorkspace {
  int n = 0;
  Real alpha_sq = 0;
  Basis basis = Basis::phi;
  int dimension = 0;
  int cutoff = -1;  // Fock only
  Real tail_mass = 0;

  // Coefficient magnitudes as seen by this route (block norms for Fock).
  Vector<Real> c;
  Real c_min = 0;
  int multiplicity = 0;

  // Columns are the state vectors.
  CMatrix<Real> phi, alpha, u, beta;

  CMatrix<Real> a_success, a_failure;
  CMatrix<Real> span_identity;  // projector onto span{phi_j}
  std::vector<CMatrix<Real>> pi_med, pi_success, pi_failure;
};

namespace oracle_detail {

template <typename Real>
CMatrix<Real> outer(const CVector<Real>& v) {
  return v * v.adjoint();
}

template <typename Real>
Real hermiticity_residual(const CMatrix<Real>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Real>
Real min_eigenvalue(const CMatrix<Real>& m) {
  const CMatrix<Real> h = (m + m.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

template <typename Real>
void check_povm_element(const CMatrix<Real>& m, const std::string& name) {
  if (hermiticity_residual(m) > Real(1e-10)) throw InvariantViolation(name + " is not Hermitian");
  const Real lo = min_eigenvalue(m);
  if (lo < Real(-1e-10))
    throw InvariantViolation(name + " has eigenvalue " + std::to_string(static_cast<double>(lo)));
}

template <typename Real>
Real expectation(const CMatrix<Real>& op, const CVector<Real>& v) {
  return (v.adjoint() * op * v)(0, 0).real();
}

}  // namespace oracle_detail

template <typename Real = double>
MatrixWorkspace<Real> build_workspace(const EnsembleSpec<Real>& spec, Basis basis,
                                      Real tail_eps = Real(1e-14),
                                      std::size_t hard_cap = kDefaultHardCutoff,
                                      const Tolerances& tol = {}) {
  using namespace oracle_detail;
  const int n = spec.n_states();
  MatrixWorkspace<Real> ws;
  ws.n = n;
  ws.alpha_sq = spec.alpha_sq();
  ws.basis = basis;
  ws.c.resize(n);

  if (basis == Basis::phi) {
    const auto profile = coefficients(spec, tol);
    ws.dimension = n;
    ws.c = profile.c;
    ws.phi = CMatrix<Real>::Identity(n, n);
    ws.alpha.resize(n, n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        ws.alpha(j, k) = profile.c(j) * spec.omega(static_cast<long long>(k) * j);
  } else {
    const auto [cut, tail] = poisson_cutoff(spec.alpha_sq(), n - 1, tail_eps, hard_cap);
    ws.cutoff = cut;
    ws.tail_mass = tail;
    ws.dimension = cut + 1;
    ws.alpha.resize(ws.dimension, n);
    for (int k = 0; k < n; ++k) ws.alpha.col(k) = coherent_state(spec, k, cut);
    ws.phi = CMatrix<Real>::Zero(ws.dimension, n);
    for (int j = 0; j < n; ++j) {
      Real norm_sq = 0;
      for (int m = j; m <= cut; m += n) norm_sq += std::norm(ws.alpha(m, 0));
      ws.c(j) = std::sqrt(norm_sq);
      if (ws.c(j) > Real(0))
        for (int m = j; m <= cut; m += n) ws.phi(m, j) = ws.alpha(m, 0) / ws.c(j);
    }
  }

  // Zero and degeneracy bands, evaluated on this route's coefficients.
  std::vector<bool> zero(static_cast<std::size_t>(n)), is_min(static_cast<std::size_t>(n));
  Real min_sq = std::numeric_limits<Real>::infinity();
  int alive = 0;
  for (int j = 0; j < n; ++j) {
    zero[static_cast<std::size_t>(j)] = ws.c(j) * ws.c(j) < Real(tol.zero_threshold);
    if (!zero[static_cast<std::size_t>(j)]) {
      ++alive;
      min_sq = std::min(min_sq, ws.c(j) * ws.c(j));
    }
  }
  if (alive <= 1) throw DegenerateEnsemble("workspace needs a non-vacuum ensemble");
  ws.c_min = std::sqrt(min_sq);
  const Real band = Real(tol.degeneracy) * std::max(min_sq, Real(1e-300));
  for (int j = 0; j < n; ++j) {
    is_min[static_cast<std::size_t>(j)] =
        !zero[static_cast<std::size_t>(j)] && std::abs(ws.c(j) * ws.c(j) - min_sq) <= band;
    if (is_min[static_cast<std::size_t>(j)]) ++ws.multiplicity;
  }

  const int dim = ws.dimension;
  ws.span_identity = ws.phi * ws.phi.adjoint();
  ws.u.resize(dim, n);
  for (int k = 0; k < n; ++k) {
    CVector<Real> v = CVector<Real>::Zero(dim);
    for (int j = 0; j < n; ++j) v += spec.omega(static_cast<long long>(k) * j) * ws.phi.col(j);
    ws.u.col(k) = v / std::sqrt(Real(n));
  }

  ws.a_success = CMatrix<Real>::Zero(dim, dim);
  ws.a_failure = CMatrix<Real>::Zero(dim, dim);
  for (int j = 0; j < n; ++j) {
    Real as = 0;
    if (is_min[static_cast<std::size_t>(j)])
      as = 1;
    else if (!zero[static_cast<std::size_t>(j)])
      as = ws.c_min / ws.c(j);
    const Real af = std::sqrt(std::max(Real(0), Real(1) - as * as));
    const CMatrix<Real> proj = outer<Real>(ws.phi.col(j));
    ws.a_success += as * proj;
    ws.a_failure += af * proj;
  }

  for (int k = 0; k < n; ++k) {
    ws.pi_med.push_back(outer<Real>(ws.u.col(k)));
    ws.pi_success.push_back(ws.a_success.adjoint() * ws.pi_med.back() * ws.a_success);
    ws.pi_failure.push_back(ws.a_failure.adjoint() * ws.pi_med.back() * ws.a_failure);
  }

  ws.beta.resize(dim, n);
  for (int k = 0; k < n; ++k) {
    const CVector<Real> v = ws.a_failure * ws.alpha.col(k);
    const Real nv = v.norm();
    if (nv * nv < Real(kFullSeparationFloor)) throw FullSeparation("failure branch is empty");
    ws.beta.col(k) = v / nv;
  }

  CMatrix<Real> med_sum = CMatrix<Real>::Zero(dim, dim);
  CMatrix<Real> ir_sum = CMatrix<Real>::Zero(dim, dim);
  for (int k = 0; k < n; ++k) {
    const std::string idx = std::to_string(k);
    check_povm_element(ws.pi_med[static_cast<std::size_t>(k)], "Pi_med_" + idx);
    check_povm_element(ws.pi_success[static_cast<std::size_t>(k)], "Pi_s_" + idx);
    check_povm_element(ws.pi_failure[static_cast<std::size_t>(k)], "Pi_f_" + idx);
    med_sum += ws.pi_med[static_cast<std::size_t>(k)];
    ir_sum += ws.pi_success[static_cast<std::size_t>(k)] + ws.pi_failure[static_cast<std::size_t>(k)];
  }
  if ((med_sum - ws.span_identity).cwiseAbs().maxCoeff() > Real(1e-10))
    throw InvariantViolation("MED projectors are not complete");
  if ((ir_sum - ws.span_identity).cwiseAbs().maxCoeff() > Real(1e-10))
    throw InvariantViolation("IR POVM is not complete");
  return ws;
}

// p(k', branch | alpha_k) = Tr(Pi^branch_k' rho_k)
template <typename Real = double>
JointDistribution<Real> brute_force_joint(const MatrixWorkspace<Real>& ws) {
  using oracle_detail::expectation;
  JointDistribution<Real> d;
  d.success.resize(ws.n, ws.n);
  d.failure.resize(ws.n, ws.n);
  for (int kp = 0; kp < ws.n; ++kp) {
    for (int k = 0; k < ws.n; ++k) {
      const CVector<Real> a = ws.alpha.col(k);
      d.success(kp, k) = expectation(ws.pi_success[static_cast<std::size_t>(kp)], a);
      d.failure(kp, k) = expectation(ws.pi_failure[static_cast<std::size_t>(kp)], a);
    }
  }
  return d;
}

template <typename Real = double>
DiscriminationReport<Real> brute_force_probabilities(const MatrixWorkspace<Real>& ws) {
  using oracle_detail::expectation;
  const int n = ws.n;
  const Real inv_n = Real(1) / Real(n);
  const auto joint = brute_force_joint(ws);

  DiscriminationReport<Real> r;
  Real fid = 0;
  for (int k = 0; k < n; ++k) {
    const CVector<Real> a = ws.alpha.col(k);
    const CVector<Real> b = ws.beta.col(k);
    r.p_c_med += inv_n * expectation(ws.pi_med[static_cast<std::size_t>(k)], a);
    r.p_c_med_beta += inv_n * expectation(ws.pi_med[static_cast<std::size_t>(k)], b);
    r.p_c_ir += inv_n * (joint.success(k, k) + joint.failure(k, k));
    r.p_s += inv_n * joint.success.col(k).sum();
    fid += inv_n * std::norm(a.dot(b));
  }
  r.fidelity = fid;
  r.infidelity = Real(1) - fid;
  r.error_bound = std::max(Real(0), Real(1) - fid / r.p_c_med);

  // Bayes: p(alpha_k | k, branch) = p(k, branch | alpha_k) / (N p(k, branch)).
  Real conf_s = 0;
  Real conf_f = 0;
  for (int k = 0; k < n; ++k) {
    const Real ps_k = joint.success.row(k).sum() * inv_n;
    const Real pf_k = joint.failure.row(k).sum() * inv_n;
    conf_s += inv_n * (ps_k > Real(0) ? joint.success(k, k) * inv_n / ps_k : Real(0));
    conf_f += inv_n * (pf_k > Real(0) ? joint.failure(k, k) * inv_n / pf_k : Real(0));
  }
  r.confidence_success = conf_s;
  r.confidence_failure = conf_f;

  // Rank of the failure set: eigenvalues of the failure Gram matrix.
  const CMatrix<Real> fg = ws.beta.adjoint() * ws.beta;
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(fg, Eigen::EigenvaluesOnly);
  r.failure_dim = static_cast<int>((es.eigenvalues().array() > Real(1e-9)).count());
  return r;
}

// max_{j != k} Tr(Pi^s_j rho_k); zero for an unambiguous success branch.
template <typename Real = double>
Real unambiguity_residual(const MatrixWorkspace<Real>& ws) {
  Real worst = 0;
  for (int j = 0; j < ws.n; ++j)
    for (int k = 0; k < ws.n; ++k)
      if (j != k)
        worst = std::max(worst, oracle_detail::expectation(ws.pi_success[static_cast<std::size_t>(j)],
                                                           CVector<Real>(ws.alpha.col(k))));
  return worst;
}

template <typename Real = double>
struct MedCertificate {
  bool passed = false;
  Real hermiticity_residual = 0;
  Real worst_eigenvalue = 0;  // min over k of lambda_min(Gamma - rho_k / N)
  int worst_k = -1;
};

// Helstrom optimality conditions for equiprobable pure states:
// Gamma = (1/N) sum_k Pi_k rho_k must be Hermitian and Gamma - rho_k / N >= 0.
template <typename Real = double>
MedCertificate<Real> certify_helstrom(const std::vector<CMatrix<Real>>& projectors,
                                      const CMatrix<Real>& states) {
  using namespace oracle_detail;
  const int n = static_cast<int>(states.cols());
  const Real inv_n = Real(1) / Real(n);
  const auto dim = states.rows();
  CMatrix<Real> gamma = CMatrix<Real>::Zero(dim, dim);
  for (int k = 0; k < n; ++k)
    gamma += inv_n * projectors[static_cast<std::size_t>(k)] * outer<Real>(states.col(k));

  MedCertificate<Real> cert;
  cert.hermiticity_residual = hermiticity_residual(gamma);
  cert.worst_eigenvalue = std::numeric_limits<Real>::infinity();
  for (int k = 0; k < n; ++k) {
    const Real lo = min_eigenvalue<Real>(gamma - inv_n * outer<Real>(states.col(k)));
    if (lo < cert.worst_eigenvalue) {
      cert.worst_eigenvalue = lo;
      cert.worst_k = k;
    }
  }
  cert.passed = cert.hermiticity_residual <= Real(1e-10) && cert.worst_eigenvalue >= Real(-1e-9);
  return cert;
}

template <typename Real = double>
MedCertificate<Real> certify_med_optimality(const MatrixWorkspace<Real>& ws, MedTarget which) {
  return certify_helstrom(ws.pi_med, which == MedTarget::inputs ? ws.alpha : ws.beta);
}

template <typename Real = double>
void require_certified(const MedCertificate<Real>& cert) {
  if (!cert.passed)
    throw CertificationFailure("Helstrom conditions violated at k = " + std::to_string(cert.worst_k),
                               cert.worst_k, static_cast<double>(cert.worst_eigenvalue));
}

// c_j^2 as direct Poisson block sums e^{-a^2} sum_p a^{2(j+pN)} / (j+pN)!.
template <typename Real = double>
Vector<Real> poisson_block_weights(const EnsembleSpec<Real>& spec, Real tail_eps = Real(1e-16),
                                   std::size_t hard_cap = kDefaultHardCutoff) {
  const int n = spec.n_states();
  const int cut = poisson_cutoff(spec.alpha_sq(), n - 1, tail_eps, hard_cap).first;
  Vector<Real> w = Vector<Real>::Zero(n);
  // add from the top so small terms accumulate first
  for (int m = cut; m >= 0; --m) {
    const Real a = coherent_magnitude(spec.alpha_sq(), m);
    w(m % n) += a * a;
  }
  return w;
}

// I(P:M) in bits from the full 2N-outcome joint distribution, without the
// symmetry reduction.
template <typename Real = double>
Real mutual_information_from_joint(const JointDistribution<Real>& joint) {
  const int n = static_cast<int>(joint.success.rows());
  const Real inv_n = Real(1) / Real(n);
  Real h_cond = 0;
  for (const Matrix<Real>* block : {&joint.success, &joint.failure}) {
    for (int kp = 0; kp < n; ++kp) {
      const Real p_out = inv_n * block->row(kp).sum();
      if (p_out <= Real(0)) continue;
      Real h = 0;
      for (int k = 0; k < n; ++k) {
        const Real post = inv_n * (*block)(kp, k) / p_out;
        if (post > Real(0)) h -= post * std::log2(post);
      }
      h_cond += p_out * h;
    }
  }
  return std::log2(Real(n)) - h_cond;
}

struct ReportDeviation {
  double max_abs = 0;
  std::string field;  // worst field, empty when identical
  bool failure_dim_matches = true;
};

// Field-by-field comparison of two reports (closed form vs brute force).
template <typename Real = double>
ReportDeviation compare_reports(const DiscriminationReport<Real>& a, const DiscriminationReport<Real>& b) {
  ReportDeviation d;
  auto field = [&](const char* name, Real x, Real y) {
    const double diff = std::abs(static_cast<double>(x - y));
    if (!(diff <= d.max_abs)) {
      d.max_abs = std::isnan(diff) ? std::numeric_limits<double>::infinity() : diff;
      d.field = name;
    }
  };
  field("p_s", a.p_s, b.p_s);
  field("p_c_med", a.p_c_med, b.p_c_med);
  field("p_c_med_beta", a.p_c_med_beta, b.p_c_med_beta);
  field("p_c_ir", a.p_c_ir, b.p_c_ir);
  field("fidelity", a.fidelity, b.fidelity);
  field("infidelity", a.infidelity, b.infidelity);
  field("error_bound", a.error_bound, b.error_bound);
  field("confidence_success", a.confidence_success, b.confidence_success);
  field("confidence_failure", a.confidence_failure, b.confidence_failure);
  d.failure_dim_matches = a.failure_dim == b.failure_dim;
  return d;
}

}  // namespace cvdisc
