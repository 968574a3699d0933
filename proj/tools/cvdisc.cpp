// cvdisc: reports, sweeps, Monte Carlo runs, N = 3 closed forms and oracle
// verification for phase-symmetric coherent-state discrimination.
//
// Exit codes: 0 ok, 2 usage, 3 IO, 4 statistical flag, 5 certification failure.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvdisc/analytic3.hpp"
#include "cvdisc/discrim.hpp"
#include "cvdisc/infotheory.hpp"
#include "cvdisc/montecarlo.hpp"
#include "cvdisc/oracle.hpp"
#include "cvdisc/sweep.hpp"

namespace {

using namespace cvdisc;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitStatistical = 4;
constexpr int kExitCertification = 5;

std::size_t hard_cutoff_from_env() {
  const char* v = std::getenv("CVDISC_HARD_CUTOFF");
  if (v == nullptr || *v == '\0') return kDefaultHardCutoff;
  char* end = nullptr;
  const unsigned long long cap = std::strtoull(v, &end, 10);
  if (*end != '\0' || cap < 1) throw DomainError("CVDISC_HARD_CUTOFF must be a positive integer");
  return static_cast<std::size_t>(cap);
}

int cmd_report(int n, double alpha_sq, const Tolerances& tol) {
  const auto profile = coefficients(EnsembleSpec<double>(n, alpha_sq), tol);
  std::cout << format_report(n, alpha_sq, ir_report(profile), info_report(profile));
  std::cout << "multiplicity = " << profile.multiplicity << '\n';
  if (profile.near_band_edge) std::cout << "note = coefficient within 10x of the degeneracy band edge\n";
  return kExitOk;
}

int cmd_sweep(const SweepRequest& request, const std::string& out_path) {
  request.validate();
  const auto rows = sweep(request);
  std::ostringstream os;
  write_sweep_csv(os, request, rows);
  if (out_path.empty() || out_path == "-") {
    std::cout << os.str();
  } else {
    write_file_atomic(out_path, os.str());
  }
  return kExitOk;
}

int cmd_mc(int n, double alpha_sq, std::uint64_t shots, std::uint64_t seed, unsigned workers,
           const std::string& out_path, const Tolerances& tol) {
  MCConfig cfg{EnsembleSpec<double>(n, alpha_sq), shots, seed, workers, kDefaultShotCap, tol};
  const auto result = simulate(cfg);
  const auto cells = compare_to_analytic(result, tol);
  const auto report = ir_report(coefficients(cfg.spec, tol));

  std::cout << "n_states = " << n << "\nalpha_sq = " << format_number(alpha_sq) << "\nshots = " << shots
            << "\nseed = " << seed << "\nworkers = " << workers << "\nrng = " << result.rng_algorithm << '\n';
  std::cout << "prep,outcome,branch,count,empirical,analytic,sigma,z\n";
  double worst = 0;
  for (const auto& c : cells) {
    std::cout << c.prep << ',' << c.outcome << ',' << (c.branch == Branch::success ? 's' : 'f') << ','
              << result.count(c.prep, c.outcome, c.branch) << ',' << format_number(c.empirical) << ','
              << format_number(c.analytic) << ',' << format_number(c.sigma) << ',' << format_number(c.z, 4)
              << '\n';
    worst = std::max(worst, std::abs(c.z));
  }
  std::cout << "p_s empirical = " << format_number(result.empirical_p_s)
            << " analytic = " << format_number(report.p_s) << '\n';
  std::cout << "confidence_failure empirical = " << format_number(result.empirical_confidence_failure)
            << " analytic = " << format_number(report.confidence_failure) << '\n';
  std::cout << "max |z| = " << format_number(worst, 4) << '\n';

  if (!out_path.empty()) {
    std::ostringstream os;
    os << "prep,outcome,branch,count\n";
    for (int k = 0; k < n; ++k)
      for (int kp = 0; kp < n; ++kp)
        for (Branch b : {Branch::success, Branch::failure})
          os << k << ',' << kp << ',' << (b == Branch::success ? 's' : 'f') << ',' << result.count(k, kp, b)
             << '\n';
    write_file_atomic(out_path, os.str());
  }
  if (worst > 6) {
    std::cerr << "statistical flag: some cell deviates by more than 6 sigma\n";
    return kExitStatistical;
  }
  return kExitOk;
}

int cmd_n3(double alpha_sq, const Tolerances& tol) {
  const auto s = solve_n3(alpha_sq);
  std::cout << "alpha_sq = " << format_number(alpha_sq) << '\n';
  std::cout << "berry_phase = " << format_number(s.berry_phase) << '\n';
  for (int i = 0; i < 3; ++i)
    std::cout << "p_s(" << i + 1 << ") = " << format_number(s.roots[static_cast<std::size_t>(i)]) << '\n';
  std::cout << "selected = " << s.selected << '\n';
  std::cout << "p_s = " << format_number(s.p_s) << '\n';
  std::cout << "q_tilde = " << format_number(s.q_tilde) << '\n';

  const double period = kink_period_n3<double>();
  const auto m = static_cast<long long>(std::llround(alpha_sq / period));
  const double below = std::floor(alpha_sq / period) * period;
  const double above = below + period;
  if (below > 0) std::cout << "kink_below = " << format_number(below) << '\n';
  std::cout << "kink_above = " << format_number(above) << '\n';
  if (m >= 1) {
    const double nearest = static_cast<double>(m) * period;
    const double dist = std::abs(alpha_sq - nearest);
    // At kink m the outgoing and incoming branches coincide.
    const int out = physical_branch_n3(m - 1);
    const int in = physical_branch_n3(m);
    const double spread = std::abs(s.roots[static_cast<std::size_t>(out - 1)] - s.roots[static_cast<std::size_t>(in - 1)]);
    std::cout << "nearest_kink = " << format_number(nearest) << " (m = " << m << ", distance "
              << format_number(dist, 4) << ")\n";
    std::cout << "branch_gap p_s(" << out << ") - p_s(" << in << ") = " << format_number(spread, 4) << '\n';
    if (dist < 1e-3) {
      const auto profile = coefficients(EnsembleSpec<double>(3, alpha_sq), tol);
      std::cout << "near kink: roots coincide, multiplicity = " << profile.multiplicity << '\n';
    }
  }
  return kExitOk;
}

int cmd_verify(int n, const std::vector<double>& alpha_sqs, double tail_eps, const Tolerances& tol) {
  const std::size_t cap = hard_cutoff_from_env();
  bool all_ok = true;
  auto check = [&](bool ok, const std::string& name, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "  " << detail << '\n';
    all_ok = all_ok && ok;
  };
  for (double a2 : alpha_sqs) {
    const EnsembleSpec<double> spec(n, a2);
    const auto closed = ir_report(spec, tol);
    const double field_tol = std::max(1e-9, 100 * tail_eps);
    std::cout << "# n = " << n << ", alpha_sq = " << format_number(a2) << '\n';
    for (Basis basis : {Basis::phi, Basis::fock}) {
      const std::string tag = basis == Basis::phi ? "phi" : "fock";
      const auto ws = build_workspace(spec, basis, tail_eps, cap, tol);
      const auto brute = brute_force_probabilities(ws);
      const auto dev = compare_reports(closed, brute);
      check(dev.max_abs <= field_tol && dev.failure_dim_matches, tag + ".report",
            "max deviation " + format_number(dev.max_abs, 3) + (dev.field.empty() ? "" : " (" + dev.field + ")"));
      const double unamb = unambiguity_residual(ws);
      check(unamb < 1e-10, tag + ".unambiguity", "max Tr(Pi_s_j rho_k) = " + format_number(unamb, 3));
      for (MedTarget t : {MedTarget::inputs, MedTarget::failure_states}) {
        const auto cert = certify_med_optimality(ws, t);
        check(cert.passed, tag + (t == MedTarget::inputs ? ".helstrom.inputs" : ".helstrom.failure"),
              "min eigenvalue " + format_number(cert.worst_eigenvalue, 3) + ", hermiticity " +
                  format_number(cert.hermiticity_residual, 3));
      }
      if (basis == Basis::fock) {
        const auto g = gram(spec);
        const CMatrix<double> dots = ws.alpha.adjoint() * ws.alpha;
        const double gdev = (dots - g.entries).cwiseAbs().maxCoeff();
        check(gdev <= field_tol, "fock.gram", "max |<a_j|a_k> - G_jk| = " + format_number(gdev, 3));
      }
    }
  }
  return all_ok ? kExitOk : kExitCertification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information-recycling discrimination of phase-symmetric coherent states"};
  app.require_subcommand(1);

  int n = 3;
  double alpha_sq = 0;
  double deg_tol = Tolerances{}.degeneracy;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", n, "Number of states N")->required();
    sub->add_option("--deg-tol", deg_tol, "Relative degeneracy band for c_min");
  };

  auto* report = app.add_subcommand("report", "All scalar figures for one (N, alpha^2)");
  add_common(report);
  report->add_option("--alpha2", alpha_sq, "Mean photon number alpha^2")->required();

  SweepRequest request;
  std::string out_path;
  std::string columns;
  auto* sweep_cmd = app.add_subcommand("sweep", "CSV sweep over a uniform alpha^2 grid");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--alpha2-min", request.alpha_sq_min)->required();
  sweep_cmd->add_option("--alpha2-max", request.alpha_sq_max)->required();
  sweep_cmd->add_option("--steps", request.steps)->required();
  sweep_cmd->add_option("--out", out_path, "Output CSV path (stdout if omitted)");
  sweep_cmd->add_option("--columns", columns, "Comma-separated column subset");

  std::int64_t shots = 1'000'000;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  auto* mc = app.add_subcommand("mc", "Monte Carlo run of the two-stage measurement");
  add_common(mc);
  mc->add_option("--alpha2", alpha_sq, "Mean photon number alpha^2")->required();
  mc->add_option("--shots", shots);
  mc->add_option("--seed", seed);
  mc->add_option("--workers", workers);
  mc->add_option("--out", out_path, "Optional CSV of the count tensor");

  auto* n3 = app.add_subcommand("n3", "Closed-form roots and branch for N = 3");
  n3->add_option("--alpha2", alpha_sq)->required();

  std::vector<double> alpha_list;
  double tail_eps = 1e-14;
  auto* verify = app.add_subcommand("verify", "Oracle cross-checks and Helstrom certificates");
  add_common(verify);
  verify->add_option("--alpha2", alpha_list, "One or more alpha^2 values")->required();
  verify->add_option("--tail-eps", tail_eps, "Fock tail tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  Tolerances tol;
  tol.degeneracy = deg_tol;
  try {
    if (!(deg_tol > 0 && deg_tol < 1)) throw DomainError("--deg-tol must lie in (0, 1)");
    if (*report) return cmd_report(n, alpha_sq, tol);
    if (*sweep_cmd) {
      request.n_states = n;
      request.tol = tol;
      std::stringstream ss(columns);
      for (std::string c; std::getline(ss, c, ',');)
        if (!c.empty()) request.columns.push_back(c);
      return cmd_sweep(request, out_path);
    }
    if (*mc) {
      if (shots < 1) throw DomainError("--shots must be at least 1");
      if (workers < 1) throw DomainError("--workers must be at least 1");
      return cmd_mc(n, alpha_sq, static_cast<std::uint64_t>(shots), seed, workers, out_path, tol);
    }
    if (*n3) return cmd_n3(alpha_sq, tol);
    if (*verify) {
      if (!(tail_eps > 0 && tail_eps <= 1e-6)) throw DomainError("--tail-eps must lie in (0, 1e-6]");
      return cmd_verify(n, alpha_list, tail_eps, tol);
    }
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const CertificationFailure& e) {
    std::cerr << "certification failure: " << e.what() << '\n';
    return kExitCertification;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitCertification;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
