// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cvdisc/analytic3.hpp"
#include "cvdisc/infotheory.hpp"
#include "cvdisc/montecarlo.hpp"
#include "cvdisc/oracle.hpp"
#include "support.hpp"

using namespace cvdisc;
using cvdisc::testing::open_grid;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome anchor_n3() {
  const auto r = ir_report(EnsembleSpec<>(3, 0.8));
  const double ratio = (1 - r.p_c_ir) / (1 - r.p_c_med);
  const bool ps_ok = r.p_s >= 0.40 && r.p_s <= 0.44;
  const bool ratio_ok = ratio >= 1.12 && ratio <= 1.18;
  return {ps_ok && ratio_ok, fmt("p_s=%.6f", r.p_s) + fmt(" error ratio=%.4f (want [1.12,1.18])", ratio) +
                                 fmt(" absolute error increase=%.4f", (1 - r.p_c_ir) - (1 - r.p_c_med))};
}

Outcome infidelity_anchor() {
  const double want[] = {0.15, 0.20, 0.25, 0.30};
  Outcome o{true, ""};
  for (int n = 3; n <= 6; ++n) {
    const double a2 = cvdisc::testing::alpha_sq_at_infidelity(n, 0.05);
    const double ps = std::isnan(a2) ? NAN : ir_report(EnsembleSpec<>(n, a2)).p_s;
    if (!(std::abs(ps - want[n - 3]) <= 0.03)) o.pass = false;
    o.detail += "N=" + std::to_string(n) + fmt(" a2=%.4f", a2) + fmt(" P_s=%.4f; ", ps);
  }
  return o;
}

Outcome gain_peaks() {
  const double want[] = {0.4, 0.8, 1.2, 1.6};
  Outcome o{true, ""};
  for (int n = 3; n <= 6; ++n) {
    double best = -1, arg = 0;
    for (int i = 1; i <= 600; ++i) {
      const double a2 = 0.01 * i;
      const double g = info_report(EnsembleSpec<>(n, a2)).gain;
      if (g > best) {
        best = g;
        arg = a2;
      }
    }
    if (!(std::abs(arg - want[n - 3]) <= 0.1 + 1e-12)) o.pass = false;
    o.detail += "N=" + std::to_string(n) + fmt(" argmax=%.2f; ", arg);
  }
  return o;
}

Outcome kinks() {
  Outcome o{true, ""};
  const auto ks = kinks_n3(10.0);
  const double t = 4 * std::numbers::pi / (3 * std::sqrt(3.0));
  if (ks.size() != 4) o.pass = false;
  double worst_gain = 0;
  for (std::size_t m = 0; m < ks.size(); ++m) {
    if (std::abs(ks[m] - t * static_cast<double>(m + 1)) > 1e-12) o.pass = false;
    const auto p = coefficients(EnsembleSpec<>(3, ks[m]));
    if (p.multiplicity != 2) o.pass = false;
    worst_gain = std::max(worst_gain, info_report(p).gain);
  }
  if (!(worst_gain < 1e-6)) o.pass = false;
  // half-period points, where phi = pi (mod 2 pi), are not kinks
  const int mu_half = coefficients(EnsembleSpec<>(3, t / 2)).multiplicity;
  o.detail = std::to_string(ks.size()) + " kinks, period " + fmt("%.12f", t) + fmt(", max gain %.2e", worst_gain) +
             ", mu at half period = " + std::to_string(mu_half);
  return o;
}

Outcome cross_path() {
  Outcome o{true, ""};
  double worst = 0;
  int certs = 0, failed = 0;
  for (int n = 3; n <= 6; ++n)
    for (double a2 : open_grid(0, 4, 40)) {
      const EnsembleSpec<> spec(n, a2);
      const auto closed = ir_report(spec);
      for (Basis b : {Basis::phi, Basis::fock}) {
        const auto ws = build_workspace(spec, b, 1e-14);
        const auto d = compare_reports(brute_force_probabilities(ws), closed);
        worst = std::max(worst, d.max_abs);
        if (!(d.max_abs <= 1e-9) || !d.failure_dim_matches) o.pass = false;
        for (MedTarget t : {MedTarget::inputs, MedTarget::failure_states}) {
          ++certs;
          if (!certify_med_optimality(ws, t).passed) ++failed;
        }
      }
    }
  if (failed) o.pass = false;
  o.detail = fmt("max field deviation %.2e", worst) + ", certificates " + std::to_string(certs - failed) + "/" +
             std::to_string(certs);
  return o;
}

Outcome properties() {
  int violations = 0, points = 0;
  for (int n = 3; n <= 6; ++n)
    for (double a2 : open_grid(0, 6, 100)) {
      ++points;
      const EnsembleSpec<> spec(n, a2);
      const auto p = coefficients(spec);
      const auto r = ir_report(p);
      const auto info = info_report(p);
      const auto g = gram(spec);
      bool ok = true;
      const auto f = failure_profile(p);
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (j != k && std::abs(failure_overlap(f, j, k) - g(j, k) / (1 - r.p_s)) > 1e-10) ok = false;
      ok = ok && (1 - r.p_c_med_beta) >= (1 - r.fidelity / r.p_c_med) - 1e-12;
      ok = ok && r.p_c_med >= r.p_c_ir - 1e-12 && r.p_c_ir >= r.p_s - 1e-12;
      ok = ok && info.i_ir >= info.i_ud - 1e-12;
      const auto ops = separation_operators(p);
      ok = ok && (ops.a_success_diag.array().square() + ops.a_failure_diag.array().square() - 1).abs().maxCoeff() < 1e-12;
      const auto ws = build_workspace(spec, Basis::phi);
      ok = ok && unambiguity_residual(ws) < 1e-10;
      const auto joint = joint_distribution(p);
      for (int k = 0; k < n; ++k)
        ok = ok && std::abs(joint.success.col(k).sum() + joint.failure.col(k).sum() - 1) < 1e-10;
      if (!ok) ++violations;
    }
  return {violations == 0, std::to_string(points - violations) + "/" + std::to_string(points) + " grid points clean"};
}

Outcome monte_carlo() {
  Outcome o{true, ""};
  double worst = 0;
  bool identical = true;
  for (int n = 3; n <= 6; ++n)
    for (double a2 : {0.5, 1.0, 2.0}) {
      MCConfig cfg{EnsembleSpec<>(n, a2)};
      cfg.shots = 1'000'000;
      cfg.seed = 42;
      const auto r = simulate(cfg);
      for (const auto& c : compare_to_analytic(r)) worst = std::max(worst, std::abs(c.z));
      if (n == 3 && a2 == 1.0) identical = simulate(cfg).counts == r.counts;
    }
  o.pass = worst < 5 && identical;
  o.detail = fmt("max |z| = %.3f", worst) + (identical ? ", rerun bit-identical" : ", rerun differs");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1 N=3 anchor (success rate, error ratio)", 1, anchor_n3},
      {"2 success at 5% infidelity", 5, infidelity_anchor},
      {"3 information gain peaks", 10, gain_peaks},
      {"4 N=3 kinks", 5, kinks},
      {"5 closed form vs oracle", 60, cross_path},
      {"6 property suite", 60, properties},
      {"7 Monte Carlo", 30, monte_carlo},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs < c.budget_s;
    if (!pass) ++failures;
    std::printf("%s criterion %s [%.2fs / %.0fs] %s\n", pass ? "PASS" : "FAIL", c.name, secs, c.budget_s,
                o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
