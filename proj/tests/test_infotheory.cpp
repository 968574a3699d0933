#include "cvdisc/infotheory.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <gtest/gtest.h>

#include "cvdisc/analytic3.hpp"
#include "cvdisc/oracle.hpp"
#include "support.hpp"

using namespace cvdisc;
using cvdisc::testing::open_grid;

TEST(infotheory, entropy_examples) {
  const std::array<double, 3> det{1, 0, 0};
  const std::array<double, 4> flat{0.25, 0.25, 0.25, 0.25};
  const std::array<double, 3> dyadic{0.5, 0.25, 0.25};
  EXPECT_EQ(shannon_entropy<double>(det), 0.0);
  EXPECT_NEAR(shannon_entropy<double>(flat), 2.0, 1e-15);
  EXPECT_NEAR(shannon_entropy<double>(dyadic), 1.5, 1e-15);
}

TEST(infotheory, entropy_rejects_bad_input) {
  const std::array<double, 2> negative{1.1, -0.1};
  const std::array<double, 2> short_sum{0.5, 0.4};
  const std::array<double, 2> not_finite{std::nan(""), 1.0};
  EXPECT_THROW(shannon_entropy<double>(negative), DomainError);
  EXPECT_THROW(shannon_entropy<double>(short_sum), DomainError);
  EXPECT_THROW(shannon_entropy<double>(not_finite), DomainError);
}

TEST(infotheory, posterior_uniform_for_one_dimensional_failure) {
  const auto f = failure_profile(coefficients(EnsembleSpec<>(3, kink_period_n3<double>())));
  ASSERT_EQ(f.failure_dim, 1);
  const auto post = failure_posterior(f);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(post.probs(k), 1.0 / 3, 1e-12);
}

TEST(infotheory, posterior_peak_is_failure_confidence) {
  const auto f = failure_profile(coefficients(EnsembleSpec<>(3, 1.0)));
  EXPECT_NEAR(failure_posterior(f).probs(0), failure_med(f), 1e-12);
}

TEST(infotheory, posterior_normalized) {
  const auto post = failure_posterior(failure_profile(coefficients(EnsembleSpec<>(5, 2.0))));
  EXPECT_NEAR(post.probs.sum(), 1.0, 1e-12);
  EXPECT_GE(post.probs.minCoeff(), 0.0);
}

TEST(infotheory, vacuum_has_no_information) {
  for (int n = 2; n <= 6; ++n) {
    const auto r = info_report(EnsembleSpec<>(n, 0.0));
    EXPECT_EQ(r.i_ud, 0.0);
    EXPECT_NEAR(r.i_ir, 0.0, 1e-15);
    EXPECT_NEAR(r.gain, 0.0, 1e-15);
  }
}

TEST(infotheory, no_gain_at_kink) {
  EXPECT_NEAR(info_report(EnsembleSpec<>(3, kink_period_n3<double>())).gain, 0.0, 1e-9);
}

TEST(infotheory, gain_peaks) {
  const double expected[] = {0.4, 0.8, 1.2, 1.6};
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
    EXPECT_NEAR(arg, expected[n - 3], 0.1) << "n=" << n;
  }
}

TEST(infotheory, report_invariants_grid) {
  for (int n = 2; n <= 6; ++n)
    for (double a2 : open_grid(0, 6, 100)) {
      const auto r = info_report(EnsembleSpec<>(n, a2));
      const double cap = std::log2(static_cast<double>(n));
      ASSERT_GE(r.i_ud, 0.0);
      ASSERT_GE(r.i_ir - r.i_ud, -1e-12);
      ASSERT_LE(r.i_ir, cap + 1e-12);
      ASSERT_NEAR(r.gain, r.i_ir - r.i_ud, 1e-12);
      ASSERT_GE(r.h_fail, -1e-12);
      ASSERT_LE(r.h_fail, cap + 1e-12);
      if (n == 2) ASSERT_LT(r.gain, 1e-12);
    }
}

TEST(infotheory, saturates_at_large_amplitude) {
  for (int n = 3; n <= 6; ++n)
    EXPECT_LT(std::log2(static_cast<double>(n)) - info_report(EnsembleSpec<>(n, 40.0)).i_ir, 1e-8);
}

TEST(infotheory, symmetry_reduction_matches_full_joint) {
  for (int n = 3; n <= 6; ++n)
    for (double a2 : open_grid(0, 6, 30)) {
      const EnsembleSpec<> spec(n, a2);
      const double full = mutual_information_from_joint(joint_distribution(spec));
      ASSERT_NEAR(info_report(spec).i_ir, full, 1e-10) << n << " " << a2;
    }
}
