#pragma once

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "cvdisc/ensemble.hpp"

namespace cvdisc {

// SplitMix64: counter-based 64-bit generator. Output i of a stream seeded
// with s is mix(s + (i + 1) * golden), so streams are reproducible on every
// platform and cheap to derive.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  static constexpr std::string_view kAlgorithm = "splitmix64";

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += kGolden;
    return mix(state_);
  }

  // Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Seed of the independent sub-stream for a worker.
  static constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t worker) {
    return mix(seed ^ mix(worker + kGolden));
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
};

inline constexpr std::uint64_t kDefaultShotCap = 1'000'000'000ULL;

enum class Branch : int { success = 0, failure = 1 };

struct MCConfig {
  EnsembleSpec<double> spec;
  std::uint64_t shots = 1;
  std::uint64_t seed = 0;
  // Shots are split into `workers` contiguous chunks, chunk w drawing from
  // SplitMix64(substream_seed(seed, w)). The split is part of the
  // reproducibility contract: equal (seed, shots, workers) give equal counts.
  unsigned workers = 1;
  std::uint64_t shot_cap = kDefaultShotCap;
  Tolerances tol{};
};

struct MCResult {
  int n = 0;
  double alpha_sq = 0;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string_view rng_algorithm = SplitMix64::kAlgorithm;
  // index ((prep * n) + outcome) * 2 + branch
  std::vector<std::uint64_t> counts;
  std::vector<double> empirical_joint;
  double empirical_p_s = 0;
  double empirical_confidence_failure = 0;

  std::size_t index(int prep, int outcome, Branch branch) const {
    return (static_cast<std::size_t>(prep) * static_cast<std::size_t>(n) +
            static_cast<std::size_t>(outcome)) * 2 + static_cast<std::size_t>(branch);
  }
  std::uint64_t count(int prep, int outcome, Branch branch) const {
    return counts[index(prep, outcome, branch)];
  }
  double empirical(int prep, int outcome, Branch branch) const {
    return empirical_joint[index(prep, outcome, branch)];
  }
};

MCResult simulate(const MCConfig& config);

// One cell of the empirical-vs-analytic comparison. `analytic` is the joint
// probability (1/N) p(outcome, branch | alpha_prep).
struct CellComparison {
  int prep = 0;
  int outcome = 0;
  Branch branch = Branch::success;
  double empirical = 0;
  double analytic = 0;
  double sigma = 0;  // sqrt(p (1 - p) / shots)
  double z = 0;      // 0 when sigma == 0 and the cell matches exactly
};

std::vector<CellComparison> compare_to_analytic(const MCResult& result, const Tolerances& tol = {});

}  // namespace cvdisc
