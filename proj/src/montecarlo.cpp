#include "cvdisc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "cvdisc/discrim.hpp"

namespace cvdisc {

namespace {

struct Sampler {
  int n = 0;
  double p_s = 0;
  // cdf[k * n + k'] = P(outcome <= k' | prep k, failure)
  std::vector<double> cdf;
};

Sampler make_sampler(const MCConfig& config) {
  const auto profile = coefficients(config.spec, config.tol);
  const auto joint = joint_distribution(profile);  // throws on the vacuum
  Sampler s;
  s.n = profile.n;
  s.p_s = ud_success(profile);
  s.cdf.assign(static_cast<std::size_t>(s.n * s.n), 1.0);
  for (int k = 0; k < s.n; ++k) {
    const double total = joint.failure.col(k).sum();
    if (total <= 0) continue;  // full separation: failure never drawn
    double acc = 0;
    for (int kp = 0; kp < s.n; ++kp) {
      acc += joint.failure(kp, k) / total;
      s.cdf[static_cast<std::size_t>(k * s.n + kp)] = acc;
    }
    s.cdf[static_cast<std::size_t>(k * s.n + s.n - 1)] = 1.0;
  }
  if (1.0 - s.p_s < kFullSeparationFloor) s.p_s = 1.0;
  return s;
}

void run_chunk(const Sampler& s, std::uint64_t stream_seed, std::uint64_t shots,
               std::vector<std::uint64_t>& counts) {
  SplitMix64 rng(stream_seed);
  const int n = s.n;
  for (std::uint64_t i = 0; i < shots; ++i) {
    const int k = std::min(n - 1, static_cast<int>(rng.uniform() * n));
    int outcome = k;
    auto branch = Branch::success;
    if (!(rng.uniform() < s.p_s)) {
      branch = Branch::failure;
      const double u = rng.uniform();
      const double* row = s.cdf.data() + static_cast<std::size_t>(k * n);
      outcome = 0;
      while (outcome < n - 1 && u >= row[outcome]) ++outcome;
    }
    ++counts[(static_cast<std::size_t>(k) * static_cast<std::size_t>(n) +
              static_cast<std::size_t>(outcome)) * 2 + static_cast<std::size_t>(branch)];
  }
}

}  // namespace

MCResult simulate(const MCConfig& config) {
  if (config.shots < 1) throw DomainError("shots must be at least 1");
  if (config.shots > config.shot_cap) throw DomainError("shots exceed the configured cap");
  if (config.workers < 1) throw DomainError("need at least one worker");

  const Sampler sampler = make_sampler(config);
  const int n = sampler.n;
  const std::size_t cells = static_cast<std::size_t>(n * n * 2);

  std::vector<std::vector<std::uint64_t>> partial(config.workers, std::vector<std::uint64_t>(cells, 0));
  const std::uint64_t base = config.shots / config.workers;
  const std::uint64_t extra = config.shots % config.workers;
  auto chunk_shots = [&](unsigned w) { return base + (w < extra ? 1 : 0); };

  if (config.workers == 1) {
    run_chunk(sampler, SplitMix64::substream_seed(config.seed, 0), config.shots, partial[0]);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(config.workers);
    for (unsigned w = 0; w < config.workers; ++w)
      pool.emplace_back([&, w] {
        run_chunk(sampler, SplitMix64::substream_seed(config.seed, w), chunk_shots(w), partial[w]);
      });
  }

  MCResult r;
  r.n = n;
  r.alpha_sq = config.spec.alpha_sq();
  r.shots = config.shots;
  r.seed = config.seed;
  r.workers = config.workers;
  r.counts.assign(cells, 0);
  for (const auto& p : partial)
    for (std::size_t i = 0; i < cells; ++i) r.counts[i] += p[i];

  r.empirical_joint.resize(cells);
  const double shots = static_cast<double>(config.shots);
  std::uint64_t success = 0;
  std::uint64_t failure = 0;
  std::uint64_t failure_hits = 0;
  for (int k = 0; k < n; ++k) {
    for (int kp = 0; kp < n; ++kp) {
      for (Branch b : {Branch::success, Branch::failure}) {
        const auto c = r.count(k, kp, b);
        r.empirical_joint[r.index(k, kp, b)] = static_cast<double>(c) / shots;
        if (b == Branch::success) {
          success += c;
        } else {
          failure += c;
          if (k == kp) failure_hits += c;
        }
      }
    }
  }
  r.empirical_p_s = static_cast<double>(success) / shots;
  r.empirical_confidence_failure =
      failure > 0 ? static_cast<double>(failure_hits) / static_cast<double>(failure)
                  : std::numeric_limits<double>::quiet_NaN();
  return r;
}

std::vector<CellComparison> compare_to_analytic(const MCResult& result, const Tolerances& tol) {
  const auto joint = joint_distribution(coefficients(EnsembleSpec<double>(result.n, result.alpha_sq), tol));
  const double shots = static_cast<double>(result.shots);
  const double inv_n = 1.0 / result.n;
  std::vector<CellComparison> out;
  out.reserve(result.counts.size());
  for (int k = 0; k < result.n; ++k) {
    for (int kp = 0; kp < result.n; ++kp) {
      for (Branch b : {Branch::success, Branch::failure}) {
        CellComparison c;
        c.prep = k;
        c.outcome = kp;
        c.branch = b;
        c.empirical = result.empirical(k, kp, b);
        c.analytic = inv_n * (b == Branch::success ? joint.success(kp, k) : joint.failure(kp, k));
        c.sigma = std::sqrt(c.analytic * (1.0 - c.analytic) / shots);
        const double diff = c.empirical - c.analytic;
        if (c.sigma > 0)
          c.z = diff / c.sigma;
        else
          c.z = diff == 0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
        out.push_back(c);
      }
    }
  }
  return out;
}

}  // namespace cvdisc
