#pragma once

// Base-measure sampler over piecewise-linear trajectories. Each dimension is
// generated independently: draw a start point, draw a total-variation budget
// from a squared Gaussian, split it into per-step increments by sorting
// uniform points, and walk with a direction that flips with probability q.
// The total variation of the emitted sequence equals the drawn budget.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "stlkernel/errors.hpp"
#include "stlkernel/rng.hpp"
#include "stlkernel/trajectory.hpp"

namespace stlkernel {

struct Mu0Params {
  double a = 0.0;
  double b = 100.0;
  double delta = 1.0;
  double m_start = 0.0;
  double s_start = 1.0;
  double m_tv = 0.0;
  double s_tv = 1.0;
  double q = 0.1;
  int dim = 1;

  int steps() const { return static_cast<int>(std::llround((b - a) / delta)); }

  void validate() const {
    if (delta <= 0) throw ConfigError("mu0: delta must be positive");
    if (b <= a) throw ConfigError("mu0: b must exceed a");
    if (q < 0 || q > 1) throw ConfigError("mu0: q must be a probability");
    if (s_start <= 0 || s_tv <= 0) throw ConfigError("mu0: sigmas must be positive");
    if (dim < 1) throw ConfigError("mu0: dim must be positive");
    if (steps() < 1) throw ConfigError("mu0: grid must have at least one step");
  }
};

inline Trajectory sample_mu0_trajectory(const Mu0Params& p, Rng& rng) {
  const int n = p.steps();
  Trajectory tr;
  tr.t0 = p.a;
  tr.dt = p.delta;
  tr.values.resize(p.dim, n + 1);
  std::vector<double> splits(n + 1);
  for (int d = 0; d < p.dim; ++d) {
    const double start = rng.normal(p.m_start, p.s_start);
    const double g = rng.normal();
    const double tv = (p.m_tv + p.s_tv * g) * (p.m_tv + p.s_tv * g);
    splits.front() = 0.0;
    splits.back() = tv;
    for (int i = 1; i < n; ++i) splits[i] = rng.uniform(0.0, tv);
    std::sort(splits.begin() + 1, splits.end() - 1);
    int sign = rng.sign();
    tr.values(d, 0) = start;
    for (int i = 0; i < n; ++i) {
      if (rng.bernoulli(p.q)) sign = -sign;
      tr.values(d, i + 1) = tr.values(d, i) + sign * (splits[i + 1] - splits[i]);
    }
  }
  return tr;
}

/// Deterministic under (params, count, seed); trajectories use per-index
/// derived seeds so the bank is identical however the loop is scheduled.
inline TrajectoryBank sample_mu0(const Mu0Params& params, int count, std::uint64_t seed) {
  params.validate();
  if (count < 1) throw ConfigError("mu0: count must be >= 1");
  TrajectoryBank bank;
  bank.seed = seed;
  bank.source = "mu0";
  bank.trajectories.resize(count);
  for (int k = 0; k < count; ++k) {
    Rng rng(derive_seed(seed, "mu0-trajectory", static_cast<std::uint64_t>(k)));
    bank.trajectories[k] = sample_mu0_trajectory(params, rng);
  }
  return bank;
}

}  // namespace stlkernel
