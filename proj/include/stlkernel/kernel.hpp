#pragma once

// Monte Carlo STL kernel. The raw kernel is the empirical inner product of
// the robustness of two formulae over a trajectory bank, either at time zero
// (untimed) or averaged along the grid (timed). The normalized kernel
// rescales by the self-kernels; the exponential kernel is
// exp(-(1 - 2*k0)/sigma^2) as printed in the source material, with an
// alternate unit-diagonal mode exp(-(2 - 2*k0)/sigma^2).
//
// Gram assembly evaluates each formula's robustness once per trajectory and
// reduces with matrix products, so a bank of M trajectories and F formulae
// costs F*M monitor runs instead of F^2*M.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "stlkernel/errors.hpp"
#include "stlkernel/formula.hpp"
#include "stlkernel/parallel.hpp"
#include "stlkernel/semantics.hpp"
#include "stlkernel/trajectory.hpp"

namespace stlkernel {

enum class KernelVariant : std::uint8_t { Raw, Normalized, Exponential };
enum class KernelTiming : std::uint8_t { Untimed, Timed };
/// Printed: exp(-(1-2*k0)/s^2), diagonal exp(1/s^2).
/// UnitDiagonal: exp(-(2-2*k0)/s^2), a Gaussian on the induced distance.
enum class ExpMode : std::uint8_t { Printed, UnitDiagonal };
/// Which grid indices the timed kernel averages over: all evaluable indices
/// (windows truncated at the grid end) or only indices whose windows fit.
enum class TimeRange : std::uint8_t { IncludeClamped, UnclampedOnly };

struct KernelConfig {
  KernelVariant variant = KernelVariant::Exponential;
  double sigma = 1.0;
  KernelTiming timing = KernelTiming::Untimed;
  RobustnessKind robustness = RobustnessKind::Normalized;
  ExpMode exp_mode = ExpMode::Printed;
  TimeRange time_range = TimeRange::IncludeClamped;

  void validate() const {
    if (variant == KernelVariant::Exponential && sigma <= 0)
      throw ConfigError("kernel: sigma must be positive");
  }
};

namespace detail {

/// Integration end for one formula on this grid under the range policy.
inline int integration_end(const RobustnessSignal& sig, TimeRange range) {
  return range == TimeRange::IncludeClamped ? sig.valid_end
                                            : std::min(sig.unclamped_end, sig.valid_end);
}

}  // namespace detail

/// Robustness of a formula set at time zero over a bank (F x M), computed in
/// parallel and reused across kernel variants and cross-Grams.
struct RobustnessCache {
  Eigen::MatrixXd at_zero;  // F x M
  RobustnessKind kind = RobustnessKind::Standard;
  std::uint64_t bank_fingerprint = 0;
  long clamped_evaluations = 0;
};

inline RobustnessCache build_robustness_cache(const std::vector<Formula>& formulae,
                                              const TrajectoryBank& bank,
                                              RobustnessKind kind) {
  bank.validate();
  if (formulae.empty()) throw ConfigError("kernel: empty formula list");
  RobustnessCache cache;
  cache.kind = kind;
  cache.bank_fingerprint = bank.fingerprint();
  const int f_count = static_cast<int>(formulae.size());
  const int m = bank.size();
  cache.at_zero.resize(f_count, m);
  std::vector<long> clamped(f_count, 0);
  parallel_for(f_count, [&](int i) {
    for (int j = 0; j < m; ++j) {
      RobustnessSignal sig = robustness_signal(formulae[i], bank.trajectories[j], kind);
      cache.at_zero(i, j) = sig.values[0];
      clamped[i] += sig.clamp_count;
    }
  });
  for (long c : clamped) cache.clamped_evaluations += c;
  return cache;
}

/// Raw kernel k'(f,g): mean over the bank of the product of robustness
/// values, at t=0 (untimed) or averaged over the common valid grid range
/// (timed; the average keeps timed and untimed on the same scale).
inline double k_raw(const Formula& f, const Formula& g, const TrajectoryBank& bank,
                    KernelTiming timing = KernelTiming::Untimed,
                    RobustnessKind kind = RobustnessKind::Standard,
                    TimeRange range = TimeRange::IncludeClamped) {
  bank.validate();
  double acc = 0.0;
  for (const auto& xi : bank.trajectories) {
    RobustnessSignal sf = robustness_signal(f, xi, kind);
    RobustnessSignal sg = robustness_signal(g, xi, kind);
    if (timing == KernelTiming::Untimed) {
      acc += sf.values[0] * sg.values[0];
    } else {
      const int end = std::min(detail::integration_end(sf, range),
                               detail::integration_end(sg, range));
      double sum = 0.0;
      for (int i = 0; i <= end; ++i) sum += sf.values[i] * sg.values[i];
      acc += sum / (end + 1);
    }
  }
  return acc / bank.size();
}

inline double k_normalized(const Formula& f, const Formula& g, const TrajectoryBank& bank,
                           KernelTiming timing = KernelTiming::Untimed,
                           RobustnessKind kind = RobustnessKind::Standard,
                           TimeRange range = TimeRange::IncludeClamped) {
  const double ff = k_raw(f, f, bank, timing, kind, range);
  const double gg = k_raw(g, g, bank, timing, kind, range);
  if (ff <= 0)
    throw DegenerateFormulaError("zero self-kernel on this bank for formula " + print(f));
  if (gg <= 0)
    throw DegenerateFormulaError("zero self-kernel on this bank for formula " + print(g));
  return k_raw(f, g, bank, timing, kind, range) / std::sqrt(ff * gg);
}

inline double apply_exponential(double k0, double sigma, ExpMode mode) {
  const double offset = mode == ExpMode::Printed ? 1.0 : 2.0;
  return std::exp(-(offset - 2.0 * k0) / (sigma * sigma));
}

inline double k_exponential(const Formula& f, const Formula& g, const TrajectoryBank& bank,
                            double sigma, KernelTiming timing = KernelTiming::Untimed,
                            RobustnessKind kind = RobustnessKind::Standard,
                            ExpMode mode = ExpMode::Printed,
                            TimeRange range = TimeRange::IncludeClamped) {
  if (sigma <= 0) throw ConfigError("kernel: sigma must be positive");
  return apply_exponential(k_normalized(f, g, bank, timing, kind, range), sigma, mode);
}

struct GramMatrix {
  Eigen::MatrixXd entries;  // |A| x |B|
  KernelConfig config;
  std::uint64_t bank_fingerprint = 0;
  std::vector<std::uint64_t> hashes_a;
  std::vector<std::uint64_t> hashes_b;
  bool square = false;  // formulae_a and formulae_b are the same list
};

namespace detail {

struct RawGram {
  Eigen::MatrixXd cross;    // |A| x |B|
  Eigen::VectorXd self_a;   // k'(a_i, a_i)
  Eigen::VectorXd self_b;   // k'(b_j, b_j)
};

inline RawGram raw_gram_untimed(const std::vector<Formula>& a, const std::vector<Formula>& b,
                                bool square, const TrajectoryBank& bank,
                                RobustnessKind kind) {
  RobustnessCache ca = build_robustness_cache(a, bank, kind);
  const double m = static_cast<double>(bank.size());
  RawGram out;
  if (square) {
    out.cross.noalias() = ca.at_zero * ca.at_zero.transpose() / m;
    out.cross = Eigen::MatrixXd(out.cross.selfadjointView<Eigen::Upper>());  // mirror
    out.self_a = out.cross.diagonal();
    out.self_b = out.self_a;
  } else {
    RobustnessCache cb = build_robustness_cache(b, bank, kind);
    out.cross.noalias() = ca.at_zero * cb.at_zero.transpose() / m;
    out.self_a = ca.at_zero.rowwise().squaredNorm() / m;
    out.self_b = cb.at_zero.rowwise().squaredNorm() / m;
  }
  return out;
}

// Timed raw Gram, accumulated one trajectory at a time so only F x (N+1)
// signal values are live at once. Requires every formula to share the same
// integration end (true whenever all temporal left bounds are zero, as with
// generated formulae); falls back to the pairwise definition otherwise.
inline RawGram raw_gram_timed(const std::vector<Formula>& a, const std::vector<Formula>& b,
                              bool square, const TrajectoryBank& bank, RobustnessKind kind,
                              TimeRange range) {
  std::vector<Formula> all = a;
  if (!square) all.insert(all.end(), b.begin(), b.end());
  const int f_count = static_cast<int>(all.size());
  const int m = bank.size();

  // Probe integration ends on the first trajectory.
  std::vector<int> ends(f_count);
  for (int i = 0; i < f_count; ++i)
    ends[i] = integration_end(robustness_signal(all[i], bank.trajectories[0], kind), range);
  const bool homogeneous =
      std::all_of(ends.begin(), ends.end(), [&](int e) { return e == ends[0]; });

  RawGram out;
  const int na = static_cast<int>(a.size());
  const int nb = static_cast<int>(b.size());
  if (homogeneous) {
    const int end = ends[0];
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(f_count, f_count);
    Eigen::MatrixXd sig(f_count, end + 1);
    for (int j = 0; j < m; ++j) {
      parallel_for(f_count, [&](int i) {
        RobustnessSignal s = robustness_signal(all[i], bank.trajectories[j], kind);
        for (int t = 0; t <= end; ++t) sig(i, t) = s.values[t];
      });
      acc.selfadjointView<Eigen::Upper>().rankUpdate(sig, 1.0 / (end + 1));
    }
    Eigen::MatrixXd full = Eigen::MatrixXd(acc.selfadjointView<Eigen::Upper>()) / m;
    if (square) {
      out.cross = full;
      out.self_a = full.diagonal();
      out.self_b = out.self_a;
    } else {
      out.cross = full.topRightCorner(na, nb);
      out.self_a = full.diagonal().head(na);
      out.self_b = full.diagonal().tail(nb);
    }
  } else {
    const auto& fa = a;
    const auto& fb = square ? a : b;
    out.cross.resize(na, nb);
    parallel_for(na, [&](int i) {
      for (int j = 0; j < nb; ++j) {
        if (square && j < i) continue;
        out.cross(i, j) = k_raw(fa[i], fb[j], bank, KernelTiming::Timed, kind, range);
      }
    });
    if (square)
      out.cross = Eigen::MatrixXd(out.cross.selfadjointView<Eigen::Upper>());
    out.self_a.resize(na);
    for (int i = 0; i < na; ++i)
      out.self_a(i) = square ? out.cross(i, i)
                             : k_raw(fa[i], fa[i], bank, KernelTiming::Timed, kind, range);
    if (square) {
      out.self_b = out.self_a;
    } else {
      out.self_b.resize(nb);
      for (int j = 0; j < nb; ++j)
        out.self_b(j) = k_raw(fb[j], fb[j], bank, KernelTiming::Timed, kind, range);
    }
  }
  return out;
}

inline void check_degenerate(const Eigen::VectorXd& self, const std::vector<Formula>& fs,
                             const char* which) {
  for (int i = 0; i < self.size(); ++i)
    if (self(i) <= 0)
      throw DegenerateFormulaError(std::string("zero self-kernel at ") + which + " " +
                                   std::to_string(i) + ": " + print(fs[i]));
}

}  // namespace detail

inline GramMatrix gram(const std::vector<Formula>& formulae_a,
                       const std::vector<Formula>& formulae_b, bool square,
                       const TrajectoryBank& bank, const KernelConfig& config) {
  config.validate();
  bank.validate();
  if (formulae_a.empty() || (!square && formulae_b.empty()))
    throw ConfigError("kernel: empty formula list");

  detail::RawGram raw =
      config.timing == KernelTiming::Untimed
          ? detail::raw_gram_untimed(formulae_a, formulae_b, square, bank, config.robustness)
          : detail::raw_gram_timed(formulae_a, formulae_b, square, bank, config.robustness,
                                   config.time_range);

  GramMatrix g;
  g.config = config;
  g.bank_fingerprint = bank.fingerprint();
  g.square = square;
  g.hashes_a.reserve(formulae_a.size());
  for (const auto& f : formulae_a) g.hashes_a.push_back(formula_hash(f));
  if (square) {
    g.hashes_b = g.hashes_a;
  } else {
    g.hashes_b.reserve(formulae_b.size());
    for (const auto& f : formulae_b) g.hashes_b.push_back(formula_hash(f));
  }

  if (config.variant == KernelVariant::Raw) {
    g.entries = std::move(raw.cross);
    return g;
  }
  detail::check_degenerate(raw.self_a, formulae_a, "row");
  detail::check_degenerate(raw.self_b, square ? formulae_a : formulae_b, "column");
  const Eigen::ArrayXd inv_a = raw.self_a.array().sqrt().inverse();
  const Eigen::ArrayXd inv_b = raw.self_b.array().sqrt().inverse();
  g.entries = raw.cross.array().colwise() * inv_a;
  g.entries = g.entries.array().rowwise() * inv_b.transpose();
  if (config.variant == KernelVariant::Exponential) {
    const double offset = config.exp_mode == ExpMode::Printed ? 1.0 : 2.0;
    g.entries =
        ((2.0 * g.entries.array() - offset) / (config.sigma * config.sigma)).exp();
  }
  return g;
}

inline GramMatrix gram(const std::vector<Formula>& formulae, const TrajectoryBank& bank,
                       const KernelConfig& config) {
  return gram(formulae, formulae, /*square=*/true, bank, config);
}

inline GramMatrix gram(const std::vector<Formula>& formulae_a,
                       const std::vector<Formula>& formulae_b, const TrajectoryBank& bank,
                       const KernelConfig& config) {
  return gram(formulae_a, formulae_b, /*square=*/false, bank, config);
}

/// Smallest and largest eigenvalue of a symmetric matrix (for PSD checks).
inline std::pair<double, double> eigenvalue_range(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

inline double max_asymmetry(const Eigen::MatrixXd& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace stlkernel
