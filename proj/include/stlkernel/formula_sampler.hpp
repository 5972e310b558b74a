#pragma once

// Random formula generation by recursive syntax-tree growth: the root is
// always an operator; every other node is an atom with probability p_leaf,
// otherwise an operator drawn uniformly from the menu. Atoms draw a uniform
// variable index, a uniform inequality direction, and a standard-Gaussian
// threshold. Temporal intervals are [0, b] with b uniform on {1..t_max}.
//
// Nodes at max_depth are forced to atoms, so generation always terminates
// and the size distribution is an exact finite-horizon branching process
// (see the matching expectation recursion in the tests).

#include <cstdint>
#include <vector>

#include "stlkernel/errors.hpp"
#include "stlkernel/formula.hpp"
#include "stlkernel/rng.hpp"

namespace stlkernel {

struct SamplerParams {
  double p_leaf = 0.5;
  int t_max = 10;
  int dim = 1;
  std::uint64_t seed = 0;
  int max_depth = 14;
  std::vector<NodeKind> menu = default_menu();

  static std::vector<NodeKind> default_menu() {
    return {NodeKind::Not,   NodeKind::And,        NodeKind::Or,
            NodeKind::Until, NodeKind::Eventually, NodeKind::Globally};
  }

  void validate() const {
    if (p_leaf <= 0 || p_leaf >= 1) throw ConfigError("sampler: p_leaf must be in (0,1)");
    if (t_max < 1) throw ConfigError("sampler: t_max must be >= 1");
    if (dim < 1) throw ConfigError("sampler: dim must be positive");
    if (max_depth < 2) throw ConfigError("sampler: max_depth must be >= 2");
    if (menu.empty()) throw ConfigError("sampler: operator menu is empty");
    for (NodeKind k : menu)
      if (k == NodeKind::True || k == NodeKind::Atom)
        throw ConfigError("sampler: menu may contain only operator kinds");
  }
};

namespace detail {

inline Formula sample_atom(const SamplerParams& p, Rng& rng) {
  const int var = static_cast<int>(rng.uniform_int(0, p.dim - 1));
  const AtomOp op = rng.bernoulli(0.5) ? AtomOp::Geq : AtomOp::Leq;
  return Formula::atom(var, op, rng.normal());
}

inline Formula sample_node(const SamplerParams& p, Rng& rng, int depth);

inline Formula sample_operator(const SamplerParams& p, Rng& rng, int depth) {
  const NodeKind kind =
      p.menu[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(p.menu.size()) - 1))];
  switch (kind) {
    case NodeKind::Not:
      return Formula::negation(sample_node(p, rng, depth + 1));
    case NodeKind::And: {
      Formula l = sample_node(p, rng, depth + 1);
      Formula r = sample_node(p, rng, depth + 1);
      return Formula::conjunction(std::move(l), std::move(r));
    }
    case NodeKind::Or: {
      Formula l = sample_node(p, rng, depth + 1);
      Formula r = sample_node(p, rng, depth + 1);
      return Formula::disjunction(std::move(l), std::move(r));
    }
    case NodeKind::Until: {
      const int hi = static_cast<int>(rng.uniform_int(1, p.t_max));
      Formula l = sample_node(p, rng, depth + 1);
      Formula r = sample_node(p, rng, depth + 1);
      return Formula::until(0, hi, std::move(l), std::move(r));
    }
    case NodeKind::Eventually: {
      const int hi = static_cast<int>(rng.uniform_int(1, p.t_max));
      return Formula::eventually(0, hi, sample_node(p, rng, depth + 1));
    }
    case NodeKind::Globally: {
      const int hi = static_cast<int>(rng.uniform_int(1, p.t_max));
      return Formula::globally(0, hi, sample_node(p, rng, depth + 1));
    }
    default:
      throw ConfigError("sampler: non-operator kind in menu");
  }
}

inline Formula sample_node(const SamplerParams& p, Rng& rng, int depth) {
  if (depth >= p.max_depth) return sample_atom(p, rng);
  if (rng.bernoulli(p.p_leaf)) return sample_atom(p, rng);
  return sample_operator(p, rng, depth);
}

}  // namespace detail

inline Formula sample_formula(const SamplerParams& params, Rng& rng) {
  params.validate();
  return detail::sample_operator(params, rng, 1);  // root is an operator
}

/// Independent draws; per-formula derived seeds keep the list identical
/// under any parallel schedule.
inline std::vector<Formula> sample_formulae(const SamplerParams& params, int count) {
  params.validate();
  if (count < 1) throw ConfigError("sampler: count must be >= 1");
  std::vector<Formula> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    Rng rng(derive_seed(params.seed, "formula", static_cast<std::uint64_t>(k)));
    out.push_back(detail::sample_operator(params, rng, 1));
  }
  return out;
}

}  // namespace stlkernel
