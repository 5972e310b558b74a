#pragma once

// Quantitative and Boolean STL semantics over grid trajectories.
//
// Everything is evaluated bottom-up as whole signals: each node produces its
// robustness (or satisfaction) at every grid index in one pass, so a single
// evaluation costs O(nodes * N * window) instead of the exponential blowup
// of pointwise recursion through nested temporal operators.
//
// Temporal windows that extend past the trajectory end are truncated to the
// available samples; the number of truncated window evaluations is counted
// and reported. A window that is empty even after truncation (t + a beyond
// the grid) is a horizon error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "stlkernel/errors.hpp"
#include "stlkernel/formula.hpp"
#include "stlkernel/trajectory.hpp"

namespace stlkernel {

enum class RobustnessKind : std::uint8_t { Standard, Normalized };

struct EvalOptions {
  /// Robustness assigned to the Boolean constant true under Standard
  /// semantics (Normalized uses 1). Only reachable from hand-written
  /// formulae; the sampler never emits the constant.
  double top = 1e6;
};

struct RobustnessSignal {
  std::vector<double> values;  // indices 0..valid_end
  RobustnessKind kind = RobustnessKind::Standard;
  /// Largest index whose temporal windows are non-empty after truncation.
  int valid_end = 0;
  /// Largest index evaluated without any window truncation:
  /// max(N - max_horizon, 0). Index 0 may still involve truncation when the
  /// formula horizon exceeds the grid.
  int unclamped_end = 0;
  /// Number of (node, index) window evaluations that were truncated.
  long clamp_count = 0;
};

namespace detail {

struct SignalBuf {
  std::vector<double> v;
  int end = -1;  // valid_end; -1 means empty
};

struct EvalCtx {
  const Trajectory* xi;
  RobustnessKind kind;
  EvalOptions opts;
  long clamp_count = 0;
};

inline void check_atom_dim(const FormulaNode* n, const Trajectory& xi) {
  if (n->var_index >= xi.dim())
    throw DimensionError("atom references x" + std::to_string(n->var_index) +
                         " but trajectory has dimension " + std::to_string(xi.dim()));
}

inline SignalBuf eval_signal(const FormulaNode* n, EvalCtx& ctx) {
  const int last = ctx.xi->last_index();
  SignalBuf out;
  switch (n->kind) {
    case NodeKind::True: {
      out.end = last;
      out.v.assign(last + 1, ctx.kind == RobustnessKind::Normalized ? 1.0 : ctx.opts.top);
      return out;
    }
    case NodeKind::Atom: {
      check_atom_dim(n, *ctx.xi);
      out.end = last;
      out.v.resize(last + 1);
      const auto row = ctx.xi->values.row(n->var_index);
      for (int i = 0; i <= last; ++i) {
        const double margin =
            n->op == AtomOp::Geq ? row(i) - n->threshold : n->threshold - row(i);
        out.v[i] = ctx.kind == RobustnessKind::Normalized ? std::tanh(margin) : margin;
      }
      return out;
    }
    case NodeKind::Not: {
      out = eval_signal(n->left.get(), ctx);
      for (double& x : out.v) x = -x;
      return out;
    }
    case NodeKind::And:
    case NodeKind::Or: {
      SignalBuf l = eval_signal(n->left.get(), ctx);
      SignalBuf r = eval_signal(n->right.get(), ctx);
      out.end = std::min(l.end, r.end);
      if (out.end < 0) return out;
      out.v.resize(out.end + 1);
      if (n->kind == NodeKind::And)
        for (int i = 0; i <= out.end; ++i) out.v[i] = std::min(l.v[i], r.v[i]);
      else
        for (int i = 0; i <= out.end; ++i) out.v[i] = std::max(l.v[i], r.v[i]);
      return out;
    }
    case NodeKind::Eventually:
    case NodeKind::Globally: {
      SignalBuf c = eval_signal(n->left.get(), ctx);
      out.end = c.end - n->lo;
      if (out.end < 0) return out;
      out.v.resize(out.end + 1);
      const bool is_max = n->kind == NodeKind::Eventually;
      for (int t = 0; t <= out.end; ++t) {
        int w_end = t + n->hi;
        if (w_end > c.end) {
          w_end = c.end;
          ++ctx.clamp_count;
        }
        double acc = c.v[t + n->lo];
        for (int j = t + n->lo + 1; j <= w_end; ++j)
          acc = is_max ? std::max(acc, c.v[j]) : std::min(acc, c.v[j]);
        out.v[t] = acc;
      }
      return out;
    }
    case NodeKind::Until: {
      SignalBuf l = eval_signal(n->left.get(), ctx);
      SignalBuf r = eval_signal(n->right.get(), ctx);
      const int child_end = std::min(l.end, r.end);
      out.end = child_end - n->lo;
      if (out.end < 0) return out;
      out.v.resize(out.end + 1);
      for (int t = 0; t <= out.end; ++t) {
        int w_end = t + n->hi;
        if (w_end > child_end) {
          w_end = child_end;
          ++ctx.clamp_count;
        }
        double best = -std::numeric_limits<double>::infinity();
        double prefix = std::numeric_limits<double>::infinity();
        for (int u = t; u <= w_end; ++u) {
          prefix = std::min(prefix, l.v[u]);
          if (u >= t + n->lo) best = std::max(best, std::min(r.v[u], prefix));
        }
        out.v[t] = best;
      }
      return out;
    }
  }
  return out;
}

struct BoolBuf {
  std::vector<char> v;
  int end = -1;
};

inline BoolBuf eval_bool(const FormulaNode* n, EvalCtx& ctx) {
  const int last = ctx.xi->last_index();
  BoolBuf out;
  switch (n->kind) {
    case NodeKind::True: {
      out.end = last;
      out.v.assign(last + 1, 1);
      return out;
    }
    case NodeKind::Atom: {
      check_atom_dim(n, *ctx.xi);
      out.end = last;
      out.v.resize(last + 1);
      const auto row = ctx.xi->values.row(n->var_index);
      for (int i = 0; i <= last; ++i) {
        const double margin =
            n->op == AtomOp::Geq ? row(i) - n->threshold : n->threshold - row(i);
        out.v[i] = margin >= 0 ? 1 : 0;
      }
      return out;
    }
    case NodeKind::Not: {
      out = eval_bool(n->left.get(), ctx);
      for (char& x : out.v) x = !x;
      return out;
    }
    case NodeKind::And:
    case NodeKind::Or: {
      BoolBuf l = eval_bool(n->left.get(), ctx);
      BoolBuf r = eval_bool(n->right.get(), ctx);
      out.end = std::min(l.end, r.end);
      if (out.end < 0) return out;
      out.v.resize(out.end + 1);
      if (n->kind == NodeKind::And)
        for (int i = 0; i <= out.end; ++i) out.v[i] = l.v[i] && r.v[i];
      else
        for (int i = 0; i <= out.end; ++i) out.v[i] = l.v[i] || r.v[i];
      return out;
    }
    case NodeKind::Eventually:
    case NodeKind::Globally: {
      BoolBuf c = eval_bool(n->left.get(), ctx);
      out.end = c.end - n->lo;
      if (out.end < 0) return out;
      out.v.resize(out.end + 1);
      const bool exists = n->kind == NodeKind::Eventually;
      for (int t = 0; t <= out.end; ++t) {
        int w_end = t + n->hi;
        if (w_end > c.end) {
          w_end = c.end;
          ++ctx.clamp_count;
        }
        char acc = exists ? 0 : 1;
        for (int j = t + n->lo; j <= w_end; ++j) {
          if (exists ? c.v[j] : !c.v[j]) {
            acc = exists ? 1 : 0;
            break;
          }
        }
        out.v[t] = acc;
      }
      return out;
    }
    case NodeKind::Until: {
      BoolBuf l = eval_bool(n->left.get(), ctx);
      BoolBuf r = eval_bool(n->right.get(), ctx);
      const int child_end = std::min(l.end, r.end);
      out.end = child_end - n->lo;
      if (out.end < 0) return out;
      out.v.resize(out.end + 1);
      for (int t = 0; t <= out.end; ++t) {
        int w_end = t + n->hi;
        if (w_end > child_end) {
          w_end = child_end;
          ++ctx.clamp_count;
        }
        // Witness t' needs r at t' and l on all of [t, t'] (closed, mirroring
        // the inclusive inner min of the quantitative semantics).
        char sat = 0;
        for (int u = t; u <= w_end; ++u) {
          if (!l.v[u]) break;
          if (u >= t + n->lo && r.v[u]) {
            sat = 1;
            break;
          }
        }
        out.v[t] = sat;
      }
      return out;
    }
  }
  return out;
}

}  // namespace detail

inline RobustnessSignal robustness_signal(const Formula& f, const Trajectory& xi,
                                          RobustnessKind kind,
                                          const EvalOptions& opts = {}) {
  xi.validate();
  detail::EvalCtx ctx{&xi, kind, opts, 0};
  detail::SignalBuf buf = detail::eval_signal(f.raw(), ctx);
  RobustnessSignal sig;
  sig.kind = kind;
  sig.values = std::move(buf.v);
  sig.valid_end = buf.end;
  sig.unclamped_end = std::max(0, xi.last_index() - stats(f).max_horizon);
  sig.clamp_count = ctx.clamp_count;
  if (sig.valid_end < 0)
    throw HorizonError("formula horizon exceeds trajectory: no evaluable index");
  return sig;
}

inline double robustness(const Formula& f, const Trajectory& xi, int t_index,
                         RobustnessKind kind = RobustnessKind::Standard,
                         const EvalOptions& opts = {}) {
  if (t_index < 0 || t_index > xi.last_index())
    throw HorizonError("index " + std::to_string(t_index) + " outside grid [0," +
                       std::to_string(xi.last_index()) + "]");
  RobustnessSignal sig = robustness_signal(f, xi, kind, opts);
  if (t_index > sig.valid_end)
    throw HorizonError("window empty after clamping at index " + std::to_string(t_index) +
                       " (evaluable up to " + std::to_string(sig.valid_end) + ")");
  return sig.values[t_index];
}

/// Boolean satisfaction, evaluated directly (not via the sign of robustness).
inline bool satisfies(const Formula& f, const Trajectory& xi, int t_index) {
  xi.validate();
  if (t_index < 0 || t_index > xi.last_index())
    throw HorizonError("index " + std::to_string(t_index) + " outside grid [0," +
                       std::to_string(xi.last_index()) + "]");
  detail::EvalCtx ctx{&xi, RobustnessKind::Standard, {}, 0};
  detail::BoolBuf buf = detail::eval_bool(f.raw(), ctx);
  if (t_index > buf.end)
    throw HorizonError("window empty after clamping at index " + std::to_string(t_index) +
                       " (evaluable up to " + std::to_string(buf.end) + ")");
  return buf.v[t_index] != 0;
}

}  // namespace stlkernel
