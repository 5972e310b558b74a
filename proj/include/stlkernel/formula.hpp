#pragma once

// STL formula syntax tree. Nodes are immutable and shared, so Formula values
// are cheap to copy and safe to use from multiple threads.

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>

#include "stlkernel/errors.hpp"

namespace stlkernel {

enum class NodeKind : std::uint8_t {
  True,
  Atom,
  Not,
  And,
  Or,
  Until,
  Eventually,
  Globally,
};

enum class AtomOp : std::uint8_t { Geq, Leq };

class Formula;

struct FormulaNode {
  NodeKind kind = NodeKind::True;
  // Atom payload.
  int var_index = 0;
  AtomOp op = AtomOp::Geq;
  double threshold = 0.0;
  // Temporal bounds in grid units, 0 <= lo < hi.
  int lo = 0;
  int hi = 0;
  std::shared_ptr<const FormulaNode> left;
  std::shared_ptr<const FormulaNode> right;
};

struct FormulaStats {
  int node_count = 0;
  int depth = 0;
  int max_horizon = 0;
};

class Formula {
 public:
  Formula() : node_(true_node()) {}

  NodeKind kind() const { return node_->kind; }
  int var_index() const { return node_->var_index; }
  AtomOp atom_op() const { return node_->op; }
  double threshold() const { return node_->threshold; }
  int lo() const { return node_->lo; }
  int hi() const { return node_->hi; }
  Formula left() const { return Formula(node_->left); }
  Formula right() const { return Formula(node_->right); }
  bool is_unary() const {
    return kind() == NodeKind::Not || kind() == NodeKind::Eventually ||
           kind() == NodeKind::Globally;
  }
  bool is_binary() const {
    return kind() == NodeKind::And || kind() == NodeKind::Or || kind() == NodeKind::Until;
  }
  bool is_temporal() const {
    return kind() == NodeKind::Until || kind() == NodeKind::Eventually ||
           kind() == NodeKind::Globally;
  }

  static Formula top() { return Formula(true_node()); }

  static Formula atom(int var_index, AtomOp op, double threshold) {
    if (var_index < 0) throw ConfigError("atom variable index must be nonnegative");
    auto n = std::make_shared<FormulaNode>();
    n->kind = NodeKind::Atom;
    n->var_index = var_index;
    n->op = op;
    n->threshold = threshold;
    return Formula(std::move(n));
  }

  static Formula negation(Formula child) {
    return make_unary(NodeKind::Not, 0, 0, std::move(child));
  }
  static Formula conjunction(Formula l, Formula r) {
    return make_binary(NodeKind::And, 0, 0, std::move(l), std::move(r));
  }
  static Formula disjunction(Formula l, Formula r) {
    return make_binary(NodeKind::Or, 0, 0, std::move(l), std::move(r));
  }
  static Formula until(int lo, int hi, Formula l, Formula r) {
    check_interval(lo, hi);
    return make_binary(NodeKind::Until, lo, hi, std::move(l), std::move(r));
  }
  static Formula eventually(int lo, int hi, Formula child) {
    check_interval(lo, hi);
    return make_unary(NodeKind::Eventually, lo, hi, std::move(child));
  }
  static Formula globally(int lo, int hi, Formula child) {
    check_interval(lo, hi);
    return make_unary(NodeKind::Globally, lo, hi, std::move(child));
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    return structurally_equal(a.node_.get(), b.node_.get());
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

  const FormulaNode* raw() const { return node_.get(); }

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {
    assert(node_);
  }

  static void check_interval(int lo, int hi) {
    if (lo < 0) throw ConfigError("temporal bound must be nonnegative");
    if (lo >= hi)
      throw ConfigError("malformed temporal interval: left bound " + std::to_string(lo) +
                        " must be < right bound " + std::to_string(hi));
  }

  static Formula make_unary(NodeKind k, int lo, int hi, Formula child) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = k;
    n->lo = lo;
    n->hi = hi;
    n->left = child.node_;
    return Formula(std::move(n));
  }

  static Formula make_binary(NodeKind k, int lo, int hi, Formula l, Formula r) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = k;
    n->lo = lo;
    n->hi = hi;
    n->left = l.node_;
    n->right = r.node_;
    return Formula(std::move(n));
  }

  static const std::shared_ptr<const FormulaNode>& true_node() {
    static const std::shared_ptr<const FormulaNode> n = std::make_shared<FormulaNode>();
    return n;
  }

  static bool structurally_equal(const FormulaNode* a, const FormulaNode* b) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case NodeKind::True:
        return true;
      case NodeKind::Atom:
        return a->var_index == b->var_index && a->op == b->op && a->threshold == b->threshold;
      case NodeKind::Not:
        return structurally_equal(a->left.get(), b->left.get());
      case NodeKind::And:
      case NodeKind::Or:
        return structurally_equal(a->left.get(), b->left.get()) &&
               structurally_equal(a->right.get(), b->right.get());
      case NodeKind::Until:
        return a->lo == b->lo && a->hi == b->hi &&
               structurally_equal(a->left.get(), b->left.get()) &&
               structurally_equal(a->right.get(), b->right.get());
      case NodeKind::Eventually:
      case NodeKind::Globally:
        return a->lo == b->lo && a->hi == b->hi &&
               structurally_equal(a->left.get(), b->left.get());
    }
    return false;
  }

  std::shared_ptr<const FormulaNode> node_;
};

namespace detail {

/// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void print_rec(const FormulaNode* n, std::string& out) {
  switch (n->kind) {
    case NodeKind::True:
      out += "true";
      return;
    case NodeKind::Atom:
      out += "(x";
      out += std::to_string(n->var_index);
      out += n->op == AtomOp::Geq ? " >= " : " <= ";
      out += format_double(n->threshold);
      out += ')';
      return;
    case NodeKind::Not:
      out += "(not ";
      print_rec(n->left.get(), out);
      out += ')';
      return;
    case NodeKind::And:
    case NodeKind::Or:
      out += '(';
      print_rec(n->left.get(), out);
      out += n->kind == NodeKind::And ? " and " : " or ";
      print_rec(n->right.get(), out);
      out += ')';
      return;
    case NodeKind::Until:
      out += '(';
      print_rec(n->left.get(), out);
      out += " U[";
      out += std::to_string(n->lo);
      out += ',';
      out += std::to_string(n->hi);
      out += "] ";
      print_rec(n->right.get(), out);
      out += ')';
      return;
    case NodeKind::Eventually:
    case NodeKind::Globally:
      out += '(';
      out += n->kind == NodeKind::Eventually ? 'F' : 'G';
      out += '[';
      out += std::to_string(n->lo);
      out += ',';
      out += std::to_string(n->hi);
      out += "] ";
      print_rec(n->left.get(), out);
      out += ')';
      return;
  }
}

struct StatsAcc {
  int nodes = 0;
};

inline std::pair<int, int> stats_rec(const FormulaNode* n, StatsAcc& acc) {
  acc.nodes += 1;
  switch (n->kind) {
    case NodeKind::True:
    case NodeKind::Atom:
      return {1, 0};  // depth, horizon
    case NodeKind::Not: {
      auto [d, h] = stats_rec(n->left.get(), acc);
      return {d + 1, h};
    }
    case NodeKind::And:
    case NodeKind::Or: {
      auto [dl, hl] = stats_rec(n->left.get(), acc);
      auto [dr, hr] = stats_rec(n->right.get(), acc);
      return {std::max(dl, dr) + 1, std::max(hl, hr)};
    }
    case NodeKind::Until: {
      auto [dl, hl] = stats_rec(n->left.get(), acc);
      auto [dr, hr] = stats_rec(n->right.get(), acc);
      return {std::max(dl, dr) + 1, n->hi + std::max(hl, hr)};
    }
    case NodeKind::Eventually:
    case NodeKind::Globally: {
      auto [d, h] = stats_rec(n->left.get(), acc);
      return {d + 1, n->hi + h};
    }
  }
  return {1, 0};
}

}  // namespace detail

/// Canonical fully parenthesized form; parse(print(f)) == f.
inline std::string print(const Formula& f) {
  std::string out;
  detail::print_rec(f.raw(), out);
  return out;
}

inline FormulaStats stats(const Formula& f) {
  detail::StatsAcc acc;
  auto [depth, horizon] = detail::stats_rec(f.raw(), acc);
  return FormulaStats{acc.nodes, depth, horizon};
}

/// Stable 64-bit fingerprint of the canonical printed form.
inline std::uint64_t formula_hash(const Formula& f) {
  const std::string s = print(f);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace stlkernel
