#pragma once

// Piecewise-linear multivariate signals on a uniform time grid, banks of
// them, pooled standardization, and the CSV exchange format.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stlkernel/errors.hpp"

namespace stlkernel {

struct Trajectory {
  double t0 = 0.0;
  double dt = 1.0;
  // rows = signal dimensions, cols = grid points 0..N
  Eigen::MatrixXd values;

  int dim() const { return static_cast<int>(values.rows()); }
  /// Last grid index N (grid has N+1 points).
  int last_index() const { return static_cast<int>(values.cols()) - 1; }

  void validate() const {
    if (values.rows() < 1 || values.cols() < 2)
      throw ConfigError("trajectory needs at least 1 dimension and 2 grid points");
    if (dt <= 0) throw ConfigError("trajectory grid step must be positive");
    if (!values.allFinite()) throw ConfigError("trajectory contains non-finite values");
  }
};

struct TrajectoryBank {
  std::vector<Trajectory> trajectories;
  std::uint64_t seed = 0;
  std::string source;  // "mu0", "ssa:<model>", "file:<path>"

  int size() const { return static_cast<int>(trajectories.size()); }
  int dim() const { return trajectories.empty() ? 0 : trajectories.front().dim(); }
  int last_index() const {
    return trajectories.empty() ? 0 : trajectories.front().last_index();
  }

  void validate() const {
    if (trajectories.empty()) throw ConfigError("trajectory bank is empty");
    const auto& first = trajectories.front();
    for (const auto& tr : trajectories) {
      tr.validate();
      if (tr.dim() != first.dim() || tr.last_index() != first.last_index() ||
          tr.dt != first.dt || tr.t0 != first.t0)
        throw ConfigError("trajectory bank is not homogeneous in shape");
    }
  }

  /// Content fingerprint: stable across runs, sensitive to every value bit.
  std::uint64_t fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint64_t v) {
      for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xff;
        h *= 0x100000001b3ull;
      }
    };
    auto mixd = [&](double d) {
      std::uint64_t bits;
      std::memcpy(&bits, &d, sizeof(bits));
      mix(bits);
    };
    mix(static_cast<std::uint64_t>(trajectories.size()));
    for (const auto& tr : trajectories) {
      mix(static_cast<std::uint64_t>(tr.dim()));
      mixd(tr.t0);
      mixd(tr.dt);
      for (int d = 0; d < tr.dim(); ++d)
        for (int i = 0; i <= tr.last_index(); ++i) mixd(tr.values(d, i));
    }
    return h;
  }
};

inline std::string fingerprint_hex(std::uint64_t fp) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fp));
  return std::string(buf);
}

/// Per-dimension z-scoring with mean/std pooled over the whole bank
/// (population std; all trajectories and grid points weighted equally).
inline TrajectoryBank standardize(const TrajectoryBank& bank) {
  bank.validate();
  const int dim = bank.dim();
  const int cols = bank.last_index() + 1;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(dim);
  const double count = static_cast<double>(bank.size()) * cols;
  for (const auto& tr : bank.trajectories) {
    mean += tr.values.rowwise().sum();
    sq += tr.values.array().square().matrix().rowwise().sum();
  }
  mean /= count;
  Eigen::VectorXd stddev = ((sq.array() / count) - mean.array().square()).max(0.0).sqrt();
  for (int d = 0; d < dim; ++d) {
    if (stddev(d) <= 0.0)
      throw DegenerateDimensionError("dimension " + std::to_string(d) +
                                     " has zero variance across the bank");
  }
  TrajectoryBank out = bank;
  out.source = bank.source + "+standardized";
  for (auto& tr : out.trajectories)
    tr.values = (tr.values.colwise() - mean).array().colwise() / stddev.array();
  return out;
}

// ---------------------------------------------------------------------------
// CSV format: header "t,x0,..,x{n-1}", then per trajectory a marker line
// "# trajectory <k>" followed by one row per grid point. 17 significant
// digits so one decode/encode cycle is bit-identical.
// ---------------------------------------------------------------------------

inline void write_csv(const TrajectoryBank& bank, std::ostream& os) {
  bank.validate();
  const int dim = bank.dim();
  os << 't';
  for (int d = 0; d < dim; ++d) os << ",x" << d;
  os << '\n';
  char buf[64];
  for (int k = 0; k < bank.size(); ++k) {
    os << "# trajectory " << k << '\n';
    const auto& tr = bank.trajectories[k];
    for (int i = 0; i <= tr.last_index(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", tr.t0 + i * tr.dt);
      os << buf;
      for (int d = 0; d < dim; ++d) {
        std::snprintf(buf, sizeof(buf), "%.17g", tr.values(d, i));
        os << ',' << buf;
      }
      os << '\n';
    }
  }
}

inline void write_csv(const TrajectoryBank& bank, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  write_csv(bank, os);
}

inline TrajectoryBank read_csv(std::istream& is, const std::string& name = "<stream>") {
  std::string line;
  int lineno = 0;
  if (!std::getline(is, line)) throw IoError(name + ": empty file, missing header");
  ++lineno;
  if (line.rfind("t,", 0) != 0)
    throw IoError(name + ":1: missing header line 't,x0,...'");
  int dim = 0;
  for (char c : line)
    if (c == ',') ++dim;

  TrajectoryBank bank;
  bank.source = "file:" + name;
  std::vector<double> times;
  std::vector<std::vector<double>> rows;  // each row: dim values

  auto flush_block = [&]() {
    if (times.empty()) return;
    if (times.size() < 2)
      throw IoError(name + ": trajectory block with fewer than 2 grid points");
    Trajectory tr;
    tr.t0 = times.front();
    tr.dt = times[1] - times[0];
    if (tr.dt <= 0) throw IoError(name + ": times must be strictly increasing");
    for (std::size_t i = 1; i < times.size(); ++i) {
      const double step = times[i] - times[i - 1];
      if (std::abs(step - tr.dt) > 1e-9 * std::max(1.0, std::abs(tr.dt)))
        throw IoError(name + ": non-uniform time grid");
    }
    tr.values.resize(dim, static_cast<int>(times.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (int d = 0; d < dim; ++d) tr.values(d, static_cast<int>(i)) = rows[i][d];
    bank.trajectories.push_back(std::move(tr));
    times.clear();
    rows.clear();
  };

  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      flush_block();
      continue;
    }
    std::vector<double> cells;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
      char* after = nullptr;
      const double v = std::strtod(p, &after);
      if (after == p)
        throw IoError(name + ":" + std::to_string(lineno) + ": non-numeric cell");
      cells.push_back(v);
      p = after;
      if (p < end) {
        if (*p != ',')
          throw IoError(name + ":" + std::to_string(lineno) + ": expected ','");
        ++p;
        if (p == end)
          throw IoError(name + ":" + std::to_string(lineno) + ": trailing comma");
      }
    }
    if (static_cast<int>(cells.size()) != dim + 1)
      throw IoError(name + ":" + std::to_string(lineno) + ": ragged row, expected " +
                    std::to_string(dim + 1) + " cells, got " + std::to_string(cells.size()));
    times.push_back(cells[0]);
    rows.emplace_back(cells.begin() + 1, cells.end());
  }
  flush_block();
  bank.validate();
  return bank;
}

inline TrajectoryBank read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open: " + path);
  return read_csv(is, path);
}

}  // namespace stlkernel
