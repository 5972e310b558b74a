#pragma once

// Exact stochastic simulation (Gillespie direct method) of mass-action
// reaction networks, sampled onto the uniform trajectory grid by last-value
// interpolation (counts are piecewise constant between jumps).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stlkernel/errors.hpp"
#include "stlkernel/rng.hpp"
#include "stlkernel/trajectory.hpp"

namespace stlkernel {

struct Reaction {
  std::vector<int> delta;      // stoichiometry change per species
  double rate = 0.0;           // mass-action rate constant
  std::vector<int> reactants;  // species indices, repeated for order 2
};

struct ReactionModel {
  std::string name = "model";
  std::vector<std::string> species;
  std::vector<Reaction> reactions;
  std::vector<long> init;
  double t_end = 100.0;
  double delta = 1.0;

  int dim() const { return static_cast<int>(species.size()); }

  void validate() const {
    if (species.empty()) throw ConfigError("ssa: model has no species");
    if (init.size() != species.size()) throw ConfigError("ssa: init size != species count");
    for (long x : init)
      if (x < 0) throw ConfigError("ssa: negative initial population");
    if (t_end <= 0 || delta <= 0) throw ConfigError("ssa: t_end and delta must be positive");
    if (reactions.empty()) throw ConfigError("ssa: model has no reactions");
    for (const auto& r : reactions) {
      if (static_cast<int>(r.delta.size()) != dim())
        throw ConfigError("ssa: reaction delta size != species count");
      if (r.rate <= 0) throw ConfigError("ssa: reaction rate must be positive");
      if (r.reactants.size() > 2)
        throw ConfigError("ssa: mass-action order must be <= 2");
      for (int s : r.reactants)
        if (s < 0 || s >= dim()) throw ConfigError("ssa: reactant index out of range");
    }
  }
};

namespace detail {

inline double propensity(const Reaction& r, const std::vector<long>& state) {
  double a = r.rate;
  if (r.reactants.size() == 1) {
    a *= static_cast<double>(state[r.reactants[0]]);
  } else if (r.reactants.size() == 2) {
    const int i = r.reactants[0];
    const int j = r.reactants[1];
    if (i == j)
      a *= 0.5 * static_cast<double>(state[i]) * static_cast<double>(state[i] - 1);
    else
      a *= static_cast<double>(state[i]) * static_cast<double>(state[j]);
  }
  // Transitions that would drive a population negative have zero propensity.
  if (a > 0) {
    for (std::size_t s = 0; s < state.size(); ++s)
      if (state[s] + r.delta[s] < 0) return 0.0;
  }
  return a > 0 ? a : 0.0;
}

}  // namespace detail

struct SsaRunInfo {
  long frozen_runs = 0;  // runs that reached zero total propensity before t_end
};

inline Trajectory simulate_one(const ReactionModel& model, Rng& rng, SsaRunInfo* info = nullptr) {
  const int n_grid = static_cast<int>(std::llround(model.t_end / model.delta));
  Trajectory tr;
  tr.t0 = 0.0;
  tr.dt = model.delta;
  tr.values.resize(model.dim(), n_grid + 1);

  std::vector<long> state(model.init.begin(), model.init.end());
  double t = 0.0;
  int next_grid = 0;
  auto record_state = [&]() {
    for (int d = 0; d < model.dim(); ++d)
      tr.values(d, next_grid) = static_cast<double>(state[d]);
    ++next_grid;
  };
  auto record_until = [&](double up_to_time) {
    while (next_grid <= n_grid && next_grid * model.delta <= up_to_time) record_state();
  };
  auto record_rest = [&]() {
    while (next_grid <= n_grid) record_state();
  };

  std::vector<double> props(model.reactions.size());
  while (next_grid <= n_grid) {
    double total = 0.0;
    for (std::size_t k = 0; k < model.reactions.size(); ++k) {
      props[k] = detail::propensity(model.reactions[k], state);
      total += props[k];
    }
    if (total <= 0.0) {
      // Absorbing state: freeze for the rest of the horizon.
      if (info) ++info->frozen_runs;
      record_rest();
      break;
    }
    const double t_next = t + rng.exponential(total);
    if (t_next > model.t_end) {
      record_rest();
      break;
    }
    record_until(t_next);
    // Pick the reaction proportionally to its propensity.
    double u = rng.uniform01() * total;
    std::size_t pick = 0;
    for (; pick + 1 < props.size(); ++pick) {
      if (u < props[pick]) break;
      u -= props[pick];
    }
    for (int d = 0; d < model.dim(); ++d) state[d] += model.reactions[pick].delta[d];
    t = t_next;
  }
  return tr;
}

inline TrajectoryBank simulate(const ReactionModel& model, int count, std::uint64_t seed,
                               SsaRunInfo* info = nullptr) {
  model.validate();
  if (count < 1) throw ConfigError("ssa: count must be >= 1");
  TrajectoryBank bank;
  bank.seed = seed;
  bank.source = "ssa:" + model.name;
  bank.trajectories.resize(count);
  for (int k = 0; k < count; ++k) {
    Rng rng(derive_seed(seed, "ssa-run", static_cast<std::uint64_t>(k)));
    bank.trajectories[k] = simulate_one(model, rng, info);
  }
  return bank;
}

// JSON schema:
// {"species":["X"], "reactions":[{"delta":[1], "rate":1.0, "reactants":[]}],
//  "init":[0], "t_end":100, "delta":1}
inline ReactionModel model_from_json(const nlohmann::json& j, const std::string& name = "model") {
  ReactionModel m;
  m.name = j.value("name", name);
  try {
    m.species = j.at("species").get<std::vector<std::string>>();
    m.init.clear();
    for (const auto& v : j.at("init")) m.init.push_back(v.get<long>());
    m.t_end = j.value("t_end", 100.0);
    m.delta = j.value("delta", 1.0);
    for (const auto& rj : j.at("reactions")) {
      Reaction r;
      r.delta = rj.at("delta").get<std::vector<int>>();
      r.rate = rj.at("rate").get<double>();
      if (rj.contains("reactants")) r.reactants = rj.at("reactants").get<std::vector<int>>();
      m.reactions.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("ssa model " + name + ": " + e.what());
  }
  m.validate();
  return m;
}

inline ReactionModel load_model(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open model file: " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("ssa model " + path + ": " + e.what());
  }
  return model_from_json(j, path);
}

}  // namespace stlkernel
