#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "efg/game_tree.hpp"
#include "efg/metrics.hpp"
#include "efg/sampling.hpp"
#include "efg/strategy.hpp"
#include "efg/values.hpp"

namespace efg {

enum class Algorithm { kFTRL, kPFTRL_KL, kPFTRL_RKL, kCFR, kCFRPlus };

inline std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kFTRL: return "ftrl";
    case Algorithm::kPFTRL_KL: return "pftrl-kl";
    case Algorithm::kPFTRL_RKL: return "pftrl-rkl";
    case Algorithm::kCFR: return "cfr";
    case Algorithm::kCFRPlus: return "cfr-plus";
  }
  return "?";
}

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "ftrl") return Algorithm::kFTRL;
  if (s == "pftrl-kl") return Algorithm::kPFTRL_KL;
  if (s == "pftrl-rkl") return Algorithm::kPFTRL_RKL;
  if (s == "cfr") return Algorithm::kCFR;
  if (s == "cfr-plus") return Algorithm::kCFRPlus;
  throw std::invalid_argument("unknown algorithm: " + s);
}

struct LearnerConfig {
  Algorithm algorithm = Algorithm::kPFTRL_RKL;
  double eta = 1e-4;                 // FTRL-family learning rate
  double mu = 0.1;                   // perturbation strength
  long anchor_interval = kNoAnchorUpdates;  // T_sigma visits, kNoAnchorUpdates = fixed anchor
  SamplingScheme scheme;
  long iterations = 0;
  unsigned long long seed = 0;
  long eval_interval = 0;            // 0 picks max(1, iterations/200)

  DivergenceKind divergence() const {
    switch (algorithm) {
      case Algorithm::kPFTRL_KL: return DivergenceKind::kKL;
      case Algorithm::kPFTRL_RKL: return DivergenceKind::kRKL;
      default: return DivergenceKind::kNone;
    }
  }
};

// Entropy-regularized FTRL closed form: argmax over the simplex of
// eta<S, pi> + entropy(pi) is softmax(eta S). Max-subtraction keeps the
// exponentials in range; outputs are strictly positive for inputs that do
// not underflow.
inline std::vector<double> ftrl_strategy(std::span<const double> cumulative, double eta) {
  std::vector<double> out(cumulative.size());
  double m = eta * cumulative[0];
  for (size_t a = 1; a < cumulative.size(); ++a) m = std::max(m, eta * cumulative[a]);
  double z = 0.0;
  for (size_t a = 0; a < cumulative.size(); ++a) {
    out[a] = std::exp(eta * cumulative[a] - m);
    z += out[a];
  }
  for (double& v : out) v /= z;
  return out;
}

// Regret matching: positive parts normalized, uniform when nothing positive.
inline std::vector<double> regret_matching(std::span<const double> regrets) {
  std::vector<double> out(regrets.size());
  double z = 0.0;
  for (size_t a = 0; a < regrets.size(); ++a) {
    out[a] = regrets[a] > 0.0 ? regrets[a] : 0.0;
    z += out[a];
  }
  if (z > 0.0) {
    for (double& v : out) v /= z;
  } else {
    const double u = 1.0 / static_cast<double>(regrets.size());
    for (double& v : out) v = u;
  }
  return out;
}

// Mutable state of one learner run. Strategies are derived from the running
// sums (cumulative values for the FTRL family, regrets for CFR); the profile
// is a cache of the derived strategy at every infoset.
struct LearnerState {
  BehaviorProfile current;
  std::array<std::vector<std::vector<double>>, 2> cumulative_values;
  AnchorStore anchor;
  AverageAccumulator average;
  std::array<std::vector<std::vector<double>>, 2> regrets;
  std::array<std::vector<std::vector<double>>, 2> average_numerator;
  long iteration = 0;
  Rng rng;

  LearnerState(const GameTree& tree, const LearnerConfig& config)
      : current(uniform_profile(tree)),
        anchor(tree, config.anchor_interval),
        average(tree),
        rng(config.seed) {
    for (int p = 0; p < kNumPlayers; ++p) {
      const auto& sets = tree.infosets[static_cast<size_t>(p)];
      auto& cum = cumulative_values[static_cast<size_t>(p)];
      auto& reg = regrets[static_cast<size_t>(p)];
      auto& avg = average_numerator[static_cast<size_t>(p)];
      cum.resize(sets.size());
      reg.resize(sets.size());
      avg.resize(sets.size());
      for (const InfoSet& x : sets) {
        cum[static_cast<size_t>(x.id)].assign(static_cast<size_t>(x.num_actions), 0.0);
        reg[static_cast<size_t>(x.id)].assign(static_cast<size_t>(x.num_actions), 0.0);
        avg[static_cast<size_t>(x.id)].assign(static_cast<size_t>(x.num_actions), 0.0);
      }
    }
  }
};

namespace detail {

// Value estimates for one player under the configured scheme, against the
// given (pre-update) profile snapshot.
inline EstimateResult estimate_values(const GameTree& tree, const BehaviorProfile& profile,
                                      const AnchorStore& anchor, double mu,
                                      DivergenceKind kind, int player,
                                      const SamplingScheme& scheme, Rng& rng) {
  if (scheme.kind == SamplingScheme::Kind::kOutcome) {
    return estimate_outcome(tree, profile, anchor.sigma, mu, kind, player, scheme.epsilon, rng);
  }
  if (scheme.kind == SamplingScheme::Kind::kExternal) {
    return estimate_external(tree, profile, anchor.sigma, mu, kind, player, rng);
  }
  // full walk: exact values at every infoset
  const ValueTable table =
      perturbed_counterfactual_values(tree, profile, anchor.sigma, mu, kind, player);
  EstimateResult result;
  result.player = player;
  result.values.reserve(static_cast<size_t>(table.num_infosets()));
  for (int x = 0; x < table.num_infosets(); ++x) {
    InfosetEstimate est;
    est.infoset = x;
    const auto row = table.at(x);
    est.values.assign(row.begin(), row.end());
    result.values.push_back(std::move(est));
  }
  return result;
}

}  // namespace detail

// One PFTRL iteration (plain FTRL when the divergence is kNone and mu = 0):
// both players estimate values against the iteration-start profile, then each
// visited infoset accumulates its estimate, refreshes its softmax strategy,
// and counts an anchoring visit.
inline void pftrl_step(LearnerState& state, const GameTree& tree, const LearnerConfig& config) {
  const DivergenceKind kind = config.divergence();
  std::array<EstimateResult, 2> estimates;
  for (int p = 0; p < kNumPlayers; ++p) {
    estimates[static_cast<size_t>(p)] = detail::estimate_values(
        tree, state.current, state.anchor, config.mu, kind, p, config.scheme, state.rng);
  }
  state.average.accumulate(tree, state.current);
  for (int p = 0; p < kNumPlayers; ++p) {
    auto& cum = state.cumulative_values[static_cast<size_t>(p)];
    for (const InfosetEstimate& est : estimates[static_cast<size_t>(p)].values) {
      auto& sums = cum[static_cast<size_t>(est.infoset)];
      for (size_t a = 0; a < sums.size(); ++a) sums[a] += est.values[a];
      const std::vector<double> next = ftrl_strategy(sums, config.eta);
      auto row = state.current.at(p, est.infoset);
      for (size_t a = 0; a < row.size(); ++a) row[a] = next[a];
      assert(is_simplex(row));
      record_visit_and_maybe_anchor(state.anchor, p, est.infoset, row);
    }
  }
  state.iteration++;
}

// One CFR (simultaneous, uniform averaging) or CFR+ (alternating, clamped
// regrets, linearly weighted averaging) iteration. Value estimates reuse the
// same machinery with the perturbation off; under sampling only visited
// infosets change.
inline void cfr_step(LearnerState& state, const GameTree& tree, const LearnerConfig& config) {
  const bool plus = config.algorithm == Algorithm::kCFRPlus;
  const double avg_weight = plus ? static_cast<double>(state.iteration + 1) : 1.0;

  // average-strategy numerators use the strategy played this iteration
  for (int p = 0; p < kNumPlayers; ++p) {
    const std::vector<double> reach = own_reaches(tree, state.current, p);
    auto& avg = state.average_numerator[static_cast<size_t>(p)];
    for (const InfoSet& x : tree.infosets[static_cast<size_t>(p)]) {
      const double w = avg_weight * reach[static_cast<size_t>(x.id)];
      if (w == 0.0) continue;
      const auto cur = state.current.at(p, x.id);
      auto& row = avg[static_cast<size_t>(x.id)];
      for (size_t a = 0; a < row.size(); ++a) row[a] += w * cur[a];
    }
  }

  auto update_player = [&](int p, const EstimateResult& estimate) {
    auto& regs = state.regrets[static_cast<size_t>(p)];
    for (const InfosetEstimate& est : estimate.values) {
      auto& reg = regs[static_cast<size_t>(est.infoset)];
      const auto pi = state.current.at(p, est.infoset);
      double value = 0.0;
      for (size_t a = 0; a < est.values.size(); ++a) value += pi[a] * est.values[a];
      for (size_t a = 0; a < reg.size(); ++a) {
        reg[a] += est.values[a] - value;
        if (plus && reg[a] < 0.0) reg[a] = 0.0;
      }
      const std::vector<double> next = regret_matching(reg);
      auto row = state.current.at(p, est.infoset);
      for (size_t a = 0; a < row.size(); ++a) row[a] = next[a];
      assert(is_simplex(row));
    }
  };

  if (plus) {
    for (int p = 0; p < kNumPlayers; ++p) {
      const EstimateResult estimate =
          detail::estimate_values(tree, state.current, state.anchor, 0.0,
                                  DivergenceKind::kNone, p, config.scheme, state.rng);
      update_player(p, estimate);
    }
  } else {
    std::array<EstimateResult, 2> estimates;
    for (int p = 0; p < kNumPlayers; ++p) {
      estimates[static_cast<size_t>(p)] =
          detail::estimate_values(tree, state.current, state.anchor, 0.0,
                                  DivergenceKind::kNone, p, config.scheme, state.rng);
    }
    for (int p = 0; p < kNumPlayers; ++p) update_player(p, estimates[static_cast<size_t>(p)]);
  }
  state.iteration++;
}

inline bool is_cfr_family(Algorithm a) {
  return a == Algorithm::kCFR || a == Algorithm::kCFRPlus;
}

// Average strategy for reporting: CFR variants use their native numerators,
// the FTRL family the reach-weighted accumulator.
inline BehaviorProfile average_strategy(const LearnerState& state, const GameTree& tree,
                                        const LearnerConfig& config) {
  if (!is_cfr_family(config.algorithm)) return state.average.extract(tree);
  BehaviorProfile avg(tree);
  for (int p = 0; p < kNumPlayers; ++p) {
    for (const InfoSet& x : tree.infosets[static_cast<size_t>(p)]) {
      const auto& numer = state.average_numerator[static_cast<size_t>(p)][static_cast<size_t>(x.id)];
      double z = 0.0;
      for (double v : numer) z += v;
      auto row = avg.at(p, x.id);
      if (z > 0.0) {
        for (size_t a = 0; a < row.size(); ++a) row[a] = numer[a] / z;
      } else {
        const double u = 1.0 / static_cast<double>(x.num_actions);
        for (double& v : row) v = u;
      }
    }
  }
  return avg;
}

struct RunRecord {
  long iteration = 0;
  double exploit_last = 0.0;
  double exploit_avg = 0.0;
};

inline void validate_config(const LearnerConfig& config) {
  if (config.iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  if (config.algorithm == Algorithm::kFTRL && config.mu != 0.0) {
    throw std::invalid_argument("ftrl runs unperturbed; set mu = 0");
  }
  if ((config.algorithm == Algorithm::kPFTRL_KL || config.algorithm == Algorithm::kPFTRL_RKL) &&
      config.mu <= 0.0) {
    throw std::invalid_argument("perturbed ftrl needs mu > 0");
  }
  if (!is_cfr_family(config.algorithm) && config.eta <= 0.0) {
    throw std::invalid_argument("eta must be > 0");
  }
  if (config.scheme.epsilon < 0.0 || config.scheme.epsilon > 1.0) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  if (config.anchor_interval <= 0) {
    throw std::invalid_argument("anchor interval must be positive (kNoAnchorUpdates for none)");
  }
}

// Executes the configured number of iterations, evaluating exploitability of
// the last and average iterate at iteration 0, every eval_interval
// iterations, and at the final iteration. Deterministic in (config, seed).
inline std::vector<RunRecord> run(const GameTree& tree, const LearnerConfig& config,
                                  const std::function<void(const RunRecord&)>& on_eval = {}) {
  validate_config(config);
  LearnerState state(tree, config);
  const long interval =
      config.eval_interval > 0 ? config.eval_interval : std::max(1L, config.iterations / 200);

  std::vector<RunRecord> log;
  auto evaluate = [&]() {
    RunRecord rec;
    rec.iteration = state.iteration;
    rec.exploit_last = exploitability(tree, state.current);
    rec.exploit_avg = exploitability(tree, average_strategy(state, tree, config));
    log.push_back(rec);
    if (on_eval) on_eval(rec);
  };

  evaluate();
  for (long t = 1; t <= config.iterations; ++t) {
    if (is_cfr_family(config.algorithm)) cfr_step(state, tree, config);
    else pftrl_step(state, tree, config);
    if (t % interval == 0 || t == config.iterations) evaluate();
  }
  return log;
}

}  // namespace efg
