#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "efg/game_tree.hpp"
#include "efg/strategy.hpp"
#include "efg/values.hpp"

namespace efg {

// Deterministic action sampler. One 53-bit uniform draw is consumed per
// sampled node, which keeps trajectories bit-reproducible for a given seed
// independent of platform or standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  int sample(std::span<const double> probs) {
    const double u = uniform();
    double cum = 0.0;
    int last_positive = -1;
    for (size_t a = 0; a < probs.size(); ++a) {
      if (probs[a] <= 0.0) continue;
      cum += probs[a];
      last_positive = static_cast<int>(a);
      if (u < cum) return last_positive;
    }
    if (last_positive < 0) throw std::domain_error("Rng::sample: no positive mass");
    return last_positive;
  }

 private:
  std::mt19937_64 gen_;
};

struct SamplingScheme {
  enum class Kind { kFullWalk, kOutcome, kExternal };
  Kind kind = Kind::kOutcome;
  double epsilon = 1.0;  // traverser's exploration mix, outcome sampling only
};

inline std::string scheme_name(const SamplingScheme& s) {
  switch (s.kind) {
    case SamplingScheme::Kind::kFullWalk: return "full";
    case SamplingScheme::Kind::kOutcome: return "outcome";
    case SamplingScheme::Kind::kExternal: return "external";
  }
  return "?";
}

struct TrajectoryStep {
  int node = -1;
  int actor = kChancePlayer;  // kChancePlayer, 0 or 1
  int edge = -1;
  double sample_prob = 0.0;
};

// One root-to-terminal path with the probabilities the sampler assigned to
// each choice.
struct Trajectory {
  std::vector<TrajectoryStep> steps;
  std::array<double, 2> terminal_payoff{0.0, 0.0};
};

inline double trajectory_probability(const Trajectory& traj) {
  double p = 1.0;
  for (const TrajectoryStep& s : traj.steps) p *= s.sample_prob;
  return p;
}

// Traverser's epsilon-greedy mixture (1-eps) pi + eps/|A|; opponents and
// chance keep their current distributions.
inline std::vector<double> mixed_row(std::span<const double> pi, double epsilon) {
  std::vector<double> row(pi.size());
  const double u = epsilon / static_cast<double>(pi.size());
  for (size_t a = 0; a < pi.size(); ++a) row[a] = (1.0 - epsilon) * pi[a] + u;
  return row;
}

// The full sampling distribution under outcome sampling for `player`: the
// traverser is eps-mixed, everyone else plays the current profile. Used by
// the oracle to enumerate trajectory supports.
inline BehaviorProfile outcome_sampling_profile(const GameTree& tree,
                                                const BehaviorProfile& profile,
                                                int player, double epsilon) {
  BehaviorProfile out = profile;
  for (int x = 0; x < tree.num_infosets(player); ++x) {
    const auto mixed = mixed_row(profile.at(player, x), epsilon);
    auto row = out.at(player, x);
    for (size_t a = 0; a < row.size(); ++a) row[a] = mixed[a];
  }
  return out;
}

inline Trajectory sample_trajectory(const GameTree& tree, const BehaviorProfile& profile,
                                    int player, double epsilon, Rng& rng) {
  Trajectory traj;
  int h = tree.root;
  while (!tree.node(h).is_terminal()) {
    const Node& node = tree.node(h);
    TrajectoryStep step;
    step.node = h;
    if (node.is_chance()) {
      std::vector<double> probs(node.edges.size());
      for (size_t a = 0; a < node.edges.size(); ++a) probs[a] = node.edges[a].chance_prob;
      step.actor = kChancePlayer;
      step.edge = rng.sample(probs);
      step.sample_prob = probs[static_cast<size_t>(step.edge)];
    } else {
      const auto pi = profile.at(node.player, node.infoset);
      step.actor = node.player;
      if (node.player == player) {
        const auto mixed = mixed_row(pi, epsilon);
        step.edge = rng.sample(mixed);
        step.sample_prob = mixed[static_cast<size_t>(step.edge)];
      } else {
        step.edge = rng.sample(pi);
        step.sample_prob = pi[static_cast<size_t>(step.edge)];
      }
    }
    const Edge& e = node.edges[static_cast<size_t>(step.edge)];
    traj.terminal_payoff[0] += e.payoff[0];
    traj.terminal_payoff[1] += e.payoff[1];
    traj.steps.push_back(step);
    h = e.child;
  }
  return traj;
}

struct InfosetEstimate {
  int infoset = -1;
  int node = -1;  // the member history that produced the estimate
  std::vector<double> values;
};

// delta-tilde reconstruction at one of the traverser's decision nodes, kept
// for the variance diagnostics.
struct PerturbationSample {
  int node = -1;
  std::vector<double> delta;
};

struct EstimateResult {
  int player = 0;
  std::vector<InfosetEstimate> values;          // visited infosets only
  std::vector<PerturbationSample> perturbations;
  Trajectory trajectory;  // outcome sampling; empty under external sampling
};

// Outcome-sampling estimator evaluated along a fixed trajectory. The pass
// runs leaf-to-root: the sampled action's continuation is importance-
// corrected by its sampling probability, every action receives the immediate
// perturbation gradient, and the infoset estimate divides by the traverser's
// sampling reach to the node. The payoff and perturbation components of the
// value carried upward are tracked separately so the delta-tilde
// reconstruction (exact for RKL by the zero-variance property) can be
// reported per own node.
inline EstimateResult estimate_outcome_on_path(const GameTree& tree,
                                               const BehaviorProfile& profile,
                                               const BehaviorProfile& sigma, double mu,
                                               DivergenceKind kind, int player,
                                               const Trajectory& traj) {
  EstimateResult result;
  result.player = player;
  result.trajectory = traj;
  const bool perturbed = kind != DivergenceKind::kNone;

  // own sampling reach to each step's node
  std::vector<double> own_reach(traj.steps.size(), 1.0);
  double reach = 1.0;
  for (size_t i = 0; i < traj.steps.size(); ++i) {
    own_reach[i] = reach;
    if (traj.steps[i].actor == player) reach *= traj.steps[i].sample_prob;
  }

  double cont_pay = 0.0;   // payoff component returned to the step above
  double cont_pert = 0.0;  // perturbation component, per unit mu
  for (size_t i = traj.steps.size(); i-- > 0;) {
    const TrajectoryStep& step = traj.steps[i];
    const Node& node = tree.node(step.node);
    const Edge& taken = node.edges[static_cast<size_t>(step.edge)];
    const double u = taken.payoff[static_cast<size_t>(player)];
    if (step.actor != player) {
      cont_pay += u;
      continue;
    }
    const auto pi = profile.at(player, node.infoset);
    const auto anchor = sigma.at(player, node.infoset);
    const size_t n = pi.size();

    InfosetEstimate est;
    est.infoset = node.infoset;
    est.node = step.node;
    est.values.assign(n, 0.0);
    PerturbationSample ps;
    ps.node = step.node;
    if (perturbed) ps.delta.assign(n, 0.0);

    double next_pay = 0.0, next_pert = 0.0;
    for (size_t a = 0; a < n; ++a) {
      const bool sampled = static_cast<int>(a) == step.edge;
      const double q_pay = sampled ? (cont_pay + u) / step.sample_prob : 0.0;
      double q_pert = 0.0;
      if (perturbed) {
        q_pert = divergence_term(kind, pi, anchor, static_cast<int>(a), true);
        if (sampled) q_pert += cont_pert / step.sample_prob;
        ps.delta[a] = q_pert;
      }
      double q = q_pay;
      if (mu != 0.0) q += mu * q_pert;
      est.values[a] = q / own_reach[i];
      next_pay += pi[a] * q_pay;
      next_pert += pi[a] * q_pert;
    }
    result.values.push_back(std::move(est));
    if (perturbed) result.perturbations.push_back(std::move(ps));
    cont_pay = next_pay;
    cont_pert = next_pert;
  }
  std::reverse(result.values.begin(), result.values.end());
  std::reverse(result.perturbations.begin(), result.perturbations.end());
  return result;
}

inline EstimateResult estimate_outcome(const GameTree& tree, const BehaviorProfile& profile,
                                       const BehaviorProfile& sigma, double mu,
                                       DivergenceKind kind, int player, double epsilon,
                                       Rng& rng) {
  const Trajectory traj = sample_trajectory(tree, profile, player, epsilon, rng);
  return estimate_outcome_on_path(tree, profile, sigma, mu, kind, player, traj);
}

namespace detail {

// External-sampling traversal: one choice per opponent/chance node, full
// recursion over the traverser's actions. Returns the (payoff, perturbation)
// components of the node value. ChoiceFn(node_index, probs) -> edge index.
template <class ChoiceFn>
std::array<double, 2> external_walk(const GameTree& tree, const BehaviorProfile& profile,
                                    const BehaviorProfile& sigma, double mu,
                                    DivergenceKind kind, int player, int h,
                                    ChoiceFn&& choose, EstimateResult& result) {
  const Node& node = tree.node(h);
  if (node.is_terminal()) return {0.0, 0.0};
  const bool perturbed = kind != DivergenceKind::kNone;

  if (!node.is_decision() || node.player != player) {
    std::vector<double> probs(node.edges.size());
    for (size_t a = 0; a < node.edges.size(); ++a) {
      probs[a] = node.is_chance() ? node.edges[a].chance_prob
                                  : profile.at(node.player, node.infoset)[a];
    }
    const int a = choose(h, std::span<const double>(probs));
    const Edge& e = node.edges[static_cast<size_t>(a)];
    auto sub = external_walk(tree, profile, sigma, mu, kind, player, e.child, choose, result);
    sub[0] += e.payoff[static_cast<size_t>(player)];
    return sub;
  }

  const auto pi = profile.at(player, node.infoset);
  const auto anchor = sigma.at(player, node.infoset);
  const size_t n = pi.size();

  InfosetEstimate est;
  est.infoset = node.infoset;
  est.node = h;
  est.values.assign(n, 0.0);
  PerturbationSample ps;
  ps.node = h;
  if (perturbed) ps.delta.assign(n, 0.0);

  double node_pay = 0.0, node_pert = 0.0;
  for (size_t a = 0; a < n; ++a) {
    const Edge& e = node.edges[a];
    auto sub = external_walk(tree, profile, sigma, mu, kind, player, e.child, choose, result);
    const double q_pay = sub[0] + e.payoff[static_cast<size_t>(player)];
    double q_pert = sub[1];
    if (perturbed) {
      q_pert += divergence_term(kind, pi, anchor, static_cast<int>(a), true);
      ps.delta[a] = q_pert;
    }
    double q = q_pay;
    if (mu != 0.0) q += mu * q_pert;
    est.values[a] = q;
    node_pay += pi[a] * q_pay;
    node_pert += pi[a] * q_pert;
  }
  result.values.push_back(std::move(est));
  if (perturbed) result.perturbations.push_back(std::move(ps));
  return {node_pay, node_pert};
}

}  // namespace detail

template <class ChoiceFn>
EstimateResult estimate_external_with(const GameTree& tree, const BehaviorProfile& profile,
                                      const BehaviorProfile& sigma, double mu,
                                      DivergenceKind kind, int player, ChoiceFn&& choose) {
  EstimateResult result;
  result.player = player;
  detail::external_walk(tree, profile, sigma, mu, kind, player, tree.root, choose, result);
  std::reverse(result.values.begin(), result.values.end());
  std::reverse(result.perturbations.begin(), result.perturbations.end());
  return result;
}

inline EstimateResult estimate_external(const GameTree& tree, const BehaviorProfile& profile,
                                        const BehaviorProfile& sigma, double mu,
                                        DivergenceKind kind, int player, Rng& rng) {
  return estimate_external_with(
      tree, profile, sigma, mu, kind, player,
      [&rng](int, std::span<const double> probs) { return rng.sample(probs); });
}

}  // namespace efg
