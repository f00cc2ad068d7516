#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "efg/game_tree.hpp"
#include "efg/sampling.hpp"
#include "efg/strategy.hpp"
#include "efg/values.hpp"

namespace efg {

// Every root-to-terminal path with positive probability under the given
// sampling profile, with its probability. Refuses trees beyond the cap; the
// verification games are tiny by design.
inline std::vector<std::pair<Trajectory, double>> enumerate_outcome_trajectories(
    const GameTree& tree, const BehaviorProfile& sampling_profile, int node_cap = 10000) {
  if (tree.num_nodes() > node_cap) {
    throw std::invalid_argument("enumerate_outcome_trajectories: tree exceeds node cap");
  }
  std::vector<std::pair<Trajectory, double>> out;
  Trajectory traj;
  auto walk = [&](auto&& self, int h) -> void {
    const Node& node = tree.node(h);
    if (node.is_terminal()) {
      out.emplace_back(traj, trajectory_probability(traj));
      return;
    }
    for (size_t a = 0; a < node.edges.size(); ++a) {
      const Edge& e = node.edges[a];
      const double p = node.is_chance()
                           ? e.chance_prob
                           : sampling_profile.at(node.player, node.infoset)[a];
      if (p <= 0.0) continue;
      TrajectoryStep step;
      step.node = h;
      step.actor = node.is_chance() ? kChancePlayer : node.player;
      step.edge = static_cast<int>(a);
      step.sample_prob = p;
      traj.steps.push_back(step);
      traj.terminal_payoff[0] += e.payoff[0];
      traj.terminal_payoff[1] += e.payoff[1];
      self(self, e.child);
      traj.terminal_payoff[0] -= e.payoff[0];
      traj.terminal_payoff[1] -= e.payoff[1];
      traj.steps.pop_back();
    }
  };
  walk(walk, tree.root);
  return out;
}

// All deterministic opponent/chance choice assignments for an external-
// sampling traversal by `player`, with their probabilities. Enumerating over
// every opponent/chance node in the tree realizes a refinement of the block
// structure; probabilities still sum to one.
inline std::vector<std::pair<std::vector<int>, double>> enumerate_external_assignments(
    const GameTree& tree, const BehaviorProfile& profile, int player, int node_cap = 10000) {
  if (tree.num_nodes() > node_cap) {
    throw std::invalid_argument("enumerate_external_assignments: tree exceeds node cap");
  }
  std::vector<int> sampled_nodes;
  for (int h = 0; h < tree.num_nodes(); ++h) {
    const Node& node = tree.node(h);
    if (node.is_chance() || (node.is_decision() && node.player != player)) {
      sampled_nodes.push_back(h);
    }
  }
  std::vector<std::pair<std::vector<int>, double>> out;
  std::vector<int> choice(static_cast<size_t>(tree.num_nodes()), -1);
  auto assign = [&](auto&& self, size_t i, double prob) -> void {
    if (i == sampled_nodes.size()) {
      out.emplace_back(choice, prob);
      return;
    }
    const int h = sampled_nodes[i];
    const Node& node = tree.node(h);
    for (size_t a = 0; a < node.edges.size(); ++a) {
      const double p = node.is_chance() ? node.edges[a].chance_prob
                                        : profile.at(node.player, node.infoset)[a];
      if (p <= 0.0) continue;
      choice[static_cast<size_t>(h)] = static_cast<int>(a);
      self(self, i + 1, prob * p);
    }
    choice[static_cast<size_t>(h)] = -1;
  };
  assign(assign, 0, 1.0);
  return out;
}

struct CellReport {
  int player = 0;
  int infoset = 0;
  int action = 0;
  double exact = 0.0;
  double estimate_expectation = 0.0;
  double gap = 0.0;
};

struct VarianceCell {
  int player = 0;
  int node = 0;
  int action = 0;
  double visit_probability = 0.0;
  double conditional_mean = 0.0;
  double conditional_variance = 0.0;
  double max_closed_form_deviation = 0.0;  // max |sample - (sigma/pi - 1)|
};

// Exhaustive-enumeration verification output. cells carry the unbiasedness
// comparison per (infoset, action); variance_cells the conditional moments of
// the delta-tilde reconstruction per (own decision node, action).
struct EnumerationReport {
  std::string game;
  std::string scheme;
  DivergenceKind kind = DivergenceKind::kNone;
  double mu = 0.0;
  double probability_sum = 0.0;
  std::vector<CellReport> cells;
  std::vector<VarianceCell> variance_cells;

  double max_gap() const {
    double m = 0.0;
    for (const CellReport& c : cells) m = std::max(m, std::abs(c.gap));
    return m;
  }
  double max_conditional_variance() const {
    double m = 0.0;
    for (const VarianceCell& c : variance_cells) m = std::max(m, c.conditional_variance);
    return m;
  }
  double max_closed_form_deviation() const {
    double m = 0.0;
    for (const VarianceCell& c : variance_cells) m = std::max(m, c.max_closed_form_deviation);
    return m;
  }

  void write_csv(std::ostream& os) const {
    os << "infoset,action,exact,expected_estimate,gap\n";
    char buf[128];
    for (const CellReport& c : cells) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g\n", c.infoset, c.action,
                    c.exact, c.estimate_expectation, c.gap);
      os << buf;
    }
  }
};

namespace detail {

// Runs the shipped estimator over every enumerated sampling outcome and
// returns the per-outcome results with probabilities.
inline std::vector<std::pair<EstimateResult, double>> enumerate_estimates(
    const GameTree& tree, const BehaviorProfile& profile, const BehaviorProfile& sigma,
    double mu, DivergenceKind kind, const SamplingScheme& scheme, int player) {
  std::vector<std::pair<EstimateResult, double>> out;
  if (scheme.kind == SamplingScheme::Kind::kOutcome) {
    const BehaviorProfile sampler =
        outcome_sampling_profile(tree, profile, player, scheme.epsilon);
    for (auto& [traj, p] : enumerate_outcome_trajectories(tree, sampler)) {
      out.emplace_back(estimate_outcome_on_path(tree, profile, sigma, mu, kind, player, traj),
                       p);
    }
  } else if (scheme.kind == SamplingScheme::Kind::kExternal) {
    for (auto& [choice, p] : enumerate_external_assignments(tree, profile, player)) {
      const auto& fixed = choice;
      auto result = estimate_external_with(
          tree, profile, sigma, mu, kind, player,
          [&fixed](int h, std::span<const double>) { return fixed[static_cast<size_t>(h)]; });
      out.emplace_back(std::move(result), p);
    }
  } else {
    throw std::invalid_argument("enumerate_estimates: full walk has no sampling outcomes");
  }
  return out;
}

}  // namespace detail

// Theorem-1 check: the probability-weighted expectation of the estimator
// equals the exact perturbed counterfactual value at every (infoset, action)
// of `player`. Infosets an outcome does not visit contribute zero.
inline EnumerationReport verify_unbiasedness(const GameTree& tree,
                                             const BehaviorProfile& profile,
                                             const BehaviorProfile& sigma, double mu,
                                             DivergenceKind kind, const SamplingScheme& scheme,
                                             int player) {
  EnumerationReport report;
  report.game = tree.name;
  report.scheme = scheme_name(scheme);
  report.kind = kind;
  report.mu = mu;

  const ValueTable exact = perturbed_counterfactual_values(tree, profile, sigma, mu, kind, player);
  ValueTable expectation(tree, player);

  for (auto& [estimate, p] : detail::enumerate_estimates(tree, profile, sigma, mu, kind,
                                                         scheme, player)) {
    report.probability_sum += p;
    for (const InfosetEstimate& est : estimate.values) {
      auto row = expectation.at(est.infoset);
      for (size_t a = 0; a < est.values.size(); ++a) row[a] += p * est.values[a];
    }
  }

  for (int x = 0; x < exact.num_infosets(); ++x) {
    const auto ex = exact.at(x);
    const auto mean = expectation.at(x);
    for (size_t a = 0; a < ex.size(); ++a) {
      CellReport cell;
      cell.player = player;
      cell.infoset = x;
      cell.action = static_cast<int>(a);
      cell.exact = ex[a];
      cell.estimate_expectation = mean[a];
      cell.gap = mean[a] - ex[a];
      report.cells.push_back(cell);
    }
  }
  return report;
}

// Theorem-2 check: conditioned on a node being part of the sampled outcome,
// the delta-tilde reconstruction at that node. For RKL every conditional
// sample equals sigma/pi - 1 and the variance is zero; for KL the variance is
// generally positive at nodes with an own-player descendant. Variances are
// computed in two passes over the stored samples so a genuinely constant
// estimator reports ~0 rather than cancellation noise.
inline EnumerationReport verify_conditional_variance(const GameTree& tree,
                                                     const BehaviorProfile& profile,
                                                     const BehaviorProfile& sigma,
                                                     DivergenceKind kind,
                                                     const SamplingScheme& scheme,
                                                     int player) {
  EnumerationReport report;
  report.game = tree.name;
  report.scheme = scheme_name(scheme);
  report.kind = kind;
  report.mu = 1.0;  // delta-tilde does not depend on mu; any nonzero strength works

  // per node: weighted delta-tilde samples over outcomes that visit it
  std::vector<std::vector<std::pair<double, std::vector<double>>>> samples(
      static_cast<size_t>(tree.num_nodes()));

  for (auto& [estimate, p] : detail::enumerate_estimates(tree, profile, sigma, report.mu,
                                                         kind, scheme, player)) {
    report.probability_sum += p;
    for (const PerturbationSample& ps : estimate.perturbations) {
      samples[static_cast<size_t>(ps.node)].emplace_back(p, ps.delta);
    }
  }

  for (int h = 0; h < tree.num_nodes(); ++h) {
    const auto& node_samples = samples[static_cast<size_t>(h)];
    if (node_samples.empty()) continue;
    const Node& node = tree.node(h);
    const auto pi = profile.at(player, node.infoset);
    const auto anchor = sigma.at(player, node.infoset);
    const size_t n = pi.size();
    for (size_t a = 0; a < n; ++a) {
      VarianceCell cell;
      cell.player = player;
      cell.node = h;
      cell.action = static_cast<int>(a);
      const double closed_form = anchor[a] / pi[a] - 1.0;
      double mass = 0.0, weighted_sum = 0.0;
      for (const auto& [p, delta] : node_samples) {
        mass += p;
        weighted_sum += p * delta[a];
        cell.max_closed_form_deviation =
            std::max(cell.max_closed_form_deviation, std::abs(delta[a] - closed_form));
      }
      cell.visit_probability = mass;
      cell.conditional_mean = weighted_sum / mass;
      double var = 0.0;
      for (const auto& [p, delta] : node_samples) {
        const double dev = delta[a] - cell.conditional_mean;
        var += p * dev * dev;
      }
      cell.conditional_variance = var / mass;
      report.variance_cells.push_back(cell);
    }
  }
  return report;
}

}  // namespace efg
