#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "efg/game_tree.hpp"
#include "efg/strategy.hpp"

namespace efg {

enum class DivergenceKind { kNone, kRKL, kKL };

inline std::string divergence_name(DivergenceKind kind) {
  switch (kind) {
    case DivergenceKind::kNone: return "none";
    case DivergenceKind::kRKL: return "rkl";
    case DivergenceKind::kKL: return "kl";
  }
  return "?";
}

// Per-infoset action-value table for one player, with coverage tracking so
// sampled estimates can distinguish "zero" from "not visited".
class ValueTable {
 public:
  ValueTable() = default;
  ValueTable(const GameTree& tree, int player) : player_(player) {
    const auto& sets = tree.infosets[static_cast<size_t>(player)];
    values_.resize(sets.size());
    defined_.assign(sets.size(), 0);
    for (const InfoSet& x : sets) {
      values_[static_cast<size_t>(x.id)].assign(static_cast<size_t>(x.num_actions), 0.0);
    }
  }

  int player() const { return player_; }
  bool defined(int infoset) const { return defined_[static_cast<size_t>(infoset)] != 0; }
  void mark_defined(int infoset) { defined_[static_cast<size_t>(infoset)] = 1; }
  std::span<double> at(int infoset) {
    auto& v = values_[static_cast<size_t>(infoset)];
    return {v.data(), v.size()};
  }
  std::span<const double> at(int infoset) const {
    const auto& v = values_[static_cast<size_t>(infoset)];
    return {v.data(), v.size()};
  }
  int num_infosets() const { return static_cast<int>(values_.size()); }

 private:
  int player_ = 0;
  std::vector<std::vector<double>> values_;
  std::vector<char> defined_;
};

// Perturbation gradient d_i(h,a) toward the anchor: acting=false gives the
// indicator zero; RKL is (sigma-pi)/pi, KL is ln(sigma/pi). Degenerate
// supports are an error; learner-produced strategies are softmax outputs and
// never hit it.
inline double divergence_term(DivergenceKind kind, std::span<const double> pi,
                              std::span<const double> sigma, int a, bool acting) {
  if (!acting || kind == DivergenceKind::kNone) return 0.0;
  const double p = pi[static_cast<size_t>(a)];
  const double s = sigma[static_cast<size_t>(a)];
  if (p <= 0.0) throw std::domain_error("divergence_term: pi(a) = 0");
  if (kind == DivergenceKind::kRKL) return (s - p) / p;
  if (s <= 0.0) throw std::domain_error("divergence_term: KL with sigma(a) = 0");
  return std::log(s / p);
}

namespace detail {

// Expected payoff for `player` accumulated below node h (exclusive of any
// increment on the edge into h), under the full profile.
inline double expected_payoff_below(const GameTree& tree, const BehaviorProfile& profile,
                                    int h, int player) {
  const Node& node = tree.node(h);
  if (node.is_terminal()) return 0.0;
  double total = 0.0;
  for (size_t a = 0; a < node.edges.size(); ++a) {
    const Edge& e = node.edges[a];
    const double p = node.is_chance()
                         ? e.chance_prob
                         : profile.at(node.player, node.infoset)[a];
    if (p == 0.0) continue;
    total += p * (e.payoff[static_cast<size_t>(player)] +
                  expected_payoff_below(tree, profile, e.child, player));
  }
  return total;
}

}  // namespace detail

// Q-value of taking action a at decision node h for the acting player.
inline double q_value(const GameTree& tree, const BehaviorProfile& profile, int h, int a) {
  const Node& node = tree.node(h);
  const Edge& e = node.edges[static_cast<size_t>(a)];
  const int player = node.player;
  return e.payoff[static_cast<size_t>(player)] +
         detail::expected_payoff_below(tree, profile, e.child, player);
}

namespace detail {

// Expected cumulative perturbation below node h for `player`: the pi-weighted
// sum of d over the subtree, with the acting indicator built in. Vanishes
// identically for RKL.
inline double downstream_perturbation_below(const GameTree& tree,
                                            const BehaviorProfile& profile,
                                            const BehaviorProfile& sigma,
                                            DivergenceKind kind, int h, int player) {
  const Node& node = tree.node(h);
  if (node.is_terminal()) return 0.0;
  const bool own = node.is_decision() && node.player == player;
  double total = 0.0;
  for (size_t a = 0; a < node.edges.size(); ++a) {
    const Edge& e = node.edges[a];
    const double p = node.is_chance()
                         ? e.chance_prob
                         : profile.at(node.player, node.infoset)[a];
    if (!own && p == 0.0) continue;
    double term = downstream_perturbation_below(tree, profile, sigma, kind, e.child, player);
    if (own) {
      term += divergence_term(kind, profile.at(player, node.infoset),
                              sigma.at(player, node.infoset), static_cast<int>(a), true);
    }
    total += p * term;
  }
  return total;
}

}  // namespace detail

// Cumulative perturbation delta_i(h,a): the immediate gradient plus the
// reach-weighted gradients over the subtree below (h,a). For RKL this equals
// sigma(a|x)/pi(a|x) - 1 in closed form.
inline double cumulative_perturbation(const GameTree& tree, const BehaviorProfile& profile,
                                      const BehaviorProfile& sigma, DivergenceKind kind,
                                      int h, int a) {
  const Node& node = tree.node(h);
  const int player = node.player;
  const double immediate = divergence_term(kind, profile.at(player, node.infoset),
                                           sigma.at(player, node.infoset), a, true);
  return immediate + detail::downstream_perturbation_below(
                         tree, profile, sigma, kind,
                         node.edges[static_cast<size_t>(a)].child, player);
}

// Bulk form of the recursion above: downstream perturbation for `player`
// below every node, computed in one bottom-up pass. delta(h,a) is then
// d(h,a) + result[child(h,a)].
inline std::vector<double> downstream_perturbation(const GameTree& tree,
                                                   const BehaviorProfile& profile,
                                                   const BehaviorProfile& sigma,
                                                   DivergenceKind kind, int player) {
  std::vector<double> below(static_cast<size_t>(tree.num_nodes()), 0.0);
  // children have larger indices than parents (discovery order), so a reverse
  // sweep is bottom-up
  for (int h = tree.num_nodes() - 1; h >= 0; --h) {
    const Node& node = tree.node(h);
    if (node.is_terminal()) continue;
    const bool own = node.is_decision() && node.player == player;
    double total = 0.0;
    for (size_t a = 0; a < node.edges.size(); ++a) {
      const Edge& e = node.edges[a];
      const double p = node.is_chance()
                           ? e.chance_prob
                           : profile.at(node.player, node.infoset)[a];
      double term = below[static_cast<size_t>(e.child)];
      if (own) {
        term += divergence_term(kind, profile.at(player, node.infoset),
                                sigma.at(player, node.infoset), static_cast<int>(a), true);
      }
      total += p * term;
    }
    below[static_cast<size_t>(h)] = total;
  }
  return below;
}

// Exact perturbed counterfactual values for one player under a full
// game-tree traversal: v(x,a) = sum_{h in x} rho_{-i}(h) (q(h,a) + mu d(h,a)
// + downstream perturbation), accumulated in a single recursive walk that
// adds mu*d at each of the player's own nodes.
inline ValueTable perturbed_counterfactual_values(const GameTree& tree,
                                                  const BehaviorProfile& profile,
                                                  const BehaviorProfile& sigma, double mu,
                                                  DivergenceKind kind, int player) {
  ValueTable out(tree, player);
  for (int x = 0; x < out.num_infosets(); ++x) out.mark_defined(x);

  auto traverse = [&](auto&& self, int h, double rho_other) -> double {
    const Node& node = tree.node(h);
    if (node.is_terminal()) return 0.0;
    if (!node.is_decision() || node.player != player) {
      double total = 0.0;
      for (size_t a = 0; a < node.edges.size(); ++a) {
        const Edge& e = node.edges[a];
        const double p = node.is_chance()
                             ? e.chance_prob
                             : profile.at(node.player, node.infoset)[a];
        if (p == 0.0) continue;
        total += p * (self(self, e.child, p * rho_other) +
                      e.payoff[static_cast<size_t>(player)]);
      }
      return total;
    }
    const auto pi = profile.at(player, node.infoset);
    auto values = out.at(node.infoset);
    double node_value = 0.0;
    for (size_t a = 0; a < node.edges.size(); ++a) {
      const Edge& e = node.edges[a];
      double q = self(self, e.child, rho_other) + e.payoff[static_cast<size_t>(player)];
      if (mu != 0.0) {
        q += mu * divergence_term(kind, pi, sigma.at(player, node.infoset),
                                  static_cast<int>(a), true);
      }
      values[a] += rho_other * q;
      node_value += pi[a] * q;
    }
    return node_value;
  };
  traverse(traverse, tree.root, 1.0);
  return out;
}

}  // namespace efg
