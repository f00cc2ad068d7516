#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "efg/game_tree.hpp"
#include "efg/strategy.hpp"

namespace efg {

// One experiment observation: exploitability of the last and the average
// iterate at a given iteration of one seeded run.
struct ExploitRecord {
  std::string game;
  std::string algo;
  std::string sampling;
  unsigned long long seed = 0;
  long iteration = 0;
  double exploit_last = 0.0;
  double exploit_avg = 0.0;
};

// Value of the responder's best response against the fixed opponent half of
// `profile`. One bottom-up pass; responder infosets are resolved from the
// deepest own-sequence outward, so each decision maximizes the
// opponent+chance reach-weighted value of its members given the deeper
// best-response choices.
inline double best_response_value(const GameTree& tree, const BehaviorProfile& profile,
                                  int responder) {
  const int n = tree.num_nodes();

  // opponent + chance reach per node
  std::vector<double> reach_other(static_cast<size_t>(n), 0.0);
  reach_other[static_cast<size_t>(tree.root)] = 1.0;
  for (int h = 0; h < n; ++h) {
    const Node& node = tree.node(h);
    const double r = reach_other[static_cast<size_t>(h)];
    for (size_t a = 0; a < node.edges.size(); ++a) {
      double p = 1.0;
      if (node.is_chance()) p = node.edges[a].chance_prob;
      else if (node.player != responder) p = profile.at(node.player, node.infoset)[a];
      reach_other[static_cast<size_t>(node.edges[a].child)] = r * p;
    }
  }

  const auto& sets = tree.infosets[static_cast<size_t>(responder)];
  std::vector<int> chosen(sets.size(), -1);

  // subtree best-response value per node, memoized; responder nodes require
  // their infoset's action to be decided first
  std::vector<double> memo(static_cast<size_t>(n), 0.0);
  std::vector<char> ready(static_cast<size_t>(n), 0);
  auto value_below = [&](auto&& self, int h) -> double {
    if (ready[static_cast<size_t>(h)]) return memo[static_cast<size_t>(h)];
    const Node& node = tree.node(h);
    double v = 0.0;
    if (node.is_terminal()) {
      v = 0.0;
    } else if (node.is_decision() && node.player == responder) {
      const int a = chosen[static_cast<size_t>(node.infoset)];
      const Edge& e = node.edges[static_cast<size_t>(a)];
      v = e.payoff[static_cast<size_t>(responder)] + self(self, e.child);
    } else {
      for (size_t a = 0; a < node.edges.size(); ++a) {
        const Edge& e = node.edges[a];
        const double p = node.is_chance() ? e.chance_prob
                                          : profile.at(node.player, node.infoset)[a];
        if (p == 0.0) continue;
        v += p * (e.payoff[static_cast<size_t>(responder)] + self(self, e.child));
      }
    }
    memo[static_cast<size_t>(h)] = v;
    ready[static_cast<size_t>(h)] = 1;
    return v;
  };

  // deepest own sequences first; ties broken by id for determinism
  std::vector<int> order(sets.size());
  for (size_t i = 0; i < sets.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    return sets[static_cast<size_t>(lhs)].own_sequence.size() >
           sets[static_cast<size_t>(rhs)].own_sequence.size();
  });

  for (int id : order) {
    const InfoSet& x = sets[static_cast<size_t>(id)];
    int best_action = 0;
    double best_score = 0.0;
    for (int a = 0; a < x.num_actions; ++a) {
      double score = 0.0;
      for (int h : x.members) {
        const Edge& e = tree.node(h).edges[static_cast<size_t>(a)];
        score += reach_other[static_cast<size_t>(h)] *
                 (e.payoff[static_cast<size_t>(responder)] + value_below(value_below, e.child));
      }
      if (a == 0 || score > best_score) {
        best_score = score;
        best_action = a;
      }
    }
    chosen[static_cast<size_t>(id)] = best_action;
  }

  return value_below(value_below, tree.root);
}

// Sum of both players' best-response gains; zero exactly at a Nash
// equilibrium.
inline double exploitability(const GameTree& tree, const BehaviorProfile& profile) {
  return best_response_value(tree, profile, 0) + best_response_value(tree, profile, 1);
}

}  // namespace efg
