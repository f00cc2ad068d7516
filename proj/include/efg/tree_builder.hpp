#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "efg/game_tree.hpp"

namespace efg {

// Game definitions drive the builder through a small state interface:
//
//   struct State {
//     bool is_terminal() const;
//     int player() const;                       // kChancePlayer, 0, or 1
//     int num_actions() const;                  // branches in generation order
//     double chance_prob(int a) const;          // chance states only
//     std::array<double, 2> payoff(int a) const;// increment paid on edge a
//     State child(int a) const;
//     std::string infoset_key() const;          // decision states only
//   };
//
// The builder enumerates the whole tree depth-first, assigns dense node
// indices in discovery order, groups decision nodes into infosets by
// (player, key), and records each infoset's own (infoset, action) sequence.
// Perfect recall is checked during construction: a key that reappears with a
// different own sequence or action count is a game-definition bug.
template <class State>
GameTree build_tree(std::string name, const State& root_state) {
  GameTree tree;
  tree.name = std::move(name);

  std::array<std::unordered_map<std::string, int>, 2> key_to_id;
  // own (infoset, action) prefix per player along the current DFS path
  std::array<std::vector<std::pair<int, int>>, 2> own_prefix;

  struct Frame {
    State state;
    int index;
  };

  // Recursive lambda over an explicit helper to keep State copies scoped.
  auto expand = [&](auto&& self, const State& state, int index, int depth,
                    std::array<double, 2> accumulated) -> double {
    Node& node = tree.nodes[static_cast<size_t>(index)];
    node.depth = depth;
    if (state.is_terminal()) {
      node.kind = NodeKind::kTerminal;
      double mag = std::abs(accumulated[0]);
      if (std::abs(accumulated[1]) > mag) mag = std::abs(accumulated[1]);
      return mag;
    }
    const int acting = state.player();
    const int n = state.num_actions();
    if (acting == kChancePlayer) {
      node.kind = NodeKind::kChance;
      node.player = kChancePlayer;
    } else {
      node.kind = NodeKind::kDecision;
      node.player = acting;
      const std::string key = state.infoset_key();
      auto& ids = key_to_id[static_cast<size_t>(acting)];
      auto it = ids.find(key);
      if (it == ids.end()) {
        InfoSet x;
        x.id = static_cast<int>(tree.infosets[static_cast<size_t>(acting)].size());
        x.player = acting;
        x.num_actions = n;
        x.own_sequence = own_prefix[static_cast<size_t>(acting)];
        x.key = key;
        it = ids.emplace(key, x.id).first;
        tree.infosets[static_cast<size_t>(acting)].push_back(std::move(x));
      }
      InfoSet& x = tree.infosets[static_cast<size_t>(acting)][static_cast<size_t>(it->second)];
      if (x.num_actions != n) {
        throw std::logic_error(tree.name + ": action count mismatch at infoset key " + x.key);
      }
      if (x.own_sequence != own_prefix[static_cast<size_t>(acting)]) {
        throw std::logic_error(tree.name + ": perfect recall violated at infoset key " + x.key);
      }
      x.members.push_back(index);
      node.infoset = it->second;
    }

    double bound = 0.0;
    node.edges.resize(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a) {
      const int child_index = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes[static_cast<size_t>(child_index)].parent = index;
      tree.nodes[static_cast<size_t>(child_index)].parent_edge = a;
      // node reference may dangle after the emplace; re-fetch
      Edge& edge = tree.nodes[static_cast<size_t>(index)].edges[static_cast<size_t>(a)];
      edge.child = child_index;
      edge.payoff = state.payoff(a);
      if (acting == kChancePlayer) edge.chance_prob = state.chance_prob(a);

      std::array<double, 2> next_accumulated = accumulated;
      next_accumulated[0] += edge.payoff[0];
      next_accumulated[1] += edge.payoff[1];

      if (acting != kChancePlayer) {
        own_prefix[static_cast<size_t>(acting)].emplace_back(
            tree.nodes[static_cast<size_t>(index)].infoset, a);
      }
      const double sub = self(self, state.child(a), child_index, depth + 1, next_accumulated);
      if (acting != kChancePlayer) {
        own_prefix[static_cast<size_t>(acting)].pop_back();
      }
      if (sub > bound) bound = sub;
    }
    return bound;
  };

  tree.nodes.emplace_back();
  tree.root = 0;
  tree.payoff_bound = expand(expand, root_state, 0, 0, {0.0, 0.0});
  return tree;
}

}  // namespace efg
