#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace efg {

inline constexpr int kChancePlayer = -1;
inline constexpr int kNumPlayers = 2;

enum class NodeKind { kDecision, kChance, kTerminal };

// One outgoing transition. For decision nodes the edge index doubles as the
// action id (action lists are generated in the same order at every history of
// an infoset). chance_prob is meaningful for chance nodes only. The payoff
// pair is the increment paid to each player when the edge is taken; in the
// benchmark games only terminal-leading edges carry nonzero increments.
struct Edge {
  int child = -1;
  double chance_prob = 0.0;
  std::array<double, 2> payoff{0.0, 0.0};
};

struct Node {
  NodeKind kind = NodeKind::kTerminal;
  int player = kChancePlayer;  // acting player for decision nodes
  int infoset = -1;            // per-player dense id, decision nodes only
  int parent = -1;
  int parent_edge = -1;
  int depth = 0;
  std::vector<Edge> edges;

  bool is_terminal() const { return kind == NodeKind::kTerminal; }
  bool is_chance() const { return kind == NodeKind::kChance; }
  bool is_decision() const { return kind == NodeKind::kDecision; }
  int num_actions() const { return static_cast<int>(edges.size()); }
};

struct InfoSet {
  int id = -1;
  int player = -1;
  int num_actions = 0;
  std::vector<int> members;  // node indices, discovery order
  // (infoset id, action id) pairs of the owning player's own moves from the
  // root; identical across members by perfect recall. The last entry, when
  // present, is the parent infoset in the player's own tree.
  std::vector<std::pair<int, int>> own_sequence;
  std::string key;  // builder observation key, kept for debugging/rules audit
};

// Fully enumerated extensive-form game tree. Immutable after construction and
// safe for concurrent reads.
struct GameTree {
  std::string name;
  std::vector<Node> nodes;
  int root = 0;
  std::array<std::vector<InfoSet>, 2> infosets;
  double payoff_bound = 0.0;  // max |terminal payoff| over full paths

  const Node& node(int h) const { return nodes[static_cast<size_t>(h)]; }
  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_infosets(int player) const {
    return static_cast<int>(infosets[static_cast<size_t>(player)].size());
  }
  int total_infosets() const { return num_infosets(0) + num_infosets(1); }
  const InfoSet& infoset(int player, int id) const {
    return infosets[static_cast<size_t>(player)][static_cast<size_t>(id)];
  }
};

struct Violation {
  std::string rule;    // short rule tag, e.g. "chance normalization"
  std::string detail;  // offending node/infoset
};

namespace detail {

inline std::string node_label(int h) {
  std::ostringstream os;
  os << "node " << h;
  return os.str();
}

}  // namespace detail

inline std::vector<Violation> validate(const GameTree& tree) {
  std::vector<Violation> out;
  const int n = tree.num_nodes();

  std::vector<int> ref_count(static_cast<size_t>(n), 0);
  for (int h = 0; h < n; ++h) {
    const Node& node = tree.node(h);
    for (const Edge& e : node.edges) {
      if (e.child < 0 || e.child >= n) {
        out.push_back({"tree structure", detail::node_label(h) + " has an out-of-range child"});
        continue;
      }
      ref_count[static_cast<size_t>(e.child)]++;
      const Node& child = tree.node(e.child);
      if (child.parent != h) {
        out.push_back({"tree structure", detail::node_label(e.child) + " parent link mismatch"});
      }
      if (!child.is_terminal() && (e.payoff[0] != 0.0 || e.payoff[1] != 0.0)) {
        out.push_back({"interior payoff",
                       detail::node_label(h) + " pays on an edge not leading to a terminal"});
      }
      if (e.payoff[0] + e.payoff[1] != 0.0) {
        out.push_back({"zero-sum", detail::node_label(h) + " edge payoffs do not cancel"});
      }
    }
    if (node.is_chance()) {
      double sum = 0.0;
      for (const Edge& e : node.edges) sum += e.chance_prob;
      if (std::abs(sum - 1.0) > 1e-12) {
        out.push_back({"chance normalization",
                       detail::node_label(h) + " outcome probabilities sum to " + std::to_string(sum)});
      }
    }
    if (node.is_decision()) {
      if (node.edges.empty()) {
        out.push_back({"empty action set", detail::node_label(h)});
      }
      if (node.player != 0 && node.player != 1) {
        out.push_back({"player range", detail::node_label(h)});
      }
    }
  }
  for (int h = 0; h < n; ++h) {
    const int expected = (h == tree.root) ? 0 : 1;
    if (ref_count[static_cast<size_t>(h)] != expected) {
      out.push_back({"tree structure", detail::node_label(h) + " referenced " +
                                           std::to_string(ref_count[static_cast<size_t>(h)]) +
                                           " times"});
    }
  }

  // Infoset partition + perfect recall.
  for (int p = 0; p < kNumPlayers; ++p) {
    std::vector<int> seen(static_cast<size_t>(n), 0);
    for (const InfoSet& x : tree.infosets[static_cast<size_t>(p)]) {
      std::ostringstream label;
      label << "player " << p << " infoset " << x.id;
      for (int h : x.members) {
        const Node& node = tree.node(h);
        if (!node.is_decision() || node.player != p || node.infoset != x.id) {
          out.push_back({"infoset partition", label.str() + " member " + std::to_string(h)});
          continue;
        }
        seen[static_cast<size_t>(h)]++;
        if (node.num_actions() != x.num_actions) {
          out.push_back({"perfect recall/action set",
                         label.str() + ": member " + std::to_string(h) +
                             " has a different action count"});
        }
      }
    }
    for (int h = 0; h < n; ++h) {
      const Node& node = tree.node(h);
      if (node.is_decision() && node.player == p &&
          seen[static_cast<size_t>(h)] != 1) {
        out.push_back({"infoset partition",
                       detail::node_label(h) + " appears in " +
                           std::to_string(seen[static_cast<size_t>(h)]) + " infosets"});
      }
    }
  }

  // Perfect recall: all members of an infoset share the same own sequence of
  // (infoset, action) pairs from root.
  for (int p = 0; p < kNumPlayers; ++p) {
    for (const InfoSet& x : tree.infosets[static_cast<size_t>(p)]) {
      for (int h : x.members) {
        std::vector<std::pair<int, int>> seq;
        int cur = h;
        while (cur != tree.root) {
          const Node& node = tree.node(cur);
          const Node& par = tree.node(node.parent);
          if (par.is_decision() && par.player == p) {
            seq.emplace_back(par.infoset, node.parent_edge);
          }
          cur = node.parent;
        }
        std::reverse(seq.begin(), seq.end());
        if (seq != x.own_sequence) {
          out.push_back({"perfect recall/action set",
                         "player " + std::to_string(p) + " infoset " + std::to_string(x.id) +
                             ": member " + std::to_string(h) + " own sequence differs"});
        }
      }
    }
  }
  return out;
}

}  // namespace efg
