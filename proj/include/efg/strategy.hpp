#pragma once

#include <cassert>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "efg/game_tree.hpp"

namespace efg {

// Tabular behavior strategy: one probability vector per infoset, stored flat
// per player. Used for current strategies, anchors and sampling strategies.
class BehaviorProfile {
 public:
  BehaviorProfile() = default;

  explicit BehaviorProfile(const GameTree& tree) {
    for (int p = 0; p < kNumPlayers; ++p) {
      auto& offsets = offsets_[static_cast<size_t>(p)];
      auto& probs = probs_[static_cast<size_t>(p)];
      offsets.reserve(tree.infosets[static_cast<size_t>(p)].size() + 1);
      offsets.push_back(0);
      for (const InfoSet& x : tree.infosets[static_cast<size_t>(p)]) {
        offsets.push_back(offsets.back() + x.num_actions);
      }
      probs.assign(static_cast<size_t>(offsets.back()), 0.0);
    }
  }

  std::span<double> at(int player, int infoset) {
    const auto& offsets = offsets_[static_cast<size_t>(player)];
    auto& probs = probs_[static_cast<size_t>(player)];
    const int begin = offsets[static_cast<size_t>(infoset)];
    const int end = offsets[static_cast<size_t>(infoset) + 1];
    return {probs.data() + begin, static_cast<size_t>(end - begin)};
  }
  std::span<const double> at(int player, int infoset) const {
    const auto& offsets = offsets_[static_cast<size_t>(player)];
    const auto& probs = probs_[static_cast<size_t>(player)];
    const int begin = offsets[static_cast<size_t>(infoset)];
    const int end = offsets[static_cast<size_t>(infoset) + 1];
    return {probs.data() + begin, static_cast<size_t>(end - begin)};
  }

  int num_infosets(int player) const {
    return static_cast<int>(offsets_[static_cast<size_t>(player)].size()) - 1;
  }

  friend bool operator==(const BehaviorProfile& a, const BehaviorProfile& b) {
    return a.probs_ == b.probs_ && a.offsets_ == b.offsets_;
  }

 private:
  std::array<std::vector<int>, 2> offsets_;
  std::array<std::vector<double>, 2> probs_;
};

inline BehaviorProfile uniform_profile(const GameTree& tree) {
  BehaviorProfile profile(tree);
  for (int p = 0; p < kNumPlayers; ++p) {
    for (const InfoSet& x : tree.infosets[static_cast<size_t>(p)]) {
      auto row = profile.at(p, x.id);
      const double u = 1.0 / static_cast<double>(x.num_actions);
      for (double& v : row) v = u;
    }
  }
  return profile;
}

inline bool is_simplex(std::span<const double> v, double tol = 1e-12) {
  double sum = 0.0;
  for (double p : v) {
    if (!(p >= 0.0)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tol;
}

struct ReachDecomposition {
  double own = 1.0;
  double other = 1.0;  // opponent and chance combined
};

// rho_i / rho_{-i} factorization of the reach probability of history h from
// the given player's perspective.
inline ReachDecomposition reach_probability(const GameTree& tree,
                                            const BehaviorProfile& profile, int h,
                                            int player) {
  ReachDecomposition r;
  int cur = h;
  while (cur != tree.root) {
    const Node& node = tree.node(cur);
    const Node& par = tree.node(node.parent);
    if (par.is_chance()) {
      r.other *= par.edges[static_cast<size_t>(node.parent_edge)].chance_prob;
    } else {
      const double p =
          profile.at(par.player, par.infoset)[static_cast<size_t>(node.parent_edge)];
      if (par.player == player) r.own *= p;
      else r.other *= p;
    }
    cur = node.parent;
  }
  return r;
}

struct InfosetReach {
  double own = 1.0;        // identical across members by perfect recall
  double other_sum = 0.0;  // sum of rho_{-i} over member histories
};

inline InfosetReach infoset_reach(const GameTree& tree, const BehaviorProfile& profile,
                                  int player, int infoset) {
  const InfoSet& x = tree.infoset(player, infoset);
  InfosetReach r;
  r.own = 1.0;
  for (const auto& [parent_infoset, action] : x.own_sequence) {
    r.own *= profile.at(player, parent_infoset)[static_cast<size_t>(action)];
  }
  for (int h : x.members) {
    r.other_sum += reach_probability(tree, profile, h, player).other;
  }
  return r;
}

// Own reach of every infoset of one player in one pass. Infoset ids ascend
// from own-parents to children (builder discovery order), so a forward sweep
// suffices.
inline std::vector<double> own_reaches(const GameTree& tree,
                                       const BehaviorProfile& profile, int player) {
  const auto& sets = tree.infosets[static_cast<size_t>(player)];
  std::vector<double> reach(sets.size(), 1.0);
  for (const InfoSet& x : sets) {
    if (x.own_sequence.empty()) continue;
    const auto [parent, action] = x.own_sequence.back();
    assert(parent < x.id);
    reach[static_cast<size_t>(x.id)] =
        reach[static_cast<size_t>(parent)] *
        profile.at(player, parent)[static_cast<size_t>(action)];
  }
  return reach;
}

inline constexpr long kNoAnchorUpdates = std::numeric_limits<long>::max();

// Anchoring strategy with visit-counted replacement: after every
// update_interval visits to an infoset, the anchor there is overwritten with
// the current strategy and the counter resets.
struct AnchorStore {
  BehaviorProfile sigma;
  std::array<std::vector<long>, 2> visit_counts;
  long update_interval = kNoAnchorUpdates;

  AnchorStore() = default;
  AnchorStore(const GameTree& tree, long interval)
      : sigma(uniform_profile(tree)), update_interval(interval) {
    for (int p = 0; p < kNumPlayers; ++p) {
      visit_counts[static_cast<size_t>(p)].assign(
          static_cast<size_t>(tree.num_infosets(p)), 0);
    }
  }
};

inline bool record_visit_and_maybe_anchor(AnchorStore& store, int player, int infoset,
                                          std::span<const double> current) {
  long& count = store.visit_counts[static_cast<size_t>(player)][static_cast<size_t>(infoset)];
  ++count;
  if (count < store.update_interval) return false;
  auto row = store.sigma.at(player, infoset);
  assert(row.size() == current.size());
  for (size_t a = 0; a < row.size(); ++a) row[a] = current[a];
  count = 0;
  return true;
}

// Reach-weighted running average of the played strategies:
// extract() = sum_s rho_i^{pi^s}(x) pi^s(.|x) / sum_s rho_i^{pi^s}(x),
// uniform where the denominator is zero.
class AverageAccumulator {
 public:
  AverageAccumulator() = default;
  explicit AverageAccumulator(const GameTree& tree) : weighted_sum_(tree) {
    for (int p = 0; p < kNumPlayers; ++p) {
      weight_[static_cast<size_t>(p)].assign(static_cast<size_t>(tree.num_infosets(p)),
                                             0.0);
    }
  }

  void accumulate(const GameTree& tree, const BehaviorProfile& profile,
                  double scale = 1.0) {
    for (int p = 0; p < kNumPlayers; ++p) {
      const std::vector<double> reach = own_reaches(tree, profile, p);
      for (const InfoSet& x : tree.infosets[static_cast<size_t>(p)]) {
        const double w = scale * reach[static_cast<size_t>(x.id)];
        if (w == 0.0) continue;
        weight_[static_cast<size_t>(p)][static_cast<size_t>(x.id)] += w;
        auto acc = weighted_sum_.at(p, x.id);
        const auto cur = profile.at(p, x.id);
        for (size_t a = 0; a < acc.size(); ++a) acc[a] += w * cur[a];
      }
    }
  }

  BehaviorProfile extract(const GameTree& tree) const {
    BehaviorProfile avg(tree);
    for (int p = 0; p < kNumPlayers; ++p) {
      for (const InfoSet& x : tree.infosets[static_cast<size_t>(p)]) {
        auto row = avg.at(p, x.id);
        const double w = weight_[static_cast<size_t>(p)][static_cast<size_t>(x.id)];
        if (w > 0.0) {
          const auto acc = weighted_sum_.at(p, x.id);
          for (size_t a = 0; a < row.size(); ++a) row[a] = acc[a] / w;
        } else {
          const double u = 1.0 / static_cast<double>(x.num_actions);
          for (double& v : row) v = u;
        }
      }
    }
    return avg;
  }

  double weight(int player, int infoset) const {
    return weight_[static_cast<size_t>(player)][static_cast<size_t>(infoset)];
  }

 private:
  BehaviorProfile weighted_sum_;  // reused as a per-infoset vector store
  std::array<std::vector<double>, 2> weight_;
};

// Plain-text checkpoint format: player,infoset,action,prob
inline void write_profile_csv(const GameTree& tree, const BehaviorProfile& profile,
                              std::ostream& os) {
  os << "player,infoset,action,prob\n";
  char buf[64];
  for (int p = 0; p < kNumPlayers; ++p) {
    for (const InfoSet& x : tree.infosets[static_cast<size_t>(p)]) {
      const auto row = profile.at(p, x.id);
      for (size_t a = 0; a < row.size(); ++a) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%zu,%.17g\n", p, x.id, a, row[a]);
        os << buf;
      }
    }
  }
}

inline BehaviorProfile read_profile_csv(const GameTree& tree, std::istream& is) {
  BehaviorProfile profile(tree);
  std::string line;
  if (!std::getline(is, line) || line != "player,infoset,action,prob") {
    throw std::runtime_error("profile csv: bad header");
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    int p = 0, x = 0, a = 0;
    double prob = 0.0;
    if (std::sscanf(line.c_str(), "%d,%d,%d,%lg", &p, &x, &a, &prob) != 4) {
      throw std::runtime_error("profile csv: bad row: " + line);
    }
    profile.at(p, x)[static_cast<size_t>(a)] = prob;
  }
  return profile;
}

}  // namespace efg
