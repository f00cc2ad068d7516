#include <catch2/catch_amalgamated.hpp>

#include "efg/game_tree.hpp"
#include "efg/games.hpp"
#include "efg/strategy.hpp"
#include "test_support.hpp"

using namespace efg;

namespace {

// walks down from the root by edge indices
int descend(const GameTree& tree, std::initializer_list<int> edges) {
  int h = tree.root;
  for (int a : edges) h = tree.node(h).edges[static_cast<size_t>(a)].child;
  return h;
}

}  // namespace

TEST_CASE("reach probability at the root is the empty product") {
  const GameTree tree = build("matching_pennies");
  const BehaviorProfile profile = uniform_profile(tree);
  for (int p = 0; p < 2; ++p) {
    const auto r = reach_probability(tree, profile, tree.root, p);
    CHECK(r.own == 1.0);
    CHECK(r.other == 1.0);
  }
}

TEST_CASE("chance probability lands in the other factor") {
  const GameTree tree = build("one_card_toy");
  const BehaviorProfile profile = uniform_profile(tree);
  const int after_deal = descend(tree, {0});
  const auto r = reach_probability(tree, profile, after_deal, 0);
  CHECK(r.own == 1.0);
  CHECK(r.other == 0.5);
}

TEST_CASE("reach decomposes into own and other action products") {
  const GameTree tree = build("matching_pennies");
  BehaviorProfile profile = uniform_profile(tree);
  profile.at(0, 0)[0] = 0.3;
  profile.at(0, 0)[1] = 0.7;
  profile.at(1, 0)[0] = 0.4;
  profile.at(1, 0)[1] = 0.6;
  const int terminal = descend(tree, {0, 0});
  const auto from_p0 = reach_probability(tree, profile, terminal, 0);
  CHECK(from_p0.own == Catch::Approx(0.3));
  CHECK(from_p0.other == Catch::Approx(0.4));
  const auto from_p1 = reach_probability(tree, profile, terminal, 1);
  CHECK(from_p1.own == Catch::Approx(0.4));
  CHECK(from_p1.other == Catch::Approx(0.3));
}

TEST_CASE("own times other equals the raw edge product everywhere") {
  for (const char* name : {"matching_pennies", "one_card_toy", "kuhn"}) {
    const GameTree tree = build(name);
    Rng rng(7);
    const BehaviorProfile profile = testing::random_interior_profile(tree, rng);
    for (int h = 0; h < tree.num_nodes(); ++h) {
      double product = 1.0;
      int cur = h;
      while (cur != tree.root) {
        const Node& node = tree.node(cur);
        const Node& par = tree.node(node.parent);
        const Edge& e = par.edges[static_cast<size_t>(node.parent_edge)];
        product *= par.is_chance() ? e.chance_prob
                                   : profile.at(par.player, par.infoset)
                                         [static_cast<size_t>(node.parent_edge)];
        cur = node.parent;
      }
      for (int p = 0; p < 2; ++p) {
        const auto r = reach_probability(tree, profile, h, p);
        CHECK(r.own * r.other == Catch::Approx(product).margin(1e-12));
      }
    }
  }
}

TEST_CASE("infoset reach at a root-owning infoset") {
  const GameTree tree = build("matching_pennies");
  const BehaviorProfile profile = uniform_profile(tree);
  const auto r = infoset_reach(tree, profile, 0, 0);
  CHECK(r.own == 1.0);
  CHECK(r.other_sum == 1.0);
}

TEST_CASE("kuhn first-player infoset collects the chance reach of one deal") {
  const GameTree tree = build("kuhn");
  const BehaviorProfile profile = uniform_profile(tree);
  for (const InfoSet& x : tree.infosets[0]) {
    if (!x.own_sequence.empty()) continue;  // first decision only
    const auto r = infoset_reach(tree, profile, 0, x.id);
    CHECK(r.own == 1.0);
    CHECK(r.other_sum == Catch::Approx(1.0 / 3.0));
  }
}

TEST_CASE("own reach is zero under a zero-probability own prefix") {
  const GameTree tree = build("kuhn");
  BehaviorProfile profile = uniform_profile(tree);
  for (const InfoSet& x : tree.infosets[0]) {
    if (x.own_sequence.empty()) {
      profile.at(0, x.id)[0] = 0.0;  // never pass
      profile.at(0, x.id)[1] = 1.0;
    }
  }
  for (const InfoSet& x : tree.infosets[0]) {
    if (x.own_sequence.empty()) continue;  // the pass-bet continuations
    const auto r = infoset_reach(tree, profile, 0, x.id);
    CHECK(r.own == 0.0);
  }
}

TEST_CASE("infoset own reach agrees with every member's decomposition") {
  const GameTree tree = build("kuhn");
  Rng rng(11);
  const BehaviorProfile profile = testing::random_interior_profile(tree, rng);
  for (int p = 0; p < 2; ++p) {
    const std::vector<double> reaches = own_reaches(tree, profile, p);
    for (const InfoSet& x : tree.infosets[static_cast<size_t>(p)]) {
      const auto r = infoset_reach(tree, profile, p, x.id);
      CHECK(r.own == Catch::Approx(reaches[static_cast<size_t>(x.id)]).margin(1e-12));
      for (int h : x.members) {
        CHECK(reach_probability(tree, profile, h, p).own ==
              Catch::Approx(r.own).margin(1e-12));
      }
    }
  }
}

TEST_CASE("validate passes a well-formed tree") {
  const GameTree tree = build("kuhn");
  CHECK(validate(tree).empty());
}

TEST_CASE("validate flags denormalized chance outcomes") {
  GameTree tree = build("one_card_toy");
  tree.nodes[static_cast<size_t>(tree.root)].edges[0].chance_prob = 0.6;
  tree.nodes[static_cast<size_t>(tree.root)].edges[1].chance_prob = 0.6;
  const auto violations = validate(tree);
  REQUIRE_FALSE(violations.empty());
  bool found = false;
  for (const Violation& v : violations) found |= v.rule == "chance normalization";
  CHECK(found);
}

TEST_CASE("validate flags mismatched action counts inside an infoset") {
  GameTree tree = build("matching_pennies");
  // graft an extra action onto one member of player 1's infoset
  const int p1_node = tree.node(tree.root).edges[0].child;
  Node& node = tree.nodes[static_cast<size_t>(p1_node)];
  const int t = static_cast<int>(tree.nodes.size());
  node.edges.push_back({t, 0.0, {0.0, 0.0}});
  tree.nodes.emplace_back();
  tree.nodes.back().parent = p1_node;
  tree.nodes.back().parent_edge = 2;
  const auto violations = validate(tree);
  bool found = false;
  for (const Violation& v : violations) found |= v.rule == "perfect recall/action set";
  CHECK(found);
}

TEST_CASE("validate flags broken zero-sum payoffs") {
  GameTree tree = build("matching_pennies");
  const int p1_node = tree.node(tree.root).edges[0].child;
  tree.nodes[static_cast<size_t>(p1_node)].edges[0].payoff = {1.0, -0.5};
  const auto violations = validate(tree);
  bool found = false;
  for (const Violation& v : violations) found |= v.rule == "zero-sum";
  CHECK(found);
}

TEST_CASE("terminal payoffs cancel across players on every path") {
  for (const char* name : {"matching_pennies", "one_card_toy", "kuhn", "leduc"}) {
    const GameTree tree = build(name);
    for (int h = 0; h < tree.num_nodes(); ++h) {
      for (const Edge& e : tree.node(h).edges) {
        CHECK(e.payoff[0] + e.payoff[1] == 0.0);
      }
    }
  }
}
