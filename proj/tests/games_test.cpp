#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "efg/games.hpp"
#include "efg/strategy.hpp"

using namespace efg;

TEST_CASE("benchmark infoset counts match the published table") {
  CHECK(build("kuhn").total_infosets() == 12);
  CHECK(build("leduc").total_infosets() == 936);
  CHECK(build("goofspiel4").total_infosets() == 162);
  CHECK(build("goofspiel5").total_infosets() == 2124);
  CHECK(build("liars4").total_infosets() == 1024);
}

TEST_CASE("liars dice with six sides", "[slow]") {
  CHECK(build("liars6").total_infosets() == 24576);
}

TEST_CASE("matching pennies has one binary infoset per player") {
  const GameTree tree = build("matching_pennies");
  CHECK(tree.num_infosets(0) == 1);
  CHECK(tree.num_infosets(1) == 1);
  CHECK(tree.infoset(0, 0).num_actions == 2);
  CHECK(tree.infoset(1, 0).num_actions == 2);
  CHECK(tree.infoset(1, 0).members.size() == 2);
}

TEST_CASE("one card toy gives player 0 an own-node descendant") {
  const GameTree tree = build("one_card_toy");
  CHECK(tree.num_nodes() <= 30);
  int chance_nodes = 0;
  for (const Node& n : tree.nodes) chance_nodes += n.is_chance() ? 1 : 0;
  CHECK(chance_nodes == 1);
  bool has_second_decision = false;
  for (const InfoSet& x : tree.infosets[0]) {
    has_second_decision |= x.own_sequence.size() == 1;
  }
  CHECK(has_second_decision);
}

TEST_CASE("every built game validates cleanly") {
  for (const char* name :
       {"matching_pennies", "one_card_toy", "kuhn", "leduc", "goofspiel4", "liars4"}) {
    const GameTree tree = build(name);
    const auto violations = validate(tree);
    INFO(name << ": " << (violations.empty() ? "" : violations.front().rule));
    CHECK(violations.empty());
  }
}

TEST_CASE("kuhn and leduc deals are uniform over card assignments") {
  const GameTree kuhn = build("kuhn");
  const BehaviorProfile kuhn_uniform = uniform_profile(kuhn);
  // every depth-2 node sits below two chance edges with product 1/6
  std::set<double> kuhn_reaches;
  for (const Edge& e1 : kuhn.node(kuhn.root).edges) {
    for (const Edge& e2 : kuhn.node(e1.child).edges) {
      kuhn_reaches.insert(reach_probability(kuhn, kuhn_uniform, e2.child, 0).other);
    }
  }
  REQUIRE(kuhn_reaches.size() == 1);
  CHECK(*kuhn_reaches.begin() == Catch::Approx(1.0 / 6.0));

  const GameTree leduc = build("leduc");
  const BehaviorProfile leduc_uniform = uniform_profile(leduc);
  std::set<double> leduc_reaches;
  for (const Edge& e1 : leduc.node(leduc.root).edges) {
    for (const Edge& e2 : leduc.node(e1.child).edges) {
      leduc_reaches.insert(reach_probability(leduc, leduc_uniform, e2.child, 0).other);
    }
  }
  REQUIRE(leduc_reaches.size() == 1);
  CHECK(*leduc_reaches.begin() == Catch::Approx(1.0 / 30.0));
}

TEST_CASE("goofspiel is chance-free and hides the pending bid") {
  const GameTree tree = build("goofspiel4");
  for (const Node& n : tree.nodes) CHECK_FALSE(n.is_chance());
  // player 1's first infoset pools all of player 0's pending cards
  CHECK(tree.infoset(1, 0).members.size() == 4);
}

TEST_CASE("payoff bounds match the stakes of each game") {
  CHECK(build("kuhn").payoff_bound == 2.0);
  CHECK(build("matching_pennies").payoff_bound == 1.0);
  CHECK(build("one_card_toy").payoff_bound == 2.0);
  CHECK(build("goofspiel4").payoff_bound == 1.0);
  CHECK(build("liars4").payoff_bound == 1.0);
  CHECK(build("leduc").payoff_bound == 13.0);  // ante 1 + raises 2+2+4+4
}

TEST_CASE("unsupported specs are rejected") {
  CHECK_THROWS_AS(build("goofspiel9"), std::invalid_argument);
  CHECK_THROWS_AS(build("nonsense"), std::invalid_argument);
  CHECK_THROWS_AS(build(GameSpec{GameSpec::Name::kLiarsDice, 5}), std::invalid_argument);
}

TEST_CASE("canonical rules describe the tuned variants") {
  CHECK(canonical_rules({GameSpec::Name::kKuhn, 0}).find("3 cards") != std::string::npos);
  CHECK(canonical_rules({GameSpec::Name::kLiarsDice, 4}).find("4 faces") !=
        std::string::npos);
  CHECK(canonical_rules({GameSpec::Name::kGoofspiel, 4}).find("descending") !=
        std::string::npos);
  CHECK(canonical_rules({GameSpec::Name::kLeduc, 0}).find("raise sizes 2 and 4") !=
        std::string::npos);
}
