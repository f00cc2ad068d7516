#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "efg/game_tree.hpp"
#include "efg/tree_builder.hpp"

namespace efg {

// Supported game variants. The benchmark parameterizations are fingerprinted
// by their information-set counts: kuhn 12, leduc 936, goofspiel 4/5 cards
// 162/2124, liar's dice 4/6 sides 1024/24576.
struct GameSpec {
  enum class Name {
    kMatchingPennies,
    kOneCardToy,
    kKuhn,
    kLeduc,
    kGoofspiel,   // param = number of point cards
    kLiarsDice,   // param = die sides
  };
  Name name = Name::kKuhn;
  int param = 0;
};

inline GameSpec parse_game_name(const std::string& s) {
  if (s == "kuhn") return {GameSpec::Name::kKuhn, 0};
  if (s == "leduc") return {GameSpec::Name::kLeduc, 0};
  if (s == "goofspiel4") return {GameSpec::Name::kGoofspiel, 4};
  if (s == "goofspiel5") return {GameSpec::Name::kGoofspiel, 5};
  if (s == "liars4") return {GameSpec::Name::kLiarsDice, 4};
  if (s == "liars6") return {GameSpec::Name::kLiarsDice, 6};
  if (s == "matching_pennies") return {GameSpec::Name::kMatchingPennies, 0};
  if (s == "one_card_toy") return {GameSpec::Name::kOneCardToy, 0};
  throw std::invalid_argument("unknown game: " + s);
}

inline std::string game_name(const GameSpec& spec) {
  switch (spec.name) {
    case GameSpec::Name::kMatchingPennies: return "matching_pennies";
    case GameSpec::Name::kOneCardToy: return "one_card_toy";
    case GameSpec::Name::kKuhn: return "kuhn";
    case GameSpec::Name::kLeduc: return "leduc";
    case GameSpec::Name::kGoofspiel: return "goofspiel" + std::to_string(spec.param);
    case GameSpec::Name::kLiarsDice: return "liars" + std::to_string(spec.param);
  }
  return "?";
}

namespace games {

// ---------------------------------------------------------------------------
// Matching pennies, serialized: player 0 commits, player 1 moves without
// observing it. Payoff +1 to player 0 on a match.
struct PenniesState {
  int moves = 0;
  int first = -1;

  bool is_terminal() const { return moves == 2; }
  int player() const { return moves; }
  int num_actions() const { return 2; }
  double chance_prob(int) const { return 0.0; }
  std::array<double, 2> payoff(int a) const {
    if (moves != 1) return {0.0, 0.0};
    const double v = (a == first) ? 1.0 : -1.0;
    return {v, -v};
  }
  PenniesState child(int a) const {
    return moves == 0 ? PenniesState{1, a} : PenniesState{2, first};
  }
  std::string infoset_key() const { return moves == 0 ? "p0" : "p1"; }
};

// ---------------------------------------------------------------------------
// One-card toy: a single chance deal of a High or Low card to player 0, a
// bet/check decision, a response by the card-less player 1, and a second
// player-0 decision after check-bet. The second decision gives player 0 an
// own-node descendant, which the variance diagnostics rely on.
//
// history: "" (p0: 0=check,1=bet), "b" (p1: 0=fold,1=call),
//          "c" (p1: 0=check,1=bet), "cb" (p0: 0=fold,1=call)
struct OneCardToyState {
  int card = -1;  // 0 = Low, 1 = High
  std::string history;

  bool is_terminal() const {
    return history == "bf" || history == "bk" || history == "cc" ||
           history == "cbf" || history == "cbk";
  }
  int player() const {
    if (card < 0) return kChancePlayer;
    if (history.empty() || history == "cb") return 0;
    return 1;
  }
  int num_actions() const { return 2; }
  double chance_prob(int) const { return 0.5; }

  std::array<double, 2> payoff(int a) const {
    if (card < 0) return {0.0, 0.0};
    const double win = (card == 1) ? 1.0 : -1.0;  // showdown sign for p0
    if (history == "b") {
      const double v = (a == 0) ? 1.0 : 2.0 * win;  // fold pays p0 the ante
      return {v, -v};
    }
    if (history == "c" && a == 0) return {win, -win};
    if (history == "cb") {
      const double v = (a == 0) ? -1.0 : 2.0 * win;
      return {v, -v};
    }
    return {0.0, 0.0};
  }
  OneCardToyState child(int a) const {
    if (card < 0) return {a, ""};
    std::string h = history;
    if (history.empty()) h += (a == 0) ? 'c' : 'b';
    else if (history == "b") h += (a == 0) ? 'f' : 'k';
    else if (history == "c") h += (a == 0) ? 'c' : 'b';
    else h += (a == 0) ? 'f' : 'k';
    return {card, h};
  }
  std::string infoset_key() const {
    if (player() == 0) return std::to_string(card) + "|" + history;
    return history;  // player 1 never sees the card
  }
};

// ---------------------------------------------------------------------------
// Kuhn poker: 3 cards, ante 1, bet 1, one round. action 0 = pass, 1 = bet.
struct KuhnState {
  int cards[2] = {-1, -1};
  std::string history;

  bool is_terminal() const {
    return history == "pp" || history == "bp" || history == "bb" ||
           history == "pbp" || history == "pbb";
  }
  int player() const {
    if (cards[0] < 0 || cards[1] < 0) return kChancePlayer;
    return static_cast<int>(history.size()) % 2;
  }
  int num_actions() const {
    if (cards[0] < 0) return 3;
    if (cards[1] < 0) return 2;
    return 2;
  }
  double chance_prob(int) const { return cards[0] < 0 ? 1.0 / 3.0 : 0.5; }

  std::array<double, 2> payoff(int a) const {
    if (player() == kChancePlayer) return {0.0, 0.0};
    std::string h = history + (a == 0 ? 'p' : 'b');
    const double win = cards[0] > cards[1] ? 1.0 : -1.0;
    double v = 0.0;
    if (h == "pp") v = win;
    else if (h == "bp") v = 1.0;
    else if (h == "bb") v = 2.0 * win;
    else if (h == "pbp") v = -1.0;
    else if (h == "pbb") v = 2.0 * win;
    else return {0.0, 0.0};
    return {v, -v};
  }
  KuhnState child(int a) const {
    KuhnState next = *this;
    if (cards[0] < 0) {
      next.cards[0] = a;
    } else if (cards[1] < 0) {
      next.cards[1] = a < cards[0] ? a : a + 1;  // deal from the remaining two
    } else {
      next.history += (a == 0 ? 'p' : 'b');
    }
    return next;
  }
  std::string infoset_key() const {
    return std::to_string(cards[player()]) + "|" + history;
  }
};

// ---------------------------------------------------------------------------
// Leduc poker: 6-card deck (3 ranks, 2 suits), ante 1, two betting rounds
// with raise sizes 2 then 4 and a two-raise cap per round, one public card
// between rounds. Player 0 opens both rounds. Actions in generation order:
// fold (only when facing a raise), call/check, raise.
struct LeducState {
  int cards[2] = {-1, -1};
  int public_card = -1;
  int round = 0;            // 0 or 1
  bool reveal_next = false; // betting closed, public card pending
  std::string round_history[2];
  int stakes[2] = {1, 1};
  int raises = 0;
  int to_act = 0;
  bool finished = false;
  int folder = -1;

  static int rank(int card) { return card / 2; }

  bool is_terminal() const { return finished; }
  int player() const {
    if (cards[0] < 0 || cards[1] < 0 || reveal_next) return kChancePlayer;
    return to_act;
  }
  bool facing_raise() const { return stakes[to_act] < stakes[1 - to_act]; }
  int num_actions() const {
    if (cards[0] < 0) return 6;
    if (cards[1] < 0) return 5;
    if (reveal_next) return 4;
    return 1 + (facing_raise() ? 1 : 0) + (raises < 2 ? 1 : 0);
  }
  double chance_prob(int) const {
    if (cards[0] < 0) return 1.0 / 6.0;
    if (cards[1] < 0) return 1.0 / 5.0;
    return 1.0 / 4.0;
  }

  // Maps a dense chance action to the a-th card not yet dealt.
  int remaining_card(int a) const {
    int idx = -1;
    for (int c = 0; c < 6; ++c) {
      if (c == cards[0] || c == cards[1]) continue;
      if (++idx == a) return c;
    }
    return -1;
  }
  char action_char(int a) const {
    if (facing_raise()) return a == 0 ? 'f' : (a == 1 ? 'c' : 'r');
    return a == 0 ? 'c' : 'r';
  }
  bool round_closes(char act) const {
    if (act != 'c') return false;
    if (facing_raise()) return true;                   // call of a raise
    return !round_history[round].empty();              // second check
  }

  double showdown_sign() const {  // +1 p0 wins, -1 p1 wins, 0 split
    const bool pair0 = rank(cards[0]) == rank(public_card);
    const bool pair1 = rank(cards[1]) == rank(public_card);
    if (pair0 != pair1) return pair0 ? 1.0 : -1.0;
    if (rank(cards[0]) != rank(cards[1])) {
      return rank(cards[0]) > rank(cards[1]) ? 1.0 : -1.0;
    }
    return 0.0;
  }

  std::array<double, 2> payoff(int a) const {
    if (player() == kChancePlayer) return {0.0, 0.0};
    const char act = action_char(a);
    if (act == 'f') {
      const double lost = stakes[to_act];
      return to_act == 0 ? std::array<double, 2>{-lost, lost}
                         : std::array<double, 2>{lost, -lost};
    }
    if (act == 'c' && round == 1 && round_closes(act)) {
      const double pot_share = stakes[1 - to_act];  // stakes equal after call
      const double v = showdown_sign() * pot_share;
      return {v, -v};
    }
    return {0.0, 0.0};
  }

  LeducState child(int a) const {
    LeducState next = *this;
    if (cards[0] < 0) {
      next.cards[0] = a;
      return next;
    }
    if (cards[1] < 0) {
      next.cards[1] = a < cards[0] ? a : a + 1;
      return next;
    }
    if (reveal_next) {
      next.public_card = remaining_card(a);
      next.reveal_next = false;
      next.round = 1;
      next.raises = 0;
      next.to_act = 0;
      return next;
    }
    const char act = action_char(a);
    next.round_history[round] += act;
    if (act == 'f') {
      next.finished = true;
      next.folder = to_act;
      return next;
    }
    if (act == 'r') {
      next.stakes[to_act] = stakes[1 - to_act] + (round == 0 ? 2 : 4);
      next.raises = raises + 1;
      next.to_act = 1 - to_act;
      return next;
    }
    next.stakes[to_act] = stakes[1 - to_act];
    if (round_closes(act)) {
      if (round == 0) next.reveal_next = true;
      else next.finished = true;
    } else {
      next.to_act = 1 - to_act;
    }
    return next;
  }

  std::string infoset_key() const {
    return std::to_string(cards[to_act]) + "|" +
           (public_card >= 0 ? std::to_string(public_card) : "-") + "|" +
           round_history[0] + "|" + round_history[1];
  }
};

// ---------------------------------------------------------------------------
// Goofspiel, k point cards revealed in fixed descending order. Simultaneous
// bids are serialized with player 1 unaware of player 0's pending card.
// Players observe only the per-trick result (win/lose/draw); tied point cards
// are discarded. When one card remains per hand the final trick is resolved
// automatically. Terminal payoff is +1/-1/0 by total points.
struct GoofspielState {
  int k = 4;
  unsigned hand[2] = {0, 0};  // bit c set = card value c+1 still held
  int pending = -1;           // player 0's card this trick, -1 if p0 to act
  std::string plays[2];       // own play sequences
  std::string results;        // 'W','L','D' per trick, player-0 view
  int points[2] = {0, 0};
  bool finished = false;

  static GoofspielState initial(int cards) {
    GoofspielState s;
    s.k = cards;
    s.hand[0] = s.hand[1] = (1u << cards) - 1u;
    return s;
  }

  int completed() const { return static_cast<int>(results.size()); }
  int point_card() const { return k - completed(); }

  bool is_terminal() const { return finished; }
  int player() const { return pending < 0 ? 0 : 1; }
  int num_actions() const {
    const unsigned h = hand[player()];
    return __builtin_popcount(h);
  }
  double chance_prob(int) const { return 0.0; }

  int nth_card(int p, int a) const {  // a-th lowest card in hand p
    unsigned h = hand[p];
    for (int i = 0; i < a; ++i) h &= h - 1u;
    return __builtin_ctz(h);  // 0-based card index, value = index + 1
  }

  struct Trick {
    char result;
    int delta0, delta1;
  };
  Trick resolve(int c0, int c1, int card_value) const {
    if (c0 > c1) return {'W', card_value, 0};
    if (c0 < c1) return {'L', 0, card_value};
    return {'D', 0, 0};
  }

  std::array<double, 2> payoff(int a) const {
    if (pending < 0) return {0.0, 0.0};
    // edge taken by player 1 closes the trick; if this was the next-to-last
    // trick, the final forced trick resolves on the same edge
    const int c1 = nth_card(1, a);
    Trick t = resolve(pending, c1, point_card());
    int p0 = points[0] + t.delta0;
    int p1 = points[1] + t.delta1;
    if (completed() + 1 == k - 1) {
      const unsigned l0 = hand[0] & ~(1u << pending);
      const unsigned l1 = hand[1] & ~(1u << c1);
      Trick last = resolve(__builtin_ctz(l0), __builtin_ctz(l1), 1);
      p0 += last.delta0;
      p1 += last.delta1;
    } else {
      return {0.0, 0.0};
    }
    const double v = p0 > p1 ? 1.0 : (p0 < p1 ? -1.0 : 0.0);
    return {v, -v};
  }

  GoofspielState child(int a) const {
    GoofspielState next = *this;
    if (pending < 0) {
      next.pending = nth_card(0, a);
      next.plays[0] += static_cast<char>('1' + next.pending);
      return next;
    }
    const int c1 = nth_card(1, a);
    next.plays[1] += static_cast<char>('1' + c1);
    Trick t = resolve(pending, c1, point_card());
    next.results += t.result;
    next.points[0] += t.delta0;
    next.points[1] += t.delta1;
    next.hand[0] &= ~(1u << pending);
    next.hand[1] &= ~(1u << c1);
    next.pending = -1;
    if (next.completed() == k - 1) next.finished = true;  // last trick forced
    return next;
  }

  std::string infoset_key() const {
    const int p = player();
    return plays[p] + "|" + results;
  }
};

// ---------------------------------------------------------------------------
// Liar's dice: one s-sided die per player, highest face wild. Bids (q, f)
// with q in {1,2} are ordered lexicographically by (q, f); each bid must
// exceed the previous one. "Liar" challenges the standing bid and is the only
// move once the bid space is exhausted. Payoff +-1.
struct LiarsDiceState {
  int sides = 4;
  int rolls[2] = {-1, -1};
  std::string bids;  // sequence of bid indices as chars 'a' + bid
  bool finished = false;

  int max_bid() const { return 2 * sides; }
  int last_bid() const { return bids.empty() ? 0 : bids.back() - 'a' + 1; }
  int bidder_turn() const { return static_cast<int>(bids.size()) % 2; }

  bool is_terminal() const { return finished; }
  int player() const {
    if (rolls[0] < 0 || rolls[1] < 0) return kChancePlayer;
    return bidder_turn();
  }
  int num_actions() const {
    if (rolls[0] < 0 || rolls[1] < 0) return sides;
    return (max_bid() - last_bid()) + (bids.empty() ? 0 : 1);
  }
  double chance_prob(int) const { return 1.0 / sides; }

  bool is_liar_action(int a) const {
    return !bids.empty() && a == max_bid() - last_bid();
  }

  std::array<double, 2> payoff(int a) const {
    if (player() == kChancePlayer || !is_liar_action(a)) return {0.0, 0.0};
    const int bid = last_bid() - 1;  // 0-based
    const int quantity = 1 + bid / sides;
    const int face = bid % sides;    // 0-based
    int matches = 0;
    for (int p = 0; p < 2; ++p) {
      if (rolls[p] == face || rolls[p] == sides - 1) ++matches;
    }
    const int challenger = bidder_turn();
    const double challenger_wins = matches < quantity ? 1.0 : -1.0;
    const double v0 = challenger == 0 ? challenger_wins : -challenger_wins;
    return {v0, -v0};
  }

  LiarsDiceState child(int a) const {
    LiarsDiceState next = *this;
    if (rolls[0] < 0) {
      next.rolls[0] = a;
    } else if (rolls[1] < 0) {
      next.rolls[1] = a;
    } else if (is_liar_action(a)) {
      next.finished = true;
    } else {
      next.bids += static_cast<char>('a' + last_bid() + a);
    }
    return next;
  }

  std::string infoset_key() const {
    return std::to_string(rolls[bidder_turn()]) + "|" + bids;
  }
};

}  // namespace games

inline GameTree build(const GameSpec& spec) {
  switch (spec.name) {
    case GameSpec::Name::kMatchingPennies:
      return build_tree("matching_pennies", games::PenniesState{});
    case GameSpec::Name::kOneCardToy:
      return build_tree("one_card_toy", games::OneCardToyState{});
    case GameSpec::Name::kKuhn:
      return build_tree("kuhn", games::KuhnState{});
    case GameSpec::Name::kLeduc:
      return build_tree("leduc", games::LeducState{});
    case GameSpec::Name::kGoofspiel:
      if (spec.param < 3 || spec.param > 5) {
        throw std::invalid_argument("goofspiel: supported card counts are 3-5");
      }
      return build_tree(game_name(spec), games::GoofspielState::initial(spec.param));
    case GameSpec::Name::kLiarsDice: {
      if (spec.param != 4 && spec.param != 6) {
        throw std::invalid_argument("liars dice: supported side counts are 4 and 6");
      }
      games::LiarsDiceState root;
      root.sides = spec.param;
      return build_tree(game_name(spec), root);
    }
  }
  throw std::invalid_argument("unsupported game spec");
}

inline GameTree build(const std::string& name) { return build(parse_game_name(name)); }

// Human-readable statement of the rule variant each builder implements, for
// audit against the infoset-count fingerprints.
inline std::string canonical_rules(const GameSpec& spec) {
  switch (spec.name) {
    case GameSpec::Name::kMatchingPennies:
      return "matching pennies: player 0 commits a penny, player 1 responds without "
             "observing it; +1 to player 0 on a match, -1 otherwise.";
    case GameSpec::Name::kOneCardToy:
      return "one-card toy: uniform deal of High/Low to player 0 (ante 1, bet 1); "
             "player 0 checks or bets; facing a bet player 1 folds or calls; after a "
             "check player 1 checks or bets, and player 0 then folds or calls. "
             "Showdown pays player 0 with the High card.";
    case GameSpec::Name::kKuhn:
      return "kuhn: 3 cards, 1 bet round, ante 1, bet 1; pass/bet actions; a pass "
             "facing a bet folds; showdown by higher card.";
    case GameSpec::Name::kLeduc:
      return "leduc: 6-card deck (3 ranks, 2 suits), ante 1; two betting rounds with "
             "raise sizes 2 and 4 and at most 2 raises per round; fold legal only when "
             "facing a raise; player 0 opens both rounds; one public card between "
             "rounds; pair with the public card beats rank, equal ranks split.";
    case GameSpec::Name::kGoofspiel:
      return "goofspiel(" + std::to_string(spec.param) + "): " +
             std::to_string(spec.param) +
             " point cards auctioned in descending order; simultaneous bids serialized "
             "with the second mover blind to the first mover's card; players observe "
             "only the trick result (win/lose/draw); tied point cards are discarded; "
             "the final forced trick resolves automatically; payoff +1/-1/0 by total "
             "points.";
    case GameSpec::Name::kLiarsDice:
      return "liars_dice(" + std::to_string(spec.param) + "): 1 die per player, " +
             std::to_string(spec.param) +
             " faces, highest face wild; bids (quantity, face) with quantity up to 2, "
             "strictly increasing in (quantity, face) order; 'Liar' challenges the "
             "standing bid (forced once the bid space is exhausted); the challenged "
             "player wins if the count of matching dice meets the bid.";
  }
  return "";
}

}  // namespace efg
