#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "efg/games.hpp"
#include "efg/learners.hpp"
#include "efg/metrics.hpp"
#include "test_support.hpp"

using namespace efg;

namespace {

LearnerConfig full_walk_config(Algorithm algo, double mu, long iterations,
                               unsigned long long seed = 1) {
  LearnerConfig c;
  c.algorithm = algo;
  c.eta = 0.05;
  c.mu = mu;
  c.scheme.kind = SamplingScheme::Kind::kFullWalk;
  c.iterations = iterations;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("ftrl strategy closed forms") {
  const std::vector<double> zeros{0.0, 0.0};
  const auto uniform = ftrl_strategy(zeros, 3.7);
  CHECK(uniform[0] == 0.5);
  CHECK(uniform[1] == 0.5);

  const std::vector<double> one_zero{1.0, 0.0};
  const auto softmax = ftrl_strategy(one_zero, 1.0);
  const double e = std::exp(1.0);
  CHECK(softmax[0] == Catch::Approx(e / (1.0 + e)).epsilon(1e-12));
  CHECK(softmax[1] == Catch::Approx(1.0 / (1.0 + e)).epsilon(1e-12));
  CHECK(softmax[0] == Catch::Approx(0.73106).margin(1e-5));
  CHECK(softmax[1] == Catch::Approx(0.26894).margin(1e-5));
}

TEST_CASE("ftrl strategy is shift invariant") {
  Rng rng(401);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> s(3);
    for (double& v : s) v = 10.0 * (rng.uniform() - 0.5);
    const double eta = 0.01 + rng.uniform();
    const auto base = ftrl_strategy(s, eta);
    std::vector<double> shifted = s;
    const double c = 100.0 * (rng.uniform() - 0.5);
    for (double& v : shifted) v += c;
    const auto moved = ftrl_strategy(shifted, eta);
    for (size_t a = 0; a < base.size(); ++a) {
      CHECK(moved[a] == Catch::Approx(base[a]).margin(1e-12));
    }
  }
}

TEST_CASE("ftrl strategy maximizes the regularized objective") {
  Rng rng(403);
  auto objective = [](std::span<const double> pi, std::span<const double> s, double eta) {
    double v = 0.0;
    for (size_t a = 0; a < pi.size(); ++a) {
      v += eta * s[a] * pi[a];
      if (pi[a] > 0.0) v -= pi[a] * std::log(pi[a]);
    }
    return v;
  };
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> s(4);
    for (double& v : s) v = 6.0 * (rng.uniform() - 0.5);
    const double eta = 0.1 + 2.0 * rng.uniform();
    const auto best = ftrl_strategy(s, eta);
    for (double v : best) CHECK(v > 0.0);
    const double best_val = objective(best, s, eta);
    for (int candidate = 0; candidate < 500; ++candidate) {
      std::vector<double> pi(4);
      double z = 0.0;
      for (double& v : pi) {
        v = -std::log(1.0 - rng.uniform());
        z += v;
      }
      for (double& v : pi) v /= z;
      CHECK(objective(pi, s, eta) <= best_val + 1e-12);
    }
  }
}

TEST_CASE("regret matching normalizes positive parts") {
  const std::vector<double> neg{-1.0, 0.0};
  const auto uniform = regret_matching(neg);
  CHECK(uniform[0] == 0.5);
  CHECK(uniform[1] == 0.5);
  const std::vector<double> r{3.0, 1.0};
  const auto matched = regret_matching(r);
  CHECK(matched[0] == 0.75);
  CHECK(matched[1] == 0.25);
}

TEST_CASE("perturbation off reproduces ftrl state bitwise under full walk") {
  const GameTree tree = build("kuhn");
  const LearnerConfig ftrl = full_walk_config(Algorithm::kFTRL, 0.0, 0);
  LearnerConfig pftrl = full_walk_config(Algorithm::kPFTRL_RKL, 0.0, 0);

  LearnerState a(tree, ftrl);
  LearnerState b(tree, pftrl);
  for (int t = 0; t < 25; ++t) {
    pftrl_step(a, tree, ftrl);
    pftrl_step(b, tree, pftrl);
  }
  CHECK(a.current == b.current);
  CHECK(a.cumulative_values == b.cumulative_values);
}

TEST_CASE("with sigma equal to the strategy the first update matches ftrl") {
  const GameTree tree = build("kuhn");
  const LearnerConfig ftrl = full_walk_config(Algorithm::kFTRL, 0.0, 0);
  const LearnerConfig pftrl = full_walk_config(Algorithm::kPFTRL_RKL, 0.3, 0);

  LearnerState a(tree, ftrl);
  LearnerState b(tree, pftrl);  // anchor starts uniform = initial strategy
  pftrl_step(a, tree, ftrl);
  pftrl_step(b, tree, pftrl);
  for (int p = 0; p < 2; ++p) {
    for (int x = 0; x < tree.num_infosets(p); ++x) {
      for (size_t i = 0; i < a.current.at(p, x).size(); ++i) {
        CHECK(a.current.at(p, x)[i] == b.current.at(p, x)[i]);
      }
    }
  }
}

TEST_CASE("one outcome-sampling iteration on matching pennies, hand traced") {
  const GameTree tree = build("matching_pennies");
  LearnerConfig config;
  config.algorithm = Algorithm::kFTRL;
  config.eta = 0.5;
  config.mu = 0.0;
  config.scheme.kind = SamplingScheme::Kind::kOutcome;
  config.scheme.epsilon = 1.0;
  config.seed = 424242;

  LearnerState state(tree, config);
  pftrl_step(state, tree, config);

  // replicate the draw sequence: player 0's walk samples its own node then
  // the opponent's node; player 1's walk does the same. One uniform draw per
  // sampled node, cumulative inversion over (0.5, 0.5).
  Rng replay(config.seed);
  const int p0_own = replay.uniform() < 0.5 ? 0 : 1;
  const int p0_opp = replay.uniform() < 0.5 ? 0 : 1;
  const int p1_opp = replay.uniform() < 0.5 ? 0 : 1;
  const int p1_own = replay.uniform() < 0.5 ? 0 : 1;

  // player 0's estimate: sampled action's continuation is the terminal payoff
  // importance-corrected by the uniform sampler, the other action zero
  const double payoff_p0 = p0_opp == p0_own ? 1.0 : -1.0;
  std::vector<double> cum_p0{0.0, 0.0};
  cum_p0[static_cast<size_t>(p0_own)] = payoff_p0 / 0.5;
  const double m0 = std::max(config.eta * cum_p0[0], config.eta * cum_p0[1]);
  const double e00 = std::exp(config.eta * cum_p0[0] - m0);
  const double e01 = std::exp(config.eta * cum_p0[1] - m0);
  CHECK(state.current.at(0, 0)[0] == e00 / (e00 + e01));
  CHECK(state.current.at(0, 0)[1] == e01 / (e00 + e01));

  const double payoff_p1 = p1_own == p1_opp ? -1.0 : 1.0;
  std::vector<double> cum_p1{0.0, 0.0};
  cum_p1[static_cast<size_t>(p1_own)] = payoff_p1 / 0.5;
  const double m1 = std::max(config.eta * cum_p1[0], config.eta * cum_p1[1]);
  const double e10 = std::exp(config.eta * cum_p1[0] - m1);
  const double e11 = std::exp(config.eta * cum_p1[1] - m1);
  CHECK(state.current.at(1, 0)[0] == e10 / (e10 + e11));
  CHECK(state.current.at(1, 0)[1] == e11 / (e10 + e11));
}

TEST_CASE("full-walk cfr approaches the matching pennies equilibrium") {
  const GameTree tree = build("matching_pennies");
  LearnerConfig config = full_walk_config(Algorithm::kCFR, 0.0, 10000);
  LearnerState state(tree, config);
  for (long t = 0; t < config.iterations; ++t) cfr_step(state, tree, config);
  const BehaviorProfile avg = average_strategy(state, tree, config);
  CHECK(avg.at(0, 0)[0] == Catch::Approx(0.5).margin(0.02));
  CHECK(avg.at(1, 0)[0] == Catch::Approx(0.5).margin(0.02));
  CHECK(exploitability(tree, avg) < 0.02);
}

TEST_CASE("cfr plus keeps regrets clamped at zero") {
  const GameTree tree = build("kuhn");
  LearnerConfig config = full_walk_config(Algorithm::kCFRPlus, 0.0, 0);
  LearnerState state(tree, config);
  for (int t = 0; t < 50; ++t) {
    cfr_step(state, tree, config);
    for (int p = 0; p < 2; ++p) {
      for (const auto& row : state.regrets[static_cast<size_t>(p)]) {
        for (double r : row) CHECK(r >= 0.0);
      }
    }
  }
}

TEST_CASE("outcome-sampling cfr leaves unvisited infosets untouched") {
  const GameTree tree = build("kuhn");
  LearnerConfig config;
  config.algorithm = Algorithm::kCFR;
  config.scheme.kind = SamplingScheme::Kind::kOutcome;
  config.seed = 7;
  LearnerState state(tree, config);
  cfr_step(state, tree, config);
  int touched = 0, untouched_uniform = 0;
  for (int p = 0; p < 2; ++p) {
    for (int x = 0; x < tree.num_infosets(p); ++x) {
      bool zero = true;
      for (double r : state.regrets[static_cast<size_t>(p)][static_cast<size_t>(x)]) {
        zero &= r == 0.0;
      }
      if (!zero) ++touched;
      if (zero && state.current.at(p, x)[0] == 0.5) ++untouched_uniform;
    }
  }
  CHECK(touched >= 1);
  CHECK(touched <= 4);  // at most two own infosets per trajectory and player
  CHECK(touched + untouched_uniform >= 12 - 4);
}

TEST_CASE("a zero-iteration run logs only the initial evaluation") {
  const GameTree tree = build("kuhn");
  LearnerConfig config = full_walk_config(Algorithm::kFTRL, 0.0, 0);
  const auto log = run(tree, config);
  REQUIRE(log.size() == 1);
  CHECK(log[0].iteration == 0);
  CHECK(log[0].exploit_last > 0.0);
}

TEST_CASE("runs are deterministic in the seed") {
  const GameTree tree = build("kuhn");
  LearnerConfig config;
  config.algorithm = Algorithm::kPFTRL_RKL;
  config.eta = 0.05;
  config.mu = 0.1;
  config.scheme.kind = SamplingScheme::Kind::kOutcome;
  config.iterations = 400;
  config.eval_interval = 100;
  config.seed = 99;
  const auto a = run(tree, config);
  const auto b = run(tree, config);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].iteration == b[i].iteration);
    CHECK(a[i].exploit_last == b[i].exploit_last);
    CHECK(a[i].exploit_avg == b[i].exploit_avg);
  }

  config.seed = 100;
  const auto c = run(tree, config);
  bool any_diff = false;
  for (size_t i = 0; i < a.size(); ++i) any_diff |= a[i].exploit_last != c[i].exploit_last;
  CHECK(any_diff);
}

TEST_CASE("invalid configurations are rejected before iteration one") {
  const GameTree tree = build("matching_pennies");
  LearnerConfig config = full_walk_config(Algorithm::kFTRL, 0.1, 10);
  CHECK_THROWS_AS(run(tree, config), std::invalid_argument);
  config = full_walk_config(Algorithm::kPFTRL_RKL, 0.0, 10);
  CHECK_THROWS_AS(run(tree, config), std::invalid_argument);
  config = full_walk_config(Algorithm::kPFTRL_RKL, 0.1, 10);
  config.eta = 0.0;
  CHECK_THROWS_AS(run(tree, config), std::invalid_argument);
  config = full_walk_config(Algorithm::kPFTRL_RKL, 0.1, 10);
  config.scheme.epsilon = 1.5;
  CHECK_THROWS_AS(run(tree, config), std::invalid_argument);
  config = full_walk_config(Algorithm::kPFTRL_RKL, 0.1, 10);
  config.anchor_interval = 0;
  CHECK_THROWS_AS(run(tree, config), std::invalid_argument);
}

TEST_CASE("anchoring updates engage during a sampled run") {
  const GameTree tree = build("matching_pennies");
  LearnerConfig config;
  config.algorithm = Algorithm::kPFTRL_RKL;
  config.eta = 0.1;
  config.mu = 0.1;
  config.anchor_interval = 10;
  config.scheme.kind = SamplingScheme::Kind::kOutcome;
  config.iterations = 0;
  config.seed = 5;
  LearnerState state(tree, config);
  for (int t = 0; t < 100; ++t) pftrl_step(state, tree, config);
  // after 100 visits with interval 10 the anchor must have moved off uniform
  bool moved = false;
  for (int p = 0; p < 2; ++p) {
    moved |= state.anchor.sigma.at(p, 0)[0] != 0.5;
  }
  CHECK(moved);
}
