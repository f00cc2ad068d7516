#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <future>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "efg/games.hpp"
#include "efg/learners.hpp"
#include "efg/metrics.hpp"

namespace efg {

using ResultsFile = std::vector<ExploitRecord>;

inline constexpr const char* kResultsHeader =
    "game,algo,sampling,seed,iteration,exploit_last,exploit_avg";

struct ExperimentConfig {
  std::string game = "kuhn";
  Algorithm algorithm = Algorithm::kPFTRL_RKL;
  SamplingScheme scheme;
  double eta = 1e-4;
  double mu = 0.1;
  long t_sigma = 100000;
  long iterations = 0;
  long eval_interval = 0;
  std::vector<unsigned long long> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::string out_csv;   // optional; streamed row by row when set
  std::string out_svg;   // optional

  LearnerConfig learner_config(unsigned long long seed) const {
    LearnerConfig c;
    c.algorithm = algorithm;
    c.eta = eta;
    c.mu = algorithm == Algorithm::kFTRL || is_cfr_family(algorithm) ? 0.0 : mu;
    c.anchor_interval = t_sigma;
    c.scheme = scheme;
    c.iterations = iterations;
    c.seed = seed;
    c.eval_interval = eval_interval;
    return c;
  }
};

inline void write_record(std::ostream& os, const ExploitRecord& r) {
  char buf[196];
  std::snprintf(buf, sizeof(buf), "%s,%s,%s,%llu,%ld,%.17g,%.17g\n", r.game.c_str(),
                r.algo.c_str(), r.sampling.c_str(), r.seed, r.iteration, r.exploit_last,
                r.exploit_avg);
  os << buf;
}

inline void write_results_csv(const ResultsFile& rows, std::ostream& os) {
  os << kResultsHeader << '\n';
  for (const ExploitRecord& r : rows) write_record(os, r);
}

inline ResultsFile read_results_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kResultsHeader) {
    throw std::runtime_error("results csv: bad header");
  }
  ResultsFile rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    ExploitRecord r;
    size_t pos = 0;
    auto next_field = [&]() {
      const size_t comma = line.find(',', pos);
      const std::string field = line.substr(pos, comma - pos);
      pos = comma == std::string::npos ? line.size() : comma + 1;
      return field;
    };
    r.game = next_field();
    r.algo = next_field();
    r.sampling = next_field();
    r.seed = std::stoull(next_field());
    r.iteration = std::stol(next_field());
    r.exploit_last = std::stod(next_field());
    r.exploit_avg = std::stod(next_field());
    rows.push_back(std::move(r));
  }
  return rows;
}

inline ResultsFile read_results_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open results file: " + path);
  return read_results_csv(is);
}

// Runs the configured learner once per seed (seeds execute concurrently,
// bounded by the hardware) and returns the evaluation rows sorted by
// (seed, iteration). When out_csv is set, rows stream to the file as each
// seed finishes, flushed per row, so an interrupted run leaves a valid
// truncated CSV.
inline ResultsFile run_experiment(const ExperimentConfig& config) {
  const GameTree tree = build(config.game);
  std::vector<unsigned long long> seeds = config.seeds;
  if (seeds.empty()) throw std::invalid_argument("run_experiment: no seeds");
  std::sort(seeds.begin(), seeds.end());
  validate_config(config.learner_config(seeds.front()));

  const std::string algo = algorithm_name(config.algorithm);
  const std::string sampling = scheme_name(config.scheme);

  auto run_seed = [&](unsigned long long seed) {
    ResultsFile rows;
    for (const RunRecord& rec : run(tree, config.learner_config(seed))) {
      ExploitRecord r;
      r.game = tree.name;
      r.algo = algo;
      r.sampling = sampling;
      r.seed = seed;
      r.iteration = rec.iteration;
      r.exploit_last = rec.exploit_last;
      r.exploit_avg = rec.exploit_avg;
      rows.push_back(std::move(r));
    }
    return rows;
  };

  std::ofstream csv;
  if (!config.out_csv.empty()) {
    csv.open(config.out_csv);
    if (!csv) throw std::runtime_error("cannot open output file: " + config.out_csv);
    csv << kResultsHeader << '\n';
    csv.flush();
  }

  const size_t workers =
      std::max<size_t>(1, std::min<size_t>(seeds.size(), std::thread::hardware_concurrency()));
  ResultsFile all;
  std::vector<std::future<ResultsFile>> pending(seeds.size());
  size_t launched = 0, emitted = 0;
  while (emitted < seeds.size()) {
    while (launched < seeds.size() && launched - emitted < workers) {
      pending[launched] = std::async(std::launch::async, run_seed, seeds[launched]);
      ++launched;
    }
    ResultsFile rows = pending[emitted].get();
    for (const ExploitRecord& r : rows) {
      if (csv.is_open()) {
        write_record(csv, r);
        csv.flush();
      }
      all.push_back(r);
    }
    ++emitted;
  }
  return all;
}

// The tuned-strength pairing: a full-walk PFTRL-RKL reference at mu_rkl and
// the outcome-sampling PFTRL-RKL / PFTRL-KL pair calibrated to matching
// full-walk plateaus. Anchoring is off for all three runs.
struct TunedStrengthResult {
  ResultsFile full_rkl;
  ResultsFile outcome_rkl;
  ResultsFile outcome_kl;
};

inline TunedStrengthResult tuned_strength_comparison(
    const std::string& game, double mu_rkl, double mu_kl, long iterations,
    const std::vector<unsigned long long>& seeds, double eta = 1e-4,
    const std::string& out_csv_prefix = "") {
  auto make = [&](Algorithm algo, SamplingScheme::Kind kind, double mu,
                  const std::string& suffix) {
    ExperimentConfig c;
    c.game = game;
    c.algorithm = algo;
    c.scheme.kind = kind;
    c.scheme.epsilon = 1.0;
    c.eta = eta;
    c.mu = mu;
    c.t_sigma = kNoAnchorUpdates;
    c.iterations = iterations;
    c.seeds = kind == SamplingScheme::Kind::kFullWalk
                  ? std::vector<unsigned long long>{seeds.empty() ? 1 : seeds.front()}
                  : seeds;
    if (!out_csv_prefix.empty()) c.out_csv = out_csv_prefix + suffix + ".csv";
    return c;
  };
  TunedStrengthResult result;
  result.full_rkl = run_experiment(
      make(Algorithm::kPFTRL_RKL, SamplingScheme::Kind::kFullWalk, mu_rkl, "_full_rkl"));
  result.outcome_rkl = run_experiment(
      make(Algorithm::kPFTRL_RKL, SamplingScheme::Kind::kOutcome, mu_rkl, "_os_rkl"));
  result.outcome_kl = run_experiment(
      make(Algorithm::kPFTRL_KL, SamplingScheme::Kind::kOutcome, mu_kl, "_os_kl"));
  return result;
}

}  // namespace efg
