#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "advconf/attack.hpp"
#include "advconf/classifier.hpp"
#include "advconf/oracle.hpp"

namespace advconf {

enum class Labeling {
  SourceLabel,  // adversarial points inherit the source's -1 label
  OracleLabel,  // adversarial points are labeled by querying the oracle
};

std::string_view to_string(Labeling l);
Labeling labeling_from_string(std::string_view s);

struct LoopParams {
  std::size_t rounds = 100;
  std::size_t attacks_per_round = 10;
  AttackParams attack;  // target is forced to +1 by the adversarial loop
  Labeling labeling = Labeling::SourceLabel;
  std::uint64_t seed = 0;
  std::size_t holdout_size = 500;
  bool discard_invalid = false;
  std::size_t threads = 1;
};

struct RoundRow {
  std::size_t round = 0;
  std::size_t train_size = 0;
  double disagreement = 0.0;  // holdout error rate against oracle labels
  double mean_abs_g = 0.0;    // over the holdout
  std::size_t crossed = 0;
  std::size_t valid_adv = 0;
  std::uint64_t oracle_queries = 0;
};

struct LoopReport {
  std::string strategy;  // "adversarial" or "random"
  std::string scenario;
  std::uint64_t scenario_seed = 0;
  std::size_t init_train_size = 0;
  TrainParams train;
  LoopParams params;
  std::vector<RoundRow> rows;
  bool ok = true;
  std::string error;  // set when a round aborted the run
};

// Adversarial acquisition: per round, attack non-acceptable training points
// toward +1, add the materialized endpoints, retrain.
LoopReport run_adversarial_loop(const Scenario& scenario, std::size_t init_train_size,
                                const TrainParams& train, const LoopParams& p);

// Random acquisition: per round, sample configurations, query the oracle and
// keep only those the classifier gets wrong.
LoopReport run_random_loop(const Scenario& scenario, std::size_t init_train_size, const TrainParams& train,
                           const LoopParams& p);

inline constexpr std::string_view kLoopCsvHeader =
    "round,train_size,disagreement,mean_abs_g,crossed,valid_adv,oracle_queries";

std::string report_csv(const LoopReport& r);
// Run metadata (strategy, seeds, every parameter except thread count) plus rows.
nlohmann::ordered_json report_json(const LoopReport& r);

}  // namespace advconf
