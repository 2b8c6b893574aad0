#include "advconf/loop.hpp"

#include <cstdio>
#include <set>

#include "advconf/encoding.hpp"
#include "advconf/errors.hpp"
#include "advconf/random.hpp"

namespace advconf {

std::string_view to_string(Labeling l) { return l == Labeling::SourceLabel ? "source" : "oracle"; }

Labeling labeling_from_string(std::string_view s) {
  if (s == "source" || s == "source_label") return Labeling::SourceLabel;
  if (s == "oracle" || s == "oracle_label") return Labeling::OracleLabel;
  throw ParseError("unknown labeling strategy '" + std::string(s) + "'");
}

namespace {

// Stream tags for derive_seed.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kHoldoutStream = 2;
constexpr std::uint64_t kSelectStream = 3;
constexpr std::uint64_t kRandomStream = 4;

constexpr std::size_t kInitRetries = 16;
constexpr std::size_t kHoldoutBatches = 64;

bool has_both_classes(const std::vector<Label>& labels) {
  bool pos = false, neg = false;
  for (Label l : labels) (l == Label::Acceptable ? pos : neg) = true;
  return pos && neg;
}

class LoopState {
 public:
  LoopState(const Scenario& s, std::size_t init_size, const TrainParams& train, const LoopParams& p,
            std::string strategy)
      : scenario_(s), encoder_(s.model), train_params_(train), baseline_queries_(s.oracle->queries()) {
    report_.strategy = std::move(strategy);
    report_.scenario = s.name;
    report_.scenario_seed = s.seed;
    report_.init_train_size = init_size;
    report_.train = train;
    report_.params = p;

    if (init_size < 2) throw ConfigurationError("initial training set needs at least 2 configurations");
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt == kInitRetries) throw DegenerateTrainingSet();
      auto configs = sample_valid(s.model, init_size, derive_seed(p.seed, kInitStream, attempt));
      LabeledDataset candidate;
      for (const auto& c : configs) candidate.add(encoder_.encode(c), s.oracle->label(c));
      if (has_both_classes(candidate.labels)) {
        train_ = std::move(candidate);
        break;
      }
    }

    const std::set<FeatureVector> seen(train_.points.begin(), train_.points.end());
    for (std::size_t batch = 0; holdout_.size() < p.holdout_size; ++batch) {
      if (batch == kHoldoutBatches) throw SamplingError("could not draw a holdout disjoint from training");
      const std::size_t missing = p.holdout_size - holdout_.size();
      for (const auto& c : sample_valid(s.model, missing, derive_seed(p.seed, kHoldoutStream, batch))) {
        FeatureVector x = encoder_.encode(c);
        if (seen.count(x)) continue;
        holdout_.add(std::move(x), s.oracle->label(c));
      }
    }
    model_ = train_svm(train_, train_params_);
  }

  void record(std::size_t round, std::size_t crossed, std::size_t valid_adv) {
    RoundRow row;
    row.round = round;
    row.train_size = train_.size();
    row.crossed = crossed;
    row.valid_adv = valid_adv;
    row.oracle_queries = scenario_.oracle->queries() - baseline_queries_;
    if (holdout_.size() > 0) {
      const Metrics m = evaluate(model_, holdout_);
      row.disagreement = m.error_rate;
      row.mean_abs_g = m.mean_abs_decision;
    }
    report_.rows.push_back(row);
  }

  // Returns false (and marks the report) when retraining fails.
  bool retrain() {
    try {
      model_ = train_svm(train_, train_params_);
      return true;
    } catch (const DegenerateTrainingSet& e) {
      report_.ok = false;
      report_.error = e.what();
      return false;
    }
  }

  const Scenario& scenario_;
  Encoder encoder_;
  TrainParams train_params_;
  std::uint64_t baseline_queries_;
  LabeledDataset train_;
  LabeledDataset holdout_;
  SvmModel model_;
  LoopReport report_;
};

std::vector<std::size_t> choose_sources(const std::vector<std::size_t>& pool, std::size_t k, Rng& rng) {
  std::vector<std::size_t> out;
  if (pool.empty()) return out;
  if (pool.size() >= k) {
    std::vector<std::size_t> work = pool;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + rng.index(work.size() - i);
      std::swap(work[i], work[j]);
      out.push_back(work[i]);
    }
  } else {
    for (std::size_t i = 0; i < k; ++i) out.push_back(pool[rng.index(pool.size())]);
  }
  return out;
}

}  // namespace

LoopReport run_adversarial_loop(const Scenario& scenario, std::size_t init_train_size, const TrainParams& train,
                                const LoopParams& p) {
  LoopState st(scenario, init_train_size, train, p, "adversarial");
  st.record(0, 0, 0);

  AttackParams attack = p.attack;
  attack.target = Label::Acceptable;
  for (std::size_t round = 1; round <= p.rounds; ++round) {
    std::vector<std::size_t> negatives;
    for (std::size_t i = 0; i < st.train_.size(); ++i)
      if (st.train_.labels[i] == Label::NonAcceptable) negatives.push_back(i);
    Rng rng(derive_seed(p.seed, kSelectStream, round));
    std::vector<FeatureVector> sources;
    for (std::size_t i : choose_sources(negatives, p.attacks_per_round, rng)) sources.push_back(st.train_.points[i]);

    const auto traces = batch_evade(st.model_, sources, attack, p.threads);
    std::size_t crossed = 0, valid = 0;
    for (const auto& t : traces) {
      if (t.initial_decision() < 0.0 && t.final_decision() >= 0.0) ++crossed;
      Configuration c = st.encoder_.project(t.final_point());
      const bool is_valid = validate(scenario.model, c).valid;
      if (is_valid) ++valid;
      if (p.discard_invalid && !is_valid) continue;
      const Label y = p.labeling == Labeling::SourceLabel ? Label::NonAcceptable : scenario.oracle->label(c);
      st.train_.add(st.encoder_.encode(c), y);
    }
    if (!st.retrain()) break;
    st.record(round, crossed, valid);
  }
  return std::move(st.report_);
}

LoopReport run_random_loop(const Scenario& scenario, std::size_t init_train_size, const TrainParams& train,
                           const LoopParams& p) {
  LoopState st(scenario, init_train_size, train, p, "random");
  st.record(0, 0, 0);

  for (std::size_t round = 1; round <= p.rounds; ++round) {
    const auto configs = sample_valid(scenario.model, p.attacks_per_round, derive_seed(p.seed, kRandomStream, round));
    std::size_t divergent = 0;
    for (const auto& c : configs) {
      const Label truth = scenario.oracle->label(c);
      FeatureVector x = st.encoder_.encode(c);
      if (st.model_.predict(x) != truth) {
        st.train_.add(std::move(x), truth);
        ++divergent;
      }
    }
    if (divergent > 0 && !st.retrain()) break;
    st.record(round, divergent, configs.size());
  }
  return std::move(st.report_);
}

namespace {

std::string real17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string report_csv(const LoopReport& r) {
  std::string out(kLoopCsvHeader);
  out += '\n';
  for (const auto& row : r.rows) {
    out += std::to_string(row.round) + ',' + std::to_string(row.train_size) + ',' + real17(row.disagreement) + ',' +
           real17(row.mean_abs_g) + ',' + std::to_string(row.crossed) + ',' + std::to_string(row.valid_adv) + ',' +
           std::to_string(row.oracle_queries) + '\n';
  }
  return out;
}

nlohmann::ordered_json report_json(const LoopReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["strategy"] = r.strategy;
  j["scenario"] = r.scenario;
  j["scenario_seed"] = r.scenario_seed;
  j["init_train_size"] = r.init_train_size;
  ordered_json train;
  train["C"] = r.train.C;
  train["kernel"] = std::string(to_string(r.train.kernel));
  train["gamma"] = r.train.gamma ? ordered_json(*r.train.gamma) : ordered_json("1/d");
  train["tol"] = r.train.tol;
  train["max_passes"] = r.train.max_passes;
  train["seed"] = r.train.seed;
  j["train"] = train;
  ordered_json loop;
  loop["rounds"] = r.params.rounds;
  loop["attacks_per_round"] = r.params.attacks_per_round;
  loop["step"] = r.params.attack.step;
  loop["iterations"] = r.params.attack.iterations;
  loop["early_stop"] = r.params.attack.early_stop;
  loop["labeling"] = std::string(to_string(r.params.labeling));
  loop["seed"] = r.params.seed;
  loop["holdout_size"] = r.params.holdout_size;
  loop["discard_invalid"] = r.params.discard_invalid;
  j["loop"] = loop;
  j["status"] = r.ok ? "ok" : "error";
  if (!r.ok) j["error"] = r.error;
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    ordered_json jr;
    jr["round"] = row.round;
    jr["train_size"] = row.train_size;
    jr["disagreement"] = row.disagreement;
    jr["mean_abs_g"] = row.mean_abs_g;
    jr["crossed"] = row.crossed;
    jr["valid_adv"] = row.valid_adv;
    jr["oracle_queries"] = row.oracle_queries;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace advconf
