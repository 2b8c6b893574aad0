#include "advconf/cli.hpp"

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "advconf/attack.hpp"
#include "advconf/boundary.hpp"
#include "advconf/classifier.hpp"
#include "advconf/csv.hpp"
#include "advconf/encoding.hpp"
#include "advconf/errors.hpp"
#include "advconf/log.hpp"
#include "advconf/loop.hpp"
#include "advconf/oracle.hpp"
#include "advconf/random.hpp"
#include "advconf/rules.hpp"
#include "advconf/varmodel.hpp"

namespace advconf {

namespace log {

Level level() {
  static const Level lvl = [] {
    const char* env = std::getenv("ADVCONF_LOG");
    const std::string_view v = env ? env : "info";
    if (v == "quiet") return Level::Quiet;
    if (v == "debug") return Level::Debug;
    return Level::Info;
  }();
  return lvl;
}

void info(std::string_view msg) {
  if (level() >= Level::Info) std::cerr << "[advconf] " << msg << '\n';
}

void debug(std::string_view msg) {
  if (level() >= Level::Debug) std::cerr << "[advconf:debug] " << msg << '\n';
}

}  // namespace log

namespace {

using nlohmann::ordered_json;

// Everything any subcommand can take; each subcommand registers the subset
// it understands.
struct Options {
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> scenario_seed;
  std::string out;
  std::string model;
  std::string scenario;
  std::string dataset;
  std::string classifier;
  std::string constraints;
  std::string json_out;
  std::string endpoints;
  std::size_t threads = 1;
  bool timing = false;

  std::size_t n = 100;

  double C = 1.0;
  std::string kernel = "rbf";
  std::optional<double> gamma;
  double tol = 1e-3;
  std::size_t max_passes = 10;

  double step = 0.002;
  std::size_t iterations = 100;
  int target = 1;
  bool early_stop = false;
  std::vector<std::size_t> freeze;

  std::size_t rounds = 100;
  std::size_t attacks_per_round = 10;
  std::string labeling = "source";
  bool discard_invalid = false;
  std::size_t init_size = 200;
  std::size_t holdout = 500;

  std::size_t n_samples = 2000;
  std::size_t max_depth = 4;
  std::size_t grid = 50;
};

class Runner {
 public:
  Runner(Options& o, std::ostream& out) : o_(o), out_(out) {}

  void emit(const std::string& path, std::string_view content) {
    if (path.empty() || path == "-") {
      out_ << content;
    } else {
      write_file(path, content);
      outputs_.push_back(path);
      log::info("wrote " + path);
    }
  }

  std::string input(const std::string& path) {
    inputs_.push_back(path);
    return read_file(path);
  }

  std::uint64_t scenario_seed() const { return o_.scenario_seed.value_or(o_.seed); }

  Scenario scenario() const {
    if (o_.scenario.empty()) throw CLI::ValidationError("--scenario", "a scenario is required");
    return make_scenario(o_.scenario, scenario_seed());
  }

  VariabilityModel model() {
    if (!o_.model.empty()) return parse_model(input(o_.model));
    if (!o_.scenario.empty()) return scenario().model;
    throw CLI::ValidationError("--model", "either --model or --scenario is required");
  }

  SvmModel classifier() {
    if (o_.classifier.empty()) throw CLI::ValidationError("--classifier", "a classifier file is required");
    return parse_svm(input(o_.classifier));
  }

  ConfigurationTable dataset(const VariabilityModel& m) {
    if (o_.dataset.empty()) throw CLI::ValidationError("--dataset", "a dataset file is required");
    return read_configurations(m, input(o_.dataset));
  }

  TrainParams train_params() const {
    TrainParams p;
    p.C = o_.C;
    p.kernel = kernel_from_string(o_.kernel);
    p.gamma = o_.gamma;
    p.tol = o_.tol;
    p.max_passes = o_.max_passes;
    p.seed = o_.seed;
    return p;
  }

  AttackParams attack_params() const {
    AttackParams p;
    p.target = label_from_int(o_.target);
    p.step = o_.step;
    p.iterations = o_.iterations;
    p.early_stop = o_.early_stop;
    p.frozen_features.insert(o_.freeze.begin(), o_.freeze.end());
    return p;
  }

  // Run metadata embedded in JSON outputs. Thread count and timing are
  // left out unless asked for so reruns stay byte-identical.
  ordered_json manifest(const CLI::App& sub, std::chrono::steady_clock::time_point start) const {
    ordered_json m;
    m["command"] = sub.get_name();
    m["version"] = kVersion;
    ordered_json params = ordered_json::object();
    for (const CLI::Option* opt : sub.get_options()) {
      const std::string name = opt->get_name(false, true);
      if (name.empty() || name == "--help" || name == "--threads" || name == "--timing") continue;
      const std::string key = name.substr(name.find_first_not_of('-'));
      if (opt->count() > 0) {
        const auto& res = opt->results();
        if (opt->get_expected_max() > 1 || res.size() > 1) params[key] = res;
        else params[key] = res.empty() ? std::string("true") : res.front();
      } else {
        params[key] = opt->get_default_str();
      }
    }
    m["params"] = params;
    m["seeds"] = {{"seed", o_.seed}, {"scenario_seed", scenario_seed()}};
    m["inputs"] = inputs_;
    m["outputs"] = outputs_;
    if (o_.timing) {
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
      m["duration_ms"] = ms.count();
    }
    return m;
  }

  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;

 private:
  Options& o_;
  std::ostream& out_;
};

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string metrics_summary(const LoopReport& r) {
  if (r.rows.empty()) return r.strategy + " loop produced no rows";
  return r.strategy + " loop: " + std::to_string(r.rows.size()) + " rows, disagreement " +
         std::to_string(r.rows.front().disagreement) + " -> " + std::to_string(r.rows.back().disagreement) +
         ", oracle queries " + std::to_string(r.rows.back().oracle_queries);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Options o;
  CLI::App app{"Adversarial configuration generation for variability-model classifiers", "advconf"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto shared = [&](CLI::App* s) {
    s->add_option("--seed", o.seed, "Seed for all randomness");
    s->add_option("--out", o.out, "Output path (stdout when omitted)");
    s->add_option("--threads", o.threads, "Worker threads (affects time only)")->check(CLI::PositiveNumber);
    s->add_flag("--timing", o.timing, "Record wall-clock duration in JSON manifests");
  };
  auto model_source = [&](CLI::App* s) {
    s->add_option("--model", o.model, "Variability model JSON");
    s->add_option("--scenario", o.scenario, "Built-in scenario (band2d|motivlike80)");
    s->add_option("--scenario-seed", o.scenario_seed, "Scenario seed (defaults to --seed)");
  };
  auto train_flags = [&](CLI::App* s) {
    s->add_option("--C", o.C, "Soft-margin penalty")->check(CLI::PositiveNumber);
    s->add_option("--kernel", o.kernel, "Kernel")->check(CLI::IsMember({"linear", "rbf"}));
    s->add_option("--gamma", o.gamma, "RBF width (default 1/d)")->check(CLI::PositiveNumber);
    s->add_option("--tol", o.tol, "KKT tolerance")->check(CLI::PositiveNumber);
    s->add_option("--max-passes", o.max_passes, "SMO passes without change before stopping");
  };
  auto attack_flags = [&](CLI::App* s) {
    s->add_option("--step", o.step, "Displacement per iteration")->check(CLI::PositiveNumber);
    s->add_option("--iterations", o.iterations, "Attack iterations");
  };
  auto loop_flags = [&](CLI::App* s) {
    shared(s);
    s->add_option("--scenario", o.scenario, "Built-in scenario (band2d|motivlike80)")->required();
    s->add_option("--scenario-seed", o.scenario_seed, "Scenario seed (defaults to --seed)");
    train_flags(s);
    attack_flags(s);
    s->add_option("--rounds", o.rounds, "Acquisition rounds");
    s->add_option("--attacks-per-round", o.attacks_per_round, "Points acquired per round");
    s->add_option("--init-size", o.init_size, "Initial training set size")->check(CLI::Range(2, 1 << 24));
    s->add_option("--holdout", o.holdout, "Holdout size");
    s->add_option("--json", o.json_out, "Also write the JSON report here");
  };

  auto* gen = app.add_subcommand("gen-model", "Write a scenario's variability model as JSON");
  shared(gen);
  gen->add_option("--scenario", o.scenario, "Scenario (band2d|motivlike80)")->required();

  auto* sample = app.add_subcommand("sample", "Sample valid configurations");
  shared(sample);
  model_source(sample);
  sample->add_option("--n", o.n, "Number of configurations");

  auto* label = app.add_subcommand("label", "Append oracle labels to a configuration CSV");
  shared(label);
  label->add_option("--scenario", o.scenario, "Scenario providing the oracle")->required();
  label->add_option("--scenario-seed", o.scenario_seed, "Scenario seed (defaults to --seed)");
  label->add_option("--dataset", o.dataset, "Configuration CSV")->required();

  auto* train = app.add_subcommand("train", "Train an SVM on a labeled configuration CSV");
  shared(train);
  model_source(train);
  train->add_option("--dataset", o.dataset, "Labeled configuration CSV")->required();
  train_flags(train);

  auto* eval = app.add_subcommand("evaluate", "Error rate of a classifier on a labeled CSV");
  shared(eval);
  model_source(eval);
  eval->add_option("--dataset", o.dataset, "Labeled configuration CSV")->required();
  eval->add_option("--classifier", o.classifier, "Classifier JSON")->required();

  auto* attack = app.add_subcommand("attack", "Run evasion attacks from each configuration of a CSV");
  shared(attack);
  model_source(attack);
  attack->add_option("--dataset", o.dataset, "Source configuration CSV")->required();
  attack->add_option("--classifier", o.classifier, "Classifier JSON")->required();
  attack_flags(attack);
  attack->add_option("--target", o.target, "Target class")->check(CLI::IsMember({-1, 1}));
  attack->add_flag("--early-stop", o.early_stop, "Stop once the target class is reached");
  attack->add_option("--freeze", o.freeze, "Feature slots that must not move");
  attack->add_option("--endpoints", o.endpoints, "Write materialized endpoint configurations here");

  auto* loop = app.add_subcommand("loop", "Adversarial retraining loop");
  loop_flags(loop);
  loop->add_option("--labeling", o.labeling, "Label for adversarial points")->check(CLI::IsMember({"source", "oracle"}));
  loop->add_flag("--discard-invalid", o.discard_invalid, "Drop adversarial configurations the model rejects");

  auto* rloop = app.add_subcommand("random-loop", "Random acquisition baseline");
  loop_flags(rloop);

  auto* distill = app.add_subcommand("distill", "Distill a classifier into a tree and constraints");
  shared(distill);
  model_source(distill);
  distill->add_option("--classifier", o.classifier, "Classifier JSON")->required();
  distill->add_option("--n-samples", o.n_samples, "Configurations labeled by the classifier")->check(CLI::PositiveNumber);
  distill->add_option("--max-depth", o.max_depth, "Tree depth limit");
  distill->add_option("--constraints", o.constraints, "Write extracted constraints here");
  distill->add_option("--json", o.json_out, "Write a JSON summary here");

  auto* inject = app.add_subcommand("inject", "Append constraints (one per line) to a model");
  shared(inject);
  inject->add_option("--model", o.model, "Variability model JSON")->required();
  inject->add_option("--constraints", o.constraints, "Constraint file")->required();

  auto* bmap = app.add_subcommand("boundary-map", "Decision values over a grid of a 2-D classifier");
  shared(bmap);
  bmap->add_option("--classifier", o.classifier, "Classifier JSON")->required();
  bmap->add_option("--grid", o.grid, "Points per axis")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  Runner run(o, out);
  try {
    if (sub == gen) {
      run.emit(o.out, serialize_model(run.scenario().model));
    } else if (sub == sample) {
      const VariabilityModel m = run.model();
      run.emit(o.out, write_configurations(m, sample_valid(m, o.n, o.seed)));
    } else if (sub == label) {
      const Scenario s = run.scenario();
      const ConfigurationTable table = run.dataset(s.model);
      std::vector<Label> labels;
      for (const auto& c : table.configs) labels.push_back(s.oracle->label(c));
      run.emit(o.out, write_configurations(s.model, table.configs, &labels));
      log::info("oracle queries: " + std::to_string(s.oracle->queries()));
    } else if (sub == train) {
      const VariabilityModel m = run.model();
      const ConfigurationTable table = run.dataset(m);
      if (!table.labels) throw ConfigurationError("training CSV needs a label column");
      const Encoder enc(m);
      LabeledDataset data;
      for (std::size_t i = 0; i < table.configs.size(); ++i) data.add(enc.encode(table.configs[i]), (*table.labels)[i]);
      const TrainParams p = run.train_params();
      const TrainResult r = train_svm_detailed(data, p);
      log::info("trained on " + std::to_string(data.size()) + " points: " +
                std::to_string(r.model.support_vectors().size()) + " support vectors, kernel " +
                std::string(to_string(p.kernel)) + ", C " + std::to_string(p.C) + ", gamma " +
                std::to_string(r.model.gamma()));
      run.emit(o.out, serialize_svm(r.model));
    } else if (sub == eval) {
      const VariabilityModel m = run.model();
      const SvmModel svm = run.classifier();
      const ConfigurationTable table = run.dataset(m);
      if (!table.labels) throw ConfigurationError("evaluation CSV needs a label column");
      const Encoder enc(m);
      LabeledDataset data;
      for (std::size_t i = 0; i < table.configs.size(); ++i) data.add(enc.encode(table.configs[i]), (*table.labels)[i]);
      const Metrics mt = evaluate(svm, data);
      ordered_json j;
      j["error_rate"] = mt.error_rate;
      j["true_positive"] = mt.true_positive;
      j["true_negative"] = mt.true_negative;
      j["false_positive"] = mt.false_positive;
      j["false_negative"] = mt.false_negative;
      j["mean_abs_g"] = mt.mean_abs_decision;
      j["manifest"] = run.manifest(*sub, start);
      run.emit(o.out, j.dump(2) + "\n");
    } else if (sub == attack) {
      const VariabilityModel m = run.model();
      const SvmModel svm = run.classifier();
      const ConfigurationTable table = run.dataset(m);
      const Encoder enc(m);
      std::vector<FeatureVector> sources;
      for (const auto& c : table.configs) sources.push_back(enc.encode(c));
      const auto traces = batch_evade(svm, sources, run.attack_params(), o.threads);
      run.emit(o.out, write_traces(traces));
      if (!o.endpoints.empty()) {
        std::vector<Configuration> ends;
        for (const auto& t : traces) ends.push_back(enc.project(t.final_point()));
        run.emit(o.endpoints, write_configurations(m, ends));
      }
    } else if (sub == loop || sub == rloop) {
      const Scenario s = run.scenario();
      LoopParams p;
      p.rounds = o.rounds;
      p.attacks_per_round = o.attacks_per_round;
      p.attack.step = o.step;
      p.attack.iterations = o.iterations;
      p.labeling = labeling_from_string(o.labeling);
      p.seed = o.seed;
      p.holdout_size = o.holdout;
      p.discard_invalid = o.discard_invalid;
      p.threads = o.threads;
      const TrainParams tp = run.train_params();
      const LoopReport r = sub == loop ? run_adversarial_loop(s, o.init_size, tp, p)
                                       : run_random_loop(s, o.init_size, tp, p);
      log::info(metrics_summary(r));
      const bool json_main = ends_with(o.out, ".json");
      if (!json_main) run.emit(o.out, report_csv(r));
      if (json_main || !o.json_out.empty()) {
        ordered_json j = report_json(r);
        if (json_main) run.outputs_.push_back(o.out);
        j["manifest"] = run.manifest(*sub, start);
        run.emit(json_main ? o.out : o.json_out, j.dump(2) + "\n");
      }
      if (!r.ok) {
        err << "error: " << r.error << " (partial report written)\n";
        return 1;
      }
    } else if (sub == distill) {
      const VariabilityModel m = run.model();
      const SvmModel svm = run.classifier();
      const Encoder enc(m);
      const DecisionTree tree = distill_tree(svm, enc, o.n_samples, o.max_depth, o.seed);
      const auto cs = extract_constraints(tree, enc);
      const double agreement = tree_agreement(tree, svm, enc, 1000, derive_seed(o.seed, 0x66696465ULL));
      log::info("tree: depth " + std::to_string(tree.depth()) + ", " + std::to_string(tree.leaf_count()) +
                " leaves, agreement with classifier " + std::to_string(agreement));
      run.emit(o.out, format_tree(tree, enc));
      std::string lines;
      for (const auto& c : cs) lines += c.text() + '\n';
      if (!o.constraints.empty()) run.emit(o.constraints, lines);
      if (!o.json_out.empty()) {
        ordered_json j;
        j["depth"] = tree.depth();
        j["leaves"] = tree.leaf_count();
        j["agreement"] = agreement;
        j["constraints"] = ordered_json::array();
        for (const auto& c : cs) j["constraints"].push_back(c.text());
        run.outputs_.push_back(o.json_out);
        j["manifest"] = run.manifest(*sub, start);
        run.emit(o.json_out, j.dump(2) + "\n");
      }
    } else if (sub == inject) {
      const VariabilityModel m = run.model();
      std::vector<Constraint> cs;
      std::string text = run.input(o.constraints);
      std::size_t pos = 0;
      while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string line = text.substr(pos, nl - pos);
        pos = nl + 1;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        cs.push_back(m.parse_constraint(line));
      }
      run.emit(o.out, serialize_model(inject_constraints(m, cs)));
    } else if (sub == bmap) {
      run.emit(o.out, boundary_csv(boundary_map(run.classifier(), o.grid)));
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n\n" << sub->help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args) { return run_cli(args, std::cout, std::cerr); }

}  // namespace advconf
