// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "advconf/attack.hpp"
#include "advconf/classifier.hpp"
#include "advconf/encoding.hpp"
#include "advconf/loop.hpp"
#include "advconf/oracle.hpp"
#include "advconf/random.hpp"
#include "advconf/rules.hpp"
#include "advconf/varmodel.hpp"

using namespace advconf;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Hyperparameters for every band2d experiment below. The generic default
// (gamma = 1/d = 0.5, C = 1) is too smooth to follow the sine boundary.
TrainParams band2d_params() {
  TrainParams p;
  p.kernel = KernelKind::Rbf;
  p.gamma = 10.0;
  p.C = 10.0;
  p.seed = 42;
  return p;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1. Analytic rbf gradient against central finite differences.
Outcome gradient_correctness() {
  Rng rng(2024);
  const std::size_t dims[] = {2, 10, 50};
  double worst_rel = 0.0;
  std::size_t checked = 0, failures = 0;
  for (std::size_t m = 0; m < 100; ++m) {
    const std::size_t d = dims[m % 3];
    const std::size_t nsv = 1 + rng.index(20);
    const double gamma = rng.uniform(0.2, 5.0) / static_cast<double>(d);
    std::vector<FeatureVector> svs(nsv, FeatureVector(d));
    std::vector<double> coeffs(nsv);
    for (auto& sv : svs)
      for (double& v : sv) v = rng.uniform01();
    for (double& c : coeffs) c = rng.uniform(-3.0, 3.0);
    const double bias = rng.uniform(-1.0, 1.0);
    const SvmModel model(KernelKind::Rbf, gamma, bias, d, svs, coeffs);
    auto f = [&](const std::vector<double>& x) { return testing::rbf_decision(svs, coeffs, bias, gamma, x); };
    for (std::size_t p = 0; p < 10; ++p) {
      FeatureVector x(d);
      for (double& v : x) v = rng.uniform01();
      const auto analytic = model.gradient(x);
      const auto numeric = testing::finite_difference_gradient(f, x, 1e-5);
      double diff = 0.0, norm = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        diff += (analytic[k] - numeric[k]) * (analytic[k] - numeric[k]);
        norm += analytic[k] * analytic[k];
      }
      diff = std::sqrt(diff);
      norm = std::sqrt(norm);
      ++checked;
      if (norm < 1e-6) {
        if (diff >= 1e-7) ++failures;
      } else {
        worst_rel = std::max(worst_rel, diff / norm);
        if (diff / norm >= 1e-4) ++failures;
      }
    }
  }
  return {failures == 0, std::to_string(checked) + " points, worst relative error " + fmt("%.3g", worst_rel)};
}

bool kkt_holds(const LabeledDataset& data, const TrainResult& r, double C, double tol, double& worst) {
  bool ok = true;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double yg = sign(data.labels[i]) * r.model.decision(data.points[i]);
    const double a = r.alphas[i];
    double violation = 0.0;
    if (a <= 0.0) violation = std::max(0.0, (1.0 - tol) - yg);
    else if (a >= C) violation = std::max(0.0, yg - (1.0 + tol));
    else violation = std::max(0.0, std::abs(yg - 1.0) - tol);
    worst = std::max(worst, violation);
    if (violation > 0.0) ok = false;
  }
  return ok;
}

// 2. SMO against the grid-search dual oracle, XOR, and KKT audits.
Outcome smo_correctness() {
  Outcome out;
  std::ostringstream detail;

  LabeledDataset line;
  line.add({0.0}, Label::NonAcceptable);
  line.add({1.0}, Label::Acceptable);
  TrainParams lin;
  lin.kernel = KernelKind::Linear;
  lin.C = 1.0;
  const SvmModel m1 = train_svm(line, lin);
  const auto dual = testing::two_point_dual(0.0, 0.0, 1.0, -1, 1, 1.0);
  const bool p1 = m1.predict(std::vector<double>{0.0}) == (dual.decisions[0] >= 0 ? Label::Acceptable : Label::NonAcceptable) &&
                  m1.predict(std::vector<double>{1.0}) == (dual.decisions[1] >= 0 ? Label::Acceptable : Label::NonAcceptable) &&
                  m1.predict(std::vector<double>{0.0}) == Label::NonAcceptable &&
                  m1.predict(std::vector<double>{1.0}) == Label::Acceptable;
  detail << "1-D " << (p1 ? "ok" : "MISMATCH");
  out.pass &= p1;

  LabeledDataset xr;
  xr.add({0, 0}, Label::NonAcceptable);
  xr.add({1, 1}, Label::NonAcceptable);
  xr.add({0, 1}, Label::Acceptable);
  xr.add({1, 0}, Label::Acceptable);
  TrainParams rbf;
  rbf.kernel = KernelKind::Rbf;
  rbf.gamma = 1.0;
  rbf.C = 10.0;
  const Metrics mx = evaluate(train_svm(xr, rbf), xr);
  detail << ", XOR accuracy " << 1.0 - mx.error_rate;
  out.pass &= mx.error_rate == 0.0;

  Rng rng(7);
  double worst = 0.0;
  std::size_t kkt_ok = 0;
  for (std::size_t t = 0; t < 20; ++t) {
    const double angle = rng.uniform(0.0, 6.283185307179586);
    const double nx = std::cos(angle), ny = std::sin(angle);
    const double c = -(nx * 0.5 + ny * 0.5) + rng.uniform(-0.15, 0.15);
    LabeledDataset data;
    while (data.size() < 40) {
      const double x = rng.uniform01(), y = rng.uniform01();
      const double s = nx * x + ny * y + c;
      if (std::abs(s) < 0.05) continue;
      data.add({x, y}, s > 0 ? Label::Acceptable : Label::NonAcceptable);
      if (data.size() == 40) {
        const auto pos = std::count(data.labels.begin(), data.labels.end(), Label::Acceptable);
        if (pos == 0 || pos == 40) data = LabeledDataset{};
      }
    }
    TrainParams p;
    p.kernel = t % 2 == 0 ? KernelKind::Linear : KernelKind::Rbf;
    p.C = t % 2 == 0 ? 10.0 : 1.0;
    p.seed = t;
    const TrainResult r = train_svm_detailed(data, p);
    if (kkt_holds(data, r, p.C, p.tol, worst)) ++kkt_ok;
  }
  detail << ", KKT " << kkt_ok << "/20 (worst excess " << fmt("%.3g", worst) << ")";
  out.pass &= kkt_ok == 20;
  out.detail = detail.str();
  return out;
}

// 3. Hand-traced linear attack, box, frozen slots, stationary start.
Outcome attack_mechanics() {
  Outcome out;
  std::ostringstream detail;
  const SvmModel lin(KernelKind::Linear, 0.0, -1.0, 1, {{1.0}}, {2.0});
  AttackParams p;
  p.target = Label::NonAcceptable;
  const AttackTrace t = evade(lin, {0.9}, p);
  const bool hand = t.points.size() == 101 && std::abs(t.final_point()[0] - 0.7) <= 1e-12 &&
                    std::abs(t.final_decision() - 0.4) <= 1e-12 && t.status == AttackStatus::Completed;
  detail << "final x " << fmt("%.15g", t.final_point()[0]);
  out.pass &= hand;

  Rng rng(11);
  bool boxed = true, frozen_ok = true;
  for (std::size_t m = 0; m < 20; ++m) {
    const std::size_t d = 5;
    std::vector<FeatureVector> svs(4, FeatureVector(d));
    std::vector<double> coeffs(4);
    for (auto& sv : svs)
      for (double& v : sv) v = rng.uniform01();
    for (double& c : coeffs) c = rng.uniform(-2.0, 2.0);
    const SvmModel model(KernelKind::Rbf, 2.0, 0.1, d, svs, coeffs);
    FeatureVector x0(d);
    for (double& v : x0) v = rng.uniform01();
    AttackParams ap;
    ap.step = 0.05;
    ap.target = m % 2 ? Label::Acceptable : Label::NonAcceptable;
    ap.frozen_features = {1, 3};
    const AttackTrace tr = evade(model, x0, ap);
    for (const auto& pt : tr.points) {
      for (double v : pt) boxed &= v >= 0.0 && v <= 1.0;
      frozen_ok &= pt[1] == x0[1] && pt[3] == x0[3];
    }
  }
  detail << ", box " << (boxed ? "ok" : "VIOLATED") << ", frozen " << (frozen_ok ? "ok" : "MOVED");
  out.pass &= boxed && frozen_ok;

  const SvmModel single(KernelKind::Rbf, 1.0, 0.0, 1, {{0.3}}, {1.0});
  const AttackTrace st = evade(single, {0.3}, AttackParams{});
  const bool stationary = st.status == AttackStatus::Stationary && st.points.size() == 1;
  detail << ", stationary " << (stationary ? "ok" : "WRONG");
  out.pass &= stationary;
  out.detail = detail.str();
  return out;
}

// 4. Seeded attack effectiveness on band2d.
Outcome attack_effectiveness() {
  const Scenario s = make_scenario("band2d", 42);
  const Encoder enc(s.model);
  LabeledDataset train;
  for (const auto& c : sample_valid(s.model, 200, 42)) train.add(enc.encode(c), s.oracle->label(c));
  const SvmModel model = train_svm(train, band2d_params());

  // Attack points are copies of known non-acceptable configurations: the
  // training set's -1 points.
  std::vector<FeatureVector> sources;
  for (std::size_t i = 0; i < train.size() && sources.size() < 100; ++i)
    if (train.labels[i] == Label::NonAcceptable) sources.push_back(train.points[i]);
  if (sources.size() < 100) return {false, "only " + std::to_string(sources.size()) + " non-acceptable training points"};

  const auto traces = batch_evade(model, sources, AttackParams{});
  std::size_t improved = 0, crossed = 0;
  for (const auto& t : traces) {
    improved += t.final_decision() > t.initial_decision();
    crossed += t.initial_decision() < 0.0 && t.final_decision() >= 0.0;
  }
  return {improved >= 80 && crossed >= 50,
          std::to_string(improved) + "/100 improved s*g (>= 80), " + std::to_string(crossed) + "/100 crossed (>= 50)"};
}

LoopParams band2d_loop(Labeling labeling) {
  LoopParams p;
  p.rounds = 20;
  p.attacks_per_round = 10;
  p.labeling = labeling;
  p.seed = 42;
  p.holdout_size = 500;
  return p;
}

// 5. Oracle-labeled adversarial loop reduces holdout disagreement by >= 20%.
Outcome loop_improvement() {
  const Scenario s = make_scenario("band2d", 42);
  const LoopReport r = run_adversarial_loop(s, 200, band2d_params(), band2d_loop(Labeling::OracleLabel));
  const Scenario s2 = make_scenario("band2d", 42);
  const LoopReport src = run_adversarial_loop(s2, 200, band2d_params(), band2d_loop(Labeling::SourceLabel));
  if (r.rows.size() != 21 || !r.ok) return {false, "oracle-label run did not produce 21 rows"};
  const double d0 = r.rows.front().disagreement;
  const double d20 = r.rows.back().disagreement;
  const bool pass = d20 <= 0.8 * d0 && src.ok && src.rows.size() == 21;
  return {pass, "oracle_label " + fmt("%.4f", d0) + " -> " + fmt("%.4f", d20) + " (need <= " + fmt("%.4f", 0.8 * d0) +
                    "); source_label " + fmt("%.4f", src.rows.front().disagreement) + " -> " +
                    fmt("%.4f", src.rows.back().disagreement)};
}

// 6. Full-scale motivlike80 run, twice, byte-identical.
Outcome full_scale() {
  const std::size_t init = 200;
  std::uint64_t hashes[2];
  std::size_t final_size = 0;
  for (int run = 0; run < 2; ++run) {
    const Scenario s = make_scenario("motivlike80", 1);
    LoopParams p;
    p.seed = 1;
    const LoopReport r = run_adversarial_loop(s, init, TrainParams{}, p);
    hashes[run] = testing::fnv1a(report_csv(r) + report_json(r).dump());
    final_size = r.rows.back().train_size;
  }
  const bool pass = final_size == init + 1000 && hashes[0] == hashes[1];
  char h[32];
  std::snprintf(h, sizeof h, "%016llx", static_cast<unsigned long long>(hashes[0]));
  return {pass, "final training size " + std::to_string(final_size) + ", report hash " + h +
                    (hashes[0] == hashes[1] ? " (stable)" : " (DIFFERS)")};
}

// 7. encode/project identity and byte-stable JSON round-trips.
Outcome round_trips() {
  Outcome out;
  std::ostringstream detail;
  for (const char* name : {"band2d", "motivlike80"}) {
    const Scenario s = make_scenario(name, 3);
    const Encoder enc(s.model);
    std::size_t ok = 0;
    for (const auto& c : sample_valid(s.model, 1000, 5)) ok += equivalent(s.model, enc.project(enc.encode(c)), c);
    detail << name << " " << ok << "/1000; ";
    out.pass &= ok == 1000;

    const std::string once = serialize_model(s.model);
    const bool model_stable = serialize_model(parse_model(once)) == once;
    detail << "model json " << (model_stable ? "stable" : "UNSTABLE") << "; ";
    out.pass &= model_stable;
  }
  const Scenario s = make_scenario("band2d", 42);
  const Encoder enc(s.model);
  LabeledDataset train;
  for (const auto& c : sample_valid(s.model, 100, 9)) train.add(enc.encode(c), s.oracle->label(c));
  const std::string svm = serialize_svm(train_svm(train, band2d_params()));
  const bool svm_stable = serialize_svm(parse_svm(svm)) == svm;
  detail << "classifier json " << (svm_stable ? "stable" : "UNSTABLE");
  out.pass &= svm_stable;
  out.detail = detail.str();
  return out;
}

// 8. A config reaches a -1 leaf iff an injected constraint rejects it.
Outcome rules_soundness() {
  const Scenario s = make_scenario("band2d", 42);
  const Encoder enc(s.model);
  LabeledDataset train;
  for (const auto& c : sample_valid(s.model, 200, 42)) train.add(enc.encode(c), s.oracle->label(c));
  const SvmModel model = train_svm(train, band2d_params());
  const DecisionTree tree = distill_tree(model, enc, 2000, 4, 42);
  const auto cs = extract_constraints(tree, enc);
  const VariabilityModel injected = inject_constraints(s.model, cs);
  const std::size_t base = s.model.constraints().size();

  std::size_t agree = 0, forbidden = 0;
  for (const auto& c : sample_valid(s.model, 1000, 4242)) {
    const bool neg_leaf = tree.classify(enc.encode(c)) == Label::NonAcceptable;
    const ValidityReport rep = validate(injected, c);
    const bool rejected = std::any_of(rep.violations.begin(), rep.violations.end(),
                                      [&](std::size_t i) { return i >= base; });
    agree += neg_leaf == rejected;
    forbidden += neg_leaf;
  }
  return {agree == 1000, std::to_string(cs.size()) + " constraints, " + std::to_string(agree) +
                             "/1000 consistent, " + std::to_string(forbidden) + " forbidden"};
}

// 9. Oracle query accounting for both strategies.
Outcome oracle_budget() {
  const std::size_t init = 200, holdout = 500, per_round = 10, rounds = 15;
  LoopParams p = band2d_loop(Labeling::SourceLabel);
  p.rounds = rounds;
  p.attacks_per_round = per_round;
  p.holdout_size = holdout;

  const Scenario rs = make_scenario("band2d", 42);
  const LoopReport random = run_random_loop(rs, init, band2d_params(), p);
  bool formula = true;
  for (const auto& row : random.rows) formula &= row.oracle_queries == holdout + init + row.round * per_round;

  const Scenario as = make_scenario("band2d", 42);
  const LoopReport adv = run_adversarial_loop(as, init, band2d_params(), p);
  bool flat = true;
  for (const auto& row : adv.rows) flat &= row.oracle_queries == holdout + init;

  return {formula && flat && random.rows.size() == rounds + 1 && adv.rows.size() == rounds + 1,
          std::string("random-loop formula ") + (formula ? "exact" : "BROKEN") + ", source_label queries after init " +
              std::to_string(adv.rows.back().oracle_queries - (holdout + init))};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "gradient correctness", 10.0, gradient_correctness},
      {2, "SMO correctness", 30.0, smo_correctness},
      {3, "attack mechanics", 0.0, attack_mechanics},
      {4, "attack effectiveness", 30.0, attack_effectiveness},
      {5, "loop improvement", 120.0, loop_improvement},
      {6, "full-scale smoke run", 900.0, full_scale},
      {7, "round-trips", 0.0, round_trips},
      {8, "rules soundness", 0.0, rules_soundness},
      {9, "oracle budget accounting", 0.0, oracle_budget},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_seconds <= 0.0 || secs < c.budget_seconds;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("[%s] %d %s: %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                in_time ? "" : ", over time budget");
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
