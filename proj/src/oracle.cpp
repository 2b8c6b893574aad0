#include "advconf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "advconf/encoding.hpp"
#include "advconf/errors.hpp"
#include "advconf/random.hpp"

namespace advconf {

CompositeOracle::CompositeOracle(std::string name, std::vector<std::shared_ptr<const Oracle>> checks)
    : Oracle(std::move(name)), checks_(std::move(checks)) {
  if (checks_.empty()) throw ModelError("composite oracle needs at least one check");
}

CompositeVerdict CompositeOracle::verdict(const Configuration& c) const {
  CompositeVerdict v;
  for (const auto& check : checks_) {
    if (check->label(c) == Label::NonAcceptable) {
      v.label = Label::NonAcceptable;
      v.failed.push_back(check->name());
    }
  }
  return v;
}

Label CompositeOracle::judge(const Configuration& c) const { return verdict(c).label; }

CompositeVerdict CompositeOracle::explain(const Configuration& c) const {
  label(c);  // count the query
  return verdict(c);
}

namespace {

double numeric_value(const Configuration& c, const std::string& name) {
  auto it = c.values.find(name);
  if (it == c.values.end()) throw ConfigurationError("configuration misses option '" + name + "'");
  const auto* d = std::get_if<double>(&it->second);
  if (!d) throw ConfigurationError("option '" + name + "' must hold a number");
  return *d;
}

Scenario make_band2d(std::uint64_t seed) {
  VariabilityModel model({OptionDef::numeric("x0", 0.0, 1.0), OptionDef::numeric("x1", 0.0, 1.0)});
  auto oracle = std::make_shared<FunctionOracle>("band2d", [](const Configuration& c) {
    const double x0 = numeric_value(c, "x0");
    const double x1 = numeric_value(c, "x1");
    return x1 <= 0.5 + 0.2 * std::sin(2.0 * std::numbers::pi * x0) ? Label::Acceptable : Label::NonAcceptable;
  });
  return Scenario{"band2d", seed, std::move(model), std::move(oracle)};
}

std::string two_digit(const char* prefix, std::size_t i) {
  std::string s = prefix;
  if (i < 10) s += '0';
  return s + std::to_string(i);
}

// Rounds a threshold to three decimals so generated constraints stay readable.
double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

VariabilityModel generate_motivlike_model(std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x6d6f64656cULL));
  std::vector<OptionDef> options;
  std::vector<std::size_t> bools, cats, nums;
  for (std::size_t i = 0; i < 8; ++i) {
    bools.push_back(options.size());
    options.push_back(OptionDef::boolean(two_digit("b", i)));
  }
  for (std::size_t i = 0; i < 24; ++i) {
    const std::size_t k = 3 + rng.index(3);
    std::vector<std::string> choices;
    for (std::size_t c = 0; c < k; ++c) choices.push_back("v" + std::to_string(c));
    cats.push_back(options.size());
    options.push_back(OptionDef::categorical(two_digit("c", i), std::move(choices)));
  }
  constexpr double widths[] = {1.0, 2.0, 5.0, 10.0, 50.0, 100.0};
  for (std::size_t i = 0; i < 48; ++i) {
    const double lo = std::floor(rng.uniform(-10.0, 10.0));
    const double hi = lo + widths[rng.index(std::size(widths))];
    nums.push_back(options.size());
    options.push_back(OptionDef::numeric(two_digit("n", i), lo, hi));
  }

  auto pick = [&](const std::vector<std::size_t>& pool) -> const OptionDef& {
    return options[pool[rng.index(pool.size())]];
  };
  auto pick_pair = [&](const std::vector<std::size_t>& pool) {
    const std::size_t a = rng.index(pool.size());
    std::size_t b = rng.index(pool.size() - 1);
    if (b >= a) ++b;
    return std::pair<const OptionDef&, const OptionDef&>(options[pool[a]], options[pool[b]]);
  };
  auto choice = [&](const OptionDef& o) { return o.choices[rng.index(o.choices.size())]; };
  auto at = [](const OptionDef& o, double frac) { return format_real(round3(o.min + frac * (o.max - o.min))); };

  std::vector<std::string> texts;
  for (std::size_t i = 0; i < 10; ++i) {
    switch (i % 4) {
      case 0: {
        const OptionDef& b = pick(bools);
        const OptionDef& c = pick(cats);
        texts.push_back(b.name + " == true => !(" + c.name + " == " + choice(c) + ")");
        break;
      }
      case 1: {
        const OptionDef& n = pick(nums);
        const OptionDef& b = pick(bools);
        texts.push_back(n.name + " > " + at(n, 0.8) + " => " + b.name + " == false");
        break;
      }
      case 2: {
        auto [c1, c2] = pick_pair(cats);
        texts.push_back("!(" + c1.name + " == " + choice(c1) + " && " + c2.name + " == " + choice(c2) + ")");
        break;
      }
      default: {
        auto [n1, n2] = pick_pair(nums);
        texts.push_back(n1.name + " >= " + at(n1, 0.75) + " => " + n2.name + " <= " + at(n2, 0.5));
        break;
      }
    }
  }
  VariabilityModel bare(options);
  std::vector<Constraint> constraints;
  for (const auto& t : texts) constraints.push_back(bare.parse_constraint(t));
  return VariabilityModel(std::move(options), std::move(constraints));
}

struct InteractionScore {
  std::vector<double> weights;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<double> pair_weights;

  double operator()(const FeatureVector& x) const {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += weights[k] * x[k];
    for (std::size_t p = 0; p < pairs.size(); ++p) s += pair_weights[p] * x[pairs[p].first] * x[pairs[p].second];
    return s;
  }
};

Scenario make_motivlike80(std::uint64_t seed) {
  VariabilityModel model = generate_motivlike_model(seed);
  auto encoder = std::make_shared<const Encoder>(model);
  const std::size_t d = encoder->dimension();

  Rng rng(derive_seed(seed, 0x6f7261636c65ULL));
  InteractionScore score;
  for (std::size_t k = 0; k < d; ++k) score.weights.push_back(rng.uniform(-1.0, 1.0));
  for (std::size_t p = 0; p < 5; ++p) {
    const std::size_t a = rng.index(d);
    std::size_t b = rng.index(d - 1);
    if (b >= a) ++b;
    score.pairs.emplace_back(a, b);
    score.pair_weights.push_back(rng.uniform(-2.0, 2.0));
  }

  // Threshold between order statistics so exactly the target fraction of the
  // calibration sample scores above it.
  std::vector<double> scores;
  for (const auto& c : sample_valid(model, kMotivlikeCalibrationSize, seed)) scores.push_back(score(encoder->encode(c)));
  std::sort(scores.begin(), scores.end());
  const auto above = static_cast<std::size_t>(std::lround(kMotivlikeNonAcceptableTarget * scores.size()));
  const std::size_t k = scores.size() - above;
  const double threshold = 0.5 * (scores[k - 1] + scores[k]);

  auto oracle = std::make_shared<FunctionOracle>(
      "motivlike80", [encoder, score = std::move(score), threshold](const Configuration& c) {
        return score(encoder->encode(c)) <= threshold ? Label::Acceptable : Label::NonAcceptable;
      });
  return Scenario{"motivlike80", seed, std::move(model), std::move(oracle)};
}

}  // namespace

std::vector<std::string> scenario_names() { return {"band2d", "motivlike80"}; }

Scenario make_scenario(std::string_view name, std::uint64_t seed) {
  if (name == "band2d") return make_band2d(seed);
  if (name == "motivlike80") return make_motivlike80(seed);
  throw ModelError("unknown scenario '" + std::string(name) + "'");
}

}  // namespace advconf
