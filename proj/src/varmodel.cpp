#include "advconf/varmodel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include <json.hpp>

#include "advconf/errors.hpp"
#include "advconf/random.hpp"

namespace advconf {

std::string_view to_string(OptionKind kind) {
  switch (kind) {
    case OptionKind::Boolean: return "boolean";
    case OptionKind::Categorical: return "categorical";
    case OptionKind::Numeric: return "numeric";
  }
  return "?";
}

OptionDef OptionDef::boolean(std::string name) {
  OptionDef o;
  o.name = std::move(name);
  o.kind = OptionKind::Boolean;
  return o;
}

OptionDef OptionDef::categorical(std::string name, std::vector<std::string> choices) {
  OptionDef o;
  o.name = std::move(name);
  o.kind = OptionKind::Categorical;
  o.choices = std::move(choices);
  return o;
}

OptionDef OptionDef::numeric(std::string name, double min, double max) {
  OptionDef o;
  o.name = std::move(name);
  o.kind = OptionKind::Numeric;
  o.min = min;
  o.max = max;
  return o;
}

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

void check_option(const OptionDef& o) {
  if (!is_identifier(o.name)) throw ModelError("option name '" + o.name + "' is not an identifier");
  if (o.name == "true" || o.name == "false" || o.name == "label")
    throw ModelError("option name '" + o.name + "' is reserved");
  switch (o.kind) {
    case OptionKind::Boolean:
      break;
    case OptionKind::Categorical: {
      if (o.choices.size() < 2) throw ModelError("categorical option '" + o.name + "' needs at least 2 choices");
      std::set<std::string_view> seen;
      for (const auto& c : o.choices) {
        if (!is_identifier(c) || c == "true" || c == "false")
          throw ModelError("choice '" + c + "' of option '" + o.name + "' is not a valid identifier");
        if (!seen.insert(c).second) throw ModelError("duplicate choice '" + c + "' in option '" + o.name + "'");
      }
      break;
    }
    case OptionKind::Numeric:
      if (!std::isfinite(o.min) || !std::isfinite(o.max))
        throw ModelError("numeric option '" + o.name + "' has non-finite bounds");
      if (!(o.min < o.max)) throw ModelError("empty numeric domain for option '" + o.name + "'");
      break;
  }
}

bool compare(double lhs, CompareOp op, double rhs) {
  switch (op) {
    case CompareOp::Lt: return lhs < rhs;
    case CompareOp::Le: return lhs <= rhs;
    case CompareOp::Gt: return lhs > rhs;
    case CompareOp::Ge: return lhs >= rhs;
    case CompareOp::Eq: return lhs == rhs;
  }
  return false;
}

}  // namespace

VariabilityModel::VariabilityModel(std::vector<OptionDef> options, std::vector<Constraint> constraints)
    : options_(std::move(options)), constraints_(std::move(constraints)) {
  if (options_.empty()) throw ModelError("model declares no options");
  for (std::size_t i = 0; i < options_.size(); ++i) {
    check_option(options_[i]);
    if (!index_.emplace(options_[i].name, i).second)
      throw ModelError("duplicate option name '" + options_[i].name + "'");
  }
  for (const auto& c : constraints_) {
    if (!c.expr) throw ModelError("empty constraint");
    check(*c.expr);
  }
}

std::optional<std::size_t> VariabilityModel::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const OptionDef& VariabilityModel::option(std::string_view name) const {
  auto i = find(name);
  if (!i) throw ModelError("unknown option '" + std::string(name) + "'");
  return options_[*i];
}

void VariabilityModel::check(const Expr& e) const {
  if (e.kind != Expr::Kind::Atom) {
    check(*e.lhs);
    if (e.rhs) check(*e.rhs);
    return;
  }
  const Atom& a = e.atom;
  auto i = find(a.option);
  if (!i) throw ModelError("constraint references unknown option '" + a.option + "'");
  const OptionDef& o = options_[*i];
  const std::string where = "atom '" + to_string(e) + "': ";
  switch (o.kind) {
    case OptionKind::Boolean:
      if (a.op != CompareOp::Eq || !std::holds_alternative<bool>(a.literal))
        throw ModelError(where + "boolean options compare with == true|false");
      break;
    case OptionKind::Categorical: {
      const auto* s = std::get_if<std::string>(&a.literal);
      if (a.op != CompareOp::Eq || !s) throw ModelError(where + "categorical options compare with == choice");
      if (std::find(o.choices.begin(), o.choices.end(), *s) == o.choices.end())
        throw ModelError(where + "'" + *s + "' is not a choice of '" + o.name + "'");
      break;
    }
    case OptionKind::Numeric: {
      const auto* d = std::get_if<double>(&a.literal);
      if (a.op == CompareOp::Eq || !d || !std::isfinite(*d))
        throw ModelError(where + "numeric options compare with <, <=, >, >= and a finite number");
      break;
    }
  }
}

Constraint VariabilityModel::parse_constraint(std::string_view text) const {
  Constraint c{parse_expr(text)};
  check(*c.expr);
  return c;
}

VariabilityModel parse_model(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("options") || !doc["options"].is_array())
      throw ParseError("model document needs an \"options\" array");
    std::vector<OptionDef> options;
    for (const auto& jo : doc["options"]) {
      OptionDef o;
      o.name = jo.at("name").get<std::string>();
      const auto kind = jo.at("kind").get<std::string>();
      if (kind == "boolean") {
        o.kind = OptionKind::Boolean;
      } else if (kind == "categorical") {
        o.kind = OptionKind::Categorical;
        o.choices = jo.at("choices").get<std::vector<std::string>>();
      } else if (kind == "numeric") {
        o.kind = OptionKind::Numeric;
        o.min = jo.at("min").get<double>();
        o.max = jo.at("max").get<double>();
      } else {
        throw ModelError("unknown option kind '" + kind + "'");
      }
      options.push_back(std::move(o));
    }
    // Options first so constraints can be type-checked against them.
    VariabilityModel bare(std::move(options));
    std::vector<Constraint> constraints;
    if (doc.contains("constraints")) {
      for (const auto& jc : doc.at("constraints")) constraints.push_back(bare.parse_constraint(jc.get<std::string>()));
    }
    return VariabilityModel(bare.options(), std::move(constraints));
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid model document: ") + e.what());
  }
}

std::string serialize_model(const VariabilityModel& model) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["options"] = ordered_json::array();
  for (const auto& o : model.options()) {
    ordered_json jo;
    jo["name"] = o.name;
    jo["kind"] = std::string(to_string(o.kind));
    if (o.kind == OptionKind::Categorical) jo["choices"] = o.choices;
    if (o.kind == OptionKind::Numeric) {
      jo["min"] = o.min;
      jo["max"] = o.max;
    }
    doc["options"].push_back(std::move(jo));
  }
  doc["constraints"] = ordered_json::array();
  for (const auto& c : model.constraints()) doc["constraints"].push_back(c.text());
  return doc.dump(2) + "\n";
}

bool in_domain(const OptionDef& opt, const OptionValue& v) {
  switch (opt.kind) {
    case OptionKind::Boolean:
      return std::holds_alternative<bool>(v);
    case OptionKind::Categorical: {
      const auto* s = std::get_if<std::string>(&v);
      return s && std::find(opt.choices.begin(), opt.choices.end(), *s) != opt.choices.end();
    }
    case OptionKind::Numeric: {
      const auto* d = std::get_if<double>(&v);
      return d && *d >= opt.min && *d <= opt.max;
    }
  }
  return false;
}

bool evaluate(const Expr& e, const Configuration& config) {
  switch (e.kind) {
    case Expr::Kind::Atom: {
      const OptionValue& v = config.at(e.atom.option);
      if (const auto* d = std::get_if<double>(&v)) {
        const auto* lit = std::get_if<double>(&e.atom.literal);
        return lit && compare(*d, e.atom.op, *lit);
      }
      return v == e.atom.literal;
    }
    case Expr::Kind::Not:
      return !evaluate(*e.lhs, config);
    case Expr::Kind::And:
      return evaluate(*e.lhs, config) && evaluate(*e.rhs, config);
    case Expr::Kind::Or:
      return evaluate(*e.lhs, config) || evaluate(*e.rhs, config);
    case Expr::Kind::Implies:
      return !evaluate(*e.lhs, config) || evaluate(*e.rhs, config);
  }
  return false;
}

ValidityReport validate(const VariabilityModel& model, const Configuration& config) {
  for (const auto& o : model.options())
    if (!config.values.count(o.name)) throw ConfigurationError("configuration misses option '" + o.name + "'");
  for (const auto& [name, value] : config.values)
    if (!model.find(name)) throw ConfigurationError("configuration assigns unknown option '" + name + "'");

  ValidityReport report;
  for (const auto& o : model.options())
    if (!in_domain(o, config.at(o.name))) report.domain_violations.push_back(o.name);
  for (std::size_t i = 0; i < model.constraints().size(); ++i)
    if (!evaluate(*model.constraints()[i].expr, config)) report.violations.push_back(i);
  report.valid = report.violations.empty() && report.domain_violations.empty();
  return report;
}

namespace {

Configuration draw(const VariabilityModel& model, Rng& rng) {
  Configuration c;
  for (const auto& o : model.options()) {
    switch (o.kind) {
      case OptionKind::Boolean:
        c.values.emplace(o.name, rng.coin());
        break;
      case OptionKind::Categorical:
        c.values.emplace(o.name, o.choices[rng.index(o.choices.size())]);
        break;
      case OptionKind::Numeric:
        c.values.emplace(o.name, rng.uniform(o.min, o.max));
        break;
    }
  }
  return c;
}

bool satisfies(const VariabilityModel& model, const Configuration& c) {
  for (const auto& k : model.constraints())
    if (!evaluate(*k.expr, c)) return false;
  return true;
}

}  // namespace

std::vector<Configuration> sample_valid(const VariabilityModel& model, std::size_t n, std::uint64_t seed,
                                        std::size_t attempt_factor) {
  std::vector<Configuration> out;
  out.reserve(n);
  Rng rng(seed);
  const std::size_t budget = attempt_factor * n;
  std::size_t attempts = 0;
  while (out.size() < n) {
    if (attempts++ >= budget)
      throw SamplingError("sampling budget exceeded (" + std::to_string(budget) +
                          " attempts): model is over-constrained");
    Configuration c = draw(model, rng);
    if (satisfies(model, c)) out.push_back(std::move(c));
  }
  return out;
}

bool equivalent(const VariabilityModel& model, const Configuration& a, const Configuration& b) {
  if (a.values.size() != b.values.size()) return false;
  for (const auto& o : model.options()) {
    auto ia = a.values.find(o.name);
    auto ib = b.values.find(o.name);
    if (ia == a.values.end() || ib == b.values.end()) return false;
    if (o.kind == OptionKind::Numeric) {
      const auto* x = std::get_if<double>(&ia->second);
      const auto* y = std::get_if<double>(&ib->second);
      if (!x || !y || std::abs(*x - *y) > 1e-12 * (o.max - o.min)) return false;
    } else if (ia->second != ib->second) {
      return false;
    }
  }
  return true;
}

std::string describe(const OptionValue& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return format_real(std::get<double>(v));
}

}  // namespace advconf
