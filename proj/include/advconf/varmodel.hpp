#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advconf/constraint.hpp"

namespace advconf {

enum class OptionKind { Boolean, Categorical, Numeric };

std::string_view to_string(OptionKind kind);

struct OptionDef {
  std::string name;
  OptionKind kind = OptionKind::Boolean;
  std::vector<std::string> choices;  // categorical only
  double min = 0.0;                  // numeric only
  double max = 0.0;

  static OptionDef boolean(std::string name);
  static OptionDef categorical(std::string name, std::vector<std::string> choices);
  static OptionDef numeric(std::string name, double min, double max);
};

// Total assignment option name -> value.
struct Configuration {
  std::map<std::string, OptionValue> values;

  const OptionValue& at(const std::string& name) const { return values.at(name); }
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct ValidityReport {
  bool valid = true;
  std::vector<std::size_t> violations;          // indices of failed constraints
  std::vector<std::string> domain_violations;   // options holding out-of-domain values
};

// Options with domains plus cross-tree constraints. Immutable; the
// constructor enforces every well-formedness invariant and throws
// ModelError otherwise.
class VariabilityModel {
 public:
  VariabilityModel(std::vector<OptionDef> options, std::vector<Constraint> constraints = {});

  const std::vector<OptionDef>& options() const { return options_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  std::size_t size() const { return options_.size(); }

  std::optional<std::size_t> find(std::string_view name) const;
  const OptionDef& option(std::string_view name) const;

  // Type-checks an expression against the options; throws ModelError.
  void check(const Expr& e) const;

  // Parses constraint text and type-checks it against this model.
  Constraint parse_constraint(std::string_view text) const;

 private:
  std::vector<OptionDef> options_;
  std::vector<Constraint> constraints_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

VariabilityModel parse_model(std::string_view json_text);
std::string serialize_model(const VariabilityModel& model);

// Whether a value lies in an option's domain (type and range).
bool in_domain(const OptionDef& opt, const OptionValue& v);

// Evaluates an already type-checked expression under a configuration.
bool evaluate(const Expr& e, const Configuration& config);

// Throws ConfigurationError on missing or extra assignments.
ValidityReport validate(const VariabilityModel& model, const Configuration& config);

// Rejection sampler: uniform draws per option, retried until every
// constraint holds. Throws SamplingError after attempt_factor * n failed
// attempts in total.
std::vector<Configuration> sample_valid(const VariabilityModel& model, std::size_t n,
                                        std::uint64_t seed, std::size_t attempt_factor = 1000);

// Numeric values compare within 1e-12 of the option range; discrete values
// compare exactly.
bool equivalent(const VariabilityModel& model, const Configuration& a, const Configuration& b);

std::string describe(const OptionValue& v);

}  // namespace advconf
