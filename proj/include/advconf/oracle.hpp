#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "advconf/classifier.hpp"
#include "advconf/varmodel.hpp"

namespace advconf {

// Ground-truth labeling of configurations. Every call to label() counts as
// one query, including calls that throw on incomplete configurations.
class Oracle {
 public:
  explicit Oracle(std::string name) : name_(std::move(name)) {}
  virtual ~Oracle() = default;
  Oracle(const Oracle&) = delete;
  Oracle& operator=(const Oracle&) = delete;

  Label label(const Configuration& c) const {
    queries_.fetch_add(1, std::memory_order_relaxed);
    return judge(c);
  }

  const std::string& name() const { return name_; }
  std::uint64_t queries() const { return queries_.load(std::memory_order_relaxed); }
  void reset_queries() { queries_.store(0, std::memory_order_relaxed); }

 protected:
  virtual Label judge(const Configuration& c) const = 0;

 private:
  std::string name_;
  mutable std::atomic<std::uint64_t> queries_{0};
};

class FunctionOracle : public Oracle {
 public:
  FunctionOracle(std::string name, std::function<Label(const Configuration&)> fn)
      : Oracle(std::move(name)), fn_(std::move(fn)) {}

 protected:
  Label judge(const Configuration& c) const override { return fn_(c); }

 private:
  std::function<Label(const Configuration&)> fn_;
};

struct CompositeVerdict {
  Label label = Label::Acceptable;
  std::vector<std::string> failed;  // names of sub-checks that returned -1
};

// Acceptable iff every sub-check is acceptable.
class CompositeOracle : public Oracle {
 public:
  CompositeOracle(std::string name, std::vector<std::shared_ptr<const Oracle>> checks);

  // Counts as one query of this oracle (and one per sub-check).
  CompositeVerdict explain(const Configuration& c) const;

  const std::vector<std::shared_ptr<const Oracle>>& checks() const { return checks_; }

 protected:
  Label judge(const Configuration& c) const override;

 private:
  CompositeVerdict verdict(const Configuration& c) const;

  std::vector<std::shared_ptr<const Oracle>> checks_;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  VariabilityModel model;
  std::shared_ptr<Oracle> oracle;
};

// band2d: two numeric options on [0,1], acceptable iff x1 <= 0.5 + 0.2 sin(2 pi x0).
// motivlike80: 80 generated options with a calibrated interaction oracle.
Scenario make_scenario(std::string_view name, std::uint64_t seed);

std::vector<std::string> scenario_names();

// Fraction of -1 labels the motivlike80 oracle is calibrated to on
// sample_valid(model, 1000, seed).
inline constexpr double kMotivlikeNonAcceptableTarget = 0.32;
inline constexpr std::size_t kMotivlikeCalibrationSize = 1000;

}  // namespace advconf
