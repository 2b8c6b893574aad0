#pragma once

#include <cstddef>
#include <set>
#include <string_view>
#include <vector>

#include "advconf/classifier.hpp"

namespace advconf {

struct AttackParams {
  Label target = Label::Acceptable;
  double step = 0.002;
  std::size_t iterations = 100;
  bool early_stop = false;
  std::set<std::size_t> frozen_features;
};

enum class AttackStatus { Completed, Stationary, EarlyStopped };

std::string_view to_string(AttackStatus s);

struct AttackTrace {
  std::vector<FeatureVector> points;  // points[0] is the source
  std::vector<double> decisions;      // decision value at each point
  AttackStatus status = AttackStatus::Completed;

  const FeatureVector& final_point() const { return points.back(); }
  double initial_decision() const { return decisions.front(); }
  double final_decision() const { return decisions.back(); }
};

// Fixed-length steps along the normalized decision gradient (ascending for
// target +1, descending for -1), projected back onto [0,1]^d after each
// move. Frozen coordinates are zeroed before normalization.
AttackTrace evade(const SvmModel& m, const FeatureVector& source, const AttackParams& p);

// evade over each source; traces come back in input order and do not depend
// on `threads`.
std::vector<AttackTrace> batch_evade(const SvmModel& m, const std::vector<FeatureVector>& sources,
                                     const AttackParams& p, std::size_t threads = 1);

}  // namespace advconf
