#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "advconf/varmodel.hpp"

namespace advconf {

// Point in the classifier's feature space; encoded configurations lie in [0,1]^d.
using FeatureVector = std::vector<double>;

struct FeatureSlot {
  enum class Kind { Boolean, OneHot, Numeric };

  Kind kind = Kind::Boolean;
  std::size_t option = 0;  // index into the model's options
  std::size_t choice = 0;  // OneHot only
  double min = 0.0;        // Numeric only
  double max = 1.0;
};

// Fixed mapping between configurations and feature vectors: one slot per
// boolean option, one slot per categorical choice, one slot per numeric
// option, in model order.
class Encoder {
 public:
  explicit Encoder(VariabilityModel model);

  std::size_t dimension() const { return layout_.size(); }
  const std::vector<FeatureSlot>& layout() const { return layout_; }
  const VariabilityModel& model() const { return model_; }

  // Human-readable slot label: `fog`, `weather=rain`, `noise`.
  std::string slot_name(std::size_t slot) const;

  FeatureVector encode(const Configuration& config) const;

  // Nearest configuration: booleans threshold at 0.5, categorical groups
  // take the argmax (lowest index on ties), numerics are clamped and
  // denormalized.
  Configuration project(std::span<const double> x) const;

 private:
  VariabilityModel model_;
  std::vector<FeatureSlot> layout_;
  std::vector<std::size_t> first_slot_;  // per option
};

inline Encoder build_encoder(const VariabilityModel& model) { return Encoder(model); }

}  // namespace advconf
