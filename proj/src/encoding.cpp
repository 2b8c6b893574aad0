#include "advconf/encoding.hpp"

#include <algorithm>
#include <cmath>

#include "advconf/errors.hpp"

namespace advconf {

Encoder::Encoder(VariabilityModel model) : model_(std::move(model)) {
  const auto& opts = model_.options();
  for (std::size_t i = 0; i < opts.size(); ++i) {
    first_slot_.push_back(layout_.size());
    const OptionDef& o = opts[i];
    switch (o.kind) {
      case OptionKind::Boolean:
        layout_.push_back({FeatureSlot::Kind::Boolean, i, 0, 0.0, 1.0});
        break;
      case OptionKind::Categorical:
        for (std::size_t c = 0; c < o.choices.size(); ++c)
          layout_.push_back({FeatureSlot::Kind::OneHot, i, c, 0.0, 1.0});
        break;
      case OptionKind::Numeric:
        layout_.push_back({FeatureSlot::Kind::Numeric, i, 0, o.min, o.max});
        break;
    }
  }
}

std::string Encoder::slot_name(std::size_t slot) const {
  const FeatureSlot& s = layout_.at(slot);
  const OptionDef& o = model_.options()[s.option];
  if (s.kind == FeatureSlot::Kind::OneHot) return o.name + "=" + o.choices[s.choice];
  return o.name;
}

FeatureVector Encoder::encode(const Configuration& config) const {
  FeatureVector x(layout_.size(), 0.0);
  const auto& opts = model_.options();
  for (std::size_t i = 0; i < opts.size(); ++i) {
    const OptionDef& o = opts[i];
    auto it = config.values.find(o.name);
    if (it == config.values.end()) throw ConfigurationError("configuration misses option '" + o.name + "'");
    if (!in_domain(o, it->second))
      throw ConfigurationError("value '" + describe(it->second) + "' outside the domain of '" + o.name + "'");
    const std::size_t base = first_slot_[i];
    switch (o.kind) {
      case OptionKind::Boolean:
        x[base] = std::get<bool>(it->second) ? 1.0 : 0.0;
        break;
      case OptionKind::Categorical: {
        const auto& choice = std::get<std::string>(it->second);
        const auto pos = std::find(o.choices.begin(), o.choices.end(), choice) - o.choices.begin();
        x[base + static_cast<std::size_t>(pos)] = 1.0;
        break;
      }
      case OptionKind::Numeric:
        x[base] = (std::get<double>(it->second) - o.min) / (o.max - o.min);
        break;
    }
  }
  if (config.values.size() != opts.size()) throw ConfigurationError("configuration assigns unknown options");
  return x;
}

Configuration Encoder::project(std::span<const double> x) const {
  if (x.size() != layout_.size())
    throw DimensionMismatch("expected " + std::to_string(layout_.size()) + " coordinates, got " +
                            std::to_string(x.size()));
  Configuration c;
  const auto& opts = model_.options();
  for (std::size_t i = 0; i < opts.size(); ++i) {
    const OptionDef& o = opts[i];
    const std::size_t base = first_slot_[i];
    switch (o.kind) {
      case OptionKind::Boolean:
        c.values.emplace(o.name, x[base] >= 0.5);
        break;
      case OptionKind::Categorical: {
        std::size_t best = 0;
        for (std::size_t k = 1; k < o.choices.size(); ++k)
          if (x[base + k] > x[base + best]) best = k;
        c.values.emplace(o.name, o.choices[best]);
        break;
      }
      case OptionKind::Numeric: {
        const double t = std::clamp(x[base], 0.0, 1.0);
        // Clamp again: rounding in t*(max-min)+min may leave the domain by one ulp.
        c.values.emplace(o.name, std::clamp(t * (o.max - o.min) + o.min, o.min, o.max));
        break;
      }
    }
  }
  return c;
}

}  // namespace advconf
