#include "advconf/attack.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "advconf/errors.hpp"

namespace advconf {

std::string_view to_string(AttackStatus s) {
  switch (s) {
    case AttackStatus::Completed: return "completed";
    case AttackStatus::Stationary: return "stationary";
    case AttackStatus::EarlyStopped: return "early_stopped";
  }
  return "?";
}

namespace {
constexpr double kStationaryNorm = 1e-12;
}

AttackTrace evade(const SvmModel& m, const FeatureVector& source, const AttackParams& p) {
  if (source.size() != m.dimension())
    throw DimensionMismatch("attack source has dimension " + std::to_string(source.size()) + ", classifier " +
                            std::to_string(m.dimension()));
  if (!(p.step > 0.0)) throw ModelError("attack step must be positive");
  for (double v : source)
    if (!(v >= 0.0 && v <= 1.0)) throw ModelError("attack source lies outside [0,1]^d");

  const double direction = sign(p.target);
  AttackTrace trace;
  trace.points.reserve(p.iterations + 1);
  trace.decisions.reserve(p.iterations + 1);
  trace.points.push_back(source);
  trace.decisions.push_back(m.decision(source));

  FeatureVector x = source;
  for (std::size_t t = 0; t < p.iterations; ++t) {
    const double g = trace.decisions.back();
    if (p.early_stop && (g >= 0.0 ? Label::Acceptable : Label::NonAcceptable) == p.target) {
      trace.status = AttackStatus::EarlyStopped;
      return trace;
    }
    FeatureVector grad = m.gradient(x);
    for (double v : grad)
      if (!std::isfinite(v)) throw ModelError("non-finite gradient during attack");
    for (std::size_t k : p.frozen_features)
      if (k < grad.size()) grad[k] = 0.0;
    double norm = 0.0;
    for (double v : grad) norm += v * v;
    norm = std::sqrt(norm);
    if (norm < kStationaryNorm) {
      trace.status = AttackStatus::Stationary;
      return trace;
    }
    const double scale = direction * p.step / norm;
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::clamp(x[k] + scale * grad[k], 0.0, 1.0);
    trace.points.push_back(x);
    trace.decisions.push_back(m.decision(x));
  }
  trace.status = AttackStatus::Completed;
  return trace;
}

std::vector<AttackTrace> batch_evade(const SvmModel& m, const std::vector<FeatureVector>& sources,
                                     const AttackParams& p, std::size_t threads) {
  std::vector<AttackTrace> out(sources.size());
  for (const auto& s : sources)
    if (s.size() != m.dimension()) throw DimensionMismatch("attack sources differ from classifier dimension");
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, sources.size()));
  if (threads == 1) {
    for (std::size_t i = 0; i < sources.size(); ++i) out[i] = evade(m, sources[i], p);
    return out;
  }
  // Strided partition; each worker writes only its own slots.
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::jthread> workers;
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < sources.size(); i += threads) out[i] = evade(m, sources[i], p);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  workers.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace advconf
