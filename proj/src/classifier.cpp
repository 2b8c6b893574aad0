#include "advconf/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "advconf/errors.hpp"
#include "advconf/random.hpp"

namespace advconf {

Label label_from_int(int v) {
  if (v == 1) return Label::Acceptable;
  if (v == -1) return Label::NonAcceptable;
  throw ConfigurationError("label must be -1 or 1, got " + std::to_string(v));
}

std::string_view to_string(KernelKind k) { return k == KernelKind::Linear ? "linear" : "rbf"; }

KernelKind kernel_from_string(std::string_view s) {
  if (s == "linear") return KernelKind::Linear;
  if (s == "rbf") return KernelKind::Rbf;
  throw ParseError("unknown kernel '" + std::string(s) + "'");
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

SvmModel::SvmModel(KernelKind kernel, double gamma, double bias, std::size_t dim,
                   std::vector<FeatureVector> support_vectors, std::vector<double> dual_coeffs)
    : kernel_(kernel),
      gamma_(gamma),
      bias_(bias),
      dim_(dim),
      support_vectors_(std::move(support_vectors)),
      dual_coeffs_(std::move(dual_coeffs)) {
  if (support_vectors_.size() != dual_coeffs_.size())
    throw ModelError("support vector and coefficient counts differ");
  for (const auto& sv : support_vectors_)
    if (sv.size() != dim_) throw DimensionMismatch("support vector dimension differs from model dimension");
  if (kernel_ == KernelKind::Rbf && !(gamma_ > 0.0)) throw ModelError("rbf gamma must be positive");
}

void SvmModel::check_dim(std::span<const double> x) const {
  if (x.size() != dim_)
    throw DimensionMismatch("classifier expects dimension " + std::to_string(dim_) + ", got " +
                            std::to_string(x.size()));
}

double SvmModel::kernel_value(std::span<const double> a, std::span<const double> b) const {
  if (kernel_ == KernelKind::Linear) return dot(a, b);
  return std::exp(-gamma_ * squared_distance(a, b));
}

double SvmModel::decision(std::span<const double> x) const {
  check_dim(x);
  double g = bias_;
  for (std::size_t i = 0; i < support_vectors_.size(); ++i)
    g += dual_coeffs_[i] * kernel_value(x, support_vectors_[i]);
  return g;
}

Label SvmModel::predict(std::span<const double> x) const {
  return decision(x) >= 0.0 ? Label::Acceptable : Label::NonAcceptable;
}

FeatureVector SvmModel::gradient(std::span<const double> x) const {
  check_dim(x);
  FeatureVector grad(dim_, 0.0);
  for (std::size_t i = 0; i < support_vectors_.size(); ++i) {
    const auto& sv = support_vectors_[i];
    if (kernel_ == KernelKind::Linear) {
      for (std::size_t k = 0; k < dim_; ++k) grad[k] += dual_coeffs_[i] * sv[k];
    } else {
      const double w = dual_coeffs_[i] * -2.0 * gamma_ * kernel_value(x, sv);
      for (std::size_t k = 0; k < dim_; ++k) grad[k] += w * (x[k] - sv[k]);
    }
  }
  return grad;
}

namespace {

class KernelMatrix {
 public:
  KernelMatrix(const std::vector<FeatureVector>& pts, KernelKind kind, double gamma)
      : pts_(pts), kind_(kind), gamma_(gamma), n_(pts.size()) {
    if (n_ <= kCacheLimit) {
      cache_.resize(n_ * n_);
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j <= i; ++j) cache_[i * n_ + j] = cache_[j * n_ + i] = compute(i, j);
    }
  }

  double operator()(std::size_t i, std::size_t j) const {
    return cache_.empty() ? compute(i, j) : cache_[i * n_ + j];
  }

 private:
  static constexpr std::size_t kCacheLimit = 4000;

  double compute(std::size_t i, std::size_t j) const {
    if (kind_ == KernelKind::Linear) return dot(pts_[i], pts_[j]);
    return std::exp(-gamma_ * squared_distance(pts_[i], pts_[j]));
  }

  const std::vector<FeatureVector>& pts_;
  KernelKind kind_;
  double gamma_;
  std::size_t n_;
  std::vector<double> cache_;
};

class SmoSolver {
 public:
  SmoSolver(const LabeledDataset& data, const TrainParams& p, double gamma)
      : n_(data.size()),
        C_(p.C),
        K_(data.points, p.kernel, gamma),
        alpha_(n_, 0.0),
        f_(n_, 0.0),
        rng_(p.seed) {
    y_.reserve(n_);
    for (Label l : data.labels) y_.push_back(sign(l));
  }

  std::size_t solve(double tol, std::size_t max_passes) {
    std::size_t passes = 0;
    std::size_t sweeps = 0;
    while (passes < max_passes && sweeps < kMaxSweeps) {
      std::size_t changed = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        const double r = y_[i] * error(i);
        if ((r < -tol && alpha_[i] < C_) || (r > tol && alpha_[i] > 0.0)) {
          if (examine(i)) ++changed;
        }
      }
      ++sweeps;
      passes = changed == 0 ? passes + 1 : 0;
    }
    return sweeps;
  }

  const std::vector<double>& alpha() const { return alpha_; }
  double bias() const { return b_; }

 private:
  static constexpr std::size_t kMaxSweeps = 100000;
  static constexpr double kMinStep = 1e-9;

  double error(std::size_t i) const { return f_[i] + b_ - y_[i]; }

  // Multipliers within rounding distance of a bound sit exactly on it.
  double snap(double a) const {
    const double eps = 1e-12 * C_;
    if (a < eps) return 0.0;
    if (a > C_ - eps) return C_;
    return a;
  }

  // Random partner first; when that pair cannot move, scan the rest from a
  // random offset so a violating multiplier is never left stuck.
  bool examine(std::size_t i) {
    std::size_t j = rng_.index(n_ - 1);
    if (j >= i) ++j;
    if (take_step(i, j)) return true;
    const std::size_t start = rng_.index(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t jj = (start + k) % n_;
      if (jj != i && jj != j && take_step(i, jj)) return true;
    }
    return false;
  }

  bool take_step(std::size_t i, std::size_t j) {
    const double ei = error(i);
    const double ej = error(j);
    const double ai = alpha_[i];
    const double aj = alpha_[j];
    double lo = 0.0;
    double hi = 0.0;
    if (y_[i] != y_[j]) {
      lo = std::max(0.0, aj - ai);
      hi = std::min(C_, C_ + aj - ai);
    } else {
      lo = std::max(0.0, ai + aj - C_);
      hi = std::min(C_, ai + aj);
    }
    if (hi - lo <= 0.0) return false;
    const double kii = K_(i, i);
    const double kjj = K_(j, j);
    const double kij = K_(i, j);
    const double eta = 2.0 * kij - kii - kjj;
    if (eta >= 0.0) return false;

    const double aj_new = snap(std::clamp(aj - y_[j] * (ei - ej) / eta, lo, hi));
    if (std::abs(aj_new - aj) < kMinStep) return false;
    const double ai_new = snap(ai + y_[i] * y_[j] * (aj - aj_new));

    const double di = y_[i] * (ai_new - ai);
    const double dj = y_[j] * (aj_new - aj);
    const double b1 = b_ - ei - di * kii - dj * kij;
    const double b2 = b_ - ej - di * kij - dj * kjj;
    if (ai_new > 0.0 && ai_new < C_) b_ = b1;
    else if (aj_new > 0.0 && aj_new < C_) b_ = b2;
    else b_ = 0.5 * (b1 + b2);

    alpha_[i] = ai_new;
    alpha_[j] = aj_new;
    for (std::size_t k = 0; k < n_; ++k) f_[k] += di * K_(i, k) + dj * K_(j, k);
    return true;
  }

  std::size_t n_;
  double C_;
  KernelMatrix K_;
  std::vector<double> alpha_;
  std::vector<double> f_;  // sum_j alpha_j y_j K(i, j), bias excluded
  std::vector<int> y_;
  double b_ = 0.0;
  Rng rng_;
};

}  // namespace

TrainResult train_svm_detailed(const LabeledDataset& data, const TrainParams& params) {
  if (data.points.size() != data.labels.size()) throw DimensionMismatch("points and labels differ in length");
  if (data.points.empty()) throw DegenerateTrainingSet();
  if (!(params.C > 0.0)) throw ModelError("C must be positive");
  if (!(params.tol > 0.0)) throw ModelError("tol must be positive");
  const std::size_t d = data.dimension();
  if (d == 0) throw DimensionMismatch("training points have dimension 0");
  for (const auto& x : data.points) {
    if (x.size() != d) throw DimensionMismatch("training points have inconsistent dimensions");
    for (double v : x)
      if (!std::isfinite(v)) throw ModelError("training point has a non-finite coordinate");
  }
  const bool has_pos = std::find(data.labels.begin(), data.labels.end(), Label::Acceptable) != data.labels.end();
  const bool has_neg =
      std::find(data.labels.begin(), data.labels.end(), Label::NonAcceptable) != data.labels.end();
  if (!has_pos || !has_neg) throw DegenerateTrainingSet();

  double gamma = 0.0;
  if (params.kernel == KernelKind::Rbf) {
    gamma = params.gamma.value_or(1.0 / static_cast<double>(d));
    if (!(gamma > 0.0)) throw ModelError("gamma must be positive");
  }

  SmoSolver solver(data, params, gamma);
  TrainResult result;
  result.iterations = solver.solve(params.tol, params.max_passes);
  result.alphas = solver.alpha();

  std::vector<FeatureVector> svs;
  std::vector<double> coeffs;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (result.alphas[i] > 0.0) {
      svs.push_back(data.points[i]);
      coeffs.push_back(result.alphas[i] * sign(data.labels[i]));
    }
  }
  result.model = SvmModel(params.kernel, gamma, solver.bias(), d, std::move(svs), std::move(coeffs));
  return result;
}

SvmModel train_svm(const LabeledDataset& data, const TrainParams& params) {
  return train_svm_detailed(data, params).model;
}

Metrics evaluate(const SvmModel& m, const LabeledDataset& data) {
  if (data.points.empty()) throw ConfigurationError("cannot evaluate on an empty dataset");
  Metrics out;
  double abs_sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double g = m.decision(data.points[i]);
    abs_sum += std::abs(g);
    const bool pred_pos = g >= 0.0;
    const bool is_pos = data.labels[i] == Label::Acceptable;
    if (pred_pos && is_pos) ++out.true_positive;
    else if (!pred_pos && !is_pos) ++out.true_negative;
    else if (pred_pos) ++out.false_positive;
    else ++out.false_negative;
  }
  const double n = static_cast<double>(data.size());
  out.error_rate = static_cast<double>(out.false_positive + out.false_negative) / n;
  out.mean_abs_decision = abs_sum / n;
  return out;
}

namespace {

void append_real(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

std::string serialize_svm(const SvmModel& m) {
  std::string out = "{\"kernel\":\"";
  out += to_string(m.kernel());
  out += "\",\"gamma\":";
  append_real(out, m.gamma());
  out += ",\"bias\":";
  append_real(out, m.bias());
  out += ",\"dim\":" + std::to_string(m.dimension());
  out += ",\"support_vectors\":[";
  for (std::size_t i = 0; i < m.support_vectors().size(); ++i) {
    if (i) out += ',';
    out += '[';
    const auto& sv = m.support_vectors()[i];
    for (std::size_t k = 0; k < sv.size(); ++k) {
      if (k) out += ',';
      append_real(out, sv[k]);
    }
    out += ']';
  }
  out += "],\"dual_coeffs\":[";
  for (std::size_t i = 0; i < m.dual_coeffs().size(); ++i) {
    if (i) out += ',';
    append_real(out, m.dual_coeffs()[i]);
  }
  out += "]}\n";
  return out;
}

SvmModel parse_svm(std::string_view json_text) {
  using nlohmann::json;
  try {
    const json doc = json::parse(json_text);
    return SvmModel(kernel_from_string(doc.at("kernel").get<std::string>()), doc.at("gamma").get<double>(),
                    doc.at("bias").get<double>(), doc.at("dim").get<std::size_t>(),
                    doc.at("support_vectors").get<std::vector<FeatureVector>>(),
                    doc.at("dual_coeffs").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid classifier document: ") + e.what());
  }
}

}  // namespace advconf
