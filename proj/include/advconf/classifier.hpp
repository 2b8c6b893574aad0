#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advconf/encoding.hpp"

namespace advconf {

// +1 = acceptable, -1 = non-acceptable.
enum class Label : int { NonAcceptable = -1, Acceptable = 1 };

inline int sign(Label l) { return static_cast<int>(l); }
Label label_from_int(int v);

struct LabeledDataset {
  std::vector<FeatureVector> points;
  std::vector<Label> labels;

  std::size_t size() const { return points.size(); }
  std::size_t dimension() const { return points.empty() ? 0 : points.front().size(); }
  void add(FeatureVector x, Label y) {
    points.push_back(std::move(x));
    labels.push_back(y);
  }
};

enum class KernelKind { Linear, Rbf };

std::string_view to_string(KernelKind k);
KernelKind kernel_from_string(std::string_view s);

struct TrainParams {
  double C = 1.0;
  KernelKind kernel = KernelKind::Rbf;
  std::optional<double> gamma;  // rbf; defaults to 1/d
  double tol = 1e-3;
  std::size_t max_passes = 10;
  std::uint64_t seed = 0;
};

class SvmModel {
 public:
  SvmModel() = default;
  SvmModel(KernelKind kernel, double gamma, double bias, std::size_t dim,
           std::vector<FeatureVector> support_vectors, std::vector<double> dual_coeffs);

  KernelKind kernel() const { return kernel_; }
  double gamma() const { return gamma_; }
  double bias() const { return bias_; }
  std::size_t dimension() const { return dim_; }
  const std::vector<FeatureVector>& support_vectors() const { return support_vectors_; }
  // alpha_i * y_i per support vector.
  const std::vector<double>& dual_coeffs() const { return dual_coeffs_; }

  double kernel_value(std::span<const double> a, std::span<const double> b) const;

  // g(x) = sum_i coeff_i k(x, sv_i) + b
  double decision(std::span<const double> x) const;
  // Ties at g == 0 predict +1.
  Label predict(std::span<const double> x) const;
  FeatureVector gradient(std::span<const double> x) const;

 private:
  void check_dim(std::span<const double> x) const;

  KernelKind kernel_ = KernelKind::Linear;
  double gamma_ = 0.0;
  double bias_ = 0.0;
  std::size_t dim_ = 0;
  std::vector<FeatureVector> support_vectors_;
  std::vector<double> dual_coeffs_;
};

// Soft-margin dual solved by simplified SMO. Throws DegenerateTrainingSet
// when only one class is present and DimensionMismatch on ragged input.
SvmModel train_svm(const LabeledDataset& data, const TrainParams& params);

// Full training outcome, including every multiplier; used to audit KKT.
struct TrainResult {
  SvmModel model;
  std::vector<double> alphas;  // one per training point
  std::size_t iterations = 0;
};

TrainResult train_svm_detailed(const LabeledDataset& data, const TrainParams& params);

struct Metrics {
  double error_rate = 0.0;
  std::size_t true_positive = 0;   // predicted +1, labeled +1
  std::size_t true_negative = 0;
  std::size_t false_positive = 0;  // predicted +1, labeled -1
  std::size_t false_negative = 0;
  double mean_abs_decision = 0.0;
};

Metrics evaluate(const SvmModel& m, const LabeledDataset& data);

// JSON with every real printed to 17 significant digits.
std::string serialize_svm(const SvmModel& m);
SvmModel parse_svm(std::string_view json_text);

}  // namespace advconf
