#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hfaug/matrix.hpp"

namespace hfaug {

enum class ModelKind : uint8_t { Logistic, Hinge };

const char* to_string(ModelKind k);

struct Dataset {
  FeatureMatrix features;
  std::vector<int> labels;  // 1 = ponzi, 0 = nonponzi; aligned to rows
};

struct FitOptions {
  double l2 = 1e-4;
  uint32_t epochs = 200;
  double learning_rate = 0.1;  // decayed as lr / sqrt(epoch + 1)
  uint64_t seed = 0;
};

struct LinearModel {
  ModelKind kind = ModelKind::Logistic;
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> loss_trace;  // objective after each epoch
};

/// Full objective: mean per-sample loss plus (l2/2)*||w||^2 (bias
/// unregularized). Per-sample loss is log-loss for Logistic and hinge
/// max(0, 1 - s z) for Hinge.
double loss_value(const Dataset& ds, ModelKind kind, std::span<const double> weights, double bias,
                  double l2);
void loss_gradient(const Dataset& ds, ModelKind kind, std::span<const double> weights, double bias,
                   double l2, std::span<double> grad_out, double* bias_grad);

/// Full-batch gradient descent on the objective above.
LinearModel fit(const Dataset& ds, ModelKind kind, const FitOptions& options = {});

/// Decision rule: score w.x + b, boundary maps to the positive class.
int predict_one(const LinearModel& m, std::span<const double> x);
std::vector<int> predict(const LinearModel& m, const FeatureMatrix& X);

/// Micro-averaged F1 over both classes. For single-label binary input this
/// coincides with accuracy.
double micro_f1(std::span<const int> pred, std::span<const int> truth);

struct CvOptions {
  uint32_t k = 5;
  uint32_t repeats = 10;
  uint64_t seed = 0;
  bool standardize = true;  // z-score per column, fit on training folds only
  FitOptions fit;
};

struct CvReport {
  std::vector<double> scores;  // repeat-major, k entries per repeat
  double mean = 0.0;
  double stddev = 0.0;  // population
  uint32_t k = 0;
  uint32_t repeats = 0;
  uint64_t seed = 0;
  bool standardize = true;
  ModelKind model = ModelKind::Logistic;
  FitOptions fit;

  std::string to_json() const;
  static CvReport from_json(const std::string& text);
};

/// Repeated stratified k-fold; repeat r shuffles with seed + r. Scores are
/// micro-F1 on the held-out fold.
CvReport cross_validate(const Dataset& ds, ModelKind kind, const CvOptions& options = {});

/// Relative improvement in percent: 100 * (aug - raw) / raw.
double gain(double raw_score, double aug_score);

/// Column-wise z-score parameters. Zero-variance columns scale by 1.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;

  static Scaler fit(const FeatureMatrix& X, std::span<const size_t> rows);
  void apply(std::span<double> row) const;
};

/// Joins a feature matrix with `address -> {0,1}` labels, keeping the rows
/// that have a label. Labels for absent addresses are ignored; no row
/// matches any label -> EmptyInput.
Dataset make_dataset(const FeatureMatrix& features,
                     const std::vector<std::pair<std::string, int>>& labels);

}  // namespace hfaug
