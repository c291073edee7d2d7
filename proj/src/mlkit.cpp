#include "hfaug/mlkit.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "hfaug/error.hpp"
#include "hfaug/rng.hpp"

namespace hfaug {

const char* to_string(ModelKind k) { return k == ModelKind::Logistic ? "lr" : "svm"; }

namespace {

double dot_row(std::span<const double> w, std::span<const double> x) {
  double s = 0;
  for (size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
  return s;
}

// log(1 + exp(s)) without overflow for large |s|
double log1p_exp(double s) { return s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

void check_dataset(const Dataset& ds) {
  if (ds.features.rows() == 0) raise(Errc::empty_input, "dataset has no rows");
  if (ds.labels.size() != ds.features.rows()) {
    raise(Errc::length_mismatch, "label count " + std::to_string(ds.labels.size()) +
                                     " != row count " + std::to_string(ds.features.rows()));
  }
}

void check_two_classes(std::span<const int> labels) {
  bool pos = false, neg = false;
  for (int z : labels) (z ? pos : neg) = true;
  if (!pos || !neg) raise(Errc::single_class_data, "training data contains a single class");
}

}  // namespace

double loss_value(const Dataset& ds, ModelKind kind, std::span<const double> weights, double bias,
                  double l2) {
  check_dataset(ds);
  if (weights.size() != ds.features.dim()) {
    raise(Errc::dimension_mismatch, "weight dimension != feature dimension");
  }
  double total = 0;
  for (size_t i = 0; i < ds.features.rows(); ++i) {
    const double s = bias + dot_row(weights, ds.features.row(i));
    if (kind == ModelKind::Logistic) {
      total += log1p_exp(s) - (ds.labels[i] ? s : 0.0);
    } else {
      const double y = ds.labels[i] ? 1.0 : -1.0;
      total += std::max(0.0, 1.0 - y * s);
    }
  }
  double reg = 0;
  for (double w : weights) reg += w * w;
  return total / static_cast<double>(ds.features.rows()) + 0.5 * l2 * reg;
}

void loss_gradient(const Dataset& ds, ModelKind kind, std::span<const double> weights, double bias,
                   double l2, std::span<double> grad_out, double* bias_grad) {
  check_dataset(ds);
  if (weights.size() != ds.features.dim() || grad_out.size() != weights.size()) {
    raise(Errc::dimension_mismatch, "gradient buffers must match the feature dimension");
  }
  std::fill(grad_out.begin(), grad_out.end(), 0.0);
  double gb = 0;
  for (size_t i = 0; i < ds.features.rows(); ++i) {
    auto x = ds.features.row(i);
    const double s = bias + dot_row(weights, x);
    double gi;
    if (kind == ModelKind::Logistic) {
      gi = 1.0 / (1.0 + std::exp(-s)) - (ds.labels[i] ? 1.0 : 0.0);
    } else {
      const double y = ds.labels[i] ? 1.0 : -1.0;
      gi = 1.0 - y * s > 0 ? -y : 0.0;
    }
    for (size_t j = 0; j < x.size(); ++j) grad_out[j] += gi * x[j];
    gb += gi;
  }
  const double inv_n = 1.0 / static_cast<double>(ds.features.rows());
  for (size_t j = 0; j < grad_out.size(); ++j) grad_out[j] = grad_out[j] * inv_n + l2 * weights[j];
  if (bias_grad) *bias_grad = gb * inv_n;
}

LinearModel fit(const Dataset& ds, ModelKind kind, const FitOptions& options) {
  check_dataset(ds);
  check_two_classes(ds.labels);
  if (options.epochs < 1 || options.learning_rate <= 0 || options.l2 < 0) {
    raise(Errc::config_error, "fit requires epochs >= 1, learning_rate > 0, l2 >= 0");
  }

  LinearModel m;
  m.kind = kind;
  m.weights.assign(ds.features.dim(), 0.0);
  m.bias = 0.0;
  m.loss_trace.reserve(options.epochs);

  std::vector<double> grad(m.weights.size());
  std::vector<double> trial_w(m.weights.size());
  double current = loss_value(ds, kind, m.weights, m.bias, options.l2);

  for (uint32_t epoch = 0; epoch < options.epochs; ++epoch) {
    double bias_grad = 0;
    loss_gradient(ds, kind, m.weights, m.bias, options.l2, grad, &bias_grad);
    // Halving line search keeps the trace monotone even when the scheduled
    // step overshoots (hinge kinks, badly scaled columns).
    double step = options.learning_rate / std::sqrt(static_cast<double>(epoch) + 1.0);
    bool accepted = false;
    for (int tries = 0; tries < 30 && !accepted; ++tries, step *= 0.5) {
      for (size_t j = 0; j < grad.size(); ++j) trial_w[j] = m.weights[j] - step * grad[j];
      const double trial_b = m.bias - step * bias_grad;
      const double trial_loss = loss_value(ds, kind, trial_w, trial_b, options.l2);
      if (trial_loss <= current) {
        m.weights = trial_w;
        m.bias = trial_b;
        current = trial_loss;
        accepted = true;
      }
    }
    m.loss_trace.push_back(current);
  }
  return m;
}

int predict_one(const LinearModel& m, std::span<const double> x) {
  if (x.size() != m.weights.size()) {
    raise(Errc::dimension_mismatch, "input dimension != model dimension");
  }
  return m.bias + dot_row(m.weights, x) >= 0 ? 1 : 0;
}

std::vector<int> predict(const LinearModel& m, const FeatureMatrix& X) {
  std::vector<int> out;
  out.reserve(X.rows());
  for (size_t i = 0; i < X.rows(); ++i) out.push_back(predict_one(m, X.row(i)));
  return out;
}

double micro_f1(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) raise(Errc::length_mismatch, "pred and truth must align");
  if (pred.empty()) raise(Errc::empty_input, "micro_f1 of empty input");
  uint64_t tp = 0, fp = 0, fn = 0;
  for (int cls : {0, 1}) {
    for (size_t i = 0; i < pred.size(); ++i) {
      const bool p = pred[i] == cls;
      const bool t = truth[i] == cls;
      tp += p && t;
      fp += p && !t;
      fn += !p && t;
    }
  }
  return 2.0 * static_cast<double>(tp) /
         (2.0 * static_cast<double>(tp) + static_cast<double>(fp) + static_cast<double>(fn));
}

Scaler Scaler::fit(const FeatureMatrix& X, std::span<const size_t> rows) {
  if (rows.empty()) raise(Errc::empty_input, "scaler needs at least one row");
  Scaler s;
  s.mean.assign(X.dim(), 0.0);
  s.stddev.assign(X.dim(), 0.0);
  for (size_t i : rows) {
    auto x = X.row(i);
    for (size_t j = 0; j < x.size(); ++j) s.mean[j] += x[j];
  }
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  for (double& m : s.mean) m *= inv_n;
  for (size_t i : rows) {
    auto x = X.row(i);
    for (size_t j = 0; j < x.size(); ++j) {
      const double d = x[j] - s.mean[j];
      s.stddev[j] += d * d;
    }
  }
  for (double& sd : s.stddev) {
    sd = std::sqrt(sd * inv_n);
    if (sd == 0) sd = 1.0;  // constant column passes through centered
  }
  return s;
}

void Scaler::apply(std::span<double> row) const {
  for (size_t j = 0; j < row.size(); ++j) row[j] = (row[j] - mean[j]) / stddev[j];
}

CvReport cross_validate(const Dataset& ds, ModelKind kind, const CvOptions& options) {
  check_dataset(ds);
  check_two_classes(ds.labels);
  if (options.k < 2) raise(Errc::config_error, "cross-validation needs k >= 2");
  if (options.repeats < 1) raise(Errc::config_error, "cross-validation needs repeats >= 1");

  std::vector<size_t> pos, neg;
  for (size_t i = 0; i < ds.labels.size(); ++i) (ds.labels[i] ? pos : neg).push_back(i);
  if (pos.size() < options.k || neg.size() < options.k) {
    raise(Errc::too_few_samples, "each class needs at least k=" + std::to_string(options.k) +
                                     " samples (have " + std::to_string(pos.size()) + " positive, " +
                                     std::to_string(neg.size()) + " negative)");
  }

  CvReport rep;
  rep.k = options.k;
  rep.repeats = options.repeats;
  rep.seed = options.seed;
  rep.standardize = options.standardize;
  rep.model = kind;
  rep.fit = options.fit;
  rep.scores.reserve(static_cast<size_t>(options.k) * options.repeats);

  for (uint32_t r = 0; r < options.repeats; ++r) {
    Rng rng(options.seed + r);
    auto pos_order = pos;
    auto neg_order = neg;
    rng.shuffle(pos_order);
    rng.shuffle(neg_order);

    std::vector<std::vector<size_t>> folds(options.k);
    for (size_t i = 0; i < pos_order.size(); ++i) folds[i % options.k].push_back(pos_order[i]);
    for (size_t i = 0; i < neg_order.size(); ++i) folds[i % options.k].push_back(neg_order[i]);

    for (uint32_t f = 0; f < options.k; ++f) {
      std::vector<size_t> train_rows;
      for (uint32_t other = 0; other < options.k; ++other) {
        if (other == f) continue;
        train_rows.insert(train_rows.end(), folds[other].begin(), folds[other].end());
      }
      const auto& test_rows = folds[f];

      Scaler scaler;
      if (options.standardize) scaler = Scaler::fit(ds.features, train_rows);

      std::vector<std::string> train_ids;
      train_ids.reserve(train_rows.size());
      for (size_t i : train_rows) train_ids.push_back(ds.features.id(i));
      Dataset train{FeatureMatrix(std::move(train_ids), ds.features.dim()), {}};
      train.labels.reserve(train_rows.size());
      for (size_t t = 0; t < train_rows.size(); ++t) {
        auto dst = train.features.row(t);
        auto src = ds.features.row(train_rows[t]);
        std::copy(src.begin(), src.end(), dst.begin());
        if (options.standardize) scaler.apply(dst);
        train.labels.push_back(ds.labels[train_rows[t]]);
      }

      LinearModel model = fit(train, kind, options.fit);

      std::vector<int> predicted, truth;
      predicted.reserve(test_rows.size());
      truth.reserve(test_rows.size());
      std::vector<double> x(ds.features.dim());
      for (size_t i : test_rows) {
        auto src = ds.features.row(i);
        std::copy(src.begin(), src.end(), x.begin());
        if (options.standardize) scaler.apply(x);
        predicted.push_back(predict_one(model, x));
        truth.push_back(ds.labels[i]);
      }
      rep.scores.push_back(micro_f1(predicted, truth));
    }
  }

  double sum = 0;
  for (double s : rep.scores) sum += s;
  rep.mean = sum / static_cast<double>(rep.scores.size());
  double var = 0;
  for (double s : rep.scores) {
    const double d = s - rep.mean;
    var += d * d;
  }
  rep.stddev = std::sqrt(var / static_cast<double>(rep.scores.size()));
  return rep;
}

std::string CvReport::to_json() const {
  nlohmann::json j;
  j["scores"] = scores;
  j["mean"] = mean;
  j["stddev"] = stddev;
  j["k"] = k;
  j["repeats"] = repeats;
  j["seed"] = seed;
  j["standardize"] = standardize;
  j["model"] = to_string(model);
  j["fit"] = {{"l2", fit.l2},
              {"epochs", fit.epochs},
              {"learning_rate", fit.learning_rate},
              {"seed", fit.seed}};
  return j.dump(2);
}

CvReport CvReport::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) raise(Errc::malformed_row, "invalid CV report JSON");
  CvReport rep;
  try {
    rep.scores = j.at("scores").get<std::vector<double>>();
    rep.mean = j.at("mean").get<double>();
    rep.stddev = j.at("stddev").get<double>();
    rep.k = j.at("k").get<uint32_t>();
    rep.repeats = j.at("repeats").get<uint32_t>();
    rep.seed = j.at("seed").get<uint64_t>();
    rep.standardize = j.at("standardize").get<bool>();
    rep.model = j.at("model").get<std::string>() == "svm" ? ModelKind::Hinge : ModelKind::Logistic;
    const auto& f = j.at("fit");
    rep.fit.l2 = f.at("l2").get<double>();
    rep.fit.epochs = f.at("epochs").get<uint32_t>();
    rep.fit.learning_rate = f.at("learning_rate").get<double>();
    rep.fit.seed = f.at("seed").get<uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::malformed_row, std::string("CV report JSON missing fields: ") + e.what());
  }
  return rep;
}

double gain(double raw_score, double aug_score) {
  if (raw_score <= 0) raise(Errc::division_by_zero, "gain needs a positive baseline score");
  return 100.0 * (aug_score - raw_score) / raw_score;
}

Dataset make_dataset(const FeatureMatrix& features,
                     const std::vector<std::pair<std::string, int>>& labels) {
  std::unordered_map<std::string, int> by_id;
  for (const auto& [id, z] : labels) {
    auto [it, inserted] = by_id.emplace(id, z);
    if (!inserted && it->second != z) {
      raise(Errc::malformed_row, "conflicting labels for '" + id + "'");
    }
  }
  std::vector<std::string> kept;
  std::vector<int> z;
  for (size_t i = 0; i < features.rows(); ++i) {
    auto it = by_id.find(features.id(i));
    if (it == by_id.end()) continue;
    kept.push_back(features.id(i));
    z.push_back(it->second);
  }
  if (kept.empty()) raise(Errc::empty_input, "no matrix row carries a label");
  Dataset ds{FeatureMatrix(kept, features.dim(), features.column_prefix()), std::move(z)};
  for (size_t i = 0; i < kept.size(); ++i) {
    auto src = features.row(*features.find(kept[i]));
    std::copy(src.begin(), src.end(), ds.features.row(i).begin());
  }
  return ds;
}

}  // namespace hfaug
