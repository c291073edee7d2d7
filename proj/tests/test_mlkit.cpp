#include <doctest.h>

#include <cmath>
#include <functional>

#include "hfaug/error.hpp"
#include "hfaug/mlkit.hpp"
#include "support.hpp"

using namespace hfaug;
using namespace testsup;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::internal_error;
}

FeatureMatrix matrix_of(const std::vector<std::vector<double>>& rows, std::string prefix = "f") {
  std::vector<std::string> ids;
  for (size_t i = 0; i < rows.size(); ++i) ids.push_back("0xr" + std::to_string(i));
  FeatureMatrix m(ids, rows.empty() ? 0 : rows[0].size(), std::move(prefix));
  for (size_t i = 0; i < rows.size(); ++i) {
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

Dataset random_dataset(Rng& rng, size_t rows, size_t dim) {
  std::vector<std::vector<double>> data(rows, std::vector<double>(dim));
  std::vector<int> labels(rows);
  for (size_t i = 0; i < rows; ++i) {
    for (double& x : data[i]) x = rng.real01() * 4 - 2;
    labels[i] = i < 2 ? static_cast<int>(i) : static_cast<int>(rng.below(2));
  }
  return {matrix_of(data), std::move(labels)};
}

// two well-separated clouds in 2d
Dataset separable() {
  return {matrix_of({{2, 2}, {3, 1}, {2.5, 3}, {-2, -1}, {-3, -2}, {-1, -2}}),
          {1, 1, 1, 0, 0, 0}};
}

}  // namespace

TEST_CASE("micro_f1 equals accuracy for binary single-label input") {
  std::vector<int> pred{1, 0, 1, 1}, truth{1, 0, 0, 1};
  CHECK(micro_f1(pred, truth) == doctest::Approx(0.75).epsilon(1e-15));

  Rng rng(5150);
  for (int round = 0; round < 200; ++round) {
    const size_t n = 1 + rng.index(12);
    std::vector<int> p(n), t(n);
    size_t agree = 0;
    for (size_t i = 0; i < n; ++i) {
      p[i] = static_cast<int>(rng.below(2));
      t[i] = static_cast<int>(rng.below(2));
      agree += p[i] == t[i];
    }
    CHECK(micro_f1(p, t) ==
          doctest::Approx(static_cast<double>(agree) / static_cast<double>(n)).epsilon(1e-15));
  }

  std::vector<int> shorter{1};
  CHECK(code_of([&] { micro_f1(shorter, truth); }) == Errc::length_mismatch);
  std::vector<int> none;
  CHECK(code_of([&] { micro_f1(none, none); }) == Errc::empty_input);
}

TEST_CASE("analytic gradients match central differences") {
  Rng rng(31337);
  const double l2 = 0.01;
  int hinge_rounds = 0;
  for (int round = 0; round < 40; ++round) {
    auto ds = random_dataset(rng, 8, 4);
    std::vector<double> w(4);
    for (double& x : w) x = rng.real01() * 2 - 1;
    const double b = rng.real01() * 2 - 1;

    for (auto kind : {ModelKind::Logistic, ModelKind::Hinge}) {
      if (kind == ModelKind::Hinge) {
        // skip draws that sit on the hinge kink, where the subgradient and
        // the finite difference legitimately disagree
        bool near_kink = false;
        for (size_t i = 0; i < ds.features.rows(); ++i) {
          auto x = ds.features.row(i);
          double s = b;
          for (size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
          const double y = ds.labels[i] ? 1.0 : -1.0;
          if (std::fabs(1.0 - y * s) < 1e-3) near_kink = true;
        }
        if (near_kink) continue;
        ++hinge_rounds;
      }
      std::vector<double> grad(4);
      double bias_grad = 0;
      loss_gradient(ds, kind, w, b, l2, grad, &bias_grad);

      auto check = [&](double analytic, double fd) {
        const double err = std::fabs(analytic - fd) / std::max(1.0, std::fabs(fd));
        REQUIRE(err < 1e-5);
      };
      for (size_t j = 0; j < w.size(); ++j) {
        const double h = 1e-6 * std::max(1.0, std::fabs(w[j]));
        auto wp = w, wm = w;
        wp[j] += h;
        wm[j] -= h;
        check(grad[j],
              (loss_value(ds, kind, wp, b, l2) - loss_value(ds, kind, wm, b, l2)) / (2 * h));
      }
      const double h = 1e-6;
      check(bias_grad,
            (loss_value(ds, kind, w, b + h, l2) - loss_value(ds, kind, w, b - h, l2)) / (2 * h));
    }
  }
  CHECK(hinge_rounds > 20);  // the kink skip must stay rare
}

TEST_CASE("loss and gradient argument validation") {
  auto ds = separable();
  std::vector<double> short_w{1.0};
  CHECK(code_of([&] { loss_value(ds, ModelKind::Logistic, short_w, 0, 0); }) ==
        Errc::dimension_mismatch);
  std::vector<double> w{1, 1}, grad(1);
  CHECK(code_of([&] {
          loss_gradient(ds, ModelKind::Logistic, w, 0, 0, grad, nullptr);
        }) == Errc::dimension_mismatch);
  Dataset empty;
  CHECK(code_of([&] { loss_value(empty, ModelKind::Logistic, {}, 0, 0); }) == Errc::empty_input);
  Dataset skewed = separable();
  skewed.labels.pop_back();
  CHECK(code_of([&] { loss_value(skewed, ModelKind::Logistic, w, 0, 0); }) ==
        Errc::length_mismatch);
}

TEST_CASE("fit: monotone objective, separable data solved") {
  auto ds = separable();
  for (auto kind : {ModelKind::Logistic, ModelKind::Hinge}) {
    FitOptions opt;
    opt.epochs = 150;
    opt.learning_rate = 0.5;
    auto model = fit(ds, kind, opt);
    REQUIRE(model.loss_trace.size() == opt.epochs);
    for (size_t i = 1; i < model.loss_trace.size(); ++i) {
      REQUIRE(model.loss_trace[i] <= model.loss_trace[i - 1]);
    }
    CHECK(model.loss_trace.back() < model.loss_trace.front());
    CHECK(predict(model, ds.features) == ds.labels);
  }
}

TEST_CASE("fit rejects bad configs and degenerate data") {
  auto ds = separable();
  FitOptions opt;
  opt.epochs = 0;
  CHECK(code_of([&] { fit(ds, ModelKind::Logistic, opt); }) == Errc::config_error);
  opt = FitOptions{};
  opt.learning_rate = 0;
  CHECK(code_of([&] { fit(ds, ModelKind::Logistic, opt); }) == Errc::config_error);
  opt = FitOptions{};
  opt.l2 = -1;
  CHECK(code_of([&] { fit(ds, ModelKind::Logistic, opt); }) == Errc::config_error);

  Dataset one_class{matrix_of({{1, 0}, {0, 1}}), {1, 1}};
  CHECK(code_of([&] { fit(one_class, ModelKind::Logistic); }) == Errc::single_class_data);
}

TEST_CASE("the decision boundary belongs to the positive class") {
  LinearModel m;
  m.weights = {0.0, 0.0};
  m.bias = 0.0;
  std::vector<double> x{3.0, -4.0};
  CHECK(predict_one(m, x) == 1);
  std::vector<double> wrong{1.0};
  CHECK(code_of([&] { predict_one(m, wrong); }) == Errc::dimension_mismatch);
}

TEST_CASE("scaler: train-row statistics, constant columns pass through") {
  auto X = matrix_of({{1, 5, 7}, {3, 5, 11}, {100, 5, -1}});
  std::vector<size_t> rows{0, 1};
  auto s = Scaler::fit(X, rows);
  CHECK(s.mean[0] == doctest::Approx(2.0));
  CHECK(s.stddev[0] == doctest::Approx(1.0));
  CHECK(s.mean[1] == doctest::Approx(5.0));
  CHECK(s.stddev[1] == 1.0);  // zero variance
  CHECK(s.stddev[2] == doctest::Approx(2.0));

  std::vector<double> row{3, 5, 11};
  s.apply(row);
  CHECK(row[0] == doctest::Approx(1.0));
  CHECK(row[1] == 0.0);
  CHECK(row[2] == doctest::Approx(1.0));

  CHECK(code_of([&] { Scaler::fit(X, {}); }) == Errc::empty_input);
}

TEST_CASE("cross_validate: shape, determinism, and reported moments") {
  Rng rng(2024);
  auto ds = random_dataset(rng, 30, 3);
  CvOptions cv;
  cv.k = 3;
  cv.repeats = 4;
  cv.seed = 9;
  cv.fit.epochs = 40;

  auto a = cross_validate(ds, ModelKind::Logistic, cv);
  REQUIRE(a.scores.size() == 12);
  CHECK(a.k == 3);
  CHECK(a.repeats == 4);
  double mean = 0;
  for (double s : a.scores) mean += s;
  mean /= 12;
  CHECK(a.mean == doctest::Approx(mean).epsilon(1e-15));
  double var = 0;
  for (double s : a.scores) var += (s - mean) * (s - mean);
  CHECK(a.stddev == doctest::Approx(std::sqrt(var / 12)).epsilon(1e-12));

  auto b = cross_validate(ds, ModelKind::Logistic, cv);
  CHECK(a.scores == b.scores);
  cv.seed = 10;
  auto c = cross_validate(ds, ModelKind::Logistic, cv);
  CHECK(a.scores != c.scores);
}

TEST_CASE("cross_validate input contracts") {
  auto ds = separable();  // 3 per class
  CvOptions cv;
  cv.k = 5;
  CHECK(code_of([&] { cross_validate(ds, ModelKind::Logistic, cv); }) == Errc::too_few_samples);
  cv.k = 1;
  CHECK(code_of([&] { cross_validate(ds, ModelKind::Logistic, cv); }) == Errc::config_error);
  cv = CvOptions{};
  cv.repeats = 0;
  CHECK(code_of([&] { cross_validate(ds, ModelKind::Logistic, cv); }) == Errc::config_error);

  Dataset flat{matrix_of({{1}, {2}, {3}}), {0, 0, 0}};
  CHECK(code_of([&] { cross_validate(flat, ModelKind::Logistic); }) == Errc::single_class_data);
}

TEST_CASE("stratified folds: 5+5 with k=5 tests two rows per fold") {
  Rng rng(88);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 10; ++i) {
    rows.push_back({rng.real01(), rng.real01()});
    labels.push_back(i % 2);
  }
  Dataset ds{matrix_of(rows), labels};
  CvOptions cv;
  cv.k = 5;
  cv.repeats = 3;
  cv.fit.epochs = 20;
  auto rep = cross_validate(ds, ModelKind::Hinge, cv);
  // one positive and one negative land in every fold, so each held-out
  // score is over exactly two samples
  for (double s : rep.scores) {
    CHECK((s == 0.0 || s == 0.5 || s == 1.0));
  }
}

TEST_CASE("standardization cancels power-of-two column rescaling exactly") {
  Rng rng(4096);
  auto ds = random_dataset(rng, 24, 3);
  auto scaled = ds;
  for (size_t i = 0; i < scaled.features.rows(); ++i) scaled.features.row(i)[1] *= 4.0;

  CvOptions cv;
  cv.k = 3;
  cv.repeats = 2;
  cv.fit.epochs = 30;
  auto a = cross_validate(ds, ModelKind::Logistic, cv);
  auto b = cross_validate(scaled, ModelKind::Logistic, cv);
  CHECK(a.scores == b.scores);
}

TEST_CASE("cv report json round trip") {
  Rng rng(7);
  auto ds = random_dataset(rng, 15, 2);
  CvOptions cv;
  cv.k = 2;
  cv.repeats = 2;
  cv.seed = 77;
  cv.fit.epochs = 10;
  auto rep = cross_validate(ds, ModelKind::Hinge, cv);

  auto back = CvReport::from_json(rep.to_json());
  CHECK(back.scores == rep.scores);
  CHECK(back.mean == rep.mean);
  CHECK(back.stddev == rep.stddev);
  CHECK(back.k == rep.k);
  CHECK(back.repeats == rep.repeats);
  CHECK(back.seed == rep.seed);
  CHECK(back.standardize == rep.standardize);
  CHECK(back.model == ModelKind::Hinge);
  CHECK(back.fit.epochs == rep.fit.epochs);

  CHECK(code_of([] { CvReport::from_json("not json"); }) == Errc::malformed_row);
  CHECK(code_of([] { CvReport::from_json("[]"); }) == Errc::malformed_row);
  CHECK(code_of([] { CvReport::from_json(R"({"mean": 1})"); }) == Errc::malformed_row);
}

TEST_CASE("gain in percent against the raw baseline") {
  CHECK(gain(65.73, 71.72) == doctest::Approx(9.11).epsilon(0.001));
  CHECK(gain(77.23, 74.61) == doctest::Approx(-3.39).epsilon(0.001));
  CHECK(gain(50.0, 50.0) == 0.0);
  CHECK(code_of([] { gain(0.0, 10.0); }) == Errc::division_by_zero);
  CHECK(code_of([] { gain(-1.0, 10.0); }) == Errc::division_by_zero);
}

TEST_CASE("make_dataset keeps labeled rows in matrix order") {
  auto X = matrix_of({{1, 2}, {3, 4}, {5, 6}});  // ids 0xr0, 0xr1, 0xr2
  std::vector<std::pair<std::string, int>> labels{
      {"0xr2", 0}, {"0xr0", 1}, {"0xghost", 1}, {"0xr0", 1}};
  auto ds = make_dataset(X, labels);
  REQUIRE(ds.features.rows() == 2);
  CHECK(ds.features.id(0) == "0xr0");
  CHECK(ds.features.id(1) == "0xr2");
  CHECK(ds.labels == std::vector<int>{1, 0});
  CHECK(ds.features.row(0)[1] == 2);
  CHECK(ds.features.row(1)[0] == 5);
  CHECK(ds.features.column_prefix() == "f");

  std::vector<std::pair<std::string, int>> conflict{{"0xr0", 1}, {"0xr0", 0}};
  CHECK(code_of([&] { make_dataset(X, conflict); }) == Errc::malformed_row);
  std::vector<std::pair<std::string, int>> strangers{{"0xzz", 1}};
  CHECK(code_of([&] { make_dataset(X, strangers); }) == Errc::empty_input);
}
