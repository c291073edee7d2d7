#pragma once

#include <array>
#include <span>
#include <vector>

#include "hfaug/graph.hpp"
#include "hfaug/matrix.hpp"

namespace hfaug {

/// The 15 account statistics computed from trans edges. Call edges never
/// contribute, so the values agree between a HetGraph and its projection.
struct ManualFeatures {
  double income_total = 0;
  double income_avg = 0;
  double income_max = 0;
  double income_var = 0;  // population variance
  double expend_total = 0;
  double expend_avg = 0;
  double expend_max = 0;
  double expend_var = 0;
  double expend_income_ratio = 0;  // 0 when income_total is 0
  double balance = 0;              // income - expend, may be negative
  double n_sent = 0;
  double n_received = 0;
  double gini_invest = 0;  // over incoming amounts
  double gini_return = 0;  // over outgoing amounts
  double lifecycle = 0;    // seconds between first and last incident trans

  static constexpr size_t kCount = 15;
  std::array<double, kCount> flatten() const;
  static const std::array<const char*, kCount>& names();
};

/// Gini coefficient in mean-absolute-difference form:
///   G = sum_i sum_j |x_i - x_j| / (2 n^2 mean).
/// Empty or all-zero input yields 0 so isolated accounts stay finite.
/// Negative values are rejected.
double gini(std::span<const double> values);

template <class G>
ManualFeatures account_features(const G& g, NodeIndex v);

template <class G>
FeatureMatrix feature_matrix(const G& g, std::span<const NodeIndex> nodes);

template <class G>
FeatureMatrix feature_matrix(const G& g, const std::vector<std::string>& ids);

}  // namespace hfaug
