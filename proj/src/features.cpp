#include "hfaug/features.hpp"

#include <algorithm>
#include <cmath>

#include "hfaug/error.hpp"

namespace hfaug {

std::array<double, ManualFeatures::kCount> ManualFeatures::flatten() const {
  return {income_total, income_avg, income_max, income_var, expend_total,
          expend_avg,   expend_max, expend_var, expend_income_ratio, balance,
          n_sent,       n_received, gini_invest, gini_return, lifecycle};
}

const std::array<const char*, ManualFeatures::kCount>& ManualFeatures::names() {
  static const std::array<const char*, kCount> kNames = {
      "income_total", "income_avg", "income_max", "income_var", "expend_total",
      "expend_avg",   "expend_max", "expend_var", "expend_income_ratio", "balance",
      "n_sent",       "n_received", "gini_invest", "gini_return", "lifecycle"};
  return kNames;
}

double gini(std::span<const double> values) {
  if (values.empty()) return 0.0;
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (v < 0 || !std::isfinite(v)) {
      raise(Errc::negative_amount, "gini requires finite non-negative values");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double total = 0;
  double weighted = 0;  // sum of (j+1) * x_(j) over the sorted order
  for (size_t j = 0; j < sorted.size(); ++j) {
    total += sorted[j];
    weighted += static_cast<double>(j + 1) * sorted[j];
  }
  if (total == 0) return 0.0;
  // Equivalent to the mean-absolute-difference form on sorted data.
  return 2.0 * weighted / (n * total) - (n + 1.0) / n;
}

namespace {

struct Tally {
  Wei total = 0;
  Wei max = 0;
  size_t count = 0;
};

// Population variance of the amounts referenced by `edges`, two-pass in
// double. Exact integer totals keep the mean stable; squared deviations of
// wei values overflow 128 bits, hence the switch to floating point here.
template <class G>
double amount_variance(const G& g, std::span<const EdgeIndex> edges, Wei total) {
  if (edges.size() < 2) return 0.0;
  const double mean = wei_to_double(total) / static_cast<double>(edges.size());
  double acc = 0;
  for (EdgeIndex e : edges) {
    const double d = wei_to_double(g.edge(e).amount) - mean;
    acc += d * d;
  }
  return acc / static_cast<double>(edges.size());
}

template <class G>
double amount_gini(const G& g, std::span<const EdgeIndex> edges) {
  std::vector<double> amounts;
  amounts.reserve(edges.size());
  for (EdgeIndex e : edges) amounts.push_back(wei_to_double(g.edge(e).amount));
  return gini(amounts);
}

}  // namespace

template <class G>
ManualFeatures account_features(const G& g, NodeIndex v) {
  ManualFeatures f;
  auto in = g.trans_in(v);
  auto out = g.trans_out(v);

  Tally income, expend;
  int64_t first_ts = 0, last_ts = 0;
  bool any_ts = false;
  auto absorb = [&](Tally& t, EdgeIndex e) {
    const auto& edge = g.edge(e);
    t.total += edge.amount;
    t.max = std::max(t.max, edge.amount);
    ++t.count;
    if (!any_ts) {
      first_ts = last_ts = edge.timestamp;
      any_ts = true;
    } else {
      first_ts = std::min(first_ts, edge.timestamp);
      last_ts = std::max(last_ts, edge.timestamp);
    }
  };
  for (EdgeIndex e : in) absorb(income, e);
  for (EdgeIndex e : out) absorb(expend, e);

  f.income_total = wei_to_double(income.total);
  f.income_max = wei_to_double(income.max);
  f.income_avg = income.count ? f.income_total / static_cast<double>(income.count) : 0.0;
  f.income_var = amount_variance(g, in, income.total);

  f.expend_total = wei_to_double(expend.total);
  f.expend_max = wei_to_double(expend.max);
  f.expend_avg = expend.count ? f.expend_total / static_cast<double>(expend.count) : 0.0;
  f.expend_var = amount_variance(g, out, expend.total);

  f.expend_income_ratio = income.total != 0 ? f.expend_total / f.income_total : 0.0;
  f.balance = signed_wei_to_double(static_cast<SignedWei>(income.total) -
                                   static_cast<SignedWei>(expend.total));
  f.n_sent = static_cast<double>(expend.count);
  f.n_received = static_cast<double>(income.count);
  f.gini_invest = amount_gini(g, in);
  f.gini_return = amount_gini(g, out);
  f.lifecycle = any_ts ? static_cast<double>(last_ts - first_ts) : 0.0;
  return f;
}

template <class G>
FeatureMatrix feature_matrix(const G& g, std::span<const NodeIndex> nodes) {
  std::vector<std::string> ids;
  ids.reserve(nodes.size());
  for (NodeIndex v : nodes) ids.push_back(g.address(v));
  FeatureMatrix m(std::move(ids), ManualFeatures::kCount, "f");
  for (size_t i = 0; i < nodes.size(); ++i) {
    auto values = account_features(g, nodes[i]).flatten();
    auto dst = m.row(i);
    std::copy(values.begin(), values.end(), dst.begin());
  }
  return m;
}

template <class G>
FeatureMatrix feature_matrix(const G& g, const std::vector<std::string>& ids) {
  std::vector<NodeIndex> nodes;
  nodes.reserve(ids.size());
  for (const auto& id : ids) nodes.push_back(g.require(id));
  return feature_matrix(g, std::span<const NodeIndex>(nodes));
}

template ManualFeatures account_features<HetGraph>(const HetGraph&, NodeIndex);
template ManualFeatures account_features<HomGraph>(const HomGraph&, NodeIndex);
template FeatureMatrix feature_matrix<HetGraph>(const HetGraph&, std::span<const NodeIndex>);
template FeatureMatrix feature_matrix<HomGraph>(const HomGraph&, std::span<const NodeIndex>);
template FeatureMatrix feature_matrix<HetGraph>(const HetGraph&, const std::vector<std::string>&);
template FeatureMatrix feature_matrix<HomGraph>(const HomGraph&, const std::vector<std::string>&);

}  // namespace hfaug
