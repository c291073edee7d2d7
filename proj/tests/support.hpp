// Shared helpers for the test binaries: tiny graph builders, brute-force
// reference implementations (kept deliberately naive and separate from the
// library code paths), and a scratch-directory guard.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hfaug/augment.hpp"
#include "hfaug/features.hpp"
#include "hfaug/graph.hpp"
#include "hfaug/metapath.hpp"
#include "hfaug/rng.hpp"

namespace testsup {

using namespace hfaug;

inline AccountRecord acct(std::string address, AccountKind kind) {
  return AccountRecord{std::move(address), kind};
}

inline EdgeRecord edge(std::string src, std::string dst, EdgeType t, uint64_t amount = 0,
                       int64_t ts = 0) {
  return EdgeRecord{std::move(src), std::move(dst), t, amount, ts};
}

inline LabelRecord lab(std::string address, Label l) { return LabelRecord{std::move(address), l}; }

inline HetGraph graph_of(const std::vector<AccountRecord>& accounts,
                         const std::vector<EdgeRecord>& edges,
                         const std::vector<LabelRecord>& labels = {}) {
  return HetGraph::build(accounts, edges, labels);
}

// Scratch directory under the system temp root; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    auto base = std::filesystem::temp_directory_path() / ("hfaug_test_" + tag);
    std::filesystem::remove_all(base);
    std::filesystem::create_directories(base);
    path_ = base;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// ---- reference implementations ------------------------------------------

// Gini via the mean-absolute-difference definition, O(n^2).
inline double oracle_gini(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double sum = 0, diff = 0;
  for (double x : xs) sum += x;
  if (sum == 0) return 0.0;
  for (double a : xs)
    for (double b : xs) diff += std::fabs(a - b);
  const double n = static_cast<double>(xs.size());
  return diff / (2.0 * n * sum);
}

// Distinct neighbors by a raw scan over the edge list, sorted by address.
// Independent of the graph's CSR indexes on purpose.
inline std::vector<NodeIndex> oracle_neighbors(const HetGraph& g, NodeIndex v, EdgeType t,
                                               bool forward) {
  std::vector<NodeIndex> out;
  for (const auto& e : g.edges()) {
    if (e.etype != t) continue;
    if (forward && e.src == v) out.push_back(e.dst);
    if (!forward && e.dst == v) out.push_back(e.src);
  }
  std::sort(out.begin(), out.end(),
            [&](NodeIndex a, NodeIndex b) { return g.address(a) < g.address(b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct OracleInstance {
  std::vector<NodeIndex> nodes;
  uint32_t offset = 0;
  bool complete = false;

  bool operator==(const OracleInstance&) const = default;
  bool operator<(const OracleInstance& o) const {
    return std::tie(offset, complete, nodes) < std::tie(o.offset, o.complete, o.nodes);
  }
};

// All full walks realizing the pattern from `start`; when none exist, every
// extension-free prefix instead. Plain recursion, no caps.
inline std::vector<OracleInstance> oracle_match_from(const HetGraph& g, NodeIndex start,
                                                     const MetapathPattern& p) {
  std::vector<OracleInstance> completes, partials;
  std::vector<NodeIndex> path{start};
  auto rec = [&](auto&& self, size_t pos) -> void {
    if (pos == p.length()) {
      completes.push_back({path, 0, true});
      return;
    }
    std::vector<NodeIndex> next;
    for (NodeIndex u : oracle_neighbors(g, path.back(), p.steps[pos].edge_type, true))
      if (g.kind(u) == p.steps[pos].dst_kind) next.push_back(u);
    if (next.empty()) {
      partials.push_back({path, 0, false});
      return;
    }
    for (NodeIndex u : next) {
      path.push_back(u);
      self(self, pos + 1);
      path.pop_back();
    }
  };
  if (g.kind(start) != p.head_kind) return {};
  rec(rec, 0);
  return completes.empty() ? partials : completes;
}

// Backward segments ending at `target` (pattern position `anchor`): full
// coverage back to position 0 when reachable, else extension-free backward
// prefixes with their offsets.
inline std::vector<OracleInstance> oracle_backward(const HetGraph& g, NodeIndex target,
                                                   const MetapathPattern& p, size_t anchor) {
  std::vector<OracleInstance> fulls, partials;
  std::vector<NodeIndex> tail{target};  // front() sits at position `pos`
  auto rec = [&](auto&& self, size_t pos) -> void {
    if (pos == 0) {
      fulls.push_back({tail, 0, false});
      return;
    }
    std::vector<NodeIndex> preds;
    for (NodeIndex u : oracle_neighbors(g, tail.front(), p.steps[pos - 1].edge_type, false))
      if (g.kind(u) == p.kind_at(pos - 1)) preds.push_back(u);
    if (preds.empty()) {
      partials.push_back({tail, static_cast<uint32_t>(pos), false});
      return;
    }
    for (NodeIndex u : preds) {
      tail.insert(tail.begin(), u);
      self(self, pos - 1);
      tail.erase(tail.begin());
    }
  };
  rec(rec, anchor);
  return fulls.empty() ? partials : fulls;
}

// Forward segments from `target` covering positions >= anchor.
inline std::vector<OracleInstance> oracle_forward(const HetGraph& g, NodeIndex target,
                                                  const MetapathPattern& p, size_t anchor) {
  std::vector<OracleInstance> completes, partials;
  std::vector<NodeIndex> path{target};
  auto rec = [&](auto&& self, size_t pos) -> void {
    if (pos == p.length()) {
      completes.push_back({path, 0, true});
      return;
    }
    std::vector<NodeIndex> next;
    for (NodeIndex u : oracle_neighbors(g, path.back(), p.steps[pos].edge_type, true))
      if (g.kind(u) == p.steps[pos].dst_kind) next.push_back(u);
    if (next.empty()) {
      partials.push_back({path, 0, false});
      return;
    }
    for (NodeIndex u : next) {
      path.push_back(u);
      self(self, pos + 1);
      path.pop_back();
    }
  };
  rec(rec, anchor);
  return completes.empty() ? partials : completes;
}

inline std::vector<OracleInstance> oracle_match_anchored(const HetGraph& g, NodeIndex target,
                                                         const MetapathPattern& p, size_t anchor) {
  if (g.kind(target) != p.kind_at(anchor)) return {};
  if (anchor == 0) return oracle_match_from(g, target, p);
  auto back = oracle_backward(g, target, p, anchor);
  auto fwd = oracle_forward(g, target, p, anchor);
  std::vector<OracleInstance> out;
  for (const auto& b : back) {
    for (const auto& f : fwd) {
      OracleInstance inst;
      inst.nodes = b.nodes;
      inst.nodes.insert(inst.nodes.end(), f.nodes.begin() + 1, f.nodes.end());
      inst.offset = b.offset;
      inst.complete = inst.offset == 0 && inst.nodes.size() == p.length() + 1;
      out.push_back(std::move(inst));
    }
  }
  return out;
}

inline std::vector<OracleInstance> as_oracle(const MatchResult& r) {
  std::vector<OracleInstance> out;
  for (const auto& inst : r.instances) out.push_back({inst.nodes, inst.offset, inst.complete});
  return out;
}

inline std::vector<OracleInstance> sorted(std::vector<OracleInstance> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Feature augmentation straight from its definition, driven by the oracle
// matcher: base row plus instance-node contributions.
inline std::vector<double> oracle_augment(const HetGraph& g, const FeatureMatrix& feats,
                                          NodeIndex v, const AugmentationConfig& cfg) {
  std::vector<std::pair<const MetapathPattern*, size_t>> work;  // pattern, anchor
  for (const auto& p : cfg.patterns) {
    if (cfg.mode == AugMode::TargetCa) {
      work.emplace_back(&p, target_ca_anchor(p));
    } else if (p.head_kind == g.kind(v)) {
      work.emplace_back(&p, 0);
    }
  }
  auto base_row = feats.row(*feats.find(g.address(v)));
  std::vector<double> x(base_row.begin(), base_row.end());
  if (work.empty()) return x;

  struct Occurrence {
    NodeIndex node;
    bool anchor;
  };
  std::vector<Occurrence> occurrences;
  std::vector<NodeIndex> pool;
  size_t nontrivial = 0;
  for (auto [p, anchor] : work) {
    for (const auto& inst : oracle_match_anchored(g, v, *p, anchor)) {
      if (inst.nodes.size() < 2) continue;
      ++nontrivial;
      for (size_t i = 0; i < inst.nodes.size(); ++i) {
        occurrences.push_back({inst.nodes[i], i == anchor - inst.offset});
        pool.push_back(inst.nodes[i]);
      }
    }
  }
  if (nontrivial == 0) return x;

  size_t terms = 1;
  auto add = [&](NodeIndex u) {
    ++terms;
    if (auto row = feats.find(g.address(u))) {
      auto r = feats.row(*row);
      for (size_t c = 0; c < x.size(); ++c) x[c] += r[c];
    }
  };
  if (cfg.dedupe) {
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    for (NodeIndex u : pool)
      if (u != v) add(u);
  } else {
    for (const auto& occ : occurrences)
      if (!occ.anchor) add(occ.node);
  }
  if (cfg.agg == AggKind::Mean)
    for (double& c : x) c /= static_cast<double>(terms);
  return x;
}

// Upper regularized incomplete gamma Q(a, x): series for x < a + 1,
// continued fraction otherwise. Used for chi-square tail probabilities.
inline double gamma_q(double a, double x) {
  if (x < 0 || a <= 0) return 1.0;
  if (x == 0) return 1.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
  }
  double b = x + 1.0 - a, c = 1e308, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - gln) * h;
}

inline double chi2_pvalue(double stat, double dof) { return gamma_q(dof / 2.0, stat / 2.0); }

// Random mixed-kind multigraph for property tests. Call edges only target
// contracts, so the result always satisfies the build invariants.
inline HetGraph random_graph(Rng& rng, size_t max_nodes, size_t max_edges) {
  const size_t n = 2 + rng.index(max_nodes > 2 ? max_nodes - 1 : 1);
  std::vector<AccountRecord> accounts;
  std::vector<NodeIndex> cas;
  char buf[64];
  for (size_t i = 0; i < n; ++i) {
    const bool ca = rng.bernoulli(0.5);
    std::snprintf(buf, sizeof buf, "0x%038zx", i);
    accounts.push_back({buf, ca ? AccountKind::Ca : AccountKind::Eoa});
    if (ca) cas.push_back(static_cast<NodeIndex>(i));
  }
  std::vector<EdgeRecord> edges;
  const size_t m = rng.index(max_edges + 1);
  for (size_t i = 0; i < m; ++i) {
    const bool call = !cas.empty() && rng.bernoulli(0.4);
    const size_t src = rng.index(n);
    const size_t dst = call ? cas[rng.index(cas.size())] : rng.index(n);
    edges.push_back({accounts[src].address, accounts[dst].address,
                     call ? EdgeType::Call : EdgeType::Trans, rng.below(1'000'000),
                     static_cast<int64_t>(rng.below(1'000'000))});
  }
  return HetGraph::build(accounts, edges, {});
}

}  // namespace testsup
