#include "hfaug/augment.hpp"

#include <algorithm>
#include <cstring>

#include <json.hpp>

#include "hfaug/error.hpp"

namespace hfaug {

size_t target_ca_anchor(const MetapathPattern& p) {
  for (size_t pos = 0; pos <= p.length(); ++pos) {
    if (p.kind_at(pos) == AccountKind::Ca) return pos;
  }
  raise(Errc::kind_incompatible, "pattern '" + p.name + "' has no CA position to anchor on");
}

namespace {

const char* mode_name(AugMode m) { return m == AugMode::TargetCa ? "target-ca" : "head-node"; }
const char* agg_name(AggKind a) { return a == AggKind::Sum ? "sum" : "mean"; }

struct PatternMatches {
  size_t anchor_pos;
  MatchResult result;
};

// Instances for one target under the configured mode. HEAD_NODE silently
// skips patterns whose head kind differs from the target's kind.
std::vector<PatternMatches> collect(const HetGraph& g, NodeIndex v, const AugmentationConfig& cfg) {
  std::vector<PatternMatches> out;
  for (const auto& p : cfg.patterns) {
    if (cfg.mode == AugMode::TargetCa) {
      size_t anchor = target_ca_anchor(p);
      out.push_back({anchor, match_anchored(g, v, p, anchor, cfg.limits)});
    } else if (p.head_kind == g.kind(v)) {
      out.push_back({0, match_from(g, v, p, cfg.limits)});
    }
  }
  return out;
}

}  // namespace

std::vector<double> augment_node(const HetGraph& g, const FeatureMatrix& feats, NodeIndex v,
                                 const AugmentationConfig& cfg, NodeAugStats* stats) {
  if (cfg.patterns.empty()) raise(Errc::config_error, "augmentation needs at least one pattern");
  const std::string& addr = g.address(v);
  auto base_row = feats.find(addr);
  if (!base_row) raise(Errc::unknown_account, "'" + addr + "' is not in the feature matrix");
  if (cfg.mode == AugMode::TargetCa && g.kind(v) != AccountKind::Ca) {
    raise(Errc::kind_incompatible, "target-ca augmentation requires CA targets; '" + addr + "' is EOA");
  }

  NodeAugStats scratch;
  NodeAugStats& st = stats ? *stats : scratch;
  st = NodeAugStats{};

  auto matches = collect(g, v, cfg);
  for (const auto& m : matches) {
    st.truncated = st.truncated || m.result.truncated;
    for (const auto& inst : m.result.instances) {
      if (inst.nodes.size() >= 2) ++st.instances;
    }
  }

  auto base = feats.row(*base_row);
  // Without an instance reaching a second position there is nothing to
  // aggregate; the row is copied untouched (no arithmetic, so an exact
  // fixpoint even under MEAN).
  if (st.instances == 0) return {base.begin(), base.end()};

  std::vector<double> sum(base.begin(), base.end());  // the target's own term
  uint64_t terms = 1;
  auto add_term = [&](NodeIndex u) {
    ++terms;
    if (auto row = feats.find(g.address(u))) {
      auto src = feats.row(*row);
      for (size_t j = 0; j < sum.size(); ++j) sum[j] += src[j];
    } else {
      ++st.missing_features;
    }
  };

  if (cfg.dedupe) {
    // One term per distinct node across every instance of every pattern;
    // the target itself is already covered by the base term.
    std::vector<NodeIndex> pool;
    for (const auto& m : matches) {
      for (const auto& inst : m.result.instances) {
        pool.insert(pool.end(), inst.nodes.begin(), inst.nodes.end());
      }
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    for (NodeIndex u : pool) {
      if (u != v) add_term(u);
    }
  } else {
    // Every occurrence counts except the anchor slot, which the base term
    // stands in for; summing per-pattern results then matches summing the
    // union config up to the shared base.
    for (const auto& m : matches) {
      for (const auto& inst : m.result.instances) {
        const size_t anchor_idx = m.anchor_pos - inst.offset;
        for (size_t i = 0; i < inst.nodes.size(); ++i) {
          if (i != anchor_idx) add_term(inst.nodes[i]);
        }
      }
    }
  }

  if (cfg.agg == AggKind::Mean) {
    for (double& x : sum) x /= static_cast<double>(terms);
  }
  st.changed = std::memcmp(sum.data(), base.data(), sum.size() * sizeof(double)) != 0;
  return sum;
}

FeatureMatrix augment_matrix(const HetGraph& g, const FeatureMatrix& feats,
                             std::span<const std::string> targets, const AugmentationConfig& cfg,
                             AugmentReport* report) {
  FeatureMatrix out = feats;
  AugmentReport rep;
  for (const auto& id : targets) {
    NodeIndex v = g.require(id);
    auto row = out.find(id);
    if (!row) raise(Errc::unknown_account, "target '" + id + "' is not in the feature matrix");
    NodeAugStats st;
    auto updated = augment_node(g, feats, v, cfg, &st);
    std::copy(updated.begin(), updated.end(), out.row(*row).begin());
    rep.nodes.emplace_back(id, st);
    rep.total_instances += st.instances;
    rep.truncated_targets += st.truncated ? 1 : 0;
    rep.missing_feature_refs += st.missing_features;
    rep.unchanged_targets += st.changed ? 0 : 1;
  }
  if (report) *report = std::move(rep);
  return out;
}

std::string report_to_json(const AugmentReport& report, const AugmentationConfig& cfg) {
  nlohmann::json j;
  j["mode"] = mode_name(cfg.mode);
  auto patterns = nlohmann::json::array();
  for (const auto& p : cfg.patterns) patterns.push_back(p.name.empty() ? p.spec_string() : p.name);
  j["patterns"] = std::move(patterns);
  j["dedupe"] = cfg.dedupe;
  j["agg"] = agg_name(cfg.agg);
  j["max_instances"] = cfg.limits.max_instances;
  j["totals"] = {{"targets", report.nodes.size()},
                 {"instances", report.total_instances},
                 {"truncated_targets", report.truncated_targets},
                 {"missing_feature_refs", report.missing_feature_refs},
                 {"unchanged_targets", report.unchanged_targets}};
  auto nodes = nlohmann::json::array();
  for (const auto& [id, st] : report.nodes) {
    nodes.push_back({{"id", id},
                     {"instances", st.instances},
                     {"missing_features", st.missing_features},
                     {"truncated", st.truncated},
                     {"changed", st.changed}});
  }
  j["nodes"] = std::move(nodes);
  return j.dump(2);
}

}  // namespace hfaug
