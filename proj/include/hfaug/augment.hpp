#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hfaug/matrix.hpp"
#include "hfaug/metapath.hpp"

namespace hfaug {

enum class AugMode : uint8_t {
  // Instances are anchored at the pattern's first CA position (P1 -> 0,
  // P2 -> 1); targets must be contract accounts. Every configured pattern
  // contributes.
  TargetCa,
  // Instances start at the target (anchor 0); each pattern applies to the
  // node kind matching its head (P1 -> CA, P2 -> EOA). Targets with no
  // kind-compatible pattern pass through unchanged.
  HeadNode,
};

enum class AggKind : uint8_t { Sum, Mean };

struct AugmentationConfig {
  AugMode mode = AugMode::TargetCa;
  std::vector<MetapathPattern> patterns;  // non-empty
  MatchLimits limits;
  bool dedupe = true;
  AggKind agg = AggKind::Sum;
};

struct NodeAugStats {
  uint64_t instances = 0;         // matched instances covering >= 2 positions
  uint64_t missing_features = 0;  // instance nodes absent from the matrix
  bool truncated = false;
  bool changed = false;
};

struct AugmentReport {
  std::vector<std::pair<std::string, NodeAugStats>> nodes;  // target order
  uint64_t total_instances = 0;
  uint64_t truncated_targets = 0;
  uint64_t missing_feature_refs = 0;
  uint64_t unchanged_targets = 0;
};

/// Aggregated feature vector for v per the configured mode:
///
///   x' = x_v + sum of x_u over instance nodes
///
/// With dedupe, instance nodes are merged into a set (v counted once);
/// without it every non-anchor occurrence contributes, so the result over
/// several patterns is the sum of per-pattern results minus the shared
/// base term. Mean divides by the number of summed terms. Nodes missing
/// from `feats` contribute zero and are tallied in `stats`. A target with
/// no instance covering a second position keeps its row bit-for-bit.
std::vector<double> augment_node(const HetGraph& g, const FeatureMatrix& feats, NodeIndex v,
                                 const AugmentationConfig& cfg, NodeAugStats* stats = nullptr);

/// Applies augment_node to every target, always reading from the original
/// matrix, so target order cannot influence the result. Rows for
/// non-target ids pass through unchanged.
FeatureMatrix augment_matrix(const HetGraph& g, const FeatureMatrix& feats,
                             std::span<const std::string> targets, const AugmentationConfig& cfg,
                             AugmentReport* report = nullptr);

std::string report_to_json(const AugmentReport& report, const AugmentationConfig& cfg);

/// Anchor position used by TargetCa mode: the first CA position in the
/// pattern's kind chain. Throws kind_incompatible when the pattern has none.
size_t target_ca_anchor(const MetapathPattern& p);

}  // namespace hfaug
