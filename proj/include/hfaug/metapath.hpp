#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hfaug/graph.hpp"

namespace hfaug {

// One forward hop: follow an edge of edge_type into a node of dst_kind.
struct MetapathStep {
  EdgeType edge_type;
  AccountKind dst_kind;
};

/// Compiled step sequence. kind_at(i) gives the node kind at pattern
/// position i, for i in [0, length()].
struct MetapathPattern {
  AccountKind head_kind = AccountKind::Ca;
  std::vector<MetapathStep> steps;
  std::string name;

  size_t length() const { return steps.size(); }
  AccountKind kind_at(size_t pos) const { return pos == 0 ? head_kind : steps[pos - 1].dst_kind; }
  std::string spec_string() const;

  // Built-ins:
  //   P1: CA -call-> CA -trans-> EOA -call-> CA
  //   P2: EOA -call-> CA -trans-> EOA -trans-> CA
  static MetapathPattern p1();
  static MetapathPattern p2();
};

/// Compiles `KIND (-etype-> KIND)+` with KIND in {CA, EOA} and etype in
/// {call, trans}; the names "P1"/"P2" resolve to the built-ins. Call steps
/// into EOA are rejected (contract calls terminate at contract accounts).
MetapathPattern compile_pattern(std::string_view spec);

struct MatchLimits {
  uint64_t max_instances = 1000;
};

/// A concrete node walk realizing a contiguous slice of the pattern.
/// `offset` is the pattern position of nodes.front(); match_from always
/// yields offset 0, anchored matching can yield suffix coverage when no
/// predecessor exists. complete <=> the full pattern is covered.
struct MatchInstance {
  std::vector<NodeIndex> nodes;
  uint32_t offset = 0;
  bool complete = false;
};

struct MatchResult {
  std::vector<MatchInstance> instances;
  uint64_t complete_count = 0;
  bool truncated = false;  // enumeration stopped at limits.max_instances
};

/// Depth-first enumeration of instances rooted at `start` (pattern position
/// 0). Returns every complete instance in deterministic order (neighbors
/// sorted by address, parallel edges collapsed); when no complete instance
/// exists the maximal partial prefixes are returned instead. Node revisits
/// are allowed: instances are walks, not simple paths.
MatchResult match_from(const HetGraph& g, NodeIndex start, const MetapathPattern& p,
                       const MatchLimits& limits = {});

/// Enumeration of instances whose node at `anchor_pos` is `target`: forward
/// DFS covers positions >= anchor_pos, reverse expansion walks required
/// edges backwards for positions before it. The complete-else-maximal
/// fallback applies to each direction; with no predecessors at all the
/// instances cover positions >= anchor_pos only. anchor_pos 0 is exactly
/// match_from.
MatchResult match_anchored(const HetGraph& g, NodeIndex target, const MetapathPattern& p,
                           size_t anchor_pos, const MatchLimits& limits = {});

/// One JSON object per instance: {"start", "pattern", "nodes", "complete"},
/// plus "offset" for instances that do not start at pattern position 0.
void write_matches_jsonl(std::ostream& out, const HetGraph& g, const MetapathPattern& p,
                         NodeIndex start, const MatchResult& result);

}  // namespace hfaug
