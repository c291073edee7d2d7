#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hfaug/wide.hpp"

namespace hfaug {

using NodeIndex = uint32_t;
using EdgeIndex = uint32_t;

enum class AccountKind : uint8_t { Eoa, Ca };
enum class EdgeType : uint8_t { Trans, Call };
enum class Label : uint8_t { NonPonzi = 0, Ponzi = 1 };

const char* to_string(AccountKind k);
const char* to_string(EdgeType t);
const char* to_string(Label l);

// Raw ingestion records, address-keyed. Addresses are lowercased by the
// parsers before they reach graph construction.
struct AccountRecord {
  std::string address;
  AccountKind kind;
};

struct EdgeRecord {
  std::string src;
  std::string dst;
  EdgeType etype = EdgeType::Trans;
  Wei amount = 0;        // wei; 0 for call edges unless provided
  int64_t timestamp = 0; // seconds since epoch; 0 when absent (call only)
};

struct LabelRecord {
  std::string address;
  Label label;
};

// Edge with endpoints resolved to node indexes.
struct InteractionEdge {
  NodeIndex src;
  NodeIndex dst;
  EdgeType etype;
  Wei amount;
  int64_t timestamp;
};

struct BuildOptions {
  // Call edges whose destination is an EOA violate contract-call semantics.
  // Default is to fail; lenient mode drops them (real dumps are noisy).
  bool drop_call_into_eoa = false;
  // Labels on unknown addresses, or ponzi labels on EOAs, fail by default;
  // lenient mode drops them.
  bool drop_bad_labels = false;
};

class HomGraph;

/// Typed multigraph over EOA/CA accounts with trans and call edges.
/// Immutable after build; all query methods are const and thread-safe.
class HetGraph {
 public:
  static HetGraph build(const std::vector<AccountRecord>& accounts,
                        const std::vector<EdgeRecord>& edges,
                        const std::vector<LabelRecord>& labels,
                        const BuildOptions& options = {});

  size_t node_count() const { return kinds_.size(); }
  size_t edge_count() const { return edges_.size(); }
  size_t ca_count() const { return ca_count_; }
  size_t eoa_count() const { return node_count() - ca_count_; }
  size_t trans_count() const { return trans_count_; }
  size_t call_count() const { return edges_.size() - trans_count_; }
  size_t label_count() const { return label_total_; }
  size_t ponzi_count() const { return ponzi_.size(); }

  std::optional<NodeIndex> find(std::string_view address) const;
  NodeIndex require(std::string_view address) const;  // throws unknown_account
  const std::string& address(NodeIndex v) const { return addresses_[v]; }
  AccountKind kind(NodeIndex v) const { return kinds_[v]; }
  std::optional<Label> label(NodeIndex v) const;

  const std::vector<InteractionEdge>& edges() const { return edges_; }
  const InteractionEdge& edge(EdgeIndex e) const { return edges_[e]; }

  // Edge indexes incident to v, grouped by direction and edge type.
  std::span<const EdgeIndex> out_edges(NodeIndex v, EdgeType t) const;
  std::span<const EdgeIndex> in_edges(NodeIndex v, EdgeType t) const;

  // Distinct neighbors, sorted by address. Parallel edges appear once.
  std::span<const NodeIndex> out_neighbors(NodeIndex v, EdgeType t) const;
  std::span<const NodeIndex> in_neighbors(NodeIndex v, EdgeType t) const;

  // Convenience used by the feature extractor (trans edges only).
  std::span<const EdgeIndex> trans_out(NodeIndex v) const { return out_edges(v, EdgeType::Trans); }
  std::span<const EdgeIndex> trans_in(NodeIndex v) const { return in_edges(v, EdgeType::Trans); }

  std::vector<NodeIndex> nodes_of_kind(AccountKind k) const;
  const std::vector<NodeIndex>& ponzi_nodes() const { return ponzi_; }

 private:
  struct Csr {
    std::vector<uint32_t> offsets;  // node_count + 1
    std::vector<uint32_t> values;
    std::span<const uint32_t> row(NodeIndex v) const {
      return std::span<const uint32_t>(values).subspan(offsets[v], offsets[v + 1] - offsets[v]);
    }
  };

  Csr build_edge_csr(bool outgoing, EdgeType t) const;
  Csr build_neighbor_csr(const Csr& edge_csr, bool outgoing) const;

  std::vector<std::string> addresses_;
  std::vector<AccountKind> kinds_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<InteractionEdge> edges_;
  std::unordered_map<NodeIndex, Label> labels_;
  std::vector<NodeIndex> ponzi_;  // sorted by node index
  size_t ca_count_ = 0;
  size_t trans_count_ = 0;
  size_t label_total_ = 0;

  // index 0/1 = trans/call
  Csr out_edges_[2], in_edges_[2];
  Csr out_nbrs_[2], in_nbrs_[2];
};

/// Transaction-only view of a HetGraph with node kinds erased. Shares the
/// source's node set by construction, so the two stay aligned. Non-owning:
/// the source graph must outlive the projection.
class HomGraph {
 public:
  explicit HomGraph(const HetGraph& src) : src_(&src) {}

  size_t node_count() const { return src_->node_count(); }
  size_t edge_count() const { return src_->trans_count(); }

  std::optional<NodeIndex> find(std::string_view address) const { return src_->find(address); }
  NodeIndex require(std::string_view address) const { return src_->require(address); }
  const std::string& address(NodeIndex v) const { return src_->address(v); }
  std::optional<Label> label(NodeIndex v) const { return src_->label(v); }

  const InteractionEdge& edge(EdgeIndex e) const { return src_->edge(e); }

  std::span<const EdgeIndex> out_edges(NodeIndex v) const { return src_->out_edges(v, EdgeType::Trans); }
  std::span<const EdgeIndex> in_edges(NodeIndex v) const { return src_->in_edges(v, EdgeType::Trans); }
  std::span<const NodeIndex> out_neighbors(NodeIndex v) const { return src_->out_neighbors(v, EdgeType::Trans); }
  std::span<const NodeIndex> in_neighbors(NodeIndex v) const { return src_->in_neighbors(v, EdgeType::Trans); }

  std::span<const EdgeIndex> trans_out(NodeIndex v) const { return out_edges(v); }
  std::span<const EdgeIndex> trans_in(NodeIndex v) const { return in_edges(v); }

  const HetGraph& source() const { return *src_; }

 private:
  const HetGraph* src_;
};

inline HomGraph project_hom_graph(const HetGraph& het) { return HomGraph(het); }

/// Uniform sample, without replacement, of CA accounts not labeled ponzi.
/// Returns exactly ponzi_count() ids, sorted. Deterministic per seed.
std::vector<NodeIndex> sample_negatives(const HetGraph& g, uint64_t seed);

}  // namespace hfaug
