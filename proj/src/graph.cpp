#include "hfaug/graph.hpp"

#include <algorithm>

#include "hfaug/error.hpp"
#include "hfaug/rng.hpp"

namespace hfaug {

const char* to_string(AccountKind k) { return k == AccountKind::Eoa ? "EOA" : "CA"; }
const char* to_string(EdgeType t) { return t == EdgeType::Trans ? "trans" : "call"; }
const char* to_string(Label l) { return l == Label::Ponzi ? "ponzi" : "nonponzi"; }

namespace {
inline size_t type_slot(EdgeType t) { return t == EdgeType::Trans ? 0 : 1; }
}  // namespace

HetGraph HetGraph::build(const std::vector<AccountRecord>& accounts,
                         const std::vector<EdgeRecord>& edges,
                         const std::vector<LabelRecord>& labels, const BuildOptions& options) {
  HetGraph g;
  g.addresses_.reserve(accounts.size());
  g.kinds_.reserve(accounts.size());
  g.index_.reserve(accounts.size());

  for (const auto& acc : accounts) {
    auto [it, inserted] = g.index_.emplace(acc.address, static_cast<NodeIndex>(g.addresses_.size()));
    if (!inserted) {
      if (g.kinds_[it->second] != acc.kind) {
        raise(Errc::malformed_row, "account '" + acc.address + "' declared with conflicting kinds");
      }
      continue;  // exact duplicate, collapse
    }
    g.addresses_.push_back(acc.address);
    g.kinds_.push_back(acc.kind);
    if (acc.kind == AccountKind::Ca) ++g.ca_count_;
  }

  g.edges_.reserve(edges.size());
  for (const auto& e : edges) {
    auto src = g.find(e.src);
    auto dst = g.find(e.dst);
    if (!src || !dst) {
      raise(Errc::dangling_endpoint, "edge " + e.src + " -> " + e.dst + " references account '" +
                                         (!src ? e.src : e.dst) + "' missing from the account set");
    }
    if (e.etype == EdgeType::Call && g.kinds_[*dst] == AccountKind::Eoa) {
      if (options.drop_call_into_eoa) continue;
      raise(Errc::call_into_eoa,
            "call edge " + e.src + " -> " + e.dst + " targets an externally owned account");
    }
    g.edges_.push_back({*src, *dst, e.etype, e.amount, e.timestamp});
    if (e.etype == EdgeType::Trans) ++g.trans_count_;
  }

  for (const auto& rec : labels) {
    auto v = g.find(rec.address);
    if (!v) {
      if (options.drop_bad_labels) continue;
      raise(Errc::dangling_endpoint, "label for unknown account '" + rec.address + "'");
    }
    if (rec.label == Label::Ponzi && g.kinds_[*v] == AccountKind::Eoa) {
      if (options.drop_bad_labels) continue;
      raise(Errc::kind_mismatch, "ponzi label on EOA '" + rec.address +
                                     "' (known ponzi schemes are contract accounts)");
    }
    auto [it, inserted] = g.labels_.emplace(*v, rec.label);
    if (!inserted && it->second != rec.label) {
      raise(Errc::malformed_row, "conflicting labels for account '" + rec.address + "'");
    }
  }
  g.label_total_ = g.labels_.size();
  for (const auto& [v, lab] : g.labels_) {
    if (lab == Label::Ponzi) g.ponzi_.push_back(v);
  }
  std::sort(g.ponzi_.begin(), g.ponzi_.end());

  for (EdgeType t : {EdgeType::Trans, EdgeType::Call}) {
    size_t slot = type_slot(t);
    g.out_edges_[slot] = g.build_edge_csr(true, t);
    g.in_edges_[slot] = g.build_edge_csr(false, t);
    g.out_nbrs_[slot] = g.build_neighbor_csr(g.out_edges_[slot], true);
    g.in_nbrs_[slot] = g.build_neighbor_csr(g.in_edges_[slot], false);
  }
  return g;
}

HetGraph::Csr HetGraph::build_edge_csr(bool outgoing, EdgeType t) const {
  Csr csr;
  const size_t n = node_count();
  csr.offsets.assign(n + 1, 0);
  for (const auto& e : edges_) {
    if (e.etype != t) continue;
    ++csr.offsets[(outgoing ? e.src : e.dst) + 1];
  }
  for (size_t v = 0; v < n; ++v) csr.offsets[v + 1] += csr.offsets[v];
  csr.values.resize(csr.offsets[n]);
  std::vector<uint32_t> cursor(csr.offsets.begin(), csr.offsets.end() - 1);
  for (uint32_t e = 0; e < edges_.size(); ++e) {
    if (edges_[e].etype != t) continue;
    NodeIndex v = outgoing ? edges_[e].src : edges_[e].dst;
    csr.values[cursor[v]++] = e;
  }
  return csr;
}

HetGraph::Csr HetGraph::build_neighbor_csr(const Csr& edge_csr, bool outgoing) const {
  Csr csr;
  const size_t n = node_count();
  csr.offsets.assign(n + 1, 0);
  csr.values.reserve(edge_csr.values.size());
  std::vector<NodeIndex> nbrs;
  for (size_t v = 0; v < n; ++v) {
    nbrs.clear();
    for (uint32_t e : edge_csr.row(static_cast<NodeIndex>(v))) {
      nbrs.push_back(outgoing ? edges_[e].dst : edges_[e].src);
    }
    std::sort(nbrs.begin(), nbrs.end(),
              [this](NodeIndex a, NodeIndex b) { return addresses_[a] < addresses_[b]; });
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    csr.values.insert(csr.values.end(), nbrs.begin(), nbrs.end());
    csr.offsets[v + 1] = static_cast<uint32_t>(csr.values.size());
  }
  return csr;
}

std::optional<NodeIndex> HetGraph::find(std::string_view address) const {
  auto it = index_.find(std::string(address));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeIndex HetGraph::require(std::string_view address) const {
  auto v = find(address);
  if (!v) raise(Errc::unknown_account, "account '" + std::string(address) + "' not in graph");
  return *v;
}

std::optional<Label> HetGraph::label(NodeIndex v) const {
  auto it = labels_.find(v);
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

std::span<const EdgeIndex> HetGraph::out_edges(NodeIndex v, EdgeType t) const {
  return out_edges_[type_slot(t)].row(v);
}

std::span<const EdgeIndex> HetGraph::in_edges(NodeIndex v, EdgeType t) const {
  return in_edges_[type_slot(t)].row(v);
}

std::span<const NodeIndex> HetGraph::out_neighbors(NodeIndex v, EdgeType t) const {
  return out_nbrs_[type_slot(t)].row(v);
}

std::span<const NodeIndex> HetGraph::in_neighbors(NodeIndex v, EdgeType t) const {
  return in_nbrs_[type_slot(t)].row(v);
}

std::vector<NodeIndex> HetGraph::nodes_of_kind(AccountKind k) const {
  std::vector<NodeIndex> out;
  for (NodeIndex v = 0; v < node_count(); ++v) {
    if (kinds_[v] == k) out.push_back(v);
  }
  return out;
}

std::vector<NodeIndex> sample_negatives(const HetGraph& g, uint64_t seed) {
  std::vector<NodeIndex> candidates;
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    if (g.kind(v) != AccountKind::Ca) continue;
    auto lab = g.label(v);
    if (lab && *lab == Label::Ponzi) continue;
    candidates.push_back(v);
  }
  const size_t want = g.ponzi_count();
  if (candidates.size() < want) {
    raise(Errc::insufficient_candidates,
          "need " + std::to_string(want) + " negative CA, only " +
              std::to_string(candidates.size()) + " available");
  }
  // Candidate order is fixed by address so the draw depends only on the seed.
  std::sort(candidates.begin(), candidates.end(),
            [&g](NodeIndex a, NodeIndex b) { return g.address(a) < g.address(b); });
  Rng rng(seed);
  for (size_t i = 0; i < want; ++i) {
    size_t j = i + rng.index(candidates.size() - i);
    std::swap(candidates[i], candidates[j]);
  }
  candidates.resize(want);
  std::sort(candidates.begin(), candidates.end(),
            [&g](NodeIndex a, NodeIndex b) { return g.address(a) < g.address(b); });
  return candidates;
}

}  // namespace hfaug
