#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hfaug/graph.hpp"

namespace hfaug {

enum class Format { Csv, Jsonl };

struct ParseStats {
  size_t rows = 0;     // well-formed rows kept
  size_t skipped = 0;  // bad rows dropped in lenient mode
  std::vector<std::string> warnings;
};

// Accounts file: header `address,kind`, kind in {EOA, CA}.
// Edges file: header `src,dst,etype,amount,timestamp`, etype in {trans, call};
//   amount is a base-10 wei integer (empty allowed for call -> 0); timestamp
//   integer seconds (empty allowed for call -> 0).
// Labels file: header `address,label`, label in {ponzi, nonponzi}.
// JSONL mirrors carry the same keys, one object per line, no header.
// Addresses are lowercased on ingest. An entirely empty stream parses to an
// empty list. Malformed rows throw by default; lenient collects and skips.
std::vector<AccountRecord> parse_accounts(std::istream& in, Format format, bool lenient = false,
                                          ParseStats* stats = nullptr);
std::vector<EdgeRecord> parse_edges(std::istream& in, Format format, bool lenient = false,
                                    ParseStats* stats = nullptr);
std::vector<LabelRecord> parse_labels(std::istream& in, Format format, bool lenient = false,
                                      ParseStats* stats = nullptr);

struct ParsedRecords {
  std::vector<AccountRecord> accounts;
  std::vector<EdgeRecord> edges;
  std::vector<LabelRecord> labels;
  ParseStats account_stats, edge_stats, label_stats;
};

ParsedRecords parse_records(std::istream& accounts, std::istream& edges, std::istream* labels,
                            Format format, bool lenient = false);

// File-level convenience. labels_path may be empty (no labels).
ParsedRecords load_records(const std::string& accounts_path, const std::string& edges_path,
                           const std::string& labels_path, Format format, bool lenient = false);

void write_accounts(std::ostream& out, const std::vector<AccountRecord>& accounts, Format format);
void write_edges(std::ostream& out, const std::vector<EdgeRecord>& edges, Format format);
void write_labels(std::ostream& out, const std::vector<LabelRecord>& labels, Format format);

// Serializes the graph back to the three-file edge-list form (CSV). Node
// order and edge order are preserved, so a save/load round trip reproduces
// the same graph.
void save_graph(const HetGraph& g, const std::string& accounts_path, const std::string& edges_path,
                const std::string& labels_path);

// Expected-count validation for ingestion (all fields optional).
struct ExpectedCounts {
  std::optional<uint64_t> nodes, edges, ca, eoa, trans, call, labels;

  // Parses "v=57130,e=156255,ca=4616,eoa=52514,trans=86602,call=69653,labels=191"
  // (any subset of keys).
  static ExpectedCounts parse(std::string_view text);
  bool empty() const;
};

// Throws a data error listing every mismatching count.
void validate_counts(const HetGraph& g, const ExpectedCounts& expected);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace hfaug
