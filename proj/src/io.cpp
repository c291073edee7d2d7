#include "hfaug/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hfaug/error.hpp"

namespace hfaug {

namespace {

using nlohmann::json;

constexpr size_t kMaxWarnings = 32;

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void bad_row(Errc code, size_t line_no, const std::string& reason) {
  raise(code, "line " + std::to_string(line_no) + ": " + reason);
}

// Shared scaffolding: iterates data lines, validates the header (CSV only),
// dispatches each row to `handle`, and implements the fail-fast / lenient
// split. `handle` throws Error on a bad row.
template <class Handler>
void scan_lines(std::istream& in, Format format, std::string_view csv_header, bool lenient,
                ParseStats* stats, Handler&& handle) {
  std::string line;
  size_t line_no = 0;
  bool saw_header = false;
  ParseStats local;
  ParseStats& st = stats ? *stats : local;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = trim(line);
    if (text.empty()) continue;
    if (format == Format::Csv && !saw_header) {
      std::string got = lower(text);
      got.erase(std::remove(got.begin(), got.end(), ' '), got.end());
      if (got != csv_header) {
        bad_row(Errc::malformed_row, line_no,
                "expected header '" + std::string(csv_header) + "', got '" + std::string(text) + "'");
      }
      saw_header = true;
      continue;
    }
    try {
      handle(text, line_no);
      ++st.rows;
    } catch (const Error& err) {
      if (!lenient) throw;
      ++st.skipped;
      if (st.warnings.size() < kMaxWarnings) st.warnings.push_back(err.what());
    }
  }
}

json parse_json_row(std::string_view text, size_t line_no) {
  json row = json::parse(text, nullptr, false);
  if (row.is_discarded() || !row.is_object()) {
    bad_row(Errc::malformed_row, line_no, "invalid JSON object");
  }
  return row;
}

std::string json_string_field(const json& row, const char* key, size_t line_no) {
  auto it = row.find(key);
  if (it == row.end() || !it->is_string()) {
    bad_row(Errc::malformed_row, line_no, std::string("missing string field '") + key + "'");
  }
  return it->get<std::string>();
}

AccountKind parse_kind(std::string_view text, size_t line_no) {
  std::string k = lower(text);
  if (k == "eoa") return AccountKind::Eoa;
  if (k == "ca") return AccountKind::Ca;
  bad_row(Errc::malformed_row, line_no, "unknown account kind '" + std::string(text) + "'");
}

EdgeType parse_etype(std::string_view text, size_t line_no) {
  std::string t = lower(text);
  if (t == "trans") return EdgeType::Trans;
  if (t == "call") return EdgeType::Call;
  bad_row(Errc::unknown_edge_type, line_no, "unknown edge type '" + std::string(text) + "'");
}

Label parse_label_value(std::string_view text, size_t line_no) {
  std::string l = lower(text);
  if (l == "ponzi") return Label::Ponzi;
  if (l == "nonponzi") return Label::NonPonzi;
  bad_row(Errc::malformed_row, line_no, "unknown label '" + std::string(text) + "'");
}

Wei parse_amount(std::string_view text, EdgeType etype, size_t line_no) {
  if (text.empty()) {
    if (etype == EdgeType::Call) return 0;
    bad_row(Errc::malformed_row, line_no, "trans edge requires an amount");
  }
  if (text.front() == '-') {
    bad_row(Errc::negative_amount, line_no, "amount '" + std::string(text) + "' is negative");
  }
  auto value = parse_wei(text);
  if (!value) {
    bad_row(Errc::malformed_row, line_no, "amount '" + std::string(text) + "' is not a wei integer");
  }
  return *value;
}

int64_t parse_timestamp(std::string_view text, EdgeType etype, size_t line_no) {
  if (text.empty()) {
    if (etype == EdgeType::Call) return 0;  // optional for calls
    bad_row(Errc::malformed_row, line_no, "trans edge requires a timestamp");
  }
  int64_t value = 0;
  bool negative = false;
  size_t i = 0;
  if (text[0] == '-') {
    negative = true;
    i = 1;
  }
  if (i == text.size()) bad_row(Errc::malformed_row, line_no, "bad timestamp");
  for (; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      bad_row(Errc::malformed_row, line_no, "timestamp '" + std::string(text) + "' is not an integer");
    }
    value = value * 10 + (text[i] - '0');
  }
  return negative ? -value : value;
}

std::string require_address(std::string_view text, size_t line_no) {
  if (text.empty()) bad_row(Errc::malformed_row, line_no, "empty address");
  return lower(text);
}

}  // namespace

std::vector<AccountRecord> parse_accounts(std::istream& in, Format format, bool lenient,
                                          ParseStats* stats) {
  std::vector<AccountRecord> out;
  scan_lines(in, format, "address,kind", lenient, stats, [&](std::string_view text, size_t line_no) {
    if (format == Format::Csv) {
      auto fields = split_csv(text);
      if (fields.size() != 2) bad_row(Errc::malformed_row, line_no, "expected 2 fields");
      out.push_back({require_address(fields[0], line_no), parse_kind(fields[1], line_no)});
    } else {
      json row = parse_json_row(text, line_no);
      out.push_back({require_address(json_string_field(row, "address", line_no), line_no),
                     parse_kind(json_string_field(row, "kind", line_no), line_no)});
    }
  });
  return out;
}

std::vector<EdgeRecord> parse_edges(std::istream& in, Format format, bool lenient,
                                    ParseStats* stats) {
  std::vector<EdgeRecord> out;
  scan_lines(in, format, "src,dst,etype,amount,timestamp", lenient, stats,
             [&](std::string_view text, size_t line_no) {
               EdgeRecord rec;
               if (format == Format::Csv) {
                 auto fields = split_csv(text);
                 if (fields.size() != 5) bad_row(Errc::malformed_row, line_no, "expected 5 fields");
                 rec.src = require_address(fields[0], line_no);
                 rec.dst = require_address(fields[1], line_no);
                 rec.etype = parse_etype(fields[2], line_no);
                 rec.amount = parse_amount(fields[3], rec.etype, line_no);
                 rec.timestamp = parse_timestamp(fields[4], rec.etype, line_no);
               } else {
                 json row = parse_json_row(text, line_no);
                 rec.src = require_address(json_string_field(row, "src", line_no), line_no);
                 rec.dst = require_address(json_string_field(row, "dst", line_no), line_no);
                 rec.etype = parse_etype(json_string_field(row, "etype", line_no), line_no);
                 // Amounts can exceed 64 bits; strings are the lossless form
                 // but integer values are accepted.
                 auto amt = row.find("amount");
                 if (amt == row.end() || amt->is_null()) {
                   rec.amount = parse_amount("", rec.etype, line_no);
                 } else if (amt->is_string()) {
                   rec.amount = parse_amount(amt->get<std::string>(), rec.etype, line_no);
                 } else if (amt->is_number_unsigned()) {
                   rec.amount = amt->get<uint64_t>();
                 } else if (amt->is_number_integer()) {
                   bad_row(Errc::negative_amount, line_no, "amount is negative");
                 } else {
                   bad_row(Errc::malformed_row, line_no, "amount must be an integer or string");
                 }
                 auto ts = row.find("timestamp");
                 if (ts == row.end() || ts->is_null()) {
                   rec.timestamp = parse_timestamp("", rec.etype, line_no);
                 } else if (ts->is_number_integer() || ts->is_number_unsigned()) {
                   rec.timestamp = ts->get<int64_t>();
                 } else if (ts->is_string()) {
                   rec.timestamp = parse_timestamp(ts->get<std::string>(), rec.etype, line_no);
                 } else {
                   bad_row(Errc::malformed_row, line_no, "timestamp must be an integer");
                 }
               }
               out.push_back(std::move(rec));
             });
  return out;
}

std::vector<LabelRecord> parse_labels(std::istream& in, Format format, bool lenient,
                                      ParseStats* stats) {
  std::vector<LabelRecord> out;
  scan_lines(in, format, "address,label", lenient, stats, [&](std::string_view text, size_t line_no) {
    if (format == Format::Csv) {
      auto fields = split_csv(text);
      if (fields.size() != 2) bad_row(Errc::malformed_row, line_no, "expected 2 fields");
      out.push_back({require_address(fields[0], line_no), parse_label_value(fields[1], line_no)});
    } else {
      json row = parse_json_row(text, line_no);
      out.push_back({require_address(json_string_field(row, "address", line_no), line_no),
                     parse_label_value(json_string_field(row, "label", line_no), line_no)});
    }
  });
  return out;
}

ParsedRecords parse_records(std::istream& accounts, std::istream& edges, std::istream* labels,
                            Format format, bool lenient) {
  ParsedRecords out;
  out.accounts = parse_accounts(accounts, format, lenient, &out.account_stats);
  out.edges = parse_edges(edges, format, lenient, &out.edge_stats);
  if (labels) out.labels = parse_labels(*labels, format, lenient, &out.label_stats);
  return out;
}

namespace {
std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(Errc::io_error, "cannot open '" + path + "' for writing");
  return out;
}
}  // namespace

ParsedRecords load_records(const std::string& accounts_path, const std::string& edges_path,
                           const std::string& labels_path, Format format, bool lenient) {
  auto accounts = open_input(accounts_path);
  auto edges = open_input(edges_path);
  if (labels_path.empty()) return parse_records(accounts, edges, nullptr, format, lenient);
  auto labels = open_input(labels_path);
  return parse_records(accounts, edges, &labels, format, lenient);
}

void write_accounts(std::ostream& out, const std::vector<AccountRecord>& accounts, Format format) {
  if (format == Format::Csv) {
    out << "address,kind\n";
    for (const auto& a : accounts) out << a.address << ',' << to_string(a.kind) << '\n';
  } else {
    for (const auto& a : accounts) {
      out << json{{"address", a.address}, {"kind", to_string(a.kind)}}.dump() << '\n';
    }
  }
}

void write_edges(std::ostream& out, const std::vector<EdgeRecord>& edges, Format format) {
  if (format == Format::Csv) {
    out << "src,dst,etype,amount,timestamp\n";
    for (const auto& e : edges) {
      out << e.src << ',' << e.dst << ',' << to_string(e.etype) << ',' << wei_to_string(e.amount)
          << ',' << e.timestamp << '\n';
    }
  } else {
    for (const auto& e : edges) {
      out << json{{"src", e.src},
                  {"dst", e.dst},
                  {"etype", to_string(e.etype)},
                  {"amount", wei_to_string(e.amount)},
                  {"timestamp", e.timestamp}}
                 .dump()
          << '\n';
    }
  }
}

void write_labels(std::ostream& out, const std::vector<LabelRecord>& labels, Format format) {
  if (format == Format::Csv) {
    out << "address,label\n";
    for (const auto& l : labels) out << l.address << ',' << to_string(l.label) << '\n';
  } else {
    for (const auto& l : labels) {
      out << json{{"address", l.address}, {"label", to_string(l.label)}}.dump() << '\n';
    }
  }
}

void save_graph(const HetGraph& g, const std::string& accounts_path, const std::string& edges_path,
                const std::string& labels_path) {
  std::vector<AccountRecord> accounts;
  accounts.reserve(g.node_count());
  for (NodeIndex v = 0; v < g.node_count(); ++v) accounts.push_back({g.address(v), g.kind(v)});

  std::vector<EdgeRecord> edges;
  edges.reserve(g.edge_count());
  for (const auto& e : g.edges()) {
    edges.push_back({g.address(e.src), g.address(e.dst), e.etype, e.amount, e.timestamp});
  }

  std::vector<LabelRecord> labels;
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    if (auto lab = g.label(v)) labels.push_back({g.address(v), *lab});
  }

  auto out_a = open_output(accounts_path);
  write_accounts(out_a, accounts, Format::Csv);
  auto out_e = open_output(edges_path);
  write_edges(out_e, edges, Format::Csv);
  auto out_l = open_output(labels_path);
  write_labels(out_l, labels, Format::Csv);
}

ExpectedCounts ExpectedCounts::parse(std::string_view text) {
  ExpectedCounts out;
  size_t start = 0;
  while (start < text.size()) {
    size_t comma = text.find(',', start);
    std::string_view item = trim(text.substr(start, comma == std::string_view::npos
                                                        ? std::string_view::npos
                                                        : comma - start));
    start = comma == std::string_view::npos ? text.size() : comma + 1;
    if (item.empty()) continue;
    size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      raise(Errc::config_error, "expected key=value in count spec, got '" + std::string(item) + "'");
    }
    std::string key = lower(trim(item.substr(0, eq)));
    std::string_view value = trim(item.substr(eq + 1));
    uint64_t parsed = 0;
    for (char ch : value) {
      if (ch < '0' || ch > '9') {
        raise(Errc::config_error, "count for '" + key + "' is not an integer");
      }
      parsed = parsed * 10 + static_cast<uint64_t>(ch - '0');
    }
    if (key == "v" || key == "nodes") out.nodes = parsed;
    else if (key == "e" || key == "edges") out.edges = parsed;
    else if (key == "ca") out.ca = parsed;
    else if (key == "eoa") out.eoa = parsed;
    else if (key == "trans") out.trans = parsed;
    else if (key == "call") out.call = parsed;
    else if (key == "labels" || key == "y") out.labels = parsed;
    else raise(Errc::config_error, "unknown count key '" + key + "'");
  }
  return out;
}

bool ExpectedCounts::empty() const {
  return !nodes && !edges && !ca && !eoa && !trans && !call && !labels;
}

void validate_counts(const HetGraph& g, const ExpectedCounts& expected) {
  std::string mismatches;
  auto check = [&](const char* name, std::optional<uint64_t> want, uint64_t got) {
    if (want && *want != got) {
      mismatches += std::string(mismatches.empty() ? "" : "; ") + name + ": expected " +
                    std::to_string(*want) + ", got " + std::to_string(got);
    }
  };
  check("nodes", expected.nodes, g.node_count());
  check("edges", expected.edges, g.edge_count());
  check("ca", expected.ca, g.ca_count());
  check("eoa", expected.eoa, g.eoa_count());
  check("trans", expected.trans, g.trans_count());
  check("call", expected.call, g.call_count());
  check("labels", expected.labels, g.ponzi_count());
  if (!mismatches.empty()) raise(Errc::malformed_row, "count validation failed: " + mismatches);
}

std::string read_file(const std::string& path) {
  auto in = open_input(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
  auto out = open_output(path);
  out << content;
  if (!out) raise(Errc::io_error, "write to '" + path + "' failed");
}

}  // namespace hfaug
