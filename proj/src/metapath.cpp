#include "hfaug/metapath.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

#include <json.hpp>

#include "hfaug/error.hpp"

namespace hfaug {

std::string MetapathPattern::spec_string() const {
  std::string out = to_string(head_kind);
  for (const auto& s : steps) {
    out += " -";
    out += to_string(s.edge_type);
    out += "-> ";
    out += to_string(s.dst_kind);
  }
  return out;
}

MetapathPattern MetapathPattern::p1() {
  MetapathPattern p;
  p.head_kind = AccountKind::Ca;
  p.steps = {{EdgeType::Call, AccountKind::Ca},
             {EdgeType::Trans, AccountKind::Eoa},
             {EdgeType::Call, AccountKind::Ca}};
  p.name = "P1";
  return p;
}

MetapathPattern MetapathPattern::p2() {
  MetapathPattern p;
  p.head_kind = AccountKind::Eoa;
  p.steps = {{EdgeType::Call, AccountKind::Ca},
             {EdgeType::Trans, AccountKind::Eoa},
             {EdgeType::Trans, AccountKind::Ca}};
  p.name = "P2";
  return p;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

[[noreturn]] void syntax_error(size_t pos, const std::string& msg) {
  raise(Errc::syntax_error, "position " + std::to_string(pos) + ": " + msg);
}

struct Cursor {
  std::string_view text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  std::string_view ident() {
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      ++pos;
    }
    if (pos == start) syntax_error(start, "expected an identifier");
    return text.substr(start, pos - start);
  }
};

AccountKind kind_token(std::string_view word, size_t pos) {
  std::string k = lower(word);
  if (k == "ca") return AccountKind::Ca;
  if (k == "eoa") return AccountKind::Eoa;
  syntax_error(pos, "expected CA or EOA, got '" + std::string(word) + "'");
}

EdgeType etype_token(std::string_view word, size_t pos) {
  std::string t = lower(word);
  if (t == "call") return EdgeType::Call;
  if (t == "trans") return EdgeType::Trans;
  syntax_error(pos, "expected call or trans, got '" + std::string(word) + "'");
}

}  // namespace

MetapathPattern compile_pattern(std::string_view spec) {
  std::string trimmed = lower(spec);
  trimmed.erase(std::remove_if(trimmed.begin(), trimmed.end(),
                               [](char c) { return c == ' ' || c == '\t'; }),
                trimmed.end());
  if (trimmed == "p1") return MetapathPattern::p1();
  if (trimmed == "p2") return MetapathPattern::p2();

  Cursor c{spec};
  c.skip_ws();
  if (c.done()) syntax_error(c.pos, "empty pattern");
  MetapathPattern p;
  {
    size_t at = c.pos;
    p.head_kind = kind_token(c.ident(), at);
  }
  while (true) {
    c.skip_ws();
    if (c.done()) break;
    if (c.peek() != '-') syntax_error(c.pos, "expected '-etype->' arrow");
    ++c.pos;
    size_t at = c.pos;
    EdgeType etype = etype_token(c.ident(), at);
    if (c.pos + 1 >= c.text.size() || c.text[c.pos] != '-' || c.text[c.pos + 1] != '>') {
      syntax_error(c.pos, "expected '->' to close the arrow");
    }
    c.pos += 2;
    c.skip_ws();
    if (c.done()) syntax_error(c.pos, "missing terminal kind after arrow");
    at = c.pos;
    AccountKind dst = kind_token(c.ident(), at);
    if (etype == EdgeType::Call && dst == AccountKind::Eoa) {
      raise(Errc::kind_mismatch, "call steps must land on CA (position " + std::to_string(at) + ")");
    }
    p.steps.push_back({etype, dst});
  }
  if (p.steps.empty()) syntax_error(spec.size(), "pattern needs at least one step");
  p.name = p.spec_string();
  return p;
}

namespace {

// Forward DFS over pattern positions [from, length]. Completes are walks
// reaching the last position; a prefix that cannot be extended is a maximal
// partial. The instance cap applies to each class separately and aborts the
// search only when completes overflow, so the complete/partial decision is
// exact and the returned order is prefix-stable under a growing cap.
struct ForwardDfs {
  const HetGraph& g;
  const MetapathPattern& p;
  uint64_t cap;
  size_t from;

  std::vector<MatchInstance> completes;
  std::vector<MatchInstance> partials;
  bool complete_overflow = false;
  bool partial_overflow = false;
  std::vector<NodeIndex> stack;

  bool walk(NodeIndex v, size_t pos) {
    stack.push_back(v);
    bool keep_going = true;
    if (pos == p.length()) {
      if (completes.size() >= cap) {
        complete_overflow = true;
        keep_going = false;
      } else {
        completes.push_back({stack, static_cast<uint32_t>(from), pos == p.length() && from == 0});
      }
    } else {
      const auto& step = p.steps[pos];
      bool extended = false;
      for (NodeIndex u : g.out_neighbors(v, step.edge_type)) {
        if (g.kind(u) != step.dst_kind) continue;
        extended = true;
        if (!walk(u, pos + 1)) {
          keep_going = false;
          break;
        }
      }
      if (!extended) {
        if (partials.size() >= cap) {
          partial_overflow = true;
        } else {
          partials.push_back({stack, static_cast<uint32_t>(from), false});
        }
      }
    }
    stack.pop_back();
    return keep_going;
  }

  // true when at least one walk reaches the end of the pattern
  bool run(NodeIndex start) {
    walk(start, from);
    return !completes.empty();
  }
};

// Reverse expansion for anchored matching: walks required edges backwards
// from the anchor toward position 0. Mirrors the forward fallback: segments
// reaching position 0 win, otherwise the maximal backward extensions.
struct BackwardDfs {
  const HetGraph& g;
  const MetapathPattern& p;
  uint64_t cap;
  size_t anchor;

  std::vector<MatchInstance> full;     // reach position 0
  std::vector<MatchInstance> partial;  // dead ends at offset > 0
  bool full_overflow = false;
  bool partial_overflow = false;
  std::vector<NodeIndex> rev;  // anchor-first, grows toward position 0

  MatchInstance segment(size_t pos) const {
    MatchInstance inst;
    inst.nodes.assign(rev.rbegin(), rev.rend());
    inst.offset = static_cast<uint32_t>(pos);
    inst.complete = false;
    return inst;
  }

  bool walk(NodeIndex v, size_t pos) {
    rev.push_back(v);
    bool keep_going = true;
    if (pos == 0) {
      if (full.size() >= cap) {
        full_overflow = true;
        keep_going = false;
      } else {
        full.push_back(segment(0));
      }
    } else {
      const auto& step = p.steps[pos - 1];
      const AccountKind src_kind = p.kind_at(pos - 1);
      bool extended = false;
      for (NodeIndex u : g.in_neighbors(v, step.edge_type)) {
        if (g.kind(u) != src_kind) continue;
        extended = true;
        if (!walk(u, pos - 1)) {
          keep_going = false;
          break;
        }
      }
      if (!extended) {
        if (partial.size() >= cap) {
          partial_overflow = true;
        } else {
          partial.push_back(segment(pos));
        }
      }
    }
    rev.pop_back();
    return keep_going;
  }
};

}  // namespace

MatchResult match_from(const HetGraph& g, NodeIndex start, const MetapathPattern& p,
                       const MatchLimits& limits) {
  if (start >= g.node_count()) raise(Errc::unknown_account, "node index out of range");
  if (g.kind(start) != p.head_kind) {
    raise(Errc::kind_mismatch, "start '" + g.address(start) + "' is " + to_string(g.kind(start)) +
                                   " but pattern head is " + to_string(p.head_kind));
  }
  ForwardDfs dfs{g, p, limits.max_instances, 0, {}, {}, false, false, {}};
  MatchResult result;
  if (dfs.run(start)) {
    result.instances = std::move(dfs.completes);
    result.complete_count = result.instances.size();
    result.truncated = dfs.complete_overflow;
  } else {
    result.instances = std::move(dfs.partials);
    result.truncated = dfs.partial_overflow;
  }
  return result;
}

MatchResult match_anchored(const HetGraph& g, NodeIndex target, const MetapathPattern& p,
                           size_t anchor_pos, const MatchLimits& limits) {
  if (anchor_pos > p.length()) {
    raise(Errc::anchor_out_of_range, "anchor " + std::to_string(anchor_pos) +
                                         " exceeds pattern length " + std::to_string(p.length()));
  }
  if (anchor_pos == 0) return match_from(g, target, p, limits);
  if (target >= g.node_count()) raise(Errc::unknown_account, "node index out of range");
  if (g.kind(target) != p.kind_at(anchor_pos)) {
    raise(Errc::kind_mismatch, "target '" + g.address(target) + "' is " +
                                   to_string(g.kind(target)) + " but pattern position " +
                                   std::to_string(anchor_pos) + " is " +
                                   to_string(p.kind_at(anchor_pos)));
  }

  BackwardDfs back{g, p, limits.max_instances, anchor_pos, {}, {}, false, false, {}};
  back.walk(target, anchor_pos);
  const bool back_full = !back.full.empty();
  const auto& back_list = back_full ? back.full : back.partial;
  const bool back_overflow = back_full ? back.full_overflow : back.partial_overflow;

  ForwardDfs fwd{g, p, limits.max_instances, anchor_pos, {}, {}, false, false, {}};
  const bool fwd_complete = fwd.run(target);
  const auto& fwd_list = fwd_complete ? fwd.completes : fwd.partials;
  const bool fwd_overflow = fwd_complete ? fwd.complete_overflow : fwd.partial_overflow;

  MatchResult result;
  result.truncated = back_overflow || fwd_overflow;
  for (const auto& b : back_list) {
    for (const auto& f : fwd_list) {
      if (result.instances.size() >= limits.max_instances) {
        result.truncated = true;
        return result;
      }
      MatchInstance inst;
      inst.nodes = b.nodes;
      inst.nodes.insert(inst.nodes.end(), f.nodes.begin() + 1, f.nodes.end());
      inst.offset = b.offset;
      inst.complete = b.offset == 0 && inst.nodes.size() == p.length() + 1;
      if (inst.complete) ++result.complete_count;
      result.instances.push_back(std::move(inst));
    }
  }
  return result;
}

void write_matches_jsonl(std::ostream& out, const HetGraph& g, const MetapathPattern& p,
                         NodeIndex start, const MatchResult& result) {
  for (const auto& inst : result.instances) {
    nlohmann::json row;
    row["start"] = g.address(start);
    row["pattern"] = p.name.empty() ? p.spec_string() : p.name;
    auto nodes = nlohmann::json::array();
    for (NodeIndex v : inst.nodes) nodes.push_back(g.address(v));
    row["nodes"] = std::move(nodes);
    row["complete"] = inst.complete;
    if (inst.offset != 0) row["offset"] = inst.offset;
    out << row.dump() << '\n';
  }
}

}  // namespace hfaug
