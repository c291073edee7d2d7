// hfaug command line. Everything goes through the C API in hfaug.h; this
// file only does argument handling and console formatting.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hfaug/hfaug.h"

namespace {

using graph_ptr = std::unique_ptr<hfa_graph, decltype(&hfa_graph_free)>;
using matrix_ptr = std::unique_ptr<hfa_matrix, decltype(&hfa_matrix_free)>;
using pattern_ptr = std::unique_ptr<hfa_pattern, decltype(&hfa_pattern_free)>;
using matches_ptr = std::unique_ptr<hfa_matches, decltype(&hfa_matches_free)>;
using walks_ptr = std::unique_ptr<hfa_walks, decltype(&hfa_walks_free)>;
using report_ptr = std::unique_ptr<hfa_report, decltype(&hfa_report_free)>;
using strings_ptr = std::unique_ptr<hfa_strings, decltype(&hfa_strings_free)>;

int fail(hfa_status st) {
  std::cerr << "error: " << hfa_last_error() << "\n";
  return static_cast<int>(st);
}

int fail_io(const std::string& what) {
  std::cerr << "error: " << what << "\n";
  return static_cast<int>(HFA_ERROR_DATA);
}

// Shared input flags for commands that build the graph.
struct GraphArgs {
  std::string accounts, edges, labels;
  std::string format = "csv";
  bool lenient = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("-a,--accounts", accounts, "account file (address,kind)")->required();
    cmd->add_option("-e,--edges", edges, "edge file (src,dst,etype,amount,timestamp)")->required();
    cmd->add_option("-l,--labels", labels, "label file (address,label)");
    cmd->add_option("--format", format, "input format")
        ->check(CLI::IsMember({"csv", "jsonl"}))
        ->capture_default_str();
    cmd->add_flag("--lenient", lenient, "skip malformed rows instead of failing");
  }

  hfa_status load(graph_ptr& out) const {
    hfa_graph* g = nullptr;
    hfa_status st = hfa_graph_load(accounts.c_str(), edges.c_str(),
                                   labels.empty() ? nullptr : labels.c_str(),
                                   format == "jsonl" ? HFA_FORMAT_JSONL : HFA_FORMAT_CSV,
                                   lenient ? 1 : 0, &g);
    if (st == HFA_OK) out.reset(g);
    return st;
  }
};

bool read_id_file(const std::string& path, std::vector<std::string>& out) {
  std::ifstream in(path);
  if (!in) return false;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return true;
}

strings_ptr make_strings(const std::vector<std::string>& items, hfa_status& st) {
  std::vector<const char*> raw;
  raw.reserve(items.size());
  for (const auto& s : items) raw.push_back(s.c_str());
  hfa_strings* list = nullptr;
  st = hfa_strings_create(raw.data(), raw.size(), &list);
  return strings_ptr(list, &hfa_strings_free);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct Global {
  uint64_t seed = 0;
  uint32_t threads = 1;
  bool quiet = false;
  bool seed_given = false;
};

int run_ingest(const GraphArgs& in, const std::string& expect, const std::string& out_prefix,
               const Global& g) {
  graph_ptr graph(nullptr, &hfa_graph_free);
  if (hfa_status st = in.load(graph); st != HFA_OK) return fail(st);
  if (!expect.empty()) {
    if (hfa_status st = hfa_graph_validate_counts(graph.get(), expect.c_str()); st != HFA_OK)
      return fail(st);
  }
  uint64_t nodes = 0, edges = 0, ca = 0, eoa = 0, trans = 0, call = 0, labels = 0;
  if (hfa_status st =
          hfa_graph_counts(graph.get(), &nodes, &edges, &ca, &eoa, &trans, &call, &labels);
      st != HFA_OK)
    return fail(st);
  if (!g.quiet)
    std::cout << "nodes=" << nodes << " edges=" << edges << " ca=" << ca << " eoa=" << eoa
              << " trans=" << trans << " call=" << call << " ponzi=" << labels << "\n";
  if (!out_prefix.empty()) {
    std::string a = out_prefix + "accounts.csv";
    std::string e = out_prefix + "edges.csv";
    std::string l = out_prefix + "labels.csv";
    if (hfa_status st = hfa_graph_save(graph.get(), a.c_str(), e.c_str(), l.c_str());
        st != HFA_OK)
      return fail(st);
    if (!g.quiet) std::cout << "wrote " << a << " " << e << " " << l << "\n";
  }
  return 0;
}

int run_features(const GraphArgs& in, const std::string& only, const std::string& ids_path,
                 const std::string& out, const Global& g) {
  graph_ptr graph(nullptr, &hfa_graph_free);
  if (hfa_status st = in.load(graph); st != HFA_OK) return fail(st);

  strings_ptr ids(nullptr, &hfa_strings_free);
  if (!ids_path.empty()) {
    std::vector<std::string> lines;
    if (!read_id_file(ids_path, lines)) return fail_io("cannot read id file: " + ids_path);
    hfa_status st = HFA_OK;
    ids = make_strings(lines, st);
    if (st != HFA_OK) return fail(st);
  } else if (only != "all") {
    hfa_strings* list = nullptr;
    int kind = only == "ca" ? HFA_KIND_CA : HFA_KIND_EOA;
    if (hfa_status st = hfa_graph_accounts(graph.get(), kind, &list); st != HFA_OK)
      return fail(st);
    ids.reset(list);
  }

  hfa_matrix* m = nullptr;
  if (hfa_status st = hfa_manual_features(graph.get(), ids.get(), &m); st != HFA_OK)
    return fail(st);
  matrix_ptr features(m, &hfa_matrix_free);
  if (hfa_status st = hfa_matrix_save_csv(features.get(), out.c_str()); st != HFA_OK)
    return fail(st);
  uint64_t rows = 0, cols = 0;
  hfa_matrix_dims(features.get(), &rows, &cols);
  if (!g.quiet) std::cout << "rows=" << rows << " cols=" << cols << " -> " << out << "\n";
  return 0;
}

int run_match(const GraphArgs& in, const std::string& pattern_spec, const std::string& start,
              int list_kind, uint64_t anchor, uint64_t max_instances, const std::string& out,
              const Global& g) {
  graph_ptr graph(nullptr, &hfa_graph_free);
  if (hfa_status st = in.load(graph); st != HFA_OK) return fail(st);

  hfa_pattern* p = nullptr;
  if (hfa_status st = hfa_pattern_compile(pattern_spec.c_str(), &p); st != HFA_OK)
    return fail(st);
  pattern_ptr pattern(p, &hfa_pattern_free);

  int anchor_kind = 0;
  if (hfa_status st = hfa_pattern_kind_at(pattern.get(), anchor, &anchor_kind); st != HFA_OK)
    return fail(st);

  std::vector<std::string> starts;
  if (!start.empty()) {
    starts.push_back(start);
  } else {
    hfa_strings* list = nullptr;
    if (hfa_status st = hfa_graph_accounts(graph.get(), list_kind, &list); st != HFA_OK)
      return fail(st);
    strings_ptr owned(list, &hfa_strings_free);
    // only starts whose kind sits at the anchor position can match
    if (list_kind == anchor_kind)
      for (size_t i = 0; i < hfa_strings_count(owned.get()); ++i)
        starts.push_back(hfa_strings_get(owned.get(), i));
  }

  std::ofstream file;
  std::ostream* sink = &std::cout;
  if (!out.empty() && out != "-") {
    file.open(out);
    if (!file) return fail_io("cannot open output: " + out);
    sink = &file;
  }

  size_t instances = 0, truncated = 0;
  for (const auto& s : starts) {
    hfa_matches* m = nullptr;
    if (hfa_status st = hfa_match(graph.get(), pattern.get(), s.c_str(), anchor, max_instances, &m);
        st != HFA_OK)
      return fail(st);
    matches_ptr matches(m, &hfa_matches_free);
    instances += hfa_matches_count(matches.get());
    truncated += hfa_matches_truncated(matches.get()) ? 1 : 0;
    char* jsonl = nullptr;
    if (hfa_status st = hfa_matches_to_jsonl(matches.get(), &jsonl); st != HFA_OK)
      return fail(st);
    *sink << jsonl;
    hfa_string_free(jsonl);
  }
  if (!g.quiet)
    std::cerr << "starts=" << starts.size() << " instances=" << instances
              << " truncated=" << truncated << "\n";
  return 0;
}

int run_augment(const GraphArgs& in, const std::string& features_path, const std::string& out,
                const std::string& mode, const std::string& patterns_arg, bool no_dedupe,
                const std::string& agg, uint64_t max_instances, const std::string& targets_path,
                std::string report_path, const Global& g) {
  graph_ptr graph(nullptr, &hfa_graph_free);
  if (hfa_status st = in.load(graph); st != HFA_OK) return fail(st);

  hfa_matrix* m = nullptr;
  if (hfa_status st = hfa_matrix_load_csv(features_path.c_str(), &m); st != HFA_OK)
    return fail(st);
  matrix_ptr features(m, &hfa_matrix_free);

  std::vector<pattern_ptr> owned;
  std::vector<const hfa_pattern*> patterns;
  for (const auto& spec : split_list(patterns_arg)) {
    hfa_pattern* p = nullptr;
    if (hfa_status st = hfa_pattern_compile(spec.c_str(), &p); st != HFA_OK) return fail(st);
    owned.emplace_back(p, &hfa_pattern_free);
    patterns.push_back(p);
  }

  strings_ptr targets(nullptr, &hfa_strings_free);
  if (!targets_path.empty()) {
    std::vector<std::string> lines;
    if (!read_id_file(targets_path, lines))
      return fail_io("cannot read targets file: " + targets_path);
    hfa_status st = HFA_OK;
    targets = make_strings(lines, st);
    if (st != HFA_OK) return fail(st);
  }

  hfa_matrix* aug = nullptr;
  char* diagnostics = nullptr;
  hfa_status st = hfa_augment(graph.get(), features.get(), targets.get(),
                              mode == "head-node" ? HFA_AUG_HEAD_NODE : HFA_AUG_TARGET_CA,
                              patterns.data(), patterns.size(), no_dedupe ? 0 : 1,
                              agg == "mean" ? HFA_AGG_MEAN : HFA_AGG_SUM, max_instances, &aug,
                              &diagnostics);
  if (st != HFA_OK) return fail(st);
  matrix_ptr augmented(aug, &hfa_matrix_free);

  if (hfa_status sst = hfa_matrix_save_csv(augmented.get(), out.c_str()); sst != HFA_OK) {
    hfa_string_free(diagnostics);
    return fail(sst);
  }
  if (report_path.empty()) report_path = out + ".report.json";
  {
    std::ofstream rep(report_path);
    if (!rep) {
      hfa_string_free(diagnostics);
      return fail_io("cannot open report: " + report_path);
    }
    rep << diagnostics << "\n";
  }
  hfa_string_free(diagnostics);
  uint64_t rows = 0, cols = 0;
  hfa_matrix_dims(augmented.get(), &rows, &cols);
  if (!g.quiet)
    std::cout << "rows=" << rows << " cols=" << cols << " -> " << out << " (report "
              << report_path << ")\n";
  return 0;
}

int run_embed(const GraphArgs& in, const std::string& strategy, double p, double q,
              uint32_t walks, uint32_t length, bool undirected, uint32_t dim, uint32_t window,
              uint32_t negatives, uint32_t epochs, double lr, bool l2norm,
              const std::string& walks_out, const std::string& out, const Global& g) {
  graph_ptr graph(nullptr, &hfa_graph_free);
  if (hfa_status st = in.load(graph); st != HFA_OK) return fail(st);

  hfa_walks* w = nullptr;
  if (hfa_status st = hfa_generate_walks(
          graph.get(), walks, length,
          strategy == "node2vec" ? HFA_WALK_NODE2VEC : HFA_WALK_UNIFORM, p, q,
          undirected ? 1 : 0, g.seed, &w);
      st != HFA_OK)
    return fail(st);
  walks_ptr corpus(w, &hfa_walks_free);

  if (!walks_out.empty()) {
    if (hfa_status st = hfa_walks_save(corpus.get(), walks_out.c_str()); st != HFA_OK)
      return fail(st);
  }

  hfa_matrix* m = nullptr;
  double loss = 0;
  if (hfa_status st = hfa_train_embeddings(corpus.get(), dim, window, negatives, epochs, lr,
                                           g.seed, l2norm ? 1 : 0, &m, &loss);
      st != HFA_OK)
    return fail(st);
  matrix_ptr emb(m, &hfa_matrix_free);
  if (hfa_status st = hfa_matrix_save_csv(emb.get(), out.c_str()); st != HFA_OK) return fail(st);

  uint64_t rows = 0, cols = 0;
  hfa_matrix_dims(emb.get(), &rows, &cols);
  if (!g.quiet) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", loss);
    std::cout << "walks=" << hfa_walks_count(corpus.get()) << " loss=" << buf << " rows=" << rows
              << " dim=" << cols << " -> " << out << "\n";
  }
  return 0;
}

int run_evaluate(const std::string& features_path, const std::string& labels_path,
                 const std::string& model, uint32_t k, uint32_t repeats, bool no_standardize,
                 const std::string& out, const Global& g) {
  hfa_matrix* m = nullptr;
  if (hfa_status st = hfa_matrix_load_csv(features_path.c_str(), &m); st != HFA_OK)
    return fail(st);
  matrix_ptr features(m, &hfa_matrix_free);

  hfa_report* r = nullptr;
  if (hfa_status st = hfa_evaluate(features.get(), labels_path.c_str(),
                                   model == "svm" ? HFA_MODEL_HINGE : HFA_MODEL_LOGISTIC, k,
                                   repeats, g.seed, no_standardize ? 0 : 1, &r);
      st != HFA_OK)
    return fail(st);
  report_ptr report(r, &hfa_report_free);

  double mean = 0, stddev = 0;
  hfa_report_mean(report.get(), &mean, &stddev);
  if (!g.quiet) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "micro-F1 %.4f +/- %.4f", mean, stddev);
    std::cout << "model=" << model << " k=" << k << " repeats=" << repeats << " seed=" << g.seed
              << "\n"
              << buf << "\n";
  }
  if (!out.empty()) {
    if (hfa_status st = hfa_report_save_json(report.get(), out.c_str()); st != HFA_OK)
      return fail(st);
    if (!g.quiet) std::cout << "report -> " << out << "\n";
  }
  return 0;
}

int run_compare(const std::string& raw_path, const std::string& aug_path, const Global& g) {
  hfa_report* raw = nullptr;
  if (hfa_status st = hfa_report_load_json(raw_path.c_str(), &raw); st != HFA_OK)
    return fail(st);
  report_ptr raw_owned(raw, &hfa_report_free);
  hfa_report* aug = nullptr;
  if (hfa_status st = hfa_report_load_json(aug_path.c_str(), &aug); st != HFA_OK)
    return fail(st);
  report_ptr aug_owned(aug, &hfa_report_free);

  double raw_mean = 0, raw_std = 0, aug_mean = 0, aug_std = 0;
  hfa_report_mean(raw_owned.get(), &raw_mean, &raw_std);
  hfa_report_mean(aug_owned.get(), &aug_mean, &aug_std);
  double gain = 0;
  if (hfa_status st = hfa_gain(raw_mean, aug_mean, &gain); st != HFA_OK) return fail(st);
  char buf[160];
  std::snprintf(buf, sizeof buf, "raw=%.4f (+/- %.4f) aug=%.4f (+/- %.4f) gain=%+.2f%%", raw_mean,
                raw_std, aug_mean, aug_std, gain);
  std::cout << buf << "\n";
  (void)g;
  return 0;
}

int run_synth(uint32_t ponzi, uint32_t background, uint32_t investors, double payback,
              uint32_t noise, const std::string& out_dir, const Global& g) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::string a = out_dir + "/accounts.csv";
  std::string e = out_dir + "/edges.csv";
  std::string l = out_dir + "/labels.csv";
  if (hfa_status st = hfa_synth(ponzi, background, investors, payback, noise, g.seed, a.c_str(),
                                e.c_str(), l.c_str());
      st != HFA_OK)
    return fail(st);
  if (!g.quiet) std::cout << "wrote " << a << " " << e << " " << l << "\n";
  return 0;
}

int run_pipeline(const std::string& config, const std::string& out_dir, const Global& g) {
  char* summary = nullptr;
  if (hfa_status st = hfa_pipeline_run(config.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(),
                                       g.seed_given ? 1 : 0, g.seed, &summary);
      st != HFA_OK)
    return fail(st);
  if (!g.quiet) std::cout << summary << "\n";
  hfa_string_free(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"account-interaction graph analytics with metapath feature augmentation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hfa_version()));

  Global global;
  auto* seed_opt = app.add_option("--seed", global.seed, "global random seed")
                       ->capture_default_str();
  app.add_option("--threads", global.threads, "worker threads (reserved; current build is serial)")
      ->capture_default_str();
  app.add_flag("--quiet", global.quiet, "suppress informational output");

  int rc = 0;

  // ingest
  auto* ingest = app.add_subcommand("ingest", "parse account/edge/label files and build the graph");
  ingest->fallthrough();
  GraphArgs ingest_in;
  ingest_in.attach(ingest);
  std::string ingest_expect, ingest_prefix;
  ingest->add_option("--expect", ingest_expect,
                     "count checks, e.g. \"v=57130,trans=86602,labels=191\"");
  ingest->add_option("--out-prefix", ingest_prefix, "write normalized csv copies to this prefix");
  ingest->callback([&] { rc = run_ingest(ingest_in, ingest_expect, ingest_prefix, global); });

  // features
  auto* features = app.add_subcommand("features", "manual account statistics to csv");
  features->fallthrough();
  GraphArgs features_in;
  features_in.attach(features);
  std::string features_only = "all", features_ids, features_out;
  features->add_option("--only", features_only, "restrict to one account kind")
      ->check(CLI::IsMember({"all", "ca", "eoa"}))
      ->capture_default_str();
  features->add_option("--ids", features_ids, "file with one address per line");
  features->add_option("-o,--out", features_out, "output csv")->required();
  features->callback(
      [&] { rc = run_features(features_in, features_only, features_ids, features_out, global); });

  // metapath match
  auto* metapath = app.add_subcommand("metapath", "metapath operations");
  metapath->require_subcommand(1);
  auto* match = metapath->add_subcommand("match", "enumerate metapath instances as jsonl");
  match->fallthrough();
  GraphArgs match_in;
  match_in.attach(match);
  std::string match_pattern = "P2", match_start, match_out = "-";
  bool match_all_ca = false, match_all_eoa = false;
  uint64_t match_anchor = 0, match_max = 0;
  match->add_option("-p,--pattern", match_pattern, "P1, P2 or a step expression")
      ->capture_default_str();
  auto* start_opt = match->add_option("--start", match_start, "single start address");
  auto* all_ca_opt = match->add_flag("--all-ca", match_all_ca, "match from every contract");
  auto* all_eoa_opt = match->add_flag("--all-eoa", match_all_eoa, "match from every EOA");
  start_opt->excludes(all_ca_opt)->excludes(all_eoa_opt);
  all_ca_opt->excludes(all_eoa_opt);
  match->add_option("--anchor", match_anchor, "pattern position the start address occupies");
  match->add_option("--max-instances", match_max, "instance cap per start (0 = default 1000)");
  match->add_option("-o,--out", match_out, "output jsonl path, - for stdout")
      ->capture_default_str();
  match->callback([&] {
    if (match_start.empty() && !match_all_ca && !match_all_eoa) {
      std::cerr << "error: one of --start, --all-ca, --all-eoa is required\n";
      rc = 1;
      return;
    }
    rc = run_match(match_in, match_pattern, match_start,
                   match_all_ca ? HFA_KIND_CA : HFA_KIND_EOA, match_anchor, match_max, match_out,
                   global);
  });

  // augment
  auto* augment = app.add_subcommand("augment", "metapath feature augmentation");
  augment->fallthrough();
  GraphArgs augment_in;
  augment_in.attach(augment);
  std::string augment_features, augment_out, augment_mode = "target-ca", augment_patterns = "P2";
  std::string augment_agg = "sum", augment_targets, augment_report;
  bool augment_no_dedupe = false;
  uint64_t augment_max = 0;
  augment->add_option("--features", augment_features, "input feature csv")->required();
  augment->add_option("-o,--out", augment_out, "output feature csv")->required();
  augment->add_option("--mode", augment_mode, "anchoring mode")
      ->check(CLI::IsMember({"target-ca", "head-node"}))
      ->capture_default_str();
  augment->add_option("--patterns", augment_patterns, "comma-separated pattern list")
      ->capture_default_str();
  augment->add_flag("--no-dedupe", augment_no_dedupe, "count every occurrence, not distinct nodes");
  augment->add_option("--agg", augment_agg, "aggregator")
      ->check(CLI::IsMember({"sum", "mean"}))
      ->capture_default_str();
  augment->add_option("--max-instances", augment_max, "instance cap per target (0 = default)");
  augment->add_option("--targets", augment_targets, "file with one target address per line");
  augment->add_option("--report", augment_report, "diagnostics json (default <out>.report.json)");
  augment->callback([&] {
    rc = run_augment(augment_in, augment_features, augment_out, augment_mode, augment_patterns,
                     augment_no_dedupe, augment_agg, augment_max, augment_targets, augment_report,
                     global);
  });

  // embed
  auto* embed = app.add_subcommand("embed", "random-walk embeddings to csv");
  embed->fallthrough();
  GraphArgs embed_in;
  embed_in.attach(embed);
  std::string embed_strategy = "deepwalk", embed_walks_out, embed_out;
  double embed_p = 1.0, embed_q = 1.0, embed_lr = 0.025;
  uint32_t embed_walks = 5, embed_length = 50, embed_dim = 128, embed_window = 10;
  uint32_t embed_negatives = 5, embed_epochs = 5;
  bool embed_undirected = false, embed_l2 = false;
  embed->add_option("--strategy", embed_strategy, "walk strategy")
      ->check(CLI::IsMember({"deepwalk", "node2vec"}))
      ->capture_default_str();
  embed->add_option("--p", embed_p, "node2vec return parameter")->capture_default_str();
  embed->add_option("--q", embed_q, "node2vec in-out parameter")->capture_default_str();
  embed->add_option("--walks", embed_walks, "walks per node")->capture_default_str();
  embed->add_option("--length", embed_length, "walk length in steps")->capture_default_str();
  embed->add_flag("--undirected", embed_undirected, "walk edges in both directions");
  embed->add_option("--dim", embed_dim, "embedding dimension")->capture_default_str();
  embed->add_option("--window", embed_window, "context window")->capture_default_str();
  embed->add_option("--negatives", embed_negatives, "negative samples per pair")
      ->capture_default_str();
  embed->add_option("--epochs", embed_epochs, "training epochs")->capture_default_str();
  embed->add_option("--lr", embed_lr, "initial learning rate")->capture_default_str();
  embed->add_flag("--l2norm", embed_l2, "l2-normalize embedding rows");
  embed->add_option("--walks-out", embed_walks_out, "also dump the walk corpus");
  embed->add_option("-o,--out", embed_out, "output csv")->required();
  embed->callback([&] {
    rc = run_embed(embed_in, embed_strategy, embed_p, embed_q, embed_walks, embed_length,
                   embed_undirected, embed_dim, embed_window, embed_negatives, embed_epochs,
                   embed_lr, embed_l2, embed_walks_out, embed_out, global);
  });

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "repeated stratified k-fold cross-validation");
  evaluate->fallthrough();
  std::string eval_features, eval_labels, eval_model = "lr", eval_out;
  uint32_t eval_k = 5, eval_repeats = 10;
  bool eval_no_std = false;
  evaluate->add_option("--features", eval_features, "feature csv")->required();
  evaluate->add_option("--labels", eval_labels, "label csv (address,label)")->required();
  evaluate->add_option("--model", eval_model, "classifier")
      ->check(CLI::IsMember({"lr", "svm"}))
      ->capture_default_str();
  evaluate->add_option("--k", eval_k, "folds")->capture_default_str();
  evaluate->add_option("--repeats", eval_repeats, "shuffled repetitions")->capture_default_str();
  evaluate->add_flag("--no-standardize", eval_no_std, "skip per-fold z-scoring");
  evaluate->add_option("-o,--out", eval_out, "write the report as json");
  evaluate->callback([&] {
    rc = run_evaluate(eval_features, eval_labels, eval_model, eval_k, eval_repeats, eval_no_std,
                      eval_out, global);
  });

  // compare
  auto* compare = app.add_subcommand("compare", "relative gain between two cv reports");
  compare->fallthrough();
  std::string cmp_raw, cmp_aug;
  compare->add_option("--raw", cmp_raw, "baseline report json")->required();
  compare->add_option("--aug", cmp_aug, "augmented report json")->required();
  compare->callback([&] { rc = run_compare(cmp_raw, cmp_aug, global); });

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic labeled dataset");
  synth->fallthrough();
  uint32_t synth_ponzi = 10, synth_background = 100, synth_investors = 5, synth_noise = 200;
  double synth_payback = 0.5;
  std::string synth_dir = ".";
  synth->add_option("--ponzi", synth_ponzi, "planted ponzi contracts")->capture_default_str();
  synth->add_option("--background", synth_background, "background contracts")
      ->capture_default_str();
  synth->add_option("--investors", synth_investors, "investors per ponzi contract")
      ->capture_default_str();
  synth->add_option("--payback", synth_payback, "payback probability per deposit")
      ->capture_default_str();
  synth->add_option("--noise", synth_noise, "extra random edges")->capture_default_str();
  synth->add_option("--out-dir", synth_dir, "output directory")->capture_default_str();
  synth->callback([&] {
    rc = run_synth(synth_ponzi, synth_background, synth_investors, synth_payback, synth_noise,
                   synth_dir, global);
  });

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "run the full pipeline from a json config");
  pipeline->fallthrough();
  std::string pipe_config, pipe_out_dir;
  pipeline->add_option("-c,--config", pipe_config, "pipeline config json")->required();
  pipeline->add_option("--out-dir", pipe_out_dir, "override the config's output directory");
  pipeline->callback([&] {
    global.seed_given = seed_opt->count() > 0;
    rc = run_pipeline(pipe_config, pipe_out_dir, global);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (global.threads > 1 && !global.quiet)
    std::cerr << "note: --threads > 1 has no effect in this build\n";
  return rc;
}
