#include "hfaug/hfaug.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "hfaug/augment.hpp"
#include "hfaug/embed.hpp"
#include "hfaug/error.hpp"
#include "hfaug/features.hpp"
#include "hfaug/graph.hpp"
#include "hfaug/io.hpp"
#include "hfaug/metapath.hpp"
#include "hfaug/mlkit.hpp"
#include "hfaug/pipeline.hpp"
#include "hfaug/synth.hpp"

using namespace hfaug;

struct hfa_graph {
  std::shared_ptr<HetGraph> g;
};
struct hfa_matrix {
  FeatureMatrix m;
};
struct hfa_pattern {
  MetapathPattern p;
};
struct hfa_matches {
  MatchResult result;
  std::vector<std::vector<std::string>> names;  // instance -> node addresses
  std::string jsonl;
};
struct hfa_walks {
  std::shared_ptr<HetGraph> g;
  WalkCorpus corpus;
};
struct hfa_report {
  CvReport rep;
};
struct hfa_strings {
  std::vector<std::string> items;
};

namespace {

thread_local std::string t_last_error;

hfa_status classify(Errc code) {
  switch (code) {
    case Errc::syntax_error:
    case Errc::anchor_out_of_range:
    case Errc::kind_incompatible:
    case Errc::kind_mismatch:
    case Errc::unknown_account:
    case Errc::dimension_mismatch:
    case Errc::length_mismatch:
    case Errc::division_by_zero:
    case Errc::config_error:
      return HFA_ERROR_USAGE;
    case Errc::internal_error:
      return HFA_ERROR_INTERNAL;
    default:
      return HFA_ERROR_DATA;
  }
}

hfa_status fail(hfa_status status, std::string message) {
  t_last_error = std::move(message);
  return status;
}

hfa_status usage(const char* message) { return fail(HFA_ERROR_USAGE, message); }

template <class F>
hfa_status guarded(F&& fn) {
  try {
    fn();
    return HFA_OK;
  } catch (const Error& err) {
    return fail(classify(err.code()), err.what());
  } catch (const std::exception& err) {
    return fail(HFA_ERROR_INTERNAL, err.what());
  } catch (...) {
    return fail(HFA_ERROR_INTERNAL, "unknown failure");
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Format to_format(hfa_format f) { return f == HFA_FORMAT_JSONL ? Format::Jsonl : Format::Csv; }

ModelKind to_model(hfa_model m) {
  return m == HFA_MODEL_HINGE ? ModelKind::Hinge : ModelKind::Logistic;
}

}  // namespace

extern "C" {

const char* hfa_version(void) { return "0.1.0"; }

const char* hfa_last_error(void) { return t_last_error.c_str(); }

void hfa_string_free(char* s) { delete[] s; }

/* ---- id lists ---------------------------------------------------------- */

hfa_status hfa_strings_create(const char* const* items, size_t count, hfa_strings** out) {
  if (!out || (count > 0 && !items)) return usage("hfa_strings_create: NULL argument");
  return guarded([&] {
    auto list = std::make_unique<hfa_strings>();
    list->items.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (!items[i]) raise(Errc::config_error, "NULL item in string list");
      list->items.emplace_back(items[i]);
    }
    *out = list.release();
  });
}

size_t hfa_strings_count(const hfa_strings* list) { return list ? list->items.size() : 0; }

const char* hfa_strings_get(const hfa_strings* list, size_t i) {
  if (!list || i >= list->items.size()) return nullptr;
  return list->items[i].c_str();
}

void hfa_strings_free(hfa_strings* list) { delete list; }

/* ---- graph ------------------------------------------------------------- */

hfa_status hfa_graph_load(const char* accounts_path, const char* edges_path,
                          const char* labels_path, hfa_format format, int lenient,
                          hfa_graph** out) {
  if (!accounts_path || !edges_path || !out) return usage("hfa_graph_load: NULL argument");
  return guarded([&] {
    auto records = load_records(accounts_path, edges_path, labels_path ? labels_path : "",
                                to_format(format), lenient != 0);
    BuildOptions opts;
    opts.drop_call_into_eoa = lenient != 0;
    opts.drop_bad_labels = lenient != 0;
    auto g = std::make_shared<HetGraph>(
        HetGraph::build(records.accounts, records.edges, records.labels, opts));
    *out = new hfa_graph{std::move(g)};
  });
}

void hfa_graph_free(hfa_graph* g) { delete g; }

hfa_status hfa_graph_counts(const hfa_graph* g, uint64_t* nodes, uint64_t* edges, uint64_t* ca,
                            uint64_t* eoa, uint64_t* trans, uint64_t* call, uint64_t* labels) {
  if (!g) return usage("hfa_graph_counts: NULL graph");
  if (nodes) *nodes = g->g->node_count();
  if (edges) *edges = g->g->edge_count();
  if (ca) *ca = g->g->ca_count();
  if (eoa) *eoa = g->g->eoa_count();
  if (trans) *trans = g->g->trans_count();
  if (call) *call = g->g->call_count();
  if (labels) *labels = g->g->ponzi_count();
  return HFA_OK;
}

hfa_status hfa_graph_validate_counts(const hfa_graph* g, const char* expectations) {
  if (!g || !expectations) return usage("hfa_graph_validate_counts: NULL argument");
  return guarded([&] { validate_counts(*g->g, ExpectedCounts::parse(expectations)); });
}

hfa_status hfa_graph_save(const hfa_graph* g, const char* accounts_path, const char* edges_path,
                          const char* labels_path) {
  if (!g || !accounts_path || !edges_path || !labels_path) {
    return usage("hfa_graph_save: NULL argument");
  }
  return guarded([&] { save_graph(*g->g, accounts_path, edges_path, labels_path); });
}

hfa_status hfa_graph_accounts(const hfa_graph* g, int kind, hfa_strings** out) {
  if (!g || !out) return usage("hfa_graph_accounts: NULL argument");
  if (kind < -1 || kind > 1) return usage("hfa_graph_accounts: kind must be -1, 0 or 1");
  return guarded([&] {
    auto list = std::make_unique<hfa_strings>();
    for (NodeIndex v = 0; v < g->g->node_count(); ++v) {
      if (kind == -1 || static_cast<int>(g->g->kind(v)) == kind) {
        list->items.push_back(g->g->address(v));
      }
    }
    *out = list.release();
  });
}

hfa_status hfa_graph_ponzi_accounts(const hfa_graph* g, hfa_strings** out) {
  if (!g || !out) return usage("hfa_graph_ponzi_accounts: NULL argument");
  return guarded([&] {
    auto list = std::make_unique<hfa_strings>();
    for (NodeIndex v : g->g->ponzi_nodes()) list->items.push_back(g->g->address(v));
    *out = list.release();
  });
}

hfa_status hfa_graph_account_kind(const hfa_graph* g, const char* address, int* kind) {
  if (!g || !address || !kind) return usage("hfa_graph_account_kind: NULL argument");
  return guarded([&] { *kind = static_cast<int>(g->g->kind(g->g->require(address))); });
}

hfa_status hfa_graph_sample_negatives(const hfa_graph* g, uint64_t seed, hfa_strings** out) {
  if (!g || !out) return usage("hfa_graph_sample_negatives: NULL argument");
  return guarded([&] {
    auto list = std::make_unique<hfa_strings>();
    for (NodeIndex v : sample_negatives(*g->g, seed)) list->items.push_back(g->g->address(v));
    *out = list.release();
  });
}

/* ---- feature matrices --------------------------------------------------- */

hfa_status hfa_matrix_load_csv(const char* path, hfa_matrix** out) {
  if (!path || !out) return usage("hfa_matrix_load_csv: NULL argument");
  return guarded([&] { *out = new hfa_matrix{FeatureMatrix::load_csv(std::string(path))}; });
}

hfa_status hfa_matrix_save_csv(const hfa_matrix* m, const char* path) {
  if (!m || !path) return usage("hfa_matrix_save_csv: NULL argument");
  return guarded([&] { m->m.save_csv(std::string(path)); });
}

hfa_status hfa_matrix_dims(const hfa_matrix* m, uint64_t* rows, uint64_t* cols) {
  if (!m) return usage("hfa_matrix_dims: NULL matrix");
  if (rows) *rows = m->m.rows();
  if (cols) *cols = m->m.dim();
  return HFA_OK;
}

hfa_status hfa_matrix_id(const hfa_matrix* m, uint64_t row, const char** out) {
  if (!m || !out) return usage("hfa_matrix_id: NULL argument");
  if (row >= m->m.rows()) return usage("hfa_matrix_id: row out of range");
  *out = m->m.id(row).c_str();
  return HFA_OK;
}

hfa_status hfa_matrix_row(const hfa_matrix* m, uint64_t row, const double** values,
                          uint64_t* count) {
  if (!m || !values) return usage("hfa_matrix_row: NULL argument");
  if (row >= m->m.rows()) return usage("hfa_matrix_row: row out of range");
  auto span = m->m.row(row);
  *values = span.data();
  if (count) *count = span.size();
  return HFA_OK;
}

void hfa_matrix_free(hfa_matrix* m) { delete m; }

hfa_status hfa_manual_features(const hfa_graph* g, const hfa_strings* ids, hfa_matrix** out) {
  if (!g || !out) return usage("hfa_manual_features: NULL argument");
  return guarded([&] {
    if (ids) {
      *out = new hfa_matrix{feature_matrix(*g->g, ids->items)};
    } else {
      std::vector<NodeIndex> all(g->g->node_count());
      for (NodeIndex v = 0; v < g->g->node_count(); ++v) all[v] = v;
      *out = new hfa_matrix{feature_matrix(*g->g, std::span<const NodeIndex>(all))};
    }
  });
}

/* ---- metapaths ---------------------------------------------------------- */

hfa_status hfa_pattern_compile(const char* spec, hfa_pattern** out) {
  if (!spec || !out) return usage("hfa_pattern_compile: NULL argument");
  return guarded([&] { *out = new hfa_pattern{compile_pattern(spec)}; });
}

const char* hfa_pattern_name(const hfa_pattern* p) { return p ? p->p.name.c_str() : nullptr; }

size_t hfa_pattern_steps(const hfa_pattern* p) { return p ? p->p.length() : 0; }

hfa_status hfa_pattern_kind_at(const hfa_pattern* p, size_t pos, int* kind) {
  if (!p || !kind) return usage("hfa_pattern_kind_at: NULL argument");
  if (pos > p->p.length()) return usage("hfa_pattern_kind_at: position out of range");
  *kind = p->p.kind_at(pos) == AccountKind::Eoa ? HFA_KIND_EOA : HFA_KIND_CA;
  return HFA_OK;
}

void hfa_pattern_free(hfa_pattern* p) { delete p; }

hfa_status hfa_match(const hfa_graph* g, const hfa_pattern* p, const char* address,
                     size_t anchor_pos, uint64_t max_instances, hfa_matches** out) {
  if (!g || !p || !address || !out) return usage("hfa_match: NULL argument");
  return guarded([&] {
    MatchLimits limits;
    if (max_instances > 0) limits.max_instances = max_instances;
    NodeIndex start = g->g->require(address);
    auto handle = std::make_unique<hfa_matches>();
    handle->result = match_anchored(*g->g, start, p->p, anchor_pos, limits);
    handle->names.reserve(handle->result.instances.size());
    for (const auto& inst : handle->result.instances) {
      std::vector<std::string> names;
      names.reserve(inst.nodes.size());
      for (NodeIndex v : inst.nodes) names.push_back(g->g->address(v));
      handle->names.push_back(std::move(names));
    }
    std::ostringstream buf;
    write_matches_jsonl(buf, *g->g, p->p, start, handle->result);
    handle->jsonl = buf.str();
    *out = handle.release();
  });
}

size_t hfa_matches_count(const hfa_matches* m) { return m ? m->result.instances.size() : 0; }

int hfa_matches_truncated(const hfa_matches* m) { return m && m->result.truncated ? 1 : 0; }

hfa_status hfa_matches_instance(const hfa_matches* m, size_t i, uint32_t* offset, int* complete,
                                size_t* length) {
  if (!m) return usage("hfa_matches_instance: NULL matches");
  if (i >= m->result.instances.size()) return usage("hfa_matches_instance: index out of range");
  const auto& inst = m->result.instances[i];
  if (offset) *offset = inst.offset;
  if (complete) *complete = inst.complete ? 1 : 0;
  if (length) *length = inst.nodes.size();
  return HFA_OK;
}

hfa_status hfa_matches_node(const hfa_matches* m, size_t i, size_t j, const char** out) {
  if (!m || !out) return usage("hfa_matches_node: NULL argument");
  if (i >= m->names.size() || j >= m->names[i].size()) {
    return usage("hfa_matches_node: index out of range");
  }
  *out = m->names[i][j].c_str();
  return HFA_OK;
}

hfa_status hfa_matches_to_jsonl(const hfa_matches* m, char** out) {
  if (!m || !out) return usage("hfa_matches_to_jsonl: NULL argument");
  *out = dup_string(m->jsonl);
  return HFA_OK;
}

void hfa_matches_free(hfa_matches* m) { delete m; }

/* ---- feature augmentation ----------------------------------------------- */

hfa_status hfa_augment(const hfa_graph* g, const hfa_matrix* features, const hfa_strings* targets,
                       hfa_aug_mode mode, const hfa_pattern* const* patterns, size_t pattern_count,
                       int dedupe, hfa_agg agg, uint64_t max_instances, hfa_matrix** out,
                       char** diagnostics_json) {
  if (!g || !features || !patterns || pattern_count == 0 || !out) {
    return usage("hfa_augment: NULL argument or empty pattern list");
  }
  return guarded([&] {
    AugmentationConfig cfg;
    cfg.mode = mode == HFA_AUG_HEAD_NODE ? AugMode::HeadNode : AugMode::TargetCa;
    cfg.dedupe = dedupe != 0;
    cfg.agg = agg == HFA_AGG_MEAN ? AggKind::Mean : AggKind::Sum;
    if (max_instances > 0) cfg.limits.max_instances = max_instances;
    for (size_t i = 0; i < pattern_count; ++i) {
      if (!patterns[i]) raise(Errc::config_error, "NULL pattern in list");
      cfg.patterns.push_back(patterns[i]->p);
    }

    std::vector<std::string> target_ids;
    if (targets) {
      target_ids = targets->items;
    } else {
      for (size_t i = 0; i < features->m.rows(); ++i) {
        const std::string& id = features->m.id(i);
        if (cfg.mode == AugMode::TargetCa &&
            g->g->kind(g->g->require(id)) != AccountKind::Ca) {
          continue;
        }
        target_ids.push_back(id);
      }
    }

    AugmentReport report;
    auto result = augment_matrix(*g->g, features->m, target_ids, cfg, &report);
    if (diagnostics_json) *diagnostics_json = dup_string(report_to_json(report, cfg));
    *out = new hfa_matrix{std::move(result)};
  });
}

/* ---- random walks and embeddings ---------------------------------------- */

hfa_status hfa_generate_walks(const hfa_graph* g, uint32_t walks_per_node, uint32_t walk_length,
                              hfa_walk_strategy strategy, double p, double q, int undirected,
                              uint64_t seed, hfa_walks** out) {
  if (!g || !out) return usage("hfa_generate_walks: NULL argument");
  return guarded([&] {
    WalkConfig cfg;
    cfg.walks_per_node = walks_per_node;
    cfg.walk_length = walk_length;
    cfg.strategy = strategy == HFA_WALK_NODE2VEC ? WalkStrategy::Node2Vec : WalkStrategy::Uniform;
    cfg.p = p;
    cfg.q = q;
    cfg.undirected = undirected != 0;
    cfg.seed = seed;
    HomGraph hom(*g->g);
    *out = new hfa_walks{g->g, generate_walks(hom, cfg)};
  });
}

size_t hfa_walks_count(const hfa_walks* w) { return w ? w->corpus.walks.size() : 0; }

hfa_status hfa_walks_save(const hfa_walks* w, const char* path) {
  if (!w || !path) return usage("hfa_walks_save: NULL argument");
  return guarded([&] {
    std::ofstream out(path);
    if (!out) raise(Errc::io_error, std::string("cannot open '") + path + "' for writing");
    HomGraph hom(*w->g);
    save_walks(out, hom, w->corpus);
  });
}

void hfa_walks_free(hfa_walks* w) { delete w; }

hfa_status hfa_train_embeddings(const hfa_walks* w, uint32_t dim, uint32_t window,
                                uint32_t negatives, uint32_t epochs, double learning_rate,
                                uint64_t seed, int l2_normalize, hfa_matrix** out,
                                double* final_loss) {
  if (!w || !out) return usage("hfa_train_embeddings: NULL argument");
  return guarded([&] {
    SkipGramConfig cfg;
    cfg.dim = dim;
    cfg.window = window;
    cfg.negatives = negatives;
    cfg.epochs = epochs;
    cfg.learning_rate = learning_rate;
    cfg.seed = seed;
    HomGraph hom(*w->g);
    double loss = 0;
    auto trained = train_skipgram(hom, w->corpus, cfg, &loss);

    // one row per account, zero-filled when absent from the corpus
    std::vector<std::string> ids;
    ids.reserve(w->g->node_count());
    for (NodeIndex v = 0; v < w->g->node_count(); ++v) ids.push_back(w->g->address(v));
    FeatureMatrix full(std::move(ids), cfg.dim, "e");
    for (size_t i = 0; i < full.rows(); ++i) {
      if (auto src = trained.find(full.id(i))) {
        auto from = trained.row(*src);
        auto dst = full.row(i);
        std::copy(from.begin(), from.end(), dst.begin());
        if (l2_normalize) {
          double norm = 0;
          for (double x : dst) norm += x * x;
          norm = std::sqrt(norm);
          if (norm > 0) {
            for (double& x : dst) x /= norm;
          }
        }
      }
    }
    if (final_loss) *final_loss = loss;
    *out = new hfa_matrix{std::move(full)};
  });
}

/* ---- evaluation ---------------------------------------------------------- */

hfa_status hfa_evaluate(const hfa_matrix* features, const char* labels_path, hfa_model model,
                        uint32_t k, uint32_t repeats, uint64_t seed, int standardize,
                        hfa_report** out) {
  if (!features || !labels_path || !out) return usage("hfa_evaluate: NULL argument");
  return guarded([&] {
    std::ifstream in(labels_path);
    if (!in) raise(Errc::io_error, std::string("cannot open '") + labels_path + "'");
    auto label_records = parse_labels(in, Format::Csv);
    std::vector<std::pair<std::string, int>> pairs;
    pairs.reserve(label_records.size());
    for (const auto& rec : label_records) {
      pairs.emplace_back(rec.address, rec.label == Label::Ponzi ? 1 : 0);
    }
    Dataset ds = make_dataset(features->m, pairs);
    CvOptions options;
    options.k = k;
    options.repeats = repeats;
    options.seed = seed;
    options.standardize = standardize != 0;
    *out = new hfa_report{cross_validate(ds, to_model(model), options)};
  });
}

hfa_status hfa_report_mean(const hfa_report* r, double* mean, double* stddev) {
  if (!r) return usage("hfa_report_mean: NULL report");
  if (mean) *mean = r->rep.mean;
  if (stddev) *stddev = r->rep.stddev;
  return HFA_OK;
}

hfa_status hfa_report_to_json(const hfa_report* r, char** out) {
  if (!r || !out) return usage("hfa_report_to_json: NULL argument");
  return guarded([&] { *out = dup_string(r->rep.to_json()); });
}

hfa_status hfa_report_load_json(const char* path, hfa_report** out) {
  if (!path || !out) return usage("hfa_report_load_json: NULL argument");
  return guarded([&] { *out = new hfa_report{CvReport::from_json(read_file(path))}; });
}

hfa_status hfa_report_save_json(const hfa_report* r, const char* path) {
  if (!r || !path) return usage("hfa_report_save_json: NULL argument");
  return guarded([&] { write_file(path, r->rep.to_json()); });
}

void hfa_report_free(hfa_report* r) { delete r; }

hfa_status hfa_gain(double raw_score, double aug_score, double* out) {
  if (!out) return usage("hfa_gain: NULL out");
  return guarded([&] { *out = gain(raw_score, aug_score); });
}

/* ---- synthetic data and pipeline ----------------------------------------- */

hfa_status hfa_synth(uint32_t n_ponzi, uint32_t n_background, uint32_t investors_per_ponzi,
                     double payback_fraction, uint32_t noise_edges, uint64_t seed,
                     const char* accounts_path, const char* edges_path, const char* labels_path) {
  if (!accounts_path || !edges_path || !labels_path) return usage("hfa_synth: NULL path");
  return guarded([&] {
    SyntheticSpec spec;
    spec.n_ponzi = n_ponzi;
    spec.n_background = n_background;
    spec.investors_per_ponzi = investors_per_ponzi;
    spec.payback_fraction = payback_fraction;
    spec.noise_edges = noise_edges;
    spec.seed = seed;
    write_synthetic(generate_synthetic(spec), accounts_path, edges_path, labels_path);
  });
}

hfa_status hfa_pipeline_run(const char* config_path, const char* out_dir, int has_seed_override,
                            uint64_t seed_override, char** summary_json) {
  if (!config_path) return usage("hfa_pipeline_run: NULL config path");
  return guarded([&] {
    PipelineConfig cfg = PipelineConfig::load(config_path);
    if (out_dir) cfg.out_dir = out_dir;
    if (has_seed_override) cfg.seed = seed_override;
    PipelineResult res = run_pipeline(cfg);
    if (summary_json) {
      nlohmann::json doc;
      doc["nodes"] = res.nodes;
      doc["edges"] = res.edges;
      doc["positives"] = res.positives;
      doc["negatives"] = res.negatives;
      doc["models"] = nlohmann::json::array();
      for (const auto& m : res.per_model) {
        doc["models"].push_back({{"model", to_string(m.model)},
                                 {"raw_mean", m.raw_mean},
                                 {"raw_std", m.raw_std},
                                 {"aug_mean", m.aug_mean},
                                 {"aug_std", m.aug_std},
                                 {"gain_pct", m.gain_pct}});
      }
      doc["artifacts"] = res.artifacts;
      *summary_json = dup_string(doc.dump(2));
    }
  });
}

} /* extern "C" */
