#include "hfaug/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <utility>

#include <json.hpp>

#include "hfaug/error.hpp"
#include "hfaug/features.hpp"
#include "hfaug/rng.hpp"

namespace hfaug {

using nlohmann::json;

uint64_t stage_seed(uint64_t global_seed, std::string_view stage) {
  return mix64(global_seed, hash_name(stage));
}

namespace {

template <class F>
auto with_stage(const char* stage, F&& fn) {
  try {
    return fn();
  } catch (const Error& err) {
    raise(err.code(), std::string(stage) + ": " + err.what());
  }
}

ModelKind model_from_name(const std::string& name) {
  if (name == "lr" || name == "logistic") return ModelKind::Logistic;
  if (name == "svm" || name == "hinge") return ModelKind::Hinge;
  raise(Errc::config_error, "unknown model '" + name + "' (expected lr or svm)");
}

AugMode mode_from_name(const std::string& name) {
  if (name == "target-ca") return AugMode::TargetCa;
  if (name == "head-node") return AugMode::HeadNode;
  raise(Errc::config_error, "unknown augmentation mode '" + name + "'");
}

AggKind agg_from_name(const std::string& name) {
  if (name == "sum") return AggKind::Sum;
  if (name == "mean") return AggKind::Mean;
  raise(Errc::config_error, "unknown aggregator '" + name + "'");
}

Format format_from_name(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "jsonl") return Format::Jsonl;
  raise(Errc::config_error, "unknown format '" + name + "' (expected csv or jsonl)");
}

}  // namespace

PipelineConfig PipelineConfig::from_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) raise(Errc::config_error, "config is not a JSON object");

  PipelineConfig cfg;
  try {
    if (j.value("version", kVersion) != kVersion) {
      raise(Errc::config_error, "unsupported config version");
    }
    const auto& in = j.at("inputs");
    cfg.accounts_path = in.at("accounts").get<std::string>();
    cfg.edges_path = in.at("edges").get<std::string>();
    cfg.labels_path = in.value("labels", std::string());
    cfg.format = format_from_name(in.value("format", std::string("csv")));
    cfg.lenient = in.value("lenient", false);
    if (in.contains("expect")) cfg.expect = ExpectedCounts::parse(in.at("expect").get<std::string>());

    cfg.out_dir = j.value("out_dir", std::string("out"));
    cfg.seed = j.value("seed", uint64_t{0});
    cfg.threads = j.value("threads", uint32_t{1});

    if (j.contains("features")) {
      const auto& f = j.at("features");
      cfg.feature_source = f.value("source", std::string("manual"));
      cfg.l2_normalize_embeddings = f.value("l2_normalize", false);
      if (f.contains("walk")) {
        const auto& w = f.at("walk");
        cfg.walk.walks_per_node = w.value("walks_per_node", cfg.walk.walks_per_node);
        cfg.walk.walk_length = w.value("walk_length", cfg.walk.walk_length);
        cfg.walk.p = w.value("p", cfg.walk.p);
        cfg.walk.q = w.value("q", cfg.walk.q);
        cfg.walk.undirected = w.value("undirected", cfg.walk.undirected);
      }
      if (f.contains("skipgram")) {
        const auto& s = f.at("skipgram");
        cfg.skipgram.dim = s.value("dim", cfg.skipgram.dim);
        cfg.skipgram.window = s.value("window", cfg.skipgram.window);
        cfg.skipgram.negatives = s.value("negatives", cfg.skipgram.negatives);
        cfg.skipgram.epochs = s.value("epochs", cfg.skipgram.epochs);
        cfg.skipgram.learning_rate = s.value("learning_rate", cfg.skipgram.learning_rate);
      }
    }
    if (cfg.feature_source != "manual" && cfg.feature_source != "deepwalk" &&
        cfg.feature_source != "node2vec") {
      raise(Errc::config_error, "unknown feature source '" + cfg.feature_source + "'");
    }

    if (j.contains("augment")) {
      const auto& a = j.at("augment");
      cfg.augment.mode = mode_from_name(a.value("mode", std::string("target-ca")));
      cfg.augment.dedupe = a.value("dedupe", true);
      cfg.augment.agg = agg_from_name(a.value("agg", std::string("sum")));
      cfg.augment.limits.max_instances = a.value("max_instances", cfg.augment.limits.max_instances);
      if (a.contains("patterns")) {
        for (const auto& spec : a.at("patterns")) {
          cfg.augment.patterns.push_back(compile_pattern(spec.get<std::string>()));
        }
      }
    }

    if (j.contains("evaluate")) {
      const auto& e = j.at("evaluate");
      if (e.contains("models")) {
        cfg.models.clear();
        for (const auto& name : e.at("models")) cfg.models.push_back(model_from_name(name));
      }
      cfg.cv.k = e.value("k", cfg.cv.k);
      cfg.cv.repeats = e.value("repeats", cfg.cv.repeats);
      cfg.cv.standardize = e.value("standardize", cfg.cv.standardize);
      if (e.contains("fit")) {
        const auto& f = e.at("fit");
        cfg.cv.fit.l2 = f.value("l2", cfg.cv.fit.l2);
        cfg.cv.fit.epochs = f.value("epochs", cfg.cv.fit.epochs);
        cfg.cv.fit.learning_rate = f.value("learning_rate", cfg.cv.fit.learning_rate);
      }
    }
    if (cfg.models.empty()) raise(Errc::config_error, "evaluate.models must not be empty");
  } catch (const json::exception& e) {
    raise(Errc::config_error, std::string("bad pipeline config: ") + e.what());
  }
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  return from_json_text(read_file(path));
}

std::string PipelineConfig::to_json() const {
  json j;
  j["version"] = kVersion;
  j["inputs"] = {{"accounts", accounts_path},
                 {"edges", edges_path},
                 {"labels", labels_path},
                 {"format", format == Format::Csv ? "csv" : "jsonl"},
                 {"lenient", lenient}};
  j["out_dir"] = out_dir;
  j["seed"] = seed;
  j["threads"] = threads;
  j["features"] = {{"source", feature_source},
                   {"l2_normalize", l2_normalize_embeddings},
                   {"walk",
                    {{"walks_per_node", walk.walks_per_node},
                     {"walk_length", walk.walk_length},
                     {"p", walk.p},
                     {"q", walk.q},
                     {"undirected", walk.undirected}}},
                   {"skipgram",
                    {{"dim", skipgram.dim},
                     {"window", skipgram.window},
                     {"negatives", skipgram.negatives},
                     {"epochs", skipgram.epochs},
                     {"learning_rate", skipgram.learning_rate}}}};
  auto patterns = json::array();
  for (const auto& p : augment.patterns) patterns.push_back(p.name);
  j["augment"] = {{"mode", augment.mode == AugMode::TargetCa ? "target-ca" : "head-node"},
                  {"patterns", std::move(patterns)},
                  {"dedupe", augment.dedupe},
                  {"agg", augment.agg == AggKind::Sum ? "sum" : "mean"},
                  {"max_instances", augment.limits.max_instances}};
  auto models_json = json::array();
  for (ModelKind m : models) models_json.push_back(to_string(m));
  j["evaluate"] = {{"models", std::move(models_json)},
                   {"k", cv.k},
                   {"repeats", cv.repeats},
                   {"standardize", cv.standardize},
                   {"fit",
                    {{"l2", cv.fit.l2},
                     {"epochs", cv.fit.epochs},
                     {"learning_rate", cv.fit.learning_rate}}}};
  return j.dump(2);
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  namespace fs = std::filesystem;
  PipelineResult result;

  HetGraph g = with_stage("ingest", [&] {
    auto records = load_records(cfg.accounts_path, cfg.edges_path, cfg.labels_path, cfg.format,
                                cfg.lenient);
    BuildOptions opts;
    opts.drop_call_into_eoa = cfg.lenient;
    opts.drop_bad_labels = cfg.lenient;
    HetGraph built = HetGraph::build(records.accounts, records.edges, records.labels, opts);
    if (!cfg.expect.empty()) validate_counts(built, cfg.expect);
    return built;
  });
  result.nodes = g.node_count();
  result.edges = g.edge_count();

  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) raise(Errc::io_error, "cannot create output directory '" + cfg.out_dir + "'");
  auto artifact = [&](const std::string& name) {
    std::string path = (fs::path(cfg.out_dir) / name).string();
    result.artifacts.push_back(path);
    return path;
  };

  with_stage("ingest", [&] {
    const auto accounts_out = artifact("graph_accounts.csv");
    const auto edges_out = artifact("graph_edges.csv");
    const auto labels_out = artifact("graph_labels.csv");
    save_graph(g, accounts_out, edges_out, labels_out);
    return 0;
  });

  // Dataset: every ponzi-labeled CA plus an equal-sized seeded sample of
  // unlabeled/negative contracts.
  std::vector<std::string> ids;
  std::vector<int> labels;
  with_stage("dataset", [&] {
    const auto& pos = g.ponzi_nodes();
    if (pos.empty()) raise(Errc::single_class_data, "no ponzi-labeled accounts");
    auto neg = sample_negatives(g, stage_seed(cfg.seed, "negatives"));
    for (NodeIndex v : pos) {
      ids.push_back(g.address(v));
      labels.push_back(1);
    }
    for (NodeIndex v : neg) {
      ids.push_back(g.address(v));
      labels.push_back(0);
    }
    result.positives = pos.size();
    result.negatives = neg.size();
    return 0;
  });

  // Features are computed for every node so augmentation aggregates true
  // neighbor values; the classifier sees only the dataset rows.
  FeatureMatrix full = with_stage("features", [&] {
    if (cfg.feature_source == "manual") {
      std::vector<NodeIndex> all(g.node_count());
      for (NodeIndex v = 0; v < g.node_count(); ++v) all[v] = v;
      return feature_matrix(g, std::span<const NodeIndex>(all));
    }
    HomGraph hom(g);
    WalkConfig w = cfg.walk;
    w.strategy = cfg.feature_source == "node2vec" ? WalkStrategy::Node2Vec : WalkStrategy::Uniform;
    w.seed = stage_seed(cfg.seed, "walks");
    w.threads = cfg.threads;
    SkipGramConfig s = cfg.skipgram;
    s.seed = stage_seed(cfg.seed, "skipgram");
    s.threads = cfg.threads;
    std::vector<std::string> all;
    all.reserve(g.node_count());
    for (NodeIndex v = 0; v < g.node_count(); ++v) all.push_back(g.address(v));
    return embed_features(hom, w, s, all, cfg.l2_normalize_embeddings, nullptr);
  });
  full.save_csv(artifact("features_raw.csv"));

  AugmentationConfig aug_cfg = cfg.augment;
  if (aug_cfg.patterns.empty()) aug_cfg.patterns.push_back(MetapathPattern::p2());
  AugmentReport aug_report;
  FeatureMatrix augmented = with_stage("augment", [&] {
    return augment_matrix(g, full, ids, aug_cfg, &aug_report);
  });
  augmented.save_csv(artifact("features_aug.csv"));
  write_file(artifact("augment_report.json"), report_to_json(aug_report, aug_cfg));

  auto slice = [&](const FeatureMatrix& src) {
    FeatureMatrix out(ids, src.dim(), src.column_prefix());
    for (size_t i = 0; i < ids.size(); ++i) {
      auto row = src.row(*src.find(ids[i]));
      std::copy(row.begin(), row.end(), out.row(i).begin());
    }
    return out;
  };
  Dataset raw_ds{slice(full), labels};
  Dataset aug_ds{slice(augmented), labels};

  CvOptions cv = cfg.cv;
  cv.seed = stage_seed(cfg.seed, "cv");

  std::string table = "model,raw_mean,raw_std,aug_mean,aug_std,gain_pct\n";
  for (ModelKind model : cfg.models) {
    auto [raw_rep, aug_rep] = with_stage("evaluate", [&] {
      return std::pair{cross_validate(raw_ds, model, cv), cross_validate(aug_ds, model, cv)};
    });
    write_file(artifact(std::string("cv_raw_") + to_string(model) + ".json"), raw_rep.to_json());
    write_file(artifact(std::string("cv_aug_") + to_string(model) + ".json"), aug_rep.to_json());

    PipelineModelResult r;
    r.model = model;
    r.raw_mean = raw_rep.mean;
    r.raw_std = raw_rep.stddev;
    r.aug_mean = aug_rep.mean;
    r.aug_std = aug_rep.stddev;
    r.gain_pct = gain(raw_rep.mean, aug_rep.mean);
    result.per_model.push_back(r);

    char line[160];
    std::snprintf(line, sizeof(line), "%s,%.6f,%.6f,%.6f,%.6f,%.2f\n", to_string(model), r.raw_mean,
                  r.raw_std, r.aug_mean, r.aug_std, r.gain_pct);
    table += line;
  }
  write_file(artifact("comparison.csv"), table);
  return result;
}

}  // namespace hfaug
