// Acceptance gate: ten end-to-end properties, one [PASS]/[FAIL] line each,
// nonzero exit when anything fails. Runs against the same brute-force
// reference implementations as the unit suite but at larger scale.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdarg>
#include <cstring>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hfaug/augment.hpp"
#include "hfaug/error.hpp"
#include "hfaug/features.hpp"
#include "hfaug/graph.hpp"
#include "hfaug/io.hpp"
#include "hfaug/metapath.hpp"
#include "hfaug/mlkit.hpp"
#include "hfaug/pipeline.hpp"
#include "hfaug/rng.hpp"
#include "hfaug/synth.hpp"
#include "support.hpp"

using namespace hfaug;

namespace {

int g_failures = 0;

void report(bool ok, const char* name, const std::string& detail) {
  std::printf("[%s] %s (%s)\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string format(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

FeatureMatrix random_features(const HetGraph& g, Rng& rng, size_t dim) {
  std::vector<std::string> ids;
  ids.reserve(g.node_count());
  for (NodeIndex v = 0; v < g.node_count(); ++v) ids.push_back(g.address(v));
  FeatureMatrix m(std::move(ids), dim);
  for (size_t i = 0; i < m.rows(); ++i) {
    for (double& x : m.row(i)) x = rng.real01() * 10.0 - 5.0;
  }
  return m;
}

/* 1: the matcher against brute-force walk enumeration */
void matcher_equivalence() {
  Stopwatch timer;
  Rng rng(20260814);
  const MatchLimits no_cap{1u << 30};
  const MetapathPattern patterns[] = {MetapathPattern::p1(), MetapathPattern::p2()};
  size_t starts = 0;
  size_t bad = 0;
  for (int round = 0; round < 200; ++round) {
    HetGraph g = testsup::random_graph(rng, 50, 160);
    for (const auto& p : patterns) {
      for (NodeIndex v = 0; v < g.node_count(); ++v) {
        if (g.kind(v) != p.head_kind) continue;
        ++starts;
        auto got = testsup::sorted(testsup::as_oracle(match_from(g, v, p, no_cap)));
        auto want = testsup::sorted(testsup::oracle_match_from(g, v, p));
        if (got != want) ++bad;
      }
    }
  }
  double secs = timer.seconds();
  report(bad == 0 && secs < 60.0, "metapath matching equals brute-force enumeration",
         format("200 graphs, %zu starts, %zu mismatches, %.1fs", starts, bad, secs));
}

/* 2: augmentation against an independent aggregator */
void augmentation_equivalence() {
  Rng rng(7337);
  size_t checked = 0;
  size_t bad = 0;
  double worst = 0;
  for (int round = 0; round < 100; ++round) {
    HetGraph g = testsup::random_graph(rng, 30, 90);
    FeatureMatrix feats = random_features(g, rng, 4);
    AugmentationConfig cfg;
    cfg.patterns = {MetapathPattern::p1(), MetapathPattern::p2()};
    for (AugMode mode : {AugMode::TargetCa, AugMode::HeadNode}) {
      for (bool dedupe : {true, false}) {
        cfg.mode = mode;
        cfg.dedupe = dedupe;
        for (NodeIndex v = 0; v < g.node_count(); ++v) {
          if (mode == AugMode::TargetCa && g.kind(v) != AccountKind::Ca) continue;
          auto got = augment_node(g, feats, v, cfg);
          auto want = testsup::oracle_augment(g, feats, v, cfg);
          ++checked;
          for (size_t j = 0; j < got.size(); ++j) {
            worst = std::max(worst, std::fabs(got[j] - want[j]));
            if (std::fabs(got[j] - want[j]) > 1e-9) ++bad;
          }
        }
      }
    }
  }
  report(bad == 0, "feature augmentation equals brute-force aggregation",
         format("100 graphs, %zu vectors, worst gap %.2e", checked, worst));
}

/* 3: nodes with nothing matched keep their rows bit for bit */
void no_match_fixpoint() {
  Rng rng(99);
  size_t fixpoints = 0;
  size_t bad = 0;
  for (int round = 0; round < 60; ++round) {
    HetGraph g = testsup::random_graph(rng, 25, 40);
    FeatureMatrix feats = random_features(g, rng, 5);
    for (size_t i = 0; i < feats.rows(); ++i) {  // integer-valued columns
      for (double& x : feats.row(i)) x = std::floor(x * 4.0);
    }
    AugmentationConfig cfg;
    cfg.patterns = {MetapathPattern::p1(), MetapathPattern::p2()};
    for (AugMode mode : {AugMode::TargetCa, AugMode::HeadNode}) {
      cfg.mode = mode;
      for (NodeIndex v = 0; v < g.node_count(); ++v) {
        if (mode == AugMode::TargetCa && g.kind(v) != AccountKind::Ca) continue;
        NodeAugStats stats;
        auto out = augment_node(g, feats, v, cfg, &stats);
        if (stats.instances > 0) continue;
        ++fixpoints;
        auto base = feats.row(*feats.find(g.address(v)));
        if (std::memcmp(out.data(), base.data(), base.size() * sizeof(double)) != 0) ++bad;
      }
    }
  }
  report(fixpoints > 100 && bad == 0, "zero-match augmentation is a bitwise fixpoint",
         format("%zu unmatched rows, %zu modified", fixpoints, bad));
}

/* 4: gini against the mean-absolute-difference definition */
void gini_agreement() {
  Rng rng(4);
  size_t bad = 0;
  double worst = 0;
  for (int round = 0; round < 1000; ++round) {
    std::vector<double> xs(1 + rng.index(64));
    for (double& x : xs) x = rng.bernoulli(0.1) ? 0.0 : rng.real01() * 1000.0;
    double got = gini(xs);
    double want = testsup::oracle_gini(xs);
    worst = std::max(worst, std::fabs(got - want));
    if (std::fabs(got - want) > 1e-12) ++bad;

    // scale and permutation invariance on the same list
    std::vector<double> scaled = xs;
    for (double& x : scaled) x *= 37.5;
    std::vector<double> shuffled = xs;
    rng.shuffle(shuffled);
    if (std::fabs(gini(scaled) - got) > 1e-12) ++bad;
    if (std::fabs(gini(shuffled) - got) > 1e-12) ++bad;
  }
  std::vector<double> pair{1.0, 3.0};
  bool pinned = std::fabs(gini(pair) - 0.25) <= 1e-15;
  report(bad == 0 && pinned, "gini agrees with the mean-absolute-difference oracle",
         format("1000 lists, worst gap %.2e, gini([1,3])=%.6f", worst, gini(pair)));
}

/* 5: micro-F1 equals accuracy, exhaustively for short binary vectors */
void micro_f1_is_accuracy() {
  size_t combos = 0;
  size_t bad = 0;
  for (size_t n = 1; n <= 6; ++n) {
    for (uint32_t truth_bits = 0; truth_bits < (1u << n); ++truth_bits) {
      for (uint32_t pred_bits = 0; pred_bits < (1u << n); ++pred_bits) {
        std::vector<int> truth(n), pred(n);
        size_t hits = 0;
        for (size_t i = 0; i < n; ++i) {
          truth[i] = (truth_bits >> i) & 1;
          pred[i] = (pred_bits >> i) & 1;
          if (truth[i] == pred[i]) ++hits;
        }
        ++combos;
        if (micro_f1(pred, truth) != static_cast<double>(hits) / static_cast<double>(n)) ++bad;
      }
    }
  }
  report(bad == 0, "micro-F1 equals accuracy for binary predictions",
         format("%zu label/prediction pairs, %zu mismatches", combos, bad));
}

/* 6: analytic gradients against central differences */
void gradient_check() {
  Rng rng(606);
  const double l2 = 0.01;
  size_t bad = 0;
  double worst = 0;
  for (ModelKind kind : {ModelKind::Logistic, ModelKind::Hinge}) {
    for (int instance = 0; instance < 50; ++instance) {
      const size_t rows = 6 + rng.index(10);
      const size_t dim = 2 + rng.index(4);
      Dataset ds;
      std::vector<double> w(dim);
      double b = 0;
      for (int attempt = 0;; ++attempt) {
        std::vector<std::string> ids;
        for (size_t i = 0; i < rows; ++i) ids.push_back("0xr" + std::to_string(i));
        ds.features = FeatureMatrix(ids, dim);
        ds.labels.assign(rows, 0);
        for (size_t i = 0; i < rows; ++i) {
          for (double& x : ds.features.row(i)) x = rng.real01() * 4.0 - 2.0;
          ds.labels[i] = rng.bernoulli(0.5) ? 1 : 0;
        }
        ds.labels[0] = 0;
        ds.labels[1] = 1;
        for (double& x : w) x = rng.real01() * 2.0 - 1.0;
        b = rng.real01() * 2.0 - 1.0;
        if (kind == ModelKind::Logistic) break;
        bool near_kink = false;  // finite differences straddle the hinge there
        for (size_t i = 0; i < rows; ++i) {
          auto x = ds.features.row(i);
          double s = b;
          for (size_t j = 0; j < dim; ++j) s += w[j] * x[j];
          const double y = ds.labels[i] ? 1.0 : -1.0;
          if (std::fabs(1.0 - y * s) < 1e-3) near_kink = true;
        }
        if (!near_kink) break;
        if (attempt > 200) break;  // never happens in practice
      }

      std::vector<double> grad(dim);
      double bias_grad = 0;
      loss_gradient(ds, kind, w, b, l2, grad, &bias_grad);
      auto record = [&](double analytic, double fd) {
        const double err = std::fabs(analytic - fd) / std::max(1.0, std::fabs(fd));
        worst = std::max(worst, err);
        if (err >= 1e-5) ++bad;
      };
      for (size_t j = 0; j < dim; ++j) {
        const double h = 1e-6 * std::max(1.0, std::fabs(w[j]));
        auto wp = w, wm = w;
        wp[j] += h;
        wm[j] -= h;
        record(grad[j],
               (loss_value(ds, kind, wp, b, l2) - loss_value(ds, kind, wm, b, l2)) / (2 * h));
      }
      const double h = 1e-6;
      record(bias_grad,
             (loss_value(ds, kind, w, b + h, l2) - loss_value(ds, kind, w, b - h, l2)) / (2 * h));
    }
  }
  report(bad == 0, "analytic gradients match central differences",
         format("50 instances per model, worst relative error %.2e", worst));
}

/* 7: node2vec with p=q=1 steps uniformly over out-neighbors */
void node2vec_degeneracy() {
  std::vector<AccountRecord> accounts;
  std::vector<EdgeRecord> edges;
  for (int i = 0; i < 10; ++i) {
    accounts.push_back(testsup::acct("0xn" + std::to_string(i), AccountKind::Eoa));
  }
  auto name = [](int i) { return "0xn" + std::to_string(((i % 10) + 10) % 10); };
  for (int i = 0; i < 10; ++i) {
    for (int step : {1, 2, 5}) {
      edges.push_back(testsup::edge(name(i), name(i + step), EdgeType::Trans, 1, i));
    }
  }
  HetGraph het = HetGraph::build(accounts, edges, {});
  HomGraph hom(het);

  WalkConfig cfg;
  cfg.strategy = WalkStrategy::Node2Vec;
  cfg.p = 1.0;
  cfg.q = 1.0;
  cfg.walks_per_node = 100;
  cfg.walk_length = 101;
  cfg.seed = 20260814;
  WalkCorpus corpus = generate_walks(hom, cfg);

  std::map<std::pair<NodeIndex, NodeIndex>, size_t> observed;
  std::map<NodeIndex, size_t> outgoing;
  size_t steps = 0;
  for (const auto& walk : corpus.walks) {
    for (size_t i = 1; i < walk.size(); ++i) {
      ++observed[{walk[i - 1], walk[i]}];
      ++outgoing[walk[i - 1]];
      ++steps;
    }
  }

  double chi2 = 0;
  double dof = 0;
  for (int i = 0; i < 10; ++i) {
    NodeIndex src = het.require(name(i));
    const double expected = static_cast<double>(outgoing[src]) / 3.0;
    for (int step : {1, 2, 5}) {
      NodeIndex dst = het.require(name(i + step));
      const double o = static_cast<double>(observed[{src, dst}]);
      chi2 += (o - expected) * (o - expected) / expected;
    }
    dof += 2.0;  // three neighbors, totals fixed per source
  }
  const double pvalue = testsup::chi2_pvalue(chi2, dof);
  report(steps >= 100000 && pvalue > 0.01, "node2vec with p=q=1 walks uniformly",
         format("%zu steps, chi2=%.1f dof=%.0f, p=%.3f", steps, chi2, dof, pvalue));
}

/* 8: augmented features beat raw features on planted schemes */
void synthetic_direction() {
  Stopwatch timer;
  testsup::TempDir dir("accept-direction");
  int wins = 0;
  std::string gains;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    SyntheticSpec spec;
    spec.n_ponzi = 50;
    spec.n_background = 500;
    spec.investors_per_ponzi = 8;
    spec.payback_fraction = 0.6;
    spec.noise_edges = 2000;
    spec.seed = seed;
    const std::string tag = std::to_string(seed);
    write_synthetic(generate_synthetic(spec), dir.file("a" + tag + ".csv"),
                    dir.file("e" + tag + ".csv"), dir.file("l" + tag + ".csv"));

    PipelineConfig cfg;
    cfg.accounts_path = dir.file("a" + tag + ".csv");
    cfg.edges_path = dir.file("e" + tag + ".csv");
    cfg.labels_path = dir.file("l" + tag + ".csv");
    cfg.out_dir = dir.file("out" + tag);
    cfg.seed = seed;
    cfg.models = {ModelKind::Logistic};
    PipelineResult res = run_pipeline(cfg);
    const auto& m = res.per_model.at(0);
    if (m.aug_mean > m.raw_mean) ++wins;
    gains += format("%s%+.2f%%", gains.empty() ? "" : " ", m.gain_pct);
  }
  double secs = timer.seconds();
  report(wins >= 4 && secs < 300.0, "augmented features beat raw features on planted schemes",
         format("%d/5 seeds, gains %s, %.1fs", wins, gains.c_str(), secs));
}

/* 9: full-scale corpus: count validation plus a gain report end to end */
void full_scale_reproduction() {
  Stopwatch timer;
  constexpr uint64_t kNodes = 57130, kTrans = 86602, kCall = 69653, kLabels = 191;
  constexpr uint64_t kEdges = kTrans + kCall;

  SyntheticSpec spec;
  spec.n_ponzi = 191;
  spec.n_background = 500;
  spec.investors_per_ponzi = 8;
  spec.payback_fraction = 0.6;
  spec.noise_edges = 0;
  spec.seed = 20260814;
  SyntheticData data = generate_synthetic(spec);

  uint64_t trans = 0, call = 0;
  for (const auto& e : data.edges) (e.etype == EdgeType::Trans ? trans : call) += 1;
  std::string ca_sink;
  for (const auto& a : data.accounts) {
    if (a.kind == AccountKind::Ca) {
      ca_sink = a.address;
      break;
    }
  }
  bool room = data.accounts.size() < kNodes && trans < kTrans && call < kCall &&
              !ca_sink.empty();
  if (!room) {
    report(false, "full-scale corpus passes count validation and reports gains",
           "generated corpus larger than the target counts");
    return;
  }

  // pad with filler EOAs, transfers along them, and calls into a contract
  const uint64_t extra_accounts = kNodes - data.accounts.size();
  auto filler = [](uint64_t i) { return format("0x07%036llx", static_cast<unsigned long long>(i)); };
  for (uint64_t i = 0; i < extra_accounts; ++i) {
    data.accounts.push_back(testsup::acct(filler(i), AccountKind::Eoa));
  }
  for (uint64_t i = 0; trans + i < kTrans; ++i) {
    const uint64_t src = i % (extra_accounts - 1);
    data.edges.push_back(testsup::edge(filler(src), filler(src + 1), EdgeType::Trans,
                                       1000000 + i, 1600000000 + static_cast<int64_t>(i)));
  }
  for (uint64_t i = 0; call + i < kCall; ++i) {
    data.edges.push_back(testsup::edge(filler(i % extra_accounts), ca_sink, EdgeType::Call));
  }

  testsup::TempDir dir("accept-fullscale");
  write_synthetic(data, dir.file("accounts.csv"), dir.file("edges.csv"), dir.file("labels.csv"));

  const std::string expect = "v=" + std::to_string(kNodes) + ",e=" + std::to_string(kEdges) +
                             ",trans=" + std::to_string(kTrans) + ",call=" +
                             std::to_string(kCall) + ",labels=" + std::to_string(kLabels);
  bool validated = false;
  std::string detail;
  try {
    auto records = load_records(dir.file("accounts.csv"), dir.file("edges.csv"),
                                dir.file("labels.csv"), Format::Csv, false);
    HetGraph g = HetGraph::build(records.accounts, records.edges, records.labels);
    validate_counts(g, ExpectedCounts::parse(expect));
    validated = true;

    PipelineConfig cfg;
    cfg.accounts_path = dir.file("accounts.csv");
    cfg.edges_path = dir.file("edges.csv");
    cfg.labels_path = dir.file("labels.csv");
    cfg.expect = ExpectedCounts::parse(expect);
    cfg.out_dir = dir.file("out");
    cfg.seed = 1;
    cfg.models = {ModelKind::Logistic, ModelKind::Hinge};
    PipelineResult res = run_pipeline(cfg);
    bool reported = res.per_model.size() == 2 &&
                    std::filesystem::exists(res.artifacts.back()) &&
                    std::isfinite(res.per_model[0].gain_pct) &&
                    std::isfinite(res.per_model[1].gain_pct);
    detail = format("%llu nodes, lr %+.2f%%, svm %+.2f%%, %.1fs",
                    static_cast<unsigned long long>(res.nodes), res.per_model[0].gain_pct,
                    res.per_model[1].gain_pct, timer.seconds());
    report(reported, "full-scale corpus passes count validation and reports gains", detail);
    return;
  } catch (const Error& err) {
    detail = std::string(validated ? "pipeline: " : "validation: ") + err.what();
  }
  report(false, "full-scale corpus passes count validation and reports gains", detail);
}

/* 10: the pipeline is byte-identical under a fixed seed */
void pipeline_determinism() {
  testsup::TempDir dir("accept-determinism");
  SyntheticSpec spec;
  spec.n_ponzi = 10;
  spec.n_background = 50;
  spec.investors_per_ponzi = 4;
  spec.payback_fraction = 0.5;
  spec.noise_edges = 100;
  spec.seed = 31;
  write_synthetic(generate_synthetic(spec), dir.file("a.csv"), dir.file("e.csv"),
                  dir.file("l.csv"));

  PipelineConfig cfg;
  cfg.accounts_path = dir.file("a.csv");
  cfg.edges_path = dir.file("e.csv");
  cfg.labels_path = dir.file("l.csv");
  cfg.seed = 77;
  cfg.cv.repeats = 3;

  cfg.out_dir = dir.file("first");
  PipelineResult first = run_pipeline(cfg);
  cfg.out_dir = dir.file("second");
  PipelineResult second = run_pipeline(cfg);

  size_t compared = 0;
  size_t differing = 0;
  bool ok = first.artifacts.size() == second.artifacts.size();
  if (ok) {
    for (size_t i = 0; i < first.artifacts.size(); ++i) {
      ++compared;
      if (read_file(first.artifacts[i]) != read_file(second.artifacts[i])) ++differing;
    }
    ok = differing == 0;
  }
  report(ok, "pipeline runs are byte-identical under a fixed seed",
         format("%zu artifacts compared, %zu differ", compared, differing));
}

}  // namespace

int main() {
  matcher_equivalence();
  augmentation_equivalence();
  no_match_fixpoint();
  gini_agreement();
  micro_f1_is_accuracy();
  gradient_check();
  node2vec_degeneracy();
  synthetic_direction();
  full_scale_reproduction();
  pipeline_determinism();
  std::printf("%d of 10 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
