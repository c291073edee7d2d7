#include "hfaug/embed.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "hfaug/error.hpp"
#include "hfaug/mlkit.hpp"
#include "hfaug/rng.hpp"

namespace hfaug {

namespace {

void check_walk_config(const WalkConfig& cfg) {
  if (cfg.walks_per_node < 1) raise(Errc::config_error, "walks_per_node must be >= 1");
  if (cfg.walk_length < 1) raise(Errc::config_error, "walk_length must be >= 1");
  if (cfg.strategy == WalkStrategy::Node2Vec && (cfg.p <= 0 || cfg.q <= 0)) {
    raise(Errc::config_error, "node2vec requires p > 0 and q > 0");
  }
}

// Distinct successor candidates from v; undirected mode merges the two
// sorted neighbor lists so the order stays address-sorted.
std::vector<NodeIndex> step_candidates(const HomGraph& g, NodeIndex v, bool undirected) {
  auto out = g.out_neighbors(v);
  if (!undirected) return {out.begin(), out.end()};
  auto in = g.in_neighbors(v);
  std::vector<NodeIndex> merged;
  merged.reserve(out.size() + in.size());
  std::merge(out.begin(), out.end(), in.begin(), in.end(), std::back_inserter(merged),
             [&](NodeIndex a, NodeIndex b) { return g.address(a) < g.address(b); });
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  return merged;
}

bool adjacent(const HomGraph& g, NodeIndex from, NodeIndex to, bool undirected) {
  auto has = [&](std::span<const NodeIndex> nbrs) {
    return std::binary_search(nbrs.begin(), nbrs.end(), to, [&](NodeIndex a, NodeIndex b) {
      return g.address(a) < g.address(b);
    });
  };
  if (has(g.out_neighbors(from))) return true;
  return undirected && has(g.in_neighbors(from));
}

std::vector<NodeIndex> one_walk(const HomGraph& g, NodeIndex start, const WalkConfig& cfg,
                                Rng& rng) {
  std::vector<NodeIndex> walk{start};
  walk.reserve(cfg.walk_length);
  NodeIndex prev = start;
  bool has_prev = false;
  while (walk.size() < cfg.walk_length) {
    NodeIndex cur = walk.back();
    auto candidates = step_candidates(g, cur, cfg.undirected);
    if (candidates.empty()) break;
    NodeIndex next;
    if (cfg.strategy == WalkStrategy::Uniform || !has_prev) {
      next = candidates[rng.index(candidates.size())];
    } else {
      // second-order weights: 1/p back, 1 toward neighbors of prev, 1/q out
      double total = 0;
      std::vector<double> weights(candidates.size());
      for (size_t i = 0; i < candidates.size(); ++i) {
        NodeIndex u = candidates[i];
        double w = u == prev ? 1.0 / cfg.p : adjacent(g, prev, u, cfg.undirected) ? 1.0 : 1.0 / cfg.q;
        weights[i] = w;
        total += w;
      }
      double r = rng.real01() * total;
      size_t pick = candidates.size() - 1;
      double acc = 0;
      for (size_t i = 0; i < candidates.size(); ++i) {
        acc += weights[i];
        if (r < acc) {
          pick = i;
          break;
        }
      }
      next = candidates[pick];
    }
    prev = cur;
    has_prev = true;
    walk.push_back(next);
  }
  return walk;
}

}  // namespace

WalkCorpus generate_walks(const HomGraph& g, const WalkConfig& cfg) {
  check_walk_config(cfg);
  WalkCorpus corpus;
  corpus.node_count = g.node_count();
  corpus.walks.reserve(g.node_count() * cfg.walks_per_node);
  // Each (node, iteration) pair draws from its own derived stream, so the
  // corpus does not depend on scheduling and replays per walk.
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    for (uint32_t it = 0; it < cfg.walks_per_node; ++it) {
      Rng rng(mix64(cfg.seed, v, it));
      corpus.walks.push_back(one_walk(g, v, cfg, rng));
    }
  }
  return corpus;
}

void save_walks(std::ostream& out, const HomGraph& g, const WalkCorpus& corpus) {
  std::string line;
  for (const auto& walk : corpus.walks) {
    line.clear();
    for (size_t i = 0; i < walk.size(); ++i) {
      if (i) line += ' ';
      line += g.address(walk[i]);
    }
    line += '\n';
    out << line;
  }
}

namespace {

void check_sg_config(const SkipGramConfig& cfg) {
  if (cfg.dim < 1) raise(Errc::config_error, "dim must be >= 1");
  if (cfg.window < 1) raise(Errc::config_error, "window must be >= 1");
  if (cfg.negatives < 1) raise(Errc::config_error, "negatives must be >= 1");
  if (cfg.epochs < 1) raise(Errc::config_error, "epochs must be >= 1");
  if (cfg.learning_rate <= 0) raise(Errc::config_error, "learning_rate must be positive");
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

FeatureMatrix train_skipgram(const HomGraph& g, const WalkCorpus& corpus,
                             const SkipGramConfig& cfg, double* final_loss) {
  check_sg_config(cfg);

  std::vector<uint64_t> counts(g.node_count(), 0);
  uint64_t total_words = 0;
  for (const auto& walk : corpus.walks) {
    for (NodeIndex v : walk) {
      ++counts[v];
      ++total_words;
    }
  }
  if (total_words == 0) raise(Errc::empty_corpus, "walk corpus has no words");

  // vocabulary in graph node order
  std::vector<NodeIndex> vocab;
  std::vector<uint32_t> slot(g.node_count(), UINT32_MAX);
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    if (counts[v] > 0) {
      slot[v] = static_cast<uint32_t>(vocab.size());
      vocab.push_back(v);
    }
  }

  // unigram^0.75 noise distribution, cumulative for binary search
  std::vector<double> noise_cdf(vocab.size());
  double noise_total = 0;
  for (size_t i = 0; i < vocab.size(); ++i) {
    noise_total += std::pow(static_cast<double>(counts[vocab[i]]), 0.75);
    noise_cdf[i] = noise_total;
  }

  const size_t dim = cfg.dim;
  std::vector<double> input(vocab.size() * dim);
  std::vector<double> output(vocab.size() * dim, 0.0);

  Rng rng(mix64(cfg.seed, hash_name("skipgram")));
  const double span = 1.0 / static_cast<double>(dim);
  for (double& x : input) x = (rng.real01() - 0.5) * span;

  auto draw_noise = [&]() -> uint32_t {
    double r = rng.real01() * noise_total;
    auto it = std::upper_bound(noise_cdf.begin(), noise_cdf.end(), r);
    if (it == noise_cdf.end()) --it;
    return static_cast<uint32_t>(it - noise_cdf.begin());
  };

  const double lr0 = cfg.learning_rate;
  const double lr_floor = lr0 * 1e-4;
  const uint64_t schedule = total_words * cfg.epochs;
  uint64_t processed = 0;

  std::vector<double> err(dim);
  double loss_sum = 0;
  uint64_t loss_pairs = 0;

  for (uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const bool last_epoch = epoch + 1 == cfg.epochs;
    if (last_epoch) {
      loss_sum = 0;
      loss_pairs = 0;
    }
    for (const auto& walk : corpus.walks) {
      for (size_t i = 0; i < walk.size(); ++i) {
        const double lr = std::max(
            lr_floor, lr0 * (1.0 - static_cast<double>(processed) / static_cast<double>(schedule)));
        ++processed;
        const uint32_t center = slot[walk[i]];
        double* v_in = input.data() + static_cast<size_t>(center) * dim;
        const size_t reach = 1 + rng.index(cfg.window);
        const size_t lo = i >= reach ? i - reach : 0;
        const size_t hi = std::min(walk.size() - 1, i + reach);
        for (size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          const uint32_t context = slot[walk[j]];
          std::fill(err.begin(), err.end(), 0.0);
          for (uint32_t s = 0; s <= cfg.negatives; ++s) {
            uint32_t target;
            double label;
            if (s == 0) {
              target = context;
              label = 1.0;
            } else {
              target = draw_noise();
              if (target == context) continue;
              label = 0.0;
            }
            double* v_out = output.data() + static_cast<size_t>(target) * dim;
            double dot = 0;
            for (size_t d = 0; d < dim; ++d) dot += v_in[d] * v_out[d];
            const double sig = sigmoid(dot);
            if (last_epoch) {
              loss_sum += label == 1.0 ? -std::log(std::max(sig, 1e-12))
                                       : -std::log(std::max(1.0 - sig, 1e-12));
              ++loss_pairs;
            }
            const double grad = (label - sig) * lr;
            for (size_t d = 0; d < dim; ++d) {
              err[d] += grad * v_out[d];
              v_out[d] += grad * v_in[d];
            }
          }
          for (size_t d = 0; d < dim; ++d) v_in[d] += err[d];
        }
      }
    }
  }
  if (final_loss) *final_loss = loss_pairs ? loss_sum / static_cast<double>(loss_pairs) : 0.0;

  std::vector<std::string> ids;
  ids.reserve(vocab.size());
  for (NodeIndex v : vocab) ids.push_back(g.address(v));
  FeatureMatrix m(std::move(ids), dim, "e");
  for (size_t i = 0; i < vocab.size(); ++i) {
    auto dst = m.row(i);
    std::copy(input.begin() + static_cast<long>(i * dim), input.begin() + static_cast<long>((i + 1) * dim),
              dst.begin());
  }
  return m;
}

FeatureMatrix embed_features(const HomGraph& g, const WalkConfig& wcfg, const SkipGramConfig& scfg,
                             const std::vector<std::string>& ids, bool l2_normalize,
                             size_t* missing) {
  auto corpus = generate_walks(g, wcfg);
  auto trained = train_skipgram(g, corpus, scfg, nullptr);

  FeatureMatrix m(ids, scfg.dim, "e");
  size_t absent = 0;
  for (size_t i = 0; i < ids.size(); ++i) {
    auto row = m.row(i);
    if (auto src = trained.find(ids[i])) {
      auto from = trained.row(*src);
      std::copy(from.begin(), from.end(), row.begin());
    } else {
      ++absent;  // stays zero
      continue;
    }
    if (l2_normalize) {
      double norm = 0;
      for (double x : row) norm += x * x;
      norm = std::sqrt(norm);
      if (norm > 0) {
        for (double& x : row) x /= norm;
      }
    }
  }
  if (missing) *missing = absent;
  return m;
}

GridResult grid_pq(const HomGraph& g, const std::vector<std::string>& ids,
                   const std::vector<int>& labels, const WalkConfig& wcfg,
                   const SkipGramConfig& scfg, ModelKind model, const CvOptions& cv,
                   const std::vector<double>& grid) {
  if (grid.empty()) raise(Errc::config_error, "grid must not be empty");
  if (ids.size() != labels.size()) raise(Errc::length_mismatch, "ids and labels must align");

  GridResult out;
  double best = 0;
  bool first = true;
  for (double p : grid) {
    for (double q : grid) {
      WalkConfig w = wcfg;
      w.strategy = WalkStrategy::Node2Vec;
      w.p = p;
      w.q = q;
      Dataset ds{embed_features(g, w, scfg, ids, false, nullptr), labels};
      auto report = cross_validate(ds, model, cv);
      out.table.push_back({p, q, report.mean});
      const bool better =
          first || report.mean > best ||
          (report.mean == best && (p < out.best_p || (p == out.best_p && q < out.best_q)));
      if (better) {
        best = report.mean;
        out.best_p = p;
        out.best_q = q;
      }
      first = false;
    }
  }
  return out;
}

}  // namespace hfaug
