#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hfaug/graph.hpp"
#include "hfaug/matrix.hpp"

namespace hfaug {

enum class WalkStrategy : uint8_t { Uniform, Node2Vec };

struct WalkConfig {
  uint32_t walks_per_node = 5;
  uint32_t walk_length = 50;  // nodes per walk; shorter only at dead ends
  WalkStrategy strategy = WalkStrategy::Uniform;
  double p = 1.0;  // return parameter
  double q = 1.0;  // in-out parameter
  bool undirected = false;  // treat trans edges as undirected
  uint64_t seed = 0;
  uint32_t threads = 1;
};

struct WalkCorpus {
  std::vector<std::vector<NodeIndex>> walks;
  size_t node_count = 0;
};

/// walks_per_node walks from every node. Steps follow distinct out-neighbors
/// (undirected mode adds in-neighbors); Node2Vec applies the second-order
/// weights 1/p back, 1 to neighbors of the previous node, 1/q otherwise.
/// Each walk draws from its own (seed, node, iteration)-derived stream, so
/// output is identical at any thread count.
WalkCorpus generate_walks(const HomGraph& g, const WalkConfig& cfg);

void save_walks(std::ostream& out, const HomGraph& g, const WalkCorpus& corpus);

struct SkipGramConfig {
  uint32_t dim = 128;
  uint32_t window = 10;
  uint32_t negatives = 5;
  uint32_t epochs = 5;
  double learning_rate = 0.025;  // linearly decayed
  uint64_t seed = 0;
  uint32_t threads = 1;  // >1 trades bitwise determinism for speed
};

/// Skip-gram with negative sampling over the walk corpus; noise words are
/// drawn from the unigram^0.75 distribution. Returns one row per node
/// appearing in the corpus, in graph node order. Single-threaded training
/// is deterministic for a fixed seed.
FeatureMatrix train_skipgram(const HomGraph& g, const WalkCorpus& corpus,
                             const SkipGramConfig& cfg, double* final_loss = nullptr);

/// Walks + skip-gram with rows for exactly `ids` (zero vectors, counted in
/// *missing, for nodes that never entered the corpus). Optional L2 row
/// normalization.
FeatureMatrix embed_features(const HomGraph& g, const WalkConfig& wcfg, const SkipGramConfig& scfg,
                             const std::vector<std::string>& ids, bool l2_normalize = false,
                             size_t* missing = nullptr);

struct GridPoint {
  double p = 1.0;
  double q = 1.0;
  double mean_score = 0.0;
};

struct GridResult {
  std::vector<GridPoint> table;  // grid order: p-major, q-minor
  double best_p = 0.0;
  double best_q = 0.0;
};

struct CvOptions;  // mlkit
enum class ModelKind : uint8_t;

/// Evaluates Node2Vec embeddings over the (p, q) grid by downstream
/// cross-validated micro-F1 on the labeled ids. The argmax wins; ties go to
/// the smaller p, then the smaller q.
GridResult grid_pq(const HomGraph& g, const std::vector<std::string>& ids,
                   const std::vector<int>& labels, const WalkConfig& wcfg,
                   const SkipGramConfig& scfg, ModelKind model, const CvOptions& cv,
                   const std::vector<double>& grid = {0.5, 1.0, 2.0});

}  // namespace hfaug
