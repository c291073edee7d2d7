#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hfaug/augment.hpp"
#include "hfaug/embed.hpp"
#include "hfaug/io.hpp"
#include "hfaug/mlkit.hpp"

namespace hfaug {

/// Declarative run description, loaded from a versioned JSON document.
/// Every stage draws its seed from the global seed mixed with the stage
/// name, so one number reproduces the whole run.
struct PipelineConfig {
  static constexpr int kVersion = 1;

  std::string accounts_path;
  std::string edges_path;
  std::string labels_path;
  Format format = Format::Csv;
  bool lenient = false;
  ExpectedCounts expect;

  std::string out_dir = "out";
  uint64_t seed = 0;
  uint32_t threads = 1;

  std::string feature_source = "manual";  // manual | deepwalk | node2vec
  WalkConfig walk;
  SkipGramConfig skipgram;
  bool l2_normalize_embeddings = false;

  AugmentationConfig augment;  // patterns default to {P2}, mode target-ca

  std::vector<ModelKind> models = {ModelKind::Logistic, ModelKind::Hinge};
  CvOptions cv;

  static PipelineConfig load(const std::string& path);
  static PipelineConfig from_json_text(const std::string& text);
  std::string to_json() const;
};

struct PipelineModelResult {
  ModelKind model;
  double raw_mean = 0, raw_std = 0;
  double aug_mean = 0, aug_std = 0;
  double gain_pct = 0;
};

struct PipelineResult {
  size_t nodes = 0, edges = 0;
  size_t positives = 0, negatives = 0;
  std::vector<PipelineModelResult> per_model;
  std::vector<std::string> artifacts;  // paths written, in order
};

/// ingest -> dataset assembly -> features -> augment -> evaluate -> report.
/// Artifacts land in cfg.out_dir; identical config and seed reproduce them
/// byte for byte.
PipelineResult run_pipeline(const PipelineConfig& cfg);

uint64_t stage_seed(uint64_t global_seed, std::string_view stage);

}  // namespace hfaug
