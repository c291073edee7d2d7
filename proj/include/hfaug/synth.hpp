#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hfaug/graph.hpp"

namespace hfaug {

/// Generator parameters. Each planted ponzi contract receives calls and
/// transfers from investors_per_ponzi investor EOAs, pays a fraction of
/// them back, and always routes collected funds through its creator to a
/// collector contract, which guarantees at least investors_per_ponzi
/// complete EOA -call-> CA -trans-> EOA -trans-> CA instances anchored on
/// it. Background contracts see similar transfer volume but no such call
/// structure.
struct SyntheticSpec {
  uint32_t n_ponzi = 10;
  uint32_t n_background = 100;
  uint32_t investors_per_ponzi = 5;
  double payback_fraction = 0.5;  // in [0, 1]
  uint32_t noise_edges = 0;
  uint64_t seed = 0;
};

struct SyntheticData {
  std::vector<AccountRecord> accounts;
  std::vector<EdgeRecord> edges;
  std::vector<LabelRecord> labels;  // ponzi for planted, nonponzi for background
};

SyntheticData generate_synthetic(const SyntheticSpec& spec);

void write_synthetic(const SyntheticData& data, const std::string& accounts_path,
                     const std::string& edges_path, const std::string& labels_path);

}  // namespace hfaug
