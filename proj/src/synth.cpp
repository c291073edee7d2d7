#include "hfaug/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "hfaug/error.hpp"
#include "hfaug/io.hpp"
#include "hfaug/rng.hpp"

namespace hfaug {

namespace {

constexpr int64_t kBase = 1'600'000'000;  // arbitrary epoch anchor
constexpr int64_t kDay = 86'400;
constexpr int64_t kHour = 3'600;

std::string make_address(unsigned tag, uint64_t i) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "0x%02x%038llx", tag, static_cast<unsigned long long>(i));
  return buf;
}

Wei eth(double x) { return static_cast<uint64_t>(x * 1e18); }

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  if (spec.payback_fraction < 0 || spec.payback_fraction > 1) {
    raise(Errc::config_error, "payback_fraction must be in [0, 1]");
  }
  const uint32_t m = spec.investors_per_ponzi;
  const uint32_t pool = std::max(spec.n_background, 2u);

  SyntheticData out;
  Rng rng(mix64(spec.seed, hash_name("synth")));

  auto ponzi_ca = [](uint32_t k) { return make_address(1, k); };
  auto investor = [&](uint32_t k, uint32_t i) { return make_address(2, uint64_t(k) * m + i); };
  auto creator = [](uint32_t k) { return make_address(3, k); };
  const std::string collector = make_address(4, 0);
  auto bg_ca = [](uint32_t b) { return make_address(5, b); };
  auto bg_eoa = [](uint32_t e) { return make_address(6, e); };

  for (uint32_t k = 0; k < spec.n_ponzi; ++k) out.accounts.push_back({ponzi_ca(k), AccountKind::Ca});
  for (uint32_t k = 0; k < spec.n_ponzi; ++k) {
    for (uint32_t i = 0; i < m; ++i) out.accounts.push_back({investor(k, i), AccountKind::Eoa});
  }
  for (uint32_t k = 0; k < spec.n_ponzi; ++k) out.accounts.push_back({creator(k), AccountKind::Eoa});
  out.accounts.push_back({collector, AccountKind::Ca});
  for (uint32_t b = 0; b < spec.n_background; ++b) out.accounts.push_back({bg_ca(b), AccountKind::Ca});
  for (uint32_t e = 0; e < pool; ++e) out.accounts.push_back({bg_eoa(e), AccountKind::Eoa});

  // Planted scheme: investors call the contract and deposit; some get paid
  // back; the contract always skims to its creator who banks at the
  // collector contract. The creator chain closes a complete
  // EOA-call->CA-trans->EOA-trans->CA instance for every investor.
  for (uint32_t k = 0; k < spec.n_ponzi; ++k) {
    const std::string ca = ponzi_ca(k);
    const int64_t t0 = kBase + int64_t(k) * kDay;
    Wei collected = 0;
    std::vector<Wei> deposits(m);
    for (uint32_t i = 0; i < m; ++i) {
      const std::string inv = investor(k, i);
      deposits[i] = eth(0.5 + rng.real01());
      collected += deposits[i];
      const int64_t t = t0 + int64_t(i) * kHour;
      out.edges.push_back({inv, ca, EdgeType::Call, 0, t});
      out.edges.push_back({inv, ca, EdgeType::Trans, deposits[i], t + 60});
    }
    for (uint32_t i = 0; i < m; ++i) {
      if (!rng.bernoulli(spec.payback_fraction)) continue;
      const Wei payback = static_cast<Wei>(
          static_cast<uint64_t>(static_cast<double>(static_cast<uint64_t>(deposits[i])) *
                                (0.9 + 0.4 * rng.real01())));
      out.edges.push_back({ca, investor(k, i), EdgeType::Trans, payback, t0 + int64_t(m + i) * kHour});
    }
    const Wei skim = collected / 4;
    const int64_t t_end = t0 + int64_t(2 * m) * kHour;
    out.edges.push_back({ca, creator(k), EdgeType::Trans, skim, t_end});
    out.edges.push_back({creator(k), collector, EdgeType::Trans, skim - skim / 20, t_end + kHour});
    out.labels.push_back({ca, Label::Ponzi});
  }

  // Background contracts mirror the transfer-level shape (same deposit
  // volume, payback odds, and a final skim) but are funded by plain
  // transfers with no call structure.
  for (uint32_t b = 0; b < spec.n_background; ++b) {
    const std::string ca = bg_ca(b);
    const int64_t t0 = kBase + int64_t(b) * kDay;
    std::vector<std::string> senders(m);
    std::vector<Wei> deposits(m);
    Wei collected = 0;
    for (uint32_t i = 0; i < m; ++i) {
      senders[i] = bg_eoa(static_cast<uint32_t>(rng.index(pool)));
      deposits[i] = eth(0.5 + rng.real01());
      collected += deposits[i];
      out.edges.push_back({senders[i], ca, EdgeType::Trans, deposits[i], t0 + int64_t(i) * kHour});
    }
    for (uint32_t i = 0; i < m; ++i) {
      if (!rng.bernoulli(spec.payback_fraction)) continue;
      const Wei payback = static_cast<Wei>(
          static_cast<uint64_t>(static_cast<double>(static_cast<uint64_t>(deposits[i])) *
                                (0.9 + 0.4 * rng.real01())));
      out.edges.push_back({ca, senders[i], EdgeType::Trans, payback, t0 + int64_t(m + i) * kHour});
    }
    const Wei skim = collected / 4;
    out.edges.push_back(
        {ca, bg_eoa(static_cast<uint32_t>(rng.index(pool))), EdgeType::Trans, skim,
         t0 + int64_t(2 * m) * kHour});
    out.labels.push_back({ca, Label::NonPonzi});
  }

  if (spec.noise_edges > 0) {
    std::vector<const std::string*> all;
    std::vector<const std::string*> cas;
    for (const auto& a : out.accounts) {
      all.push_back(&a.address);
      if (a.kind == AccountKind::Ca) cas.push_back(&a.address);
    }
    const int64_t span = kDay * int64_t(std::max(spec.n_ponzi, spec.n_background) + 1);
    for (uint32_t j = 0; j < spec.noise_edges; ++j) {
      const bool call = rng.bernoulli(0.3);
      const std::string& src = *all[rng.index(all.size())];
      const std::string& dst = call ? *cas[rng.index(cas.size())] : *all[rng.index(all.size())];
      const int64_t t = kBase + static_cast<int64_t>(rng.index(static_cast<uint64_t>(span)));
      if (call) {
        out.edges.push_back({src, dst, EdgeType::Call, 0, t});
      } else {
        out.edges.push_back({src, dst, EdgeType::Trans, eth(0.01 + 0.1 * rng.real01()), t});
      }
    }
  }

  return out;
}

void write_synthetic(const SyntheticData& data, const std::string& accounts_path,
                     const std::string& edges_path, const std::string& labels_path) {
  auto open = [](const std::string& path) {
    std::ofstream out(path);
    if (!out) raise(Errc::io_error, "cannot open '" + path + "' for writing");
    return out;
  };
  auto a = open(accounts_path);
  write_accounts(a, data.accounts, Format::Csv);
  auto e = open(edges_path);
  write_edges(e, data.edges, Format::Csv);
  auto l = open(labels_path);
  write_labels(l, data.labels, Format::Csv);
}

}  // namespace hfaug
