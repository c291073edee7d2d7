#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hfaug {

/// Dense per-account feature matrix, row-keyed by account id. The column
/// prefix ("f" for manual features, "e" for embeddings) only affects the
/// CSV header.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::vector<std::string> ids, size_t dim, std::string column_prefix = "f");

  size_t rows() const { return ids_.size(); }
  size_t dim() const { return dim_; }

  std::span<double> row(size_t i) { return {data_.data() + i * dim_, dim_}; }
  std::span<const double> row(size_t i) const { return {data_.data() + i * dim_, dim_}; }

  const std::string& id(size_t i) const { return ids_[i]; }
  const std::vector<std::string>& ids() const { return ids_; }
  std::optional<size_t> find(std::string_view id) const;

  const std::string& column_prefix() const { return prefix_; }
  void set_column_prefix(std::string prefix) { prefix_ = std::move(prefix); }

  // CSV form: header `address,<prefix>1..<prefix>d`, one row per id.
  // Values are written in shortest round-trip form, so saving is
  // deterministic and loading recovers the exact doubles.
  void save_csv(std::ostream& out) const;
  void save_csv(const std::string& path) const;
  static FeatureMatrix load_csv(std::istream& in);
  static FeatureMatrix load_csv(const std::string& path);

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, size_t> index_;
  std::vector<double> data_;  // row-major
  size_t dim_ = 0;
  std::string prefix_ = "f";
};

}  // namespace hfaug
