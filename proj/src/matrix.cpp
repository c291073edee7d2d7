#include "hfaug/matrix.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hfaug/error.hpp"

namespace hfaug {

FeatureMatrix::FeatureMatrix(std::vector<std::string> ids, size_t dim, std::string column_prefix)
    : ids_(std::move(ids)), data_(ids_.size() * dim), dim_(dim), prefix_(std::move(column_prefix)) {
  index_.reserve(ids_.size());
  for (size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      raise(Errc::malformed_row, "duplicate matrix id '" + ids_[i] + "'");
    }
  }
}

std::optional<size_t> FeatureMatrix::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Shortest text that parses back to the same double.
void append_double(std::string& buf, double v) {
  char tmp[32];
  auto [end, ec] = std::to_chars(tmp, tmp + sizeof(tmp), v);
  (void)ec;
  buf.append(tmp, end);
}

double parse_double(std::string_view text, size_t line_no) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    raise(Errc::malformed_row,
          "line " + std::to_string(line_no) + ": bad numeric value '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

void FeatureMatrix::save_csv(std::ostream& out) const {
  std::string buf = "address";
  for (size_t j = 0; j < dim_; ++j) {
    buf += ',';
    buf += prefix_;
    buf += std::to_string(j + 1);
  }
  buf += '\n';
  out << buf;
  for (size_t i = 0; i < rows(); ++i) {
    buf = ids_[i];
    for (double v : row(i)) {
      buf += ',';
      append_double(buf, v);
    }
    buf += '\n';
    out << buf;
  }
}

void FeatureMatrix::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) raise(Errc::io_error, "cannot open '" + path + "' for writing");
  save_csv(out);
  if (!out) raise(Errc::io_error, "write to '" + path + "' failed");
}

FeatureMatrix FeatureMatrix::load_csv(std::istream& in) {
  std::string line;
  size_t line_no = 0;
  size_t dim = 0;
  std::string prefix = "f";
  bool saw_header = false;

  std::vector<std::string> ids;
  std::vector<std::vector<double>> values;

  auto strip_cr = [](std::string& s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  };

  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view text = line;
    size_t start = 0;
    while (true) {
      size_t comma = text.find(',', start);
      if (comma == std::string_view::npos) {
        fields.push_back(text.substr(start));
        break;
      }
      fields.push_back(text.substr(start, comma - start));
      start = comma + 1;
    }
    if (!saw_header) {
      if (fields.size() < 2 || fields[0] != "address") {
        raise(Errc::malformed_row, "line 1: expected 'address,<prefix>1,...' header");
      }
      dim = fields.size() - 1;
      // Recover the prefix from the first column name ("f1" -> "f").
      std::string_view first = fields[1];
      size_t cut = first.size();
      while (cut > 0 && first[cut - 1] >= '0' && first[cut - 1] <= '9') --cut;
      if (cut > 0 && cut < first.size()) prefix = std::string(first.substr(0, cut));
      saw_header = true;
      continue;
    }
    if (fields.size() != dim + 1) {
      raise(Errc::malformed_row, "line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(dim + 1) + " fields, got " +
                                     std::to_string(fields.size()));
    }
    if (fields[0].empty()) {
      raise(Errc::malformed_row, "line " + std::to_string(line_no) + ": empty address");
    }
    ids.emplace_back(fields[0]);
    auto& row = values.emplace_back();
    row.reserve(dim);
    for (size_t j = 1; j < fields.size(); ++j) row.push_back(parse_double(fields[j], line_no));
  }

  FeatureMatrix m(std::move(ids), dim, prefix);
  for (size_t i = 0; i < m.rows(); ++i) {
    auto dst = m.row(i);
    for (size_t j = 0; j < dim; ++j) dst[j] = values[i][j];
  }
  return m;
}

FeatureMatrix FeatureMatrix::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open '" + path + "' for reading");
  return load_csv(in);
}

}  // namespace hfaug
