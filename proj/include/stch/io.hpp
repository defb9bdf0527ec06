#ifndef STCH_IO_HPP
#define STCH_IO_HPP

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stch/core.hpp"

namespace stch {

inline constexpr const char* kVersion = "0.1.0";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string join(const Vector& v, char sep = ',') {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += format_double(v[i]);
  }
  return out;
}

inline double parse_double(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{}) throw IoError("cannot parse number: '" + text + "'");
  return v;
}

inline Vector parse_vector(const std::string& text, char sep = ',') {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) values.push_back(parse_double(item));
  }
  return Vector::Map(values.data(), static_cast<Eigen::Index>(values.size()));
}

/// Ordered key/value block written as "# key=value" lines at the top of CSV files.
using HeaderBlock = std::vector<std::pair<std::string, std::string>>;

inline void write_header(std::ostream& os, const HeaderBlock& header) {
  for (const auto& [key, value] : header) os << "# " << key << '=' << value << '\n';
}

struct CsvTable {
  HeaderBlock header;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] std::string header_value(const std::string& key) const {
    for (const auto& [k, v] : header) {
      if (k == key) return v;
    }
    return {};
  }
};

inline std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  bool have_columns = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) table.header.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      continue;
    }
    if (!have_columns) {
      table.columns = split(line);
      have_columns = true;
    } else {
      table.rows.push_back(split(line));
    }
  }
  return table;
}

/// Writes to a sibling temp file and renames, so readers never see partial output.
inline void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace stch

#endif  // STCH_IO_HPP
