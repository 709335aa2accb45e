#include "adahuber/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "adahuber/error.hpp"

namespace adahuber {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(delim, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

bool parse_real(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
  return out;
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable read_csv_table(const std::string& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  CsvTable table;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM
    for (auto f : split(line, delimiter)) table.header.push_back(unquote(f));
    have_header = true;
    break;
  }
  if (!have_header) throw IoError("'" + path + "' is empty: a header row is required");
  for (const auto& h : table.header)
    if (h.empty()) throw IoError("'" + path + "': empty column name in header");

  const std::size_t cols = table.header.size();
  std::vector<double> cells;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split(line, delimiter);
    if (fields.size() != cols) {
      std::ostringstream os;
      os << path << ": row " << row << " has " << fields.size() << " cells, header has " << cols;
      throw IoError(os.str(), row);
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double v;
      if (fields[c].empty()) {
        std::ostringstream os;
        os << path << ": row " << row << ", column '" << table.header[c] << "': missing value";
        throw IoError(os.str(), row, table.header[c]);
      }
      if (!parse_real(fields[c], v)) {
        std::ostringstream os;
        os << path << ": row " << row << ", column '" << table.header[c] << "': cannot parse '" << fields[c]
           << "' as a real number";
        throw IoError(os.str(), row, table.header[c]);
      }
      cells.push_back(v);
    }
  }
  table.values.resize(static_cast<Index>(row), static_cast<Index>(cols));
  for (std::size_t r = 0; r < row; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      table.values(static_cast<Index>(r), static_cast<Index>(c)) = cells[r * cols + c];
  return table;
}

LoadedDataset load_csv(const std::string& path, const std::string& response, char delimiter, bool intercept) {
  CsvTable t = read_csv_table(path, delimiter);
  std::size_t yc = t.header.size();
  for (std::size_t c = 0; c < t.header.size(); ++c)
    if (t.header[c] == response) yc = c;
  if (yc == t.header.size())
    throw IoError(path + ": response column '" + response + "' not found; available columns: " + join(t.header));
  if (t.values.rows() == 0) throw IoError(path + ": no data rows");
  if (t.header.size() < 2) throw IoError(path + ": need at least one feature column besides the response");

  std::vector<std::string> features;
  Matrix x(t.values.rows(), static_cast<Index>(t.header.size() - 1));
  Index j = 0;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (c == yc) continue;
    features.push_back(t.header[c]);
    x.col(j++) = t.values.col(static_cast<Index>(c));
  }
  Vector y = t.values.col(static_cast<Index>(yc));
  return LoadedDataset{Dataset(std::move(x), std::move(y), intercept), response, std::move(features)};
}

void save_csv(const std::string& path, const Dataset& data, const std::string& response,
              const std::vector<std::string>& features, char delimiter) {
  if (static_cast<Index>(features.size()) != data.d()) throw InvalidArgument("save_csv: feature name count mismatch");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << response;
  for (const auto& f : features) out << delimiter << f;
  out << '\n';
  const Matrix x = data.features();
  for (Index i = 0; i < data.n(); ++i) {
    out << format_real(data.y()[i]);
    for (Index k = 0; k < x.cols(); ++k) out << delimiter << format_real(x(i, k));
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace adahuber
