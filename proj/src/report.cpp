#include "adahuber/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "adahuber/csv_io.hpp"
#include "adahuber/error.hpp"

namespace adahuber {
namespace {

std::string csv_cell(const nlohmann::json& v) {
  if (v.is_null()) return "NA";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    return std::isfinite(d) ? format_real(d) : (std::isnan(d) ? "NA" : (d > 0 ? "Inf" : "-Inf"));
  }
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return s;
}

nlohmann::json json_cell(const nlohmann::json& v) {
  if (v.is_number_float() && !std::isfinite(v.get<double>())) return nullptr;
  return v;
}

}  // namespace

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "jsonl") return OutputFormat::jsonl;
  throw InvalidArgument("unknown output format '" + s + "' (expected csv or jsonl)");
}

const char* extension(OutputFormat f) { return f == OutputFormat::csv ? ".csv" : ".jsonl"; }

void Table::add(std::vector<nlohmann::json> row) {
  if (row.size() != columns.size()) throw InvalidArgument("Table: row width does not match columns");
  rows.push_back(std::move(row));
}

void write_table(std::ostream& out, const Table& table, OutputFormat fmt) {
  if (fmt == OutputFormat::csv) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_cell(row[c]);
      out << '\n';
    }
    return;
  }
  for (const auto& row : table.rows) {
    nlohmann::ordered_json rec;
    for (std::size_t c = 0; c < row.size(); ++c) rec[table.columns[c]] = json_cell(row[c]);
    out << rec.dump() << '\n';
  }
}

void write_table(const std::string& path, const Table& table, OutputFormat fmt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_table(out, table, fmt);
  if (!out) throw IoError("write failed for '" + path + "'");
}

Table records_table(const std::vector<ReplicationRecord>& records) {
  Table t{{"replication", "setting", "estimator", "l2_error", "tau", "failed"}, {}};
  for (const auto& r : records) t.add({r.replication, r.setting, r.estimator, r.l2_error, r.tau, r.failed});
  return t;
}

Table summary_table(const std::vector<SummaryRow>& summary) {
  Table t{{"setting", "estimator", "count", "failed", "mean", "std"}, {}};
  for (const auto& s : summary) t.add({s.setting, s.estimator, s.count, s.failed, s.mean, s.std});
  return t;
}

Table phase_table(const std::vector<PhaseRow>& rows) {
  Table t{{"df", "delta", "n", "d", "count", "failed", "mean_error", "neg_log_mean_error", "mean_neg_log_error"}, {}};
  for (const auto& r : rows)
    t.add({r.df, r.delta, r.n, r.d, r.count, r.failed, r.mean_error, r.neg_log_mean_error, r.mean_neg_log_error});
  return t;
}

Table neff_table(const std::vector<NeffRow>& rows) {
  Table t{{"d", "n", "n_over_log_d", "point", "count", "failed", "mean_error", "std_error"}, {}};
  for (const auto& r : rows) t.add({r.d, r.n, r.n_eff, r.point, r.count, r.failed, r.mean_error, r.std_error});
  return t;
}

std::string sibling_path(const std::string& path, const std::string& suffix, const std::string& ext) {
  std::filesystem::path p(path);
  std::filesystem::path out = p.parent_path() / (p.stem().string() + suffix + ext);
  return out.string();
}

}  // namespace adahuber
