#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "adahuber/simlab.hpp"

namespace adahuber {

enum class OutputFormat { csv, jsonl };

OutputFormat parse_format(const std::string& s);
/// ".csv" or ".jsonl"
const char* extension(OutputFormat f);

/// Column-named rows of typed cells. Numbers are written with 17 significant
/// digits in CSV; NaN becomes "NA" in CSV and null in JSON lines.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;

  void add(std::vector<nlohmann::json> row);
};

void write_table(std::ostream& out, const Table& table, OutputFormat fmt);
void write_table(const std::string& path, const Table& table, OutputFormat fmt);

/// replication,setting,estimator,l2_error,tau,failed
Table records_table(const std::vector<ReplicationRecord>& records);
/// setting,estimator,count,failed,mean,std
Table summary_table(const std::vector<SummaryRow>& summary);
/// df,delta,n,d,count,failed,mean_error,neg_log_mean_error,mean_neg_log_error
Table phase_table(const std::vector<PhaseRow>& rows);
/// d,n,n_over_log_d,point,count,failed,mean_error,std_error
Table neff_table(const std::vector<NeffRow>& rows);

/// "<dir>/<stem><suffix><ext>" for an output path "<dir>/<stem><ext>".
std::string sibling_path(const std::string& path, const std::string& suffix, const std::string& ext);

}  // namespace adahuber
