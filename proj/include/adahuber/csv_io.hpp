#pragma once

#include <string>
#include <vector>

#include "adahuber/types.hpp"

namespace adahuber {

/// Fully numeric CSV with a header row.
struct CsvTable {
  std::vector<std::string> header;
  Matrix values;
};

/// Throws IoError for a missing file, missing header, ragged rows, empty
/// cells or unparseable numbers; row numbers count data rows from 1.
CsvTable read_csv_table(const std::string& path, char delimiter = ',');

struct LoadedDataset {
  Dataset data;
  std::string response;
  std::vector<std::string> features;
};

/// Named column becomes y, every other column (order preserved) becomes x.
LoadedDataset load_csv(const std::string& path, const std::string& response, char delimiter = ',',
                       bool intercept = false);

/// Writes response first, then features, reals with 17 significant digits.
void save_csv(const std::string& path, const Dataset& data, const std::string& response,
              const std::vector<std::string>& features, char delimiter = ',');

/// %.17g; reloading gives back the identical double.
std::string format_real(double v);

}  // namespace adahuber
