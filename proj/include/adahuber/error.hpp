#pragma once

#include <stdexcept>
#include <string>

namespace adahuber {

/// Bad argument: non-finite input, nonpositive tau, shape mismatch.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A Gram (or weighted Gram) matrix that cannot be inverted reliably.
class RankDeficiency : public std::runtime_error {
 public:
  RankDeficiency(const std::string& what, double condition_number)
      : std::runtime_error(what), condition_number_(condition_number) {}

  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

/// Arithmetic blew up inside a solver (e.g. LAMM quadratic parameter overflow).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sample has no spread (zero variance), so a scale statistic is undefined.
class DegenerateSample : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every candidate of a tuning grid failed.
class TuningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CSV / file problems. Row is 1-based over data rows (header excluded),
/// 0 when the error is not tied to a row.
class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::size_t row = 0, std::string column = {})
      : std::runtime_error(what), row_(row), column_(std::move(column)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

}  // namespace adahuber
