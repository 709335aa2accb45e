#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace adahuber::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

struct RunConfig {
  std::string subcommand;

  // data
  std::string input;
  std::string response = "y";
  std::string delimiter = ",";
  bool intercept = false;

  // HuberParams overrides; resolved from the data when unset
  std::optional<double> tau;
  std::optional<double> lambda;
  std::optional<double> varpi;
  double c_tau = 1.0;
  double c_lambda = 1.0;
  double c_varpi = 1.0;
  long long s_guess = 0;  // 0: max(1, ceil(sqrt(d)))
  std::optional<double> t;

  // SolverConfig overrides
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<double> phi0;
  std::optional<double> gamma_u;

  // tuning
  std::string method = "cv";
  std::vector<double> grid{0.5, 1.0, 1.5};
  std::vector<double> grid_tau;
  std::vector<double> grid_lambda;
  int folds = 3;
  bool high_dim = false;
  double lepski_k = 3.0;
  double lepski_a = 1.5;

  // simulation
  std::string experiment = "table1";
  std::optional<int> reps;
  std::optional<long long> n;
  std::optional<long long> d;
  std::vector<double> df_grid;
  std::vector<long long> n_grid;
  std::vector<long long> d_grid;
  std::vector<double> ratio_grid;
  bool raw_lognormal = false;
  std::string noise = "normal:4";

  std::uint64_t seed = 12345;
  std::string out;
  std::string format = "csv";
  int threads = 0;
};

/// Parses argv and dispatches. Never throws; returns an exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int cmd_fit(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_tune(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_diagnose(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// --threads when positive, else ADAHUBER_THREADS when set, else 0 (OpenMP default).
int resolve_thread_count(int flag);

}  // namespace adahuber::cli
