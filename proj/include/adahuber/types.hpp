#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace adahuber {

using Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Regression sample (y_i, x_i), i = 1..n.
///
/// When `intercept` is set, a constant-1 column is appended to the working
/// design as its last column. That column is never penalized or truncated,
/// and its coefficient is the last entry of every coefficient vector.
class Dataset {
 public:
  Dataset(Matrix x, Vector y, bool intercept = false);

  /// Working design, n x p with p = d + intercept.
  const Matrix& design() const noexcept { return x_; }
  const Vector& y() const noexcept { return y_; }

  Index n() const noexcept { return x_.rows(); }
  /// Number of user features (intercept column excluded).
  Index d() const noexcept { return x_.cols() - (intercept_ ? 1 : 0); }
  /// Length of coefficient vectors.
  Index p() const noexcept { return x_.cols(); }
  bool intercept() const noexcept { return intercept_; }

  /// False only for the intercept coordinate.
  bool penalized(Index j) const noexcept { return !(intercept_ && j == p() - 1); }

  /// User features only (copy of the design without the intercept column).
  Matrix features() const;

  Dataset with_response(Vector y) const;
  Dataset with_features(Matrix x) const;
  Dataset rows(const std::vector<Index>& idx) const;

 private:
  struct Raw {};
  Dataset(Raw, Matrix design, Vector y, bool intercept);

  Matrix x_;
  Vector y_;
  bool intercept_;
};

struct HuberParams {
  double tau = 1.0;
  double lambda = 0.0;
  std::optional<double> varpi;

  void validate() const;
};

struct SolverConfig {
  /// Stop when the coefficient change ||b_{k+1} - b_k||_2 <= tol.
  double tol = 1e-4;
  int max_iter = 5000;
  /// LAMM starting quadratic parameter and its inflation factor.
  double phi0 = 1e-4;
  double gamma_u = 2.0;
  /// LAMM additionally requires the l1 KKT residual to be below this before
  /// declaring convergence.
  double kkt_tol = 1e-4;
  bool record_trajectory = true;

  static SolverConfig irls_defaults() {
    SolverConfig c;
    c.tol = 1e-8;
    c.max_iter = 500;
    return c;
  }
  static SolverConfig lamm_defaults() { return SolverConfig{}; }

  void validate() const;
};

struct FitResult {
  Vector beta;
  int iterations = 0;
  bool converged = false;
  /// Final penalized objective L_tau(beta) + lambda * ||beta||_1.
  double objective = 0.0;
  /// ||grad L_tau(beta)||_2 at return (diagnostic only).
  double gradient_norm = 0.0;
  std::vector<double> trajectory;
  /// LAMM only: most Repeat-loop passes needed by any outer iteration.
  int max_inner_iterations = 0;
  HuberParams params;
};

}  // namespace adahuber
