#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace momentmix {

// ---------------------------------------------------------------------------
// Random numbers
// ---------------------------------------------------------------------------

/// splitmix64 mix of (seed, stream). Parallel workers derive their own
/// streams so no two share state.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Stream "mt64-polar/1": std::mt19937_64 feeding a Marsaglia polar
/// transform implemented here (std::normal_distribution is not
/// reproducible across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::vector<double> gaussian_vector(std::uint64_t seed, std::size_t len);

// ---------------------------------------------------------------------------
// Linear algebra
// ---------------------------------------------------------------------------

struct LstsqReport {
  Eigen::MatrixXcd solution;
  double residual_norm = 0.0;  // Frobenius norm of A X - B
  Eigen::Index rank = 0;
  double condition_estimate = 0.0;
  bool ill_conditioned = false;  // condition estimate above 1e12 or rank deficient
};

inline constexpr double kIllConditionedThreshold = 1e12;

/// Minimum-norm least squares via a complete orthogonal decomposition.
LstsqReport lstsq(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

struct NnlsReport {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  int iterations = 0;
};

/// Lawson-Hanson active set for min ||A x - b|| subject to x >= 0.
/// Throws MaxIterations if the cycling guard trips.
NnlsReport nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iterations = 0);

struct EigenPairs {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;  // unit-norm columns
};

/// All eigenpairs, ordered by real part then imaginary part.
EigenPairs eig(const Eigen::MatrixXcd& m);

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian
/// method). Returns assignment[row] = column.
std::vector<int> optimal_assignment(const Eigen::MatrixXd& cost);

// ---------------------------------------------------------------------------
// Nonlinear least squares
// ---------------------------------------------------------------------------

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

struct RefineOptions {
  int max_iters = 200;
  double grad_tol = 1e-10;
  double step_tol = 1e-15;  // relative step size below which progress has stalled
};

struct RefineReport {
  Eigen::VectorXd x;
  double initial_cost = 0.0;  // ||residual(x0)||^2
  double final_cost = 0.0;
  int iterations = 0;
  bool converged = false;  // gradient tolerance reached
};

/// Levenberg-Marquardt. Only steps that lower the cost are accepted, so
/// final_cost <= initial_cost always. Without `jacobian`, forward
/// differences are used.
RefineReport nlls_refine(const ResidualFn& residual, const Eigen::VectorXd& x0, const RefineOptions& opts = {},
                         const JacobianFn& jacobian = {});

Eigen::MatrixXd finite_difference_jacobian(const ResidualFn& residual, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& fx);

/// Residual of a mixture fit as a function of (weights, means d x r).
using MixtureResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::MatrixXd&)>;

struct SimplexReport {
  Eigen::VectorXd omega;
  Eigen::MatrixXd mu;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  int iterations = 0;
};

/// Minimizes ||residual(omega, mu)||^2 with omega on the probability simplex
/// through omega_i = t_i^2 / sum_j t_j^2.
SimplexReport simplex_nlls(const MixtureResidualFn& residual, const Eigen::VectorXd& omega0,
                           const Eigen::MatrixXd& mu0, const RefineOptions& opts = {});

}  // namespace momentmix
