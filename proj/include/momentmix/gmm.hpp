#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "momentmix/decomposition.hpp"
#include "momentmix/numerics.hpp"
#include "momentmix/parallel.hpp"
#include "momentmix/tensor_store.hpp"

namespace momentmix {

/// Diagonal Gaussian mixture. Column i of `means`/`variances` belongs to
/// component i.
struct GmmModel {
  Eigen::VectorXd weights;    // r, on the simplex
  Eigen::MatrixXd means;      // d x r
  Eigen::MatrixXd variances;  // d x r, nonnegative

  int rank() const noexcept { return static_cast<int>(weights.size()); }
  int dim() const noexcept { return static_cast<int>(means.rows()); }
  /// Throws InvalidArgument on shape mismatch, negative entries or weights
  /// off the simplex (tolerance 1e-8).
  void validate() const;
};

struct SampleSet {
  Eigen::MatrixXd data;     // N x d
  std::vector<int> labels;  // true component per row; empty when unknown
  std::uint64_t seed = 0;
};

using MomentSet = SymmetricEntries<double>;

/// Random model: weights from a uniform positive vector,
/// N(0,1) means, squared N(0,1) variances.
GmmModel random_gmm(int d, int r, std::uint64_t seed);

/// Rows are drawn in fixed-size chunks, each chunk from its own derived
/// stream, so the output does not depend on the thread count.
SampleSet sample_gmm(const GmmModel& model, std::int64_t n, std::uint64_t seed, Exec exec = Exec::parallel);

/// Mean over rows of prod_s y[key_s]. Chunk sums are combined by a fixed
/// pairwise tree.
MomentSet sample_moments(const Eigen::MatrixXd& data, int order, std::vector<TensorKey> keys,
                         Exec exec = Exec::parallel);

/// E[z^t] for z ~ N(mu, var).
double univariate_gaussian_moment(double mu, double var, int t);

/// Population moments; each key may repeat labels.
MomentSet exact_moments(const GmmModel& model, int order, std::vector<TensorKey> keys);

/// Union over j of the keys (j, j, i_1, ..., i_{m-2}) with distinct i's != j.
std::vector<TensorKey> repeated_pair_keys(int d, int m);

/// Omega_m keys followed by the repeated-pair keys, sorted.
std::vector<TensorKey> learning_keys(int d, int m);

/// Smallest t with C(d, t) >= r.
int lower_order(int d, int r);

/// Re(eta q) for the m-th root of unity eta minimizing ||Im(eta q)||; ties
/// go to the smallest root index. `chosen` receives the index per column.
Eigen::MatrixXd realify(const Eigen::MatrixXcd& qs, int m, std::vector<int>* chosen = nullptr);

struct WeightEstimate {
  Eigen::VectorXd beta;
  Eigen::VectorXd omega;   // beta^(m/(m-t)), not normalized
  Eigen::MatrixXd mu;      // qcheck / beta^(1/(m-t))
  Eigen::MatrixXd qcheck;  // input with signs fixed (see below)
};

/// nnls for beta against the order-t moments, then the exponent round trip.
/// For even m the realified vectors are only known up to sign; when t is
/// odd the sign of each column is taken from an unconstrained fit first.
WeightEstimate recover_weights(const Eigen::MatrixXd& qcheck, const MomentSet& mt, int m);

/// Two-term moment matching over Omega_m and Omega_t with omega kept on the
/// simplex.
SimplexReport refine_params(const Eigen::VectorXd& omega0, const Eigen::MatrixXd& mu0, const MomentSet& mm,
                            const MomentSet& mt, const RefineOptions& opts = {});

/// Per coordinate j: nnls of (M_m - sum qcheck^m) on the repeated-pair keys
/// of j against omega_i * prod mu_i over the other labels.
Eigen::MatrixXd recover_covariances(const MomentSet& mm, const Eigen::MatrixXd& qcheck, const Eigen::VectorXd& omega,
                                    const Eigen::MatrixXd& mu);

struct LearnOptions {
  std::uint64_t seed = 0;
  int starts = 0;  // forwarded to approximate()
  // Refined tensor decompositions carried through the weight and parameter
  // stages; the lowest final moment cost wins.
  int candidates = 8;
  RefineOptions tensor_refine{};
  RefineOptions param_refine{};
};

struct LearnReport {
  GmmModel model;
  Decomposition decomposition;
  int t = 0;
  WeightEstimate initial;
  int candidate = 0;  // index into the residual-ordered candidates
  double refine_initial_cost = 0.0;
  double refine_final_cost = 0.0;
};

/// mm must hold the learning_keys of its order, mt the Omega_t keys.
LearnReport learn_from_moments(const MomentSet& mm, const MomentSet& mt, int r, const LearnOptions& opts = {},
                               Exec exec = Exec::parallel);

LearnReport learn(const SampleSet& samples, int r, int m, const LearnOptions& opts = {}, Exec exec = Exec::parallel);

struct EmOptions {
  int max_iters = 100;
  double reg_value = 1e-3;
  std::uint64_t seed = 0;
};

struct EmReport {
  GmmModel model;
  std::vector<double> log_likelihood;  // average per sample, one per E-step
  int iterations = 0;
};

/// Diagonal EM from seeded random responsibilities; reg_value is added to
/// every variance in each M-step. Returns the iterate with the best
/// log-likelihood.
EmReport em_baseline(const Eigen::MatrixXd& data, int r, const EmOptions& opts = {}, Exec exec = Exec::parallel);

/// Average log-likelihood of the rows under the model.
double average_log_likelihood(const GmmModel& model, const Eigen::MatrixXd& data, double var_floor = 0.0,
                              Exec exec = Exec::parallel);

inline constexpr double kClassifyVarianceFloor = 1e-3;

/// argmax_i omega_i N(y; mu_i, diag(max(sigma_i^2, floor))).
std::vector<int> classify(const GmmModel& model, const Eigen::MatrixXd& data, double var_floor = kClassifyVarianceFloor,
                          Exec exec = Exec::parallel);

/// Fraction of agreeing labels after the best one-to-one relabeling of the
/// predicted components.
double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth, int r);

/// max over matched components of the largest absolute difference in
/// weight, mean or variance entries; matching minimizes the total.
double parameter_error(const GmmModel& truth, const GmmModel& estimate);

}  // namespace momentmix
