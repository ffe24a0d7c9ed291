#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "momentmix/generating.hpp"
#include "momentmix/numerics.hpp"
#include "momentmix/tensor_store.hpp"

namespace momentmix {

struct RankBound {
  int r_max = 0;
  int p_star = 0;
  int k_star = 0;
  bool guaranteed = false;  // n >= max(2m-1, ceil(m^2/4)-1)
};

/// Largest rank the generating-polynomial method handles for labels 1..n and
/// order m. k* is found by integer search. Throws OrderExceedsDim when
/// n < m and InvalidArgument when m < 3.
RankBound max_rank(int n, int m);

/// Exhaustive max over p in [1, m-2], k in [p, n-m+p] of
/// min(C(k, p), C(n-k-1, m-p-1)).
std::uint64_t brute_force_max_rank(int n, int m);

/// n below this value voids the max_rank guarantee.
int rank_guarantee_threshold(int m);

struct DecompositionParams {
  int r = 0;
  int p = 0;
  int k = 0;
  std::uint64_t seed = 0;
  bool refine = true;
  RefineOptions refine_opts{};
  // approximate() only: number of cyclic label shifts tried as starting
  // points (0 = all d). The `screen` best of them by residual get
  // `screen_iters` refinement iterations each; the lowest one is refined to
  // the end.
  int starts = 0;
  int screen = 4;
  int screen_iters = 25;
};

/// Picks p = p* and the smallest feasible k > p; falls back to the other p
/// values in [1, m-2]. Throws RankTooLarge when nothing fits.
DecompositionParams choose_params(int n, int m, int r);

/// Checks that (p, k) is usable for rank r: the generating-system shape
/// conditions plus k > p so every head coordinate has equations.
void validate_params(int n, int m, const DecompositionParams& params);

struct Diagnostics {
  double decomp_err = 0.0;
  double eigen_gap = 0.0;
  int xi_attempts = 0;
  double generating_residual = 0.0;  // max per-column residual
  int ill_conditioned_columns = 0;
  double tails_residual = 0.0;
  double heads_residual = 0.0;  // max over coordinates
  double scales_residual = 0.0;
  // Filled by approximate().
  bool refined = false;
  int label_shift = 0;  // cyclic relabeling that produced the start
  double pre_refine_residual = 0.0;  // ||(T - model)_Omega|| before refinement
  double post_refine_residual = 0.0;
  int refine_iterations = 0;
  bool refine_converged = false;
  std::optional<double> abs_err;
  std::optional<double> rel_err;
};

struct Decomposition {
  int d = 0;
  int m = 0;
  int p = 0;
  int k = 0;
  ComponentList components;  // d x r, unit weights
  Diagnostics diagnostics;

  int rank() const noexcept { return components.rank(); }
};

/// gammas: |J1| x r, column i approximates lambda_i [u_i]_{J1}.
struct TailProducts {
  Eigen::MatrixXcd gammas;
  double residual = 0.0;
};

TailProducts solve_tail_products(const IncompleteSymmetricTensor& t, const Eigen::MatrixXcd& tails,
                                 const DecompositionParams& params);

struct Heads {
  Eigen::MatrixXcd heads;  // k x r
  double max_residual = 0.0;
};

Heads solve_heads(const IncompleteSymmetricTensor& t, const Eigen::MatrixXcd& tails, const Eigen::MatrixXcd& gammas,
                  const DecompositionParams& params, Exec exec = Exec::parallel);

struct Scales {
  Eigen::VectorXcd lambdas;
  double residual = 0.0;
};

/// Least squares over every Omega_m key for lambda with design columns
/// [1; u_i]^{(x) m}.
Scales solve_scales(const IncompleteSymmetricTensor& t, const Eigen::MatrixXcd& heads, const Eigen::MatrixXcd& tails);

/// Exact pipeline: generating matrix, tails, tail products, heads, scales.
Decomposition decompose(const IncompleteSymmetricTensor& t, const DecompositionParams& params,
                        Exec exec = Exec::parallel);

/// decompose on noisy input followed by Levenberg-Marquardt over all
/// components on the Omega_m residual (when params.refine). Starts come from
/// cyclic relabelings (label l -> l + s mod d), which guards against
/// components whose label-0 entry is nearly zero and against refinement
/// runs that drift into a diverging component. With `truth` the abs/rel
/// errors are filled in.
Decomposition approximate(const IncompleteSymmetricTensor& t, const DecompositionParams& params,
                          const IncompleteSymmetricTensor* truth = nullptr, Exec exec = Exec::parallel);

/// The `params.screen` best starts of approximate(), each refined with the
/// full iteration budget, ordered by final Omega residual.
std::vector<Decomposition> approximate_candidates(const IncompleteSymmetricTensor& t,
                                                  const DecompositionParams& params, Exec exec = Exec::parallel);

/// Same tensor with label l renamed to (l + shift) mod d.
IncompleteSymmetricTensor shift_labels(const IncompleteSymmetricTensor& t, int shift);

/// ||(T - sum q_i^m)_Omega|| / ||T_Omega|| over all Omega_m keys.
double decomposition_error(const IncompleteSymmetricTensor& t, const ComponentList& comps);

/// max_i ||q_i - eta q~_pi(i)|| / ||q_i|| after optimal matching pi and
/// the best m-th root of unity eta per pair.
double vec_err_max(const ComponentList& truth, const ComponentList& recovered, int m);

/// Real components q_1..q_r with i.i.d. standard normal entries.
ComponentList random_components(int d, int r, std::uint64_t seed);

}  // namespace momentmix
