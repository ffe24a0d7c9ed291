#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "momentmix/combinatorics.hpp"
#include "momentmix/parallel.hpp"
#include "momentmix/tensor_store.hpp"

namespace momentmix {

/// Shape of a generating system. Labels 1..k are "heads", k+1..n "tails";
/// label 0 is the homogenizing coordinate.
struct GeneratingShape {
  int n = 0;  // d - 1
  int m = 0;  // tensor order
  int p = 0;  // degree of the row monomials
  int k = 0;  // head/tail split
  int r = 0;  // rank

  /// Throws ShapeCondition unless 1 <= p <= m-2, p <= k < n and both
  /// C(k, p) >= r and C(n-k-1, m-p-1) >= r hold.
  void validate() const;
};

/// r x |B1| matrix whose column alpha holds the coefficients of the
/// generating polynomial for the monomial alpha, in the B0 row basis.
struct GeneratingMatrix {
  GeneratingShape shape;
  Eigen::MatrixXcd values;
  std::vector<IndexSubset> rows;  // B0
  std::vector<IndexSubset> cols;  // B1
  std::vector<double> residuals;  // per column ||A g - b||
  int ill_conditioned_columns = 0;

  /// Column of head subset `head_index` (lex position among the p-subsets
  /// of [1, k]) combined with tail label `tail`.
  Eigen::Index column_of(std::size_t head_index, int tail) const;
};

struct LinearSystem {
  Eigen::MatrixXcd a;  // rows indexed by O_alpha, columns by B0
  Eigen::VectorXcd b;
};

LinearSystem assemble_system(const IncompleteSymmetricTensor& t, const IndexSubset& alpha,
                             const std::vector<IndexSubset>& b0, int k, int n, int m, int p);

/// Solves one least-squares system per alpha in B1. Columns are independent
/// and are written in B1 order whatever the execution order.
GeneratingMatrix solve_generating_matrix(const IncompleteSymmetricTensor& t, int r, int p, int k,
                                         Exec exec = Exec::parallel);

struct CompanionSet {
  GeneratingShape shape;
  std::vector<Eigen::MatrixXcd> matrices;  // N_{k+1}, ..., N_n
};

/// (N_l)_{nu, beta} = G(beta, nu + e_l).
CompanionSet companion_matrices(const GeneratingMatrix& g);

struct TailExtraction {
  Eigen::MatrixXcd tails;         // (n-k) x r, column i is w_i
  Eigen::MatrixXcd eigenvectors;  // r x r, unit columns
  double gap = 0.0;               // min pairwise eigenvalue distance / spread
  int attempts = 0;
  Eigen::VectorXd xi;
};

inline constexpr double kMinEigenGap = 1e-8;
inline constexpr int kXiRetries = 5;

/// Eigendecomposes a random combination N(xi) and reads each tail vector off
/// as Rayleigh quotients v^H N_l v. Draws a fresh xi (up to kXiRetries
/// times) while the relative eigen-gap is below kMinEigenGap; then throws
/// DegenerateSpectrum.
TailExtraction extract_tails(const CompanionSet& ns, std::uint64_t seed);

/// Relative eigenvalue separation; 1 for a single eigenvalue.
double relative_eigen_gap(const Eigen::VectorXcd& values);

}  // namespace momentmix
