#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace momentmix {

/// Squarefree monomial x_{i1}...x_{ip}, stored as its strictly increasing
/// label list. Label 0 is the homogenizing coordinate x0 = 1. The empty
/// subset is the constant monomial.
using IndexSubset = std::vector<int>;

/// Exact C(n, k); 0 when k > n. Throws Overflow instead of wrapping.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

bool strictly_increasing(std::span<const int> labels) noexcept;

/// All `size`-element subsets of {lo, ..., hi} in ascending lexicographic order.
std::vector<IndexSubset> subsets_lex(int lo, int hi, int size);

/// Row basis of the generating matrix: the first r degree-p squarefree
/// monomials in x1..xk. Throws RankTooLarge when C(k, p) < r.
std::vector<IndexSubset> basis_b0(int k, int p, int r);

/// Column labels: {j1 < ... < jp <= k < j_{p+1} <= n}, lexicographic.
std::vector<IndexSubset> basis_b1(int k, int p, int n);

/// Equation support for column `alpha`: (m-p-1)-subsets of [k+1, n] that
/// avoid alpha's tail label.
std::vector<IndexSubset> support_o_alpha(const IndexSubset& alpha, int k, int n, int m, int p);

/// Sorted union of two disjoint subsets; returns an empty optional-like
/// flag through `ok` when they share a label.
IndexSubset merge_disjoint(std::span<const int> a, std::span<const int> b, bool& ok);

/// Multi-index of a symmetric tensor entry, stored sorted.
class TensorKey {
 public:
  TensorKey() = default;
  explicit TensorKey(std::vector<int> slots);

  std::span<const int> slots() const noexcept { return slots_; }
  int order() const noexcept { return static_cast<int>(slots_.size()); }
  int operator[](std::size_t i) const noexcept { return slots_[i]; }

  /// All slots pairwise distinct (an Omega_m key).
  bool distinct() const noexcept;
  /// Exactly one value occurs twice and all others once (a covariance key).
  bool single_repeated_pair() const noexcept;

  friend bool operator==(const TensorKey&, const TensorKey&) = default;
  friend auto operator<=>(const TensorKey&, const TensorKey&) = default;

 private:
  std::vector<int> slots_;
};

}  // namespace momentmix
