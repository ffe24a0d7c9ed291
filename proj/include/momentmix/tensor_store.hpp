#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "momentmix/combinatorics.hpp"
#include "momentmix/errors.hpp"
#include "momentmix/parallel.hpp"

namespace momentmix {

using Complex = std::complex<double>;

std::string key_to_string(std::span<const int> slots);

/// Symmetric tensor of order m over labels 0..d-1, holding only the entries
/// whose keys were supplied. Each value is stored once under its sorted key,
/// so a lookup by any permutation of a key returns the same value. Immutable
/// after construction.
template <typename Value>
class SymmetricEntries {
 public:
  SymmetricEntries(int dim, int order) : dim_(dim), order_(order) { check_shape(); }

  /// Keys may arrive in any order; duplicates are rejected.
  SymmetricEntries(int dim, int order, std::vector<TensorKey> keys, std::vector<Value> values)
      : dim_(dim), order_(order) {
    check_shape();
    if (keys.size() != values.size()) {
      throw Error(ErrorCode::InvalidArgument, "key/value count mismatch");
    }
    std::vector<std::size_t> perm(keys.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    if (!std::is_sorted(keys.begin(), keys.end())) {
      std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    }
    keys_.reserve(keys.size());
    values_.reserve(values.size());
    for (std::size_t i : perm) {
      const TensorKey& key = keys[i];
      if (key.order() != order_) {
        throw Error(ErrorCode::InvalidArgument, "key " + key_to_string(key.slots()) + " has wrong order");
      }
      if (key.order() > 0 && (key[0] < 0 || key[key.order() - 1] >= dim_)) {
        throw Error(ErrorCode::InvalidArgument, "key " + key_to_string(key.slots()) + " out of range");
      }
      if (!keys_.empty() && keys_.back() == key) {
        throw Error(ErrorCode::InvalidArgument, "duplicate key " + key_to_string(key.slots()));
      }
      keys_.push_back(std::move(keys[i]));
      values_.push_back(values[i]);
    }
  }

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return keys_.size(); }
  const std::vector<TensorKey>& keys() const noexcept { return keys_; }
  const std::vector<Value>& values() const noexcept { return values_; }

  /// Lookup by any permutation of a key.
  std::optional<Value> find(std::span<const int> slots) const {
    std::vector<int> sorted(slots.begin(), slots.end());
    std::sort(sorted.begin(), sorted.end());
    return find_sorted(sorted);
  }

  std::optional<Value> find_sorted(std::span<const int> sorted) const {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), sorted,
                               [](const TensorKey& key, std::span<const int> probe) {
                                 return std::lexicographical_compare(key.slots().begin(), key.slots().end(),
                                                                     probe.begin(), probe.end());
                               });
    if (it == keys_.end() || !std::equal(it->slots().begin(), it->slots().end(), sorted.begin(), sorted.end())) {
      return std::nullopt;
    }
    return values_[static_cast<std::size_t>(it - keys_.begin())];
  }

  /// Throws MissingEntry when absent.
  Value at(std::span<const int> slots) const {
    if (auto v = find(slots)) return *v;
    throw Error(ErrorCode::MissingEntry, "no entry at key " + key_to_string(slots));
  }

  SymmetricEntries restricted_to(const std::vector<TensorKey>& keys) const {
    std::vector<Value> vals;
    vals.reserve(keys.size());
    for (const auto& key : keys) vals.push_back(at(key.slots()));
    return SymmetricEntries(dim_, order_, keys, std::move(vals));
  }

  template <typename Scale>
  SymmetricEntries scaled(Scale c) const {
    std::vector<Value> vals(values_);
    for (auto& v : vals) v *= c;
    return SymmetricEntries(dim_, order_, keys_, std::move(vals));
  }

 private:
  void check_shape() const {
    if (dim_ < 1 || order_ < 1) throw Error(ErrorCode::InvalidArgument, "tensor needs dim >= 1 and order >= 1");
  }

  int dim_;
  int order_;
  std::vector<TensorKey> keys_;
  std::vector<Value> values_;
};

using IncompleteSymmetricTensor = SymmetricEntries<Complex>;

/// Components q_1..q_r as the columns of a d x r matrix, with optional
/// weights lambda_i (an empty weight vector means all ones).
struct ComponentList {
  Eigen::MatrixXcd vectors;
  Eigen::VectorXcd weights;

  int dim() const noexcept { return static_cast<int>(vectors.rows()); }
  int rank() const noexcept { return static_cast<int>(vectors.cols()); }
  Complex weight(Eigen::Index i) const { return weights.size() == 0 ? Complex(1.0) : weights(i); }
};

/// All C(d, m) sorted distinct-index keys in lexicographic order.
std::vector<TensorKey> omega_keys(int d, int m);

/// sum_i lambda_i * prod_s q_i[key_s] for each key.
Eigen::VectorXcd evaluate_components(const ComponentList& comps, const std::vector<TensorKey>& keys,
                                     Exec exec = Exec::parallel);

IncompleteSymmetricTensor from_components(const ComponentList& comps, int m, std::vector<TensorKey> keys,
                                          Exec exec = Exec::parallel);

/// M[row, col] = T at key row U col (U {0} when padding).
Eigen::MatrixXcd block_matrix(const IncompleteSymmetricTensor& t, const std::vector<IndexSubset>& rows,
                              const std::vector<IndexSubset>& cols, bool pad_with_zero_label);

/// Hilbert-Schmidt norm over the ordered tuples of the given keys:
/// sqrt(m! * sum |T[key]|^2).
double omega_norm(const IncompleteSymmetricTensor& t, const std::vector<TensorKey>& keys);
double omega_norm(const IncompleteSymmetricTensor& t);

/// Adds real Gaussian noise on the same key set, scaled so its omega_norm is
/// exactly epsilon.
IncompleteSymmetricTensor perturb(const IncompleteSymmetricTensor& t, double epsilon, std::uint64_t seed);

/// a - b; both must carry the same key set.
IncompleteSymmetricTensor subtract(const IncompleteSymmetricTensor& a, const IncompleteSymmetricTensor& b);

double factorial(int m);

}  // namespace momentmix
