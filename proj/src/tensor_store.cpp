#include "momentmix/tensor_store.hpp"

#include <cmath>

#include "momentmix/numerics.hpp"

namespace momentmix {

std::string key_to_string(std::span<const int> slots) {
  std::string out = "{";
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(slots[i]);
  }
  return out + "}";
}

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

std::vector<TensorKey> omega_keys(int d, int m) {
  if (m > d) {
    throw Error(ErrorCode::OrderExceedsDim,
                "order " + std::to_string(m) + " exceeds dimension " + std::to_string(d));
  }
  std::vector<TensorKey> keys;
  auto subsets = subsets_lex(0, d - 1, m);
  keys.reserve(subsets.size());
  for (auto& s : subsets) keys.emplace_back(std::move(s));
  return keys;
}

Eigen::VectorXcd evaluate_components(const ComponentList& comps, const std::vector<TensorKey>& keys, Exec exec) {
  const auto n_keys = static_cast<std::int64_t>(keys.size());
  const Eigen::Index r = comps.vectors.cols();
  Eigen::VectorXcd out(n_keys);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::int64_t idx = 0; idx < n_keys; ++idx) {
    const auto slots = keys[static_cast<std::size_t>(idx)].slots();
    Complex sum = 0.0;
    for (Eigen::Index i = 0; i < r; ++i) {
      Complex prod = comps.weight(i);
      for (int s : slots) prod *= comps.vectors(s, i);
      sum += prod;
    }
    out(idx) = sum;
  }
  return out;
}

IncompleteSymmetricTensor from_components(const ComponentList& comps, int m, std::vector<TensorKey> keys,
                                          Exec exec) {
  for (const auto& key : keys) {
    if (key.order() != m) throw Error(ErrorCode::InvalidArgument, "key order differs from m");
  }
  Eigen::VectorXcd vals = evaluate_components(comps, keys, exec);
  return IncompleteSymmetricTensor(comps.dim(), m, std::move(keys),
                                   std::vector<Complex>(vals.data(), vals.data() + vals.size()));
}

Eigen::MatrixXcd block_matrix(const IncompleteSymmetricTensor& t, const std::vector<IndexSubset>& rows,
                              const std::vector<IndexSubset>& cols, bool pad_with_zero_label) {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  const IndexSubset zero{0};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      bool ok = true;
      IndexSubset key = merge_disjoint(rows[i], cols[j], ok);
      if (!ok) {
        throw Error(ErrorCode::KeyCollision,
                    "row " + key_to_string(rows[i]) + " and column " + key_to_string(cols[j]) + " overlap");
      }
      if (pad_with_zero_label) {
        key = merge_disjoint(zero, key, ok);
        if (!ok) throw Error(ErrorCode::KeyCollision, "label 0 already used in " + key_to_string(key));
      }
      if (static_cast<int>(key.size()) != t.order()) {
        throw Error(ErrorCode::InvalidArgument, "block key " + key_to_string(key) + " has wrong order");
      }
      auto v = t.find_sorted(key);
      if (!v) throw Error(ErrorCode::MissingEntry, "no entry at key " + key_to_string(key));
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = *v;
    }
  }
  return out;
}

double omega_norm(const IncompleteSymmetricTensor& t, const std::vector<TensorKey>& keys) {
  double sum = 0.0;
  for (const auto& key : keys) sum += std::norm(t.at(key.slots()));
  return std::sqrt(factorial(t.order()) * sum);
}

double omega_norm(const IncompleteSymmetricTensor& t) {
  double sum = 0.0;
  for (const auto& v : t.values()) sum += std::norm(v);
  return std::sqrt(factorial(t.order()) * sum);
}

IncompleteSymmetricTensor perturb(const IncompleteSymmetricTensor& t, double epsilon, std::uint64_t seed) {
  if (!(epsilon >= 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be nonnegative");
  if (epsilon == 0.0 || t.size() == 0) return t;
  const auto noise = gaussian_vector(seed, t.size());
  double sq = 0.0;
  for (double e : noise) sq += e * e;
  const double scale = epsilon / std::sqrt(factorial(t.order()) * sq);
  std::vector<Complex> vals(t.values());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] += scale * noise[i];
  return IncompleteSymmetricTensor(t.dim(), t.order(), t.keys(), std::move(vals));
}

IncompleteSymmetricTensor subtract(const IncompleteSymmetricTensor& a, const IncompleteSymmetricTensor& b) {
  if (a.dim() != b.dim() || a.order() != b.order() || a.keys() != b.keys()) {
    throw Error(ErrorCode::InvalidArgument, "subtract requires identical key sets");
  }
  std::vector<Complex> vals(a.values());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] -= b.values()[i];
  return IncompleteSymmetricTensor(a.dim(), a.order(), a.keys(), std::move(vals));
}

}  // namespace momentmix
