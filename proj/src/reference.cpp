#include "momentmix/reference.hpp"

#include <cmath>
#include <numbers>

#include "momentmix/errors.hpp"

namespace momentmix::reference {

Eigen::VectorXcd evaluate_components(const ComponentList& comps, const std::vector<TensorKey>& keys) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(keys.size()));
  for (Eigen::Index i = 0; i < comps.vectors.cols(); ++i) {
    for (std::size_t q = 0; q < keys.size(); ++q) {
      Complex term = comps.weight(i);
      for (int s : keys[q].slots()) term *= comps.vectors(s, i);
      out(static_cast<Eigen::Index>(q)) += term;
    }
  }
  return out;
}

Eigen::MatrixXcd generating_matrix(const IncompleteSymmetricTensor& t, int r, int p, int k) {
  const int n = t.dim() - 1;
  const int m = t.order();
  const auto b0 = basis_b0(k, p, r);
  const auto b1 = basis_b1(k, p, n);
  Eigen::MatrixXcd g(r, static_cast<Eigen::Index>(b1.size()));
  for (std::size_t c = 0; c < b1.size(); ++c) {
    const auto rows = support_o_alpha(b1[c], k, n, m, p);
    const Eigen::MatrixXcd a = block_matrix(t, rows, b0, true);
    const Eigen::MatrixXcd b = block_matrix(t, rows, {b1[c]}, false);
    g.col(static_cast<Eigen::Index>(c)) = a.completeOrthogonalDecomposition().solve(b).col(0);
  }
  return g;
}

Eigen::VectorXd sample_moments(const Eigen::MatrixXd& data, const std::vector<TensorKey>& keys) {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(keys.size()));
  for (Eigen::Index row = 0; row < data.rows(); ++row) {
    for (std::size_t q = 0; q < keys.size(); ++q) {
      double prod = 1.0;
      for (int s : keys[q].slots()) prod *= data(row, s);
      sums(static_cast<Eigen::Index>(q)) += prod;
    }
  }
  return sums / static_cast<double>(data.rows());
}

namespace {

double density(const GmmModel& model, const Eigen::RowVectorXd& y, int i, double var_floor) {
  double value = 1.0;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const double var = std::max(model.variances(j, i), var_floor);
    const double diff = y(j) - model.means(j, i);
    value *= std::exp(-0.5 * diff * diff / var) / std::sqrt(2.0 * std::numbers::pi * var);
  }
  return value;
}

}  // namespace

Eigen::MatrixXd responsibilities(const GmmModel& model, const Eigen::MatrixXd& data) {
  Eigen::MatrixXd out(data.rows(), model.rank());
  for (Eigen::Index row = 0; row < data.rows(); ++row) {
    for (int i = 0; i < model.rank(); ++i) out(row, i) = model.weights(i) * density(model, data.row(row), i, 0.0);
    out.row(row) /= out.row(row).sum();
  }
  return out;
}

std::vector<int> classify(const GmmModel& model, const Eigen::MatrixXd& data, double var_floor) {
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(data.rows()));
  for (Eigen::Index row = 0; row < data.rows(); ++row) {
    int best = 0;
    double best_value = -1.0;
    for (int i = 0; i < model.rank(); ++i) {
      const double value = model.weights(i) * density(model, data.row(row), i, var_floor);
      if (value > best_value) {
        best_value = value;
        best = i;
      }
    }
    labels.push_back(best);
  }
  return labels;
}

}  // namespace momentmix::reference
