#pragma once

#include <Eigen/Dense>

#include <vector>

#include "momentmix/generating.hpp"
#include "momentmix/gmm.hpp"
#include "momentmix/tensor_store.hpp"

/// Plain single-threaded versions of the parallel kernels, written
/// independently of them. Tests compare against these and the benchmark
/// times both.
namespace momentmix::reference {

Eigen::VectorXcd evaluate_components(const ComponentList& comps, const std::vector<TensorKey>& keys);

/// Generating matrix built from block_matrix calls, one column at a time.
Eigen::MatrixXcd generating_matrix(const IncompleteSymmetricTensor& t, int r, int p, int k);

/// Straight running sums over rows.
Eigen::VectorXd sample_moments(const Eigen::MatrixXd& data, const std::vector<TensorKey>& keys);

/// N x r responsibilities of one EM E-step, computed with densities
/// normalized per row (no log-sum-exp).
Eigen::MatrixXd responsibilities(const GmmModel& model, const Eigen::MatrixXd& data);

std::vector<int> classify(const GmmModel& model, const Eigen::MatrixXd& data, double var_floor);

}  // namespace momentmix::reference
