#include "momentmix/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "momentmix/errors.hpp"

namespace momentmix {

namespace {

constexpr std::int64_t kSampleChunk = 8192;
constexpr std::int64_t kMomentChunk = 4096;
constexpr double kBetaFloor = 1e-12;

template <typename Fn>
auto with_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    rethrow_with_stage(e, stage);
  }
}

Eigen::VectorXd tree_sum(std::vector<Eigen::VectorXd> parts) {
  while (parts.size() > 1) {
    std::vector<Eigen::VectorXd> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(parts[i] + parts[i + 1]);
    if (parts.size() % 2 == 1) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return parts.front();
}

double product_over(const Eigen::MatrixXd& values, Eigen::Index col, std::span<const int> labels) {
  double prod = 1.0;
  for (int s : labels) prod *= values(s, col);
  return prod;
}

std::vector<std::pair<int, int>> multiplicities(std::span<const int> sorted) {
  std::vector<std::pair<int, int>> out;
  for (int s : sorted) {
    if (!out.empty() && out.back().first == s) {
      ++out.back().second;
    } else {
      out.emplace_back(s, 1);
    }
  }
  return out;
}

double log_density(const GmmModel& model, const Eigen::Ref<const Eigen::RowVectorXd>& y, int i, double var_floor) {
  constexpr double log_two_pi = 1.8378770664093453;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const double var = std::max(model.variances(j, i), var_floor);
    const double diff = y(j) - model.means(j, i);
    acc += log_two_pi + std::log(var) + diff * diff / var;
  }
  return -0.5 * acc;
}

/// Row-wise log(omega_i) + log N(y; component i); N x r.
Eigen::MatrixXd joint_log_density(const GmmModel& model, const Eigen::MatrixXd& data, double var_floor, Exec exec) {
  const auto n = static_cast<std::int64_t>(data.rows());
  const int r = model.rank();
  Eigen::MatrixXd out(n, r);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::int64_t row = 0; row < n; ++row) {
    for (int i = 0; i < r; ++i) {
      const double w = model.weights(i);
      out(row, i) = (w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity()) +
                    log_density(model, data.row(row), i, var_floor);
    }
  }
  return out;
}

double log_sum_exp(const Eigen::Ref<const Eigen::RowVectorXd>& v) {
  const double hi = v.maxCoeff();
  if (!std::isfinite(hi)) return hi;
  return hi + std::log((v.array() - hi).exp().sum());
}

}  // namespace

void GmmModel::validate() const {
  const Eigen::Index r = weights.size();
  if (r < 1) throw Error(ErrorCode::InvalidArgument, "model needs at least one component");
  if (means.cols() != r || variances.cols() != r || variances.rows() != means.rows()) {
    throw Error(ErrorCode::InvalidArgument, "model arrays have inconsistent shapes");
  }
  if ((weights.array() < 0.0).any() || std::abs(weights.sum() - 1.0) > 1e-8) {
    throw Error(ErrorCode::InvalidArgument, "weights must lie on the probability simplex");
  }
  if ((variances.array() < 0.0).any()) throw Error(ErrorCode::InvalidArgument, "variances must be nonnegative");
  if (!means.allFinite() || !variances.allFinite()) throw Error(ErrorCode::InvalidArgument, "model has non-finite entries");
}

GmmModel random_gmm(int d, int r, std::uint64_t seed) {
  if (d < 1 || r < 1) throw Error(ErrorCode::InvalidArgument, "random_gmm needs d >= 1 and r >= 1");
  Rng rng(seed, 0);
  GmmModel model;
  model.weights.resize(r);
  for (int i = 0; i < r; ++i) model.weights(i) = 1.0 - rng.uniform();  // (0, 1]
  model.weights /= model.weights.sum();
  model.means.resize(d, r);
  model.variances.resize(d, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < d; ++j) model.means(j, i) = rng.normal();
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < d; ++j) {
      const double z = rng.normal();
      model.variances(j, i) = z * z;
    }
  }
  return model;
}

SampleSet sample_gmm(const GmmModel& model, std::int64_t n, std::uint64_t seed, Exec exec) {
  model.validate();
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  const int d = model.dim();
  const int r = model.rank();
  Eigen::VectorXd cumulative(r);
  double acc = 0.0;
  int last_positive = 0;
  for (int i = 0; i < r; ++i) {
    acc += model.weights(i);
    cumulative(i) = acc;
    if (model.weights(i) > 0.0) last_positive = i;
  }
  const Eigen::MatrixXd sd = model.variances.cwiseSqrt();

  SampleSet out;
  out.seed = seed;
  out.data.resize(n, d);
  out.labels.assign(static_cast<std::size_t>(n), 0);
  const std::int64_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (std::int64_t c = 0; c < chunks; ++c) {
    Rng rng(seed, static_cast<std::uint64_t>(c) + 1);
    const std::int64_t end = std::min(n, (c + 1) * kSampleChunk);
    for (std::int64_t row = c * kSampleChunk; row < end; ++row) {
      const double u = rng.uniform() * acc;
      int comp = last_positive;
      for (int i = 0; i < r; ++i) {
        if (u < cumulative(i) && model.weights(i) > 0.0) {
          comp = i;
          break;
        }
      }
      out.labels[static_cast<std::size_t>(row)] = comp;
      for (int j = 0; j < d; ++j) out.data(row, j) = model.means(j, comp) + sd(j, comp) * rng.normal();
    }
  }
  return out;
}

MomentSet sample_moments(const Eigen::MatrixXd& data, int order, std::vector<TensorKey> keys, Exec exec) {
  const auto n = static_cast<std::int64_t>(data.rows());
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  const auto n_keys = static_cast<Eigen::Index>(keys.size());
  for (const auto& key : keys) {
    if (key.order() != order) throw Error(ErrorCode::InvalidArgument, "moment key has the wrong order");
    if (key.order() > 0 && (key[0] < 0 || key[key.order() - 1] >= data.cols())) {
      throw Error(ErrorCode::InvalidArgument, "moment key " + key_to_string(key.slots()) + " out of range");
    }
  }
  const std::int64_t chunks = (n + kMomentChunk - 1) / kMomentChunk;
  std::vector<Eigen::VectorXd> parts(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (std::int64_t c = 0; c < chunks; ++c) {
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(n_keys);
    const std::int64_t end = std::min(n, (c + 1) * kMomentChunk);
    for (std::int64_t row = c * kMomentChunk; row < end; ++row) {
      for (Eigen::Index q = 0; q < n_keys; ++q) {
        double prod = 1.0;
        for (int s : keys[static_cast<std::size_t>(q)].slots()) prod *= data(row, s);
        sums(q) += prod;
      }
    }
    parts[static_cast<std::size_t>(c)] = std::move(sums);
  }
  const Eigen::VectorXd total = tree_sum(std::move(parts)) / static_cast<double>(n);
  return MomentSet(static_cast<int>(data.cols()), order, std::move(keys),
                   std::vector<double>(total.data(), total.data() + total.size()));
}

double univariate_gaussian_moment(double mu, double var, int t) {
  if (t < 0) throw Error(ErrorCode::InvalidArgument, "moment order must be nonnegative");
  if (var < 0.0) throw Error(ErrorCode::InvalidArgument, "variance must be nonnegative");
  double prev = 1.0;  // E[z^0]
  if (t == 0) return prev;
  double cur = mu;  // E[z^1]
  for (int s = 2; s <= t; ++s) {
    const double next = mu * cur + (s - 1) * var * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

MomentSet exact_moments(const GmmModel& model, int order, std::vector<TensorKey> keys) {
  model.validate();
  std::vector<double> values;
  values.reserve(keys.size());
  for (const auto& key : keys) {
    const auto runs = multiplicities(key.slots());
    double sum = 0.0;
    for (int i = 0; i < model.rank(); ++i) {
      double prod = model.weights(i);
      for (const auto& [label, count] : runs) {
        prod *= univariate_gaussian_moment(model.means(label, i), model.variances(label, i), count);
      }
      sum += prod;
    }
    values.push_back(sum);
  }
  return MomentSet(model.dim(), order, std::move(keys), std::move(values));
}

std::vector<TensorKey> repeated_pair_keys(int d, int m) {
  if (m < 2 || m > d + 1) throw Error(ErrorCode::OrderExceedsDim, "no repeated-pair keys for this (d, m)");
  std::vector<TensorKey> keys;
  for (int j = 0; j < d; ++j) {
    for (auto rest : subsets_lex(0, d - 2, m - 2)) {
      for (int& s : rest)
        if (s >= j) ++s;  // skip label j
      rest.push_back(j);
      rest.push_back(j);
      std::sort(rest.begin(), rest.end());
      keys.emplace_back(std::move(rest));
    }
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::vector<TensorKey> learning_keys(int d, int m) {
  auto keys = omega_keys(d, m);
  auto pairs = repeated_pair_keys(d, m);
  keys.insert(keys.end(), std::make_move_iterator(pairs.begin()), std::make_move_iterator(pairs.end()));
  std::sort(keys.begin(), keys.end());
  return keys;
}

int lower_order(int d, int r) {
  if (r < 1) throw Error(ErrorCode::InvalidArgument, "rank must be positive");
  for (int t = 1; t <= d; ++t)
    if (binomial(d, t) >= static_cast<std::uint64_t>(r)) return t;
  throw Error(ErrorCode::RankTooLarge, "no order t with C(d,t) >= r");
}

Eigen::MatrixXd realify(const Eigen::MatrixXcd& qs, int m, std::vector<int>* chosen) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "realify needs m >= 1");
  Eigen::MatrixXd out(qs.rows(), qs.cols());
  if (chosen) chosen->assign(static_cast<std::size_t>(qs.cols()), 0);
  for (Eigen::Index i = 0; i < qs.cols(); ++i) {
    const double margin = 1e-12 * std::max(1.0, qs.col(i).norm());
    int best = 0;
    double best_norm = std::numeric_limits<double>::infinity();
    for (int s = 0; s < m; ++s) {
      const Complex eta = std::polar(1.0, 2.0 * std::numbers::pi * s / m);
      const double im = (eta * qs.col(i)).imag().norm();
      if (im < best_norm - margin) {
        best_norm = im;
        best = s;
      }
    }
    const Complex eta = std::polar(1.0, 2.0 * std::numbers::pi * best / m);
    out.col(i) = (eta * qs.col(i)).real();
    if (chosen) (*chosen)[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

WeightEstimate recover_weights(const Eigen::MatrixXd& qcheck, const MomentSet& mt, int m) {
  const int t = mt.order();
  if (t >= m) {
    throw Error(ErrorCode::OrderConflict, "lower order t=" + std::to_string(t) + " must be below m=" + std::to_string(m));
  }
  if (mt.dim() != qcheck.rows()) throw Error(ErrorCode::InvalidArgument, "moment dimension differs from vectors");
  const Eigen::Index r = qcheck.cols();
  const auto keys = omega_keys(mt.dim(), t);
  WeightEstimate out;
  out.qcheck = qcheck;
  Eigen::MatrixXd design(static_cast<Eigen::Index>(keys.size()), r);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(keys.size()));
  for (std::size_t q = 0; q < keys.size(); ++q) {
    const auto row = static_cast<Eigen::Index>(q);
    rhs(row) = mt.at(keys[q].slots());
    for (Eigen::Index i = 0; i < r; ++i) design(row, i) = product_over(out.qcheck, i, keys[q].slots());
  }
  if (m % 2 == 0 && t % 2 == 1) {
    const auto free_fit = lstsq(design.cast<Complex>(), rhs.cast<Complex>());
    for (Eigen::Index i = 0; i < r; ++i) {
      if (free_fit.solution(i, 0).real() < 0.0) {
        out.qcheck.col(i) *= -1.0;
        design.col(i) *= -1.0;
      }
    }
  }
  const auto fit = nnls(design, rhs);
  out.beta = fit.x;
  for (Eigen::Index i = 0; i < r; ++i) {
    if (out.beta(i) < kBetaFloor) {
      throw Error(ErrorCode::DegenerateWeight, "weight coefficient of component " + std::to_string(i) + " is " +
                                                   std::to_string(out.beta(i)));
    }
  }
  const double gap = static_cast<double>(m - t);
  out.omega = out.beta.array().pow(m / gap);
  out.mu.resize(out.qcheck.rows(), r);
  for (Eigen::Index i = 0; i < r; ++i) out.mu.col(i) = out.qcheck.col(i) / std::pow(out.beta(i), 1.0 / gap);
  return out;
}

namespace {

struct MomentTargets {
  std::vector<TensorKey> keys;
  Eigen::VectorXd values;
};

MomentTargets omega_targets(const MomentSet& moments) {
  MomentTargets out;
  out.keys = omega_keys(moments.dim(), moments.order());
  out.values.resize(static_cast<Eigen::Index>(out.keys.size()));
  for (std::size_t q = 0; q < out.keys.size(); ++q) {
    out.values(static_cast<Eigen::Index>(q)) = moments.at(out.keys[q].slots());
  }
  return out;
}

void subtract_model(const MomentTargets& target, const Eigen::VectorXd& omega, const Eigen::MatrixXd& mu,
                    Eigen::Ref<Eigen::VectorXd> out) {
  for (std::size_t q = 0; q < target.keys.size(); ++q) {
    double model = 0.0;
    for (Eigen::Index i = 0; i < omega.size(); ++i) model += omega(i) * product_over(mu, i, target.keys[q].slots());
    out(static_cast<Eigen::Index>(q)) = target.values(static_cast<Eigen::Index>(q)) - model;
  }
}

}  // namespace

SimplexReport refine_params(const Eigen::VectorXd& omega0, const Eigen::MatrixXd& mu0, const MomentSet& mm,
                            const MomentSet& mt, const RefineOptions& opts) {
  const MomentTargets high = omega_targets(mm);
  const MomentTargets low = omega_targets(mt);
  const auto n_high = static_cast<Eigen::Index>(high.keys.size());
  const auto n_low = static_cast<Eigen::Index>(low.keys.size());
  auto residual = [&](const Eigen::VectorXd& omega, const Eigen::MatrixXd& mu) {
    Eigen::VectorXd f(n_high + n_low);
    subtract_model(high, omega, mu, f.head(n_high));
    subtract_model(low, omega, mu, f.tail(n_low));
    return f;
  };
  return simplex_nlls(residual, omega0, mu0, opts);
}

Eigen::MatrixXd recover_covariances(const MomentSet& mm, const Eigen::MatrixXd& qcheck, const Eigen::VectorXd& omega,
                                    const Eigen::MatrixXd& mu) {
  const int d = mm.dim();
  const int m = mm.order();
  const Eigen::Index r = omega.size();
  if (m < 3) throw Error(ErrorCode::InvalidArgument, "covariance recovery needs m >= 3");
  if (qcheck.rows() != d || mu.rows() != d || qcheck.cols() != r || mu.cols() != r) {
    throw Error(ErrorCode::InvalidArgument, "covariance inputs have inconsistent shapes");
  }
  const auto others = subsets_lex(0, d - 2, m - 2);
  Eigen::MatrixXd variances(d, r);
  for (int j = 0; j < d; ++j) {
    Eigen::MatrixXd design(static_cast<Eigen::Index>(others.size()), r);
    Eigen::VectorXd response(static_cast<Eigen::Index>(others.size()));
    for (std::size_t q = 0; q < others.size(); ++q) {
      IndexSubset rest = others[q];
      for (int& s : rest)
        if (s >= j) ++s;
      IndexSubset key = rest;
      key.push_back(j);
      key.push_back(j);
      std::sort(key.begin(), key.end());
      const auto row = static_cast<Eigen::Index>(q);
      double value = mm.at(key);
      for (Eigen::Index i = 0; i < r; ++i) {
        value -= qcheck(j, i) * qcheck(j, i) * product_over(qcheck, i, rest);
        design(row, i) = omega(i) * product_over(mu, i, rest);
      }
      response(row) = value;
    }
    if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(design).rank() < r) {
      throw Error(ErrorCode::CovDesignDegenerate, "covariance design for coordinate " + std::to_string(j) +
                                                      " is rank deficient");
    }
    variances.row(j) = nnls(design, response).x.transpose();
  }
  return variances;
}

LearnReport learn_from_moments(const MomentSet& mm, const MomentSet& mt, int r, const LearnOptions& opts, Exec exec) {
  const int d = mm.dim();
  const int m = mm.order();
  if (mt.dim() != d) throw Error(ErrorCode::InvalidArgument, "moment sets have different dimensions");
  if (mt.order() >= m) {
    throw Error(ErrorCode::OrderConflict, "lower order t=" + std::to_string(mt.order()) + " must be below m=" +
                                              std::to_string(m));
  }
  LearnReport out;
  out.t = mt.order();

  const auto keys = omega_keys(d, m);
  std::vector<Complex> values;
  values.reserve(keys.size());
  for (const auto& key : keys) values.emplace_back(mm.at(key.slots()));
  const IncompleteSymmetricTensor f_hat(d, m, keys, std::move(values));

  DecompositionParams params = with_stage("parameter selection", [&] { return choose_params(d - 1, m, r); });
  params.seed = opts.seed;
  params.starts = opts.starts;
  params.refine_opts = opts.tensor_refine;
  params.screen = std::max(opts.candidates, 1);
  auto decompositions =
      with_stage("tensor approximation", [&] { return approximate_candidates(f_hat, params, exec); });

  // Every candidate decomposition goes through weights and refinement; the
  // one with the lowest two-term moment cost is kept.
  std::optional<Error> first_failure;
  SimplexReport refined;
  bool have = false;
  for (std::size_t c = 0; c < decompositions.size(); ++c) {
    try {
      const Eigen::MatrixXd qcheck = realify(decompositions[c].components.vectors, m);
      auto initial = with_stage("weights", [&] { return recover_weights(qcheck, mt, m); });
      const Eigen::VectorXd omega_hat = initial.omega / initial.omega.sum();
      auto report = with_stage("parameter refinement", [&] {
        return refine_params(omega_hat, initial.mu, mm, mt, opts.param_refine);
      });
      if (!have || report.final_cost < refined.final_cost) {
        refined = std::move(report);
        out.initial = std::move(initial);
        out.decomposition = decompositions[c];
        out.candidate = static_cast<int>(c);
        have = true;
      }
    } catch (const Error& e) {
      if (!first_failure) first_failure = e;
    }
  }
  if (!have) throw *first_failure;
  out.refine_initial_cost = refined.initial_cost;
  out.refine_final_cost = refined.final_cost;

  out.model.weights = refined.omega;
  out.model.means = refined.mu;
  out.model.variances = with_stage("covariances", [&] {
    return recover_covariances(mm, out.initial.qcheck, refined.omega, refined.mu);
  });
  return out;
}

LearnReport learn(const SampleSet& samples, int r, int m, const LearnOptions& opts, Exec exec) {
  const int d = static_cast<int>(samples.data.cols());
  const int t = with_stage("parameter selection", [&] { return lower_order(d, r); });
  if (t >= m) {
    throw Error(ErrorCode::OrderConflict, "lower order t=" + std::to_string(t) + " must be below m=" + std::to_string(m));
  }
  const MomentSet mm = with_stage("moments", [&] { return sample_moments(samples.data, m, learning_keys(d, m), exec); });
  const MomentSet mt = sample_moments(samples.data, t, omega_keys(d, t), exec);
  return learn_from_moments(mm, mt, r, opts, exec);
}

double average_log_likelihood(const GmmModel& model, const Eigen::MatrixXd& data, double var_floor, Exec exec) {
  const Eigen::MatrixXd joint = joint_log_density(model, data, var_floor, exec);
  double total = 0.0;
  for (Eigen::Index row = 0; row < joint.rows(); ++row) total += log_sum_exp(joint.row(row));
  return total / static_cast<double>(data.rows());
}

EmReport em_baseline(const Eigen::MatrixXd& data, int r, const EmOptions& opts, Exec exec) {
  const Eigen::Index n = data.rows();
  if (r < 1 || r > n) throw Error(ErrorCode::InvalidArgument, "EM needs 1 <= r <= N");

  Rng rng(opts.seed, 0);
  Eigen::MatrixXd resp(n, r);
  for (Eigen::Index row = 0; row < n; ++row) {
    for (int i = 0; i < r; ++i) resp(row, i) = -std::log(1.0 - rng.uniform());  // Exp(1), Dirichlet(1) after scaling
    resp.row(row) /= resp.row(row).sum();
  }
  const Eigen::MatrixXd squares = data.array().square();

  auto m_step = [&](const Eigen::MatrixXd& w) {
    GmmModel model;
    const Eigen::RowVectorXd nk = w.colwise().sum().cwiseMax(std::numeric_limits<double>::min());
    model.weights = (nk / nk.sum()).transpose();
    model.means = (data.transpose() * w).array().rowwise() / nk.array();
    const Eigen::MatrixXd second = (squares.transpose() * w).array().rowwise() / nk.array();
    model.variances = (second.array() - model.means.array().square()).cwiseMax(0.0) + opts.reg_value;
    return model;
  };

  EmReport out;
  GmmModel model = m_step(resp);
  double best = -std::numeric_limits<double>::infinity();
  for (int it = 0; it <= opts.max_iters; ++it) {
    const Eigen::MatrixXd joint = joint_log_density(model, data, 0.0, exec);
    double total = 0.0;
    for (Eigen::Index row = 0; row < n; ++row) {
      const double lse = log_sum_exp(joint.row(row));
      total += lse;
      resp.row(row) = (joint.row(row).array() - lse).exp();
    }
    const double avg = total / static_cast<double>(n);
    out.log_likelihood.push_back(avg);
    if (avg > best) {
      best = avg;
      out.model = model;
    }
    if (it == opts.max_iters) break;
    model = m_step(resp);
    out.iterations = it + 1;
  }
  return out;
}

std::vector<int> classify(const GmmModel& model, const Eigen::MatrixXd& data, double var_floor, Exec exec) {
  if (data.cols() != model.dim()) throw Error(ErrorCode::InvalidArgument, "sample dimension differs from model");
  const Eigen::MatrixXd joint = joint_log_density(model, data, var_floor, exec);
  std::vector<int> labels(static_cast<std::size_t>(data.rows()));
  for (Eigen::Index row = 0; row < joint.rows(); ++row) {
    Eigen::Index best = 0;
    joint.row(row).maxCoeff(&best);
    labels[static_cast<std::size_t>(row)] = static_cast<int>(best);
  }
  return labels;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth, int r) {
  if (predicted.size() != truth.size()) throw Error(ErrorCode::InvalidArgument, "label vectors differ in length");
  if (predicted.empty()) return 1.0;
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(r, r);
  for (std::size_t s = 0; s < predicted.size(); ++s) {
    if (predicted[s] < 0 || predicted[s] >= r || truth[s] < 0 || truth[s] >= r) {
      throw Error(ErrorCode::InvalidArgument, "label out of range");
    }
    counts(predicted[s], truth[s]) += 1.0;
  }
  const auto assignment = optimal_assignment(-counts);
  double agree = 0.0;
  for (int i = 0; i < r; ++i) agree += counts(i, assignment[static_cast<std::size_t>(i)]);
  return agree / static_cast<double>(predicted.size());
}

double parameter_error(const GmmModel& truth, const GmmModel& estimate) {
  const int r = truth.rank();
  if (estimate.rank() != r || estimate.dim() != truth.dim()) {
    throw Error(ErrorCode::InvalidArgument, "models differ in shape");
  }
  Eigen::MatrixXd cost(r, r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      cost(i, j) = std::max({std::abs(truth.weights(i) - estimate.weights(j)),
                             (truth.means.col(i) - estimate.means.col(j)).cwiseAbs().maxCoeff(),
                             (truth.variances.col(i) - estimate.variances.col(j)).cwiseAbs().maxCoeff()});
    }
  }
  const auto assignment = optimal_assignment(cost);
  double worst = 0.0;
  for (int i = 0; i < r; ++i) worst = std::max(worst, cost(i, assignment[static_cast<std::size_t>(i)]));
  return worst;
}

}  // namespace momentmix
