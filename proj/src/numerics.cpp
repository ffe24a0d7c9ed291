#include "momentmix/numerics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "momentmix/errors.hpp"

namespace momentmix {

// ---------------------------------------------------------------------------
// Random numbers
// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(derive_seed(seed, stream)) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

std::vector<double> gaussian_vector(std::uint64_t seed, std::size_t len) {
  Rng rng(seed);
  std::vector<double> out(len);
  for (auto& x : out) x = rng.normal();
  return out;
}

// ---------------------------------------------------------------------------
// Linear algebra
// ---------------------------------------------------------------------------

LstsqReport lstsq(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.cols() < 1) throw Error(ErrorCode::InvalidArgument, "lstsq needs at least one column");
  if (a.rows() != b.rows()) throw Error(ErrorCode::InvalidArgument, "lstsq row mismatch");

  LstsqReport report;
  if (a.rows() == 0) {
    report.solution = Eigen::MatrixXcd::Zero(a.cols(), b.cols());
    report.condition_estimate = std::numeric_limits<double>::infinity();
    report.ill_conditioned = true;
    return report;
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(a);
  report.solution = cod.solve(b);
  report.residual_norm = (a * report.solution - b).norm();
  report.rank = cod.rank();

  const Eigen::Index diag = std::min(a.rows(), a.cols());
  if (report.rank < diag) {
    report.condition_estimate = std::numeric_limits<double>::infinity();
  } else {
    const auto& t = cod.matrixQTZ();
    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < diag; ++i) {
      hi = std::max(hi, std::abs(t(i, i)));
      lo = std::min(lo, std::abs(t(i, i)));
    }
    report.condition_estimate = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  }
  report.ill_conditioned = report.rank < a.cols() || report.condition_estimate > kIllConditionedThreshold;
  return report;
}

NnlsReport nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iterations) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (b.size() != m) throw Error(ErrorCode::InvalidArgument, "nnls row mismatch");
  if (max_iterations <= 0) max_iterations = static_cast<int>(std::max<Eigen::Index>(3 * n, 30)) * 3;

  NnlsReport report;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     a.cwiseAbs().colwise().sum().maxCoeff() * static_cast<double>(std::max(m, n));

  auto solve_passive = [&](Eigen::VectorXd& s) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    Eigen::MatrixXd ap(m, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) ap.col(static_cast<Eigen::Index>(c)) = a.col(idx[c]);
    Eigen::VectorXd sp = ap.completeOrthogonalDecomposition().solve(b);
    s.setZero(n);
    for (std::size_t c = 0; c < idx.size(); ++c) s(idx[c]) = sp(static_cast<Eigen::Index>(c));
  };

  // Variables whose entry was rejected by rounding stay out until x moves.
  std::vector<bool> blocked(static_cast<std::size_t>(n), false);
  Eigen::VectorXd s(n);
  int iterations = 0;
  while (true) {
    const Eigen::VectorXd w = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (!passive[uj] && !blocked[uj] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    bool first = true;
    while (true) {
      if (++iterations > max_iterations) {
        throw Error(ErrorCode::MaxIterations, "nnls active-set cycling guard tripped after " +
                                                  std::to_string(max_iterations) + " iterations");
      }
      solve_passive(s);
      if (first && s(best) <= 0.0) {
        passive[static_cast<std::size_t>(best)] = false;
        blocked[static_cast<std::size_t>(best)] = true;
        break;
      }
      if (first) std::fill(blocked.begin(), blocked.end(), false);
      first = false;
      bool feasible = true;
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && s(j) <= 0.0) {
          feasible = false;
          alpha = std::min(alpha, x(j) / (x(j) - s(j)));
        }
      }
      if (feasible) {
        x = s;
        break;
      }
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  report.x = x.cwiseMax(0.0);
  report.residual_norm = (a * report.x - b).norm();
  report.iterations = iterations;
  return report;
}

EigenPairs eig(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidArgument, "eig needs a square matrix");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigenFailure, "complex Schur iteration did not converge");
  }
  const Eigen::Index r = m.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(r));
  std::iota(order.begin(), order.end(), 0);
  const auto& values = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (values(a).real() != values(b).real()) return values(a).real() < values(b).real();
    return values(a).imag() < values(b).imag();
  });
  EigenPairs out;
  out.values.resize(r);
  out.vectors.resize(r, r);
  for (Eigen::Index c = 0; c < r; ++c) {
    const Eigen::Index src = order[static_cast<std::size_t>(c)];
    out.values(c) = values(src);
    out.vectors.col(c) = solver.eigenvectors().col(src).normalized();
  }
  return out;
}

std::vector<int> optimal_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw Error(ErrorCode::InvalidArgument, "assignment needs a square cost matrix");
  const double inf = std::numeric_limits<double>::infinity();
  // Potentials formulation, 1-based with a virtual column 0.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] != 0) assignment[static_cast<std::size_t>(p[j] - 1)] = j - 1;
  return assignment;
}

// ---------------------------------------------------------------------------
// Nonlinear least squares
// ---------------------------------------------------------------------------

Eigen::MatrixXd finite_difference_jacobian(const ResidualFn& residual, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& fx) {
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  Eigen::MatrixXd jac(fx.size(), x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = root_eps * std::max(std::abs(x(j)), 1.0);
    probe(j) = x(j) + h;
    const double step = probe(j) - x(j);  // exactly representable step
    jac.col(j) = (residual(probe) - fx) / step;
    probe(j) = x(j);
  }
  return jac;
}

RefineReport nlls_refine(const ResidualFn& residual, const Eigen::VectorXd& x0, const RefineOptions& opts,
                         const JacobianFn& jacobian) {
  RefineReport report;
  report.x = x0;
  Eigen::VectorXd f = residual(x0);
  double cost = f.squaredNorm();
  report.initial_cost = cost;
  report.final_cost = cost;
  if (!std::isfinite(cost)) return report;

  double damping = -1.0;
  double growth = 2.0;
  Eigen::VectorXd x = x0;
  for (int it = 0; it < opts.max_iters; ++it) {
    const Eigen::MatrixXd jac = jacobian ? jacobian(x) : finite_difference_jacobian(residual, x, f);
    const Eigen::VectorXd g = jac.transpose() * f;
    if (2.0 * g.norm() <= opts.grad_tol) {
      report.converged = true;
      break;
    }
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(x.size(), x.size());
    h.selfadjointView<Eigen::Lower>().rankUpdate(jac.transpose());
    h = h.selfadjointView<Eigen::Lower>();
    const double max_diag = std::max(h.diagonal().maxCoeff(), std::numeric_limits<double>::min());
    const Eigen::VectorXd scale = h.diagonal().cwiseMax(1e-12 * max_diag);
    if (damping < 0.0) damping = 1e-3;

    bool accepted = false;
    bool stalled = false;
    while (!accepted) {
      Eigen::MatrixXd lhs = h;
      lhs.diagonal() += damping * scale;
      const Eigen::VectorXd step = lhs.ldlt().solve(-g);
      if (!step.allFinite() || step.norm() <= opts.step_tol * (x.norm() + opts.step_tol)) {
        stalled = true;
        break;
      }
      const Eigen::VectorXd trial = x + step;
      const Eigen::VectorXd f_trial = residual(trial);
      const double cost_trial = f_trial.squaredNorm();
      if (std::isfinite(cost_trial) && cost_trial < cost) {
        const double predicted = -g.dot(step) + damping * step.dot(scale.cwiseProduct(step));
        const double rho = predicted > 0.0 ? (cost - cost_trial) / predicted : 0.5;
        damping *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
        damping = std::max(damping, 1e-15);
        growth = 2.0;
        x = trial;
        f = f_trial;
        cost = cost_trial;
        accepted = true;
      } else {
        damping *= growth;
        growth *= 2.0;
        if (damping > 1e20) {
          stalled = true;
          break;
        }
      }
    }
    report.iterations = it + 1;
    if (stalled) break;
  }
  report.x = x;
  report.final_cost = cost;
  assert(report.final_cost <= report.initial_cost);
  return report;
}

SimplexReport simplex_nlls(const MixtureResidualFn& residual, const Eigen::VectorXd& omega0,
                           const Eigen::MatrixXd& mu0, const RefineOptions& opts) {
  const Eigen::Index r = omega0.size();
  const Eigen::Index d = mu0.rows();
  if (mu0.cols() != r) throw Error(ErrorCode::InvalidArgument, "simplex_nlls: means must be d x r");
  if ((omega0.array() < 0.0).any() || std::abs(omega0.sum() - 1.0) > 1e-8) {
    throw Error(ErrorCode::InvalidArgument, "simplex_nlls: start weights must lie on the simplex");
  }

  auto unpack = [r, d](const Eigen::VectorXd& params, Eigen::VectorXd& omega, Eigen::MatrixXd& mu) {
    omega = params.head(r).array().square();
    const double total = omega.sum();
    if (total > 0.0) omega /= total;
    mu = Eigen::Map<const Eigen::MatrixXd>(params.data() + r, d, r);
  };
  auto wrapped = [&](const Eigen::VectorXd& params) {
    Eigen::VectorXd omega;
    Eigen::MatrixXd mu;
    unpack(params, omega, mu);
    return residual(omega, mu);
  };

  Eigen::VectorXd x0(r + d * r);
  x0.head(r) = omega0.cwiseSqrt();
  x0.tail(d * r) = Eigen::Map<const Eigen::VectorXd>(mu0.data(), d * r);
  const RefineReport refined = nlls_refine(wrapped, x0, opts);

  SimplexReport out;
  unpack(refined.x, out.omega, out.mu);
  if (r == 1) out.omega.setOnes();
  out.omega /= out.omega.sum();
  out.initial_cost = refined.initial_cost;
  out.final_cost = refined.final_cost;
  out.iterations = refined.iterations;
  return out;
}

}  // namespace momentmix
