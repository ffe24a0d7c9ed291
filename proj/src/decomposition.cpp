#include "momentmix/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "momentmix/errors.hpp"

namespace momentmix {

int rank_guarantee_threshold(int m) {
  const int quarter = (m * m + 3) / 4;  // ceil(m^2 / 4)
  return std::max(2 * m - 1, quarter - 1);
}

namespace {

void check_order_dim(int n, int m) {
  if (m < 3) throw Error(ErrorCode::InvalidArgument, "order m must be at least 3");
  if (m > n + 1) {
    throw Error(ErrorCode::OrderExceedsDim,
                "order " + std::to_string(m) + " exceeds dimension " + std::to_string(n + 1));
  }
  if (n < m) throw Error(ErrorCode::InvalidArgument, "need d > m (d=" + std::to_string(n + 1) + ")");
}

std::uint64_t feasible_rank(int n, int m, int p, int k) {
  return std::min(binomial(k, p), binomial(n - k - 1, m - p - 1));
}

}  // namespace

RankBound max_rank(int n, int m) {
  check_order_dim(n, m);
  RankBound out;
  out.p_star = (m - 1) / 2;
  const int p = out.p_star;
  out.k_star = p;
  for (int k = p; k <= n - m + p; ++k) {
    if (binomial(k, p) <= binomial(n - k - 1, m - p - 1)) out.k_star = k;
  }
  const auto lhs = binomial(out.k_star, p);
  const auto rhs = n - 2 - out.k_star >= 0 ? binomial(n - 2 - out.k_star, m - 1 - p) : 0;
  out.r_max = static_cast<int>(std::max(lhs, rhs));
  out.guaranteed = n >= rank_guarantee_threshold(m);
  return out;
}

std::uint64_t brute_force_max_rank(int n, int m) {
  check_order_dim(n, m);
  std::uint64_t best = 0;
  for (int p = 1; p <= m - 2; ++p) {
    for (int k = p; k <= n - m + p; ++k) best = std::max(best, feasible_rank(n, m, p, k));
  }
  return best;
}

void validate_params(int n, int m, const DecompositionParams& params) {
  GeneratingShape{n, m, params.p, params.k, params.r}.validate();
  if (params.k < params.p + 1) {
    throw Error(ErrorCode::ShapeCondition, "need k > p so every head coordinate has equations (p=" +
                                               std::to_string(params.p) + ", k=" + std::to_string(params.k) + ")");
  }
}

DecompositionParams choose_params(int n, int m, int r) {
  check_order_dim(n, m);
  if (r < 1) throw Error(ErrorCode::InvalidArgument, "rank must be positive");
  const int p_star = (m - 1) / 2;
  std::vector<int> order{p_star};
  for (int p = 1; p <= m - 2; ++p)
    if (p != p_star) order.push_back(p);
  const auto want = static_cast<std::uint64_t>(r);
  for (int p : order) {
    for (int k = p + 1; k <= n - m + p; ++k) {
      if (feasible_rank(n, m, p, k) >= want) {
        DecompositionParams params;
        params.r = r;
        params.p = p;
        params.k = k;
        return params;
      }
    }
  }
  // max_rank also counts k = p, which decompose cannot use; report the bound
  // that actually applies.
  std::uint64_t usable = 0;
  for (int p = 1; p <= m - 2; ++p)
    for (int k = p + 1; k <= n - m + p; ++k) usable = std::max(usable, feasible_rank(n, m, p, k));
  throw Error(ErrorCode::RankTooLarge, "rank " + std::to_string(r) + " exceeds the largest computable rank " +
                                           std::to_string(usable) + " for d=" + std::to_string(n + 1) +
                                           ", m=" + std::to_string(m));
}

namespace {

Complex product_over(const Eigen::MatrixXcd& values, Eigen::Index col, std::span<const int> labels, int shift) {
  Complex prod = 1.0;
  for (int s : labels) prod *= values(s - shift, col);
  return prod;
}

/// W(gamma, i) = prod_{s in gamma} w_i[s - k - 1].
Eigen::MatrixXcd tail_design(const std::vector<IndexSubset>& j2, const Eigen::MatrixXcd& tails, int k) {
  Eigen::MatrixXcd w(static_cast<Eigen::Index>(j2.size()), tails.cols());
  for (std::size_t g = 0; g < j2.size(); ++g) {
    for (Eigen::Index i = 0; i < tails.cols(); ++i) {
      w(static_cast<Eigen::Index>(g), i) = product_over(tails, i, j2[g], k + 1);
    }
  }
  return w;
}

template <typename Fn>
auto with_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    rethrow_with_stage(e, stage);
  }
}

// lstsq on a column-equilibrated design. Component columns can differ by many
// orders of magnitude when some q_i[0] is small; unscaled, the rank test
// would read that spread as degeneracy.
LstsqReport scaled_lstsq(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::VectorXd scale = a.colwise().norm().transpose();
  for (Eigen::Index i = 0; i < scale.size(); ++i)
    if (scale(i) == 0.0) scale(i) = 1.0;
  auto sol = lstsq(a * scale.cwiseInverse().asDiagonal(), b);
  sol.solution = scale.cwiseInverse().asDiagonal() * sol.solution;
  return sol;
}

}  // namespace

TailProducts solve_tail_products(const IncompleteSymmetricTensor& t, const Eigen::MatrixXcd& tails,
                                 const DecompositionParams& params) {
  const int n = t.dim() - 1;
  const int m = t.order();
  const auto j1 = subsets_lex(1, params.k, params.p);
  const auto j2 = subsets_lex(params.k + 1, n, m - params.p - 1);
  const Eigen::MatrixXcd block = block_matrix(t, j1, j2, true);
  const Eigen::MatrixXcd w = tail_design(j2, tails, params.k);
  const auto sol = scaled_lstsq(w, block.transpose());
  if (sol.rank < tails.cols()) {
    throw Error(ErrorCode::TailsDegenerate, "tail design has rank " + std::to_string(sol.rank) + " < r = " +
                                                std::to_string(tails.cols()));
  }
  TailProducts out;
  out.gammas = sol.solution.transpose();
  out.residual = sol.residual_norm;
  return out;
}

Heads solve_heads(const IncompleteSymmetricTensor& t, const Eigen::MatrixXcd& tails, const Eigen::MatrixXcd& gammas,
                  const DecompositionParams& params, Exec exec) {
  const int n = t.dim() - 1;
  const int m = t.order();
  const int k = params.k;
  const Eigen::Index r = tails.cols();
  const auto j1 = subsets_lex(1, k, params.p);
  const auto j2 = subsets_lex(k + 1, n, m - params.p - 1);
  const Eigen::MatrixXcd w = tail_design(j2, tails, k);

  Heads out;
  out.heads.resize(k, r);
  std::vector<double> residuals(static_cast<std::size_t>(k), 0.0);
  std::vector<std::string> failure(static_cast<std::size_t>(k));
  std::vector<ErrorCode> failure_code(static_cast<std::size_t>(k), ErrorCode::HeadsDegenerate);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (int j = 1; j <= k; ++j) {
    const auto uj = static_cast<std::size_t>(j - 1);
    try {
      std::vector<std::size_t> rows_beta;
      for (std::size_t b = 0; b < j1.size(); ++b)
        if (!std::binary_search(j1[b].begin(), j1[b].end(), j)) rows_beta.push_back(b);
      const auto n_rows = static_cast<Eigen::Index>(rows_beta.size() * j2.size());
      Eigen::MatrixXcd design(n_rows, r);
      Eigen::VectorXcd rhs(n_rows);
      IndexSubset key;
      Eigen::Index row = 0;
      for (std::size_t b : rows_beta) {
        IndexSubset head = j1[b];
        head.insert(std::upper_bound(head.begin(), head.end(), j), j);
        for (std::size_t g = 0; g < j2.size(); ++g, ++row) {
          key = head;
          key.insert(key.end(), j2[g].begin(), j2[g].end());
          auto v = t.find_sorted(key);
          if (!v) throw Error(ErrorCode::MissingEntry, "no entry at key " + key_to_string(key));
          rhs(row) = *v;
          for (Eigen::Index i = 0; i < r; ++i) {
            design(row, i) = gammas(static_cast<Eigen::Index>(b), i) * w(static_cast<Eigen::Index>(g), i);
          }
        }
      }
      const auto sol = scaled_lstsq(design, rhs);
      if (sol.rank < r) {
        throw Error(ErrorCode::HeadsDegenerate, "design for coordinate " + std::to_string(j) + " has rank " +
                                                    std::to_string(sol.rank) + " < r");
      }
      out.heads.row(j - 1) = sol.solution.col(0).transpose();
      residuals[uj] = sol.residual_norm;
    } catch (const Error& e) {
      failure[uj] = e.what();
      failure_code[uj] = e.code();
    }
  }
  for (std::size_t j = 0; j < failure.size(); ++j) {
    if (!failure[j].empty()) throw Error(failure_code[j], failure[j]);
  }
  out.max_residual = residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
  return out;
}

namespace {

Eigen::MatrixXcd homogenized(const Eigen::MatrixXcd& heads, const Eigen::MatrixXcd& tails) {
  const Eigen::Index r = heads.cols();
  Eigen::MatrixXcd u(1 + heads.rows() + tails.rows(), r);
  u.row(0).setOnes();
  u.middleRows(1, heads.rows()) = heads;
  u.bottomRows(tails.rows()) = tails;
  return u;
}

}  // namespace

Scales solve_scales(const IncompleteSymmetricTensor& t, const Eigen::MatrixXcd& heads, const Eigen::MatrixXcd& tails) {
  const Eigen::MatrixXcd u = homogenized(heads, tails);
  if (u.rows() != t.dim()) throw Error(ErrorCode::InvalidArgument, "head/tail sizes do not add up to d - 1");
  const auto keys = omega_keys(t.dim(), t.order());
  const Eigen::Index r = u.cols();
  Eigen::MatrixXcd design(static_cast<Eigen::Index>(keys.size()), r);
  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(keys.size()));
  for (std::size_t q = 0; q < keys.size(); ++q) {
    const auto row = static_cast<Eigen::Index>(q);
    rhs(row) = t.at(keys[q].slots());
    for (Eigen::Index i = 0; i < r; ++i) design(row, i) = product_over(u, i, keys[q].slots(), 0);
  }
  const auto sol = scaled_lstsq(design, rhs);
  if (sol.rank < r) {
    throw Error(ErrorCode::ScalesDegenerate, "scale design has rank " + std::to_string(sol.rank) + " < r");
  }
  return Scales{sol.solution.col(0), sol.residual_norm};
}

double decomposition_error(const IncompleteSymmetricTensor& t, const ComponentList& comps) {
  const auto keys = omega_keys(t.dim(), t.order());
  const Eigen::VectorXcd model = evaluate_components(comps, keys);
  double num = 0.0, den = 0.0;
  for (std::size_t q = 0; q < keys.size(); ++q) {
    const Complex v = t.at(keys[q].slots());
    num += std::norm(v - model(static_cast<Eigen::Index>(q)));
    den += std::norm(v);
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

Decomposition decompose(const IncompleteSymmetricTensor& t, const DecompositionParams& params, Exec exec) {
  const int n = t.dim() - 1;
  const int m = t.order();
  validate_params(n, m, params);

  Decomposition out;
  out.d = t.dim();
  out.m = m;
  out.p = params.p;
  out.k = params.k;
  auto& diag = out.diagnostics;

  const auto g = with_stage("generating matrix", [&] {
    return solve_generating_matrix(t, params.r, params.p, params.k, exec);
  });
  diag.generating_residual = g.residuals.empty() ? 0.0 : *std::max_element(g.residuals.begin(), g.residuals.end());
  diag.ill_conditioned_columns = g.ill_conditioned_columns;

  const auto tails = with_stage("tails", [&] { return extract_tails(companion_matrices(g), params.seed); });
  diag.eigen_gap = tails.gap;
  diag.xi_attempts = tails.attempts;

  const auto products = with_stage("tail products", [&] { return solve_tail_products(t, tails.tails, params); });
  diag.tails_residual = products.residual;

  const auto heads = with_stage("heads", [&] {
    return solve_heads(t, tails.tails, products.gammas, params, exec);
  });
  diag.heads_residual = heads.max_residual;

  const auto scales = with_stage("scales", [&] { return solve_scales(t, heads.heads, tails.tails); });
  diag.scales_residual = scales.residual;

  out.components.vectors = homogenized(heads.heads, tails.tails);
  for (Eigen::Index i = 0; i < out.components.vectors.cols(); ++i) {
    out.components.vectors.col(i) *= std::pow(scales.lambdas(i), 1.0 / m);
  }
  diag.decomp_err = decomposition_error(t, out.components);
  return out;
}

namespace {

struct OmegaFit {
  std::vector<TensorKey> keys;
  Eigen::VectorXcd target;
  int d = 0;
  int r = 0;

  Eigen::MatrixXcd unpack(const Eigen::VectorXd& x) const {
    const Eigen::Index size = static_cast<Eigen::Index>(d) * r;
    Eigen::MatrixXcd q(d, r);
    for (Eigen::Index c = 0; c < size; ++c) q(c % d, c / d) = Complex(x(c), x(size + c));
    return q;
  }

  static Eigen::VectorXd pack(const Eigen::MatrixXcd& q) {
    const Eigen::Index size = q.size();
    Eigen::VectorXd x(2 * size);
    for (Eigen::Index c = 0; c < size; ++c) {
      x(c) = q(c % q.rows(), c / q.rows()).real();
      x(size + c) = q(c % q.rows(), c / q.rows()).imag();
    }
    return x;
  }

  Eigen::VectorXcd difference(const Eigen::MatrixXcd& q) const {
    return target - evaluate_components(ComponentList{q, {}}, keys, Exec::serial);
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& x) const {
    const Eigen::VectorXcd diff = difference(unpack(x));
    Eigen::VectorXd f(2 * diff.size());
    f.head(diff.size()) = diff.real();
    f.tail(diff.size()) = diff.imag();
    return f;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    const Eigen::MatrixXcd q = unpack(x);
    const auto n_keys = static_cast<Eigen::Index>(keys.size());
    const Eigen::Index size = static_cast<Eigen::Index>(d) * r;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2 * n_keys, 2 * size);
    for (Eigen::Index row = 0; row < n_keys; ++row) {
      const auto slots = keys[static_cast<std::size_t>(row)].slots();
      for (int i = 0; i < r; ++i) {
        for (std::size_t s = 0; s < slots.size(); ++s) {
          Complex g = 1.0;
          for (std::size_t u = 0; u < slots.size(); ++u)
            if (u != s) g *= q(slots[u], i);
          const Eigen::Index c = static_cast<Eigen::Index>(i) * d + slots[s];
          jac(row, c) = -g.real();
          jac(row, size + c) = g.imag();
          jac(n_keys + row, c) = -g.imag();
          jac(n_keys + row, size + c) = -g.real();
        }
      }
    }
    return jac;
  }
};

}  // namespace

IncompleteSymmetricTensor shift_labels(const IncompleteSymmetricTensor& t, int shift) {
  const int d = t.dim();
  shift = ((shift % d) + d) % d;
  if (shift == 0) return t;
  std::vector<TensorKey> keys;
  keys.reserve(t.size());
  for (const auto& key : t.keys()) {
    std::vector<int> slots(key.slots().begin(), key.slots().end());
    for (int& s : slots) s = (s + shift) % d;
    std::sort(slots.begin(), slots.end());
    keys.emplace_back(std::move(slots));
  }
  return IncompleteSymmetricTensor(d, t.order(), std::move(keys), t.values());
}

namespace {

OmegaFit make_fit(const IncompleteSymmetricTensor& t, int r) {
  OmegaFit fit;
  fit.keys = omega_keys(t.dim(), t.order());
  fit.d = t.dim();
  fit.r = r;
  fit.target.resize(static_cast<Eigen::Index>(fit.keys.size()));
  for (std::size_t q = 0; q < fit.keys.size(); ++q) fit.target(static_cast<Eigen::Index>(q)) = t.at(fit.keys[q].slots());
  return fit;
}

struct Candidate {
  Decomposition dec;
  double residual = 0.0;
  int shift = 0;
};

// Exact pipeline on every requested cyclic relabeling, sorted by Omega
// residual against t.
std::vector<Candidate> starting_points(const IncompleteSymmetricTensor& t, const DecompositionParams& params,
                                       const OmegaFit& fit, Exec exec) {
  const double scale = std::sqrt(factorial(t.order()));
  std::vector<Candidate> candidates;
  std::optional<Error> first_failure;
  const int starts = params.starts <= 0 ? t.dim() : std::min(params.starts, t.dim());
  for (int shift = 0; shift < starts; ++shift) {
    DecompositionParams shifted = params;
    if (shift != 0) shifted.seed = derive_seed(params.seed, static_cast<std::uint64_t>(shift));
    try {
      Candidate c{decompose(shift_labels(t, shift), shifted, exec), 0.0, shift};
      if (shift != 0) {
        // Undo the relabeling: new label (l + shift) mod d holds old label l.
        Eigen::MatrixXcd q(c.dec.components.vectors.rows(), c.dec.components.vectors.cols());
        for (int l = 0; l < t.dim(); ++l) q.row(l) = c.dec.components.vectors.row((l + shift) % t.dim());
        c.dec.components.vectors = q;
      }
      c.residual = scale * fit.difference(c.dec.components.vectors).norm();
      candidates.push_back(std::move(c));
    } catch (const Error& e) {
      if (!first_failure) first_failure = e;
    }
  }
  if (candidates.empty()) throw *first_failure;
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.residual < b.residual; });
  return candidates;
}

RefineReport refine_start(const OmegaFit& fit, const Eigen::MatrixXcd& q, const RefineOptions& base, int iters) {
  RefineOptions opts = base;
  opts.max_iters = iters;
  return nlls_refine([&](const Eigen::VectorXd& x) { return fit.residual(x); }, OmegaFit::pack(q), opts,
                     [&](const Eigen::VectorXd& x) { return fit.jacobian(x); });
}

Decomposition refined_from(const OmegaFit& fit, const Candidate& start, const RefineReport& report, int iterations,
                           int m) {
  Decomposition out = start.dec;
  out.components.vectors = fit.unpack(report.x);
  auto& diag = out.diagnostics;
  diag.label_shift = start.shift;
  diag.pre_refine_residual = start.residual;
  diag.refined = true;
  diag.refine_iterations = iterations;
  diag.refine_converged = report.converged;
  diag.post_refine_residual = std::sqrt(factorial(m) * report.final_cost);
  return out;
}

}  // namespace

Decomposition approximate(const IncompleteSymmetricTensor& t, const DecompositionParams& params,
                          const IncompleteSymmetricTensor* truth, Exec exec) {
  const OmegaFit fit = make_fit(t, params.r);
  const double scale = std::sqrt(factorial(t.order()));
  const auto candidates = starting_points(t, params, fit, exec);

  Decomposition out = candidates.front().dec;
  out.diagnostics.label_shift = candidates.front().shift;
  out.diagnostics.pre_refine_residual = candidates.front().residual;
  out.diagnostics.post_refine_residual = candidates.front().residual;
  if (params.refine) {
    const int screened = std::clamp(params.screen, 1, static_cast<int>(candidates.size()));
    const int budget = params.refine_opts.max_iters;
    const int first_pass = screened > 1 ? std::min(params.screen_iters, budget) : budget;
    RefineReport best_report;
    std::size_t best_index = 0;
    for (std::size_t c = 0; c < static_cast<std::size_t>(screened); ++c) {
      auto report = refine_start(fit, candidates[c].dec.components.vectors, params.refine_opts, first_pass);
      if (c == 0 || report.final_cost < best_report.final_cost) {
        best_report = std::move(report);
        best_index = c;
      }
    }
    int iterations = best_report.iterations;
    if (!best_report.converged && budget > first_pass) {
      const double before = best_report.initial_cost;
      best_report = refine_start(fit, fit.unpack(best_report.x), params.refine_opts, budget - first_pass);
      best_report.initial_cost = before;
      iterations += best_report.iterations;
    }
    out = refined_from(fit, candidates[best_index], best_report, iterations, t.order());
  }
  auto& diag = out.diagnostics;
  diag.decomp_err = decomposition_error(t, out.components);

  if (truth) {
    if (truth->dim() != t.dim() || truth->order() != t.order()) {
      throw Error(ErrorCode::InvalidArgument, "ground truth tensor has a different shape");
    }
    const Eigen::VectorXcd model = evaluate_components(out.components, fit.keys, exec);
    double abs_sq = 0.0, num_sq = 0.0, noise_sq = 0.0;
    for (std::size_t q = 0; q < fit.keys.size(); ++q) {
      const Complex exact = truth->at(fit.keys[q].slots());
      const Complex noisy = fit.target(static_cast<Eigen::Index>(q));
      const Complex fitted = model(static_cast<Eigen::Index>(q));
      abs_sq += std::norm(fitted - exact);
      num_sq += std::norm(fitted - noisy);
      noise_sq += std::norm(noisy - exact);
    }
    diag.abs_err = scale * std::sqrt(abs_sq);
    if (noise_sq > 0.0) {
      diag.rel_err = std::sqrt(num_sq / noise_sq);
    } else {
      diag.rel_err = num_sq == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

std::vector<Decomposition> approximate_candidates(const IncompleteSymmetricTensor& t,
                                                  const DecompositionParams& params, Exec exec) {
  const OmegaFit fit = make_fit(t, params.r);
  const auto candidates = starting_points(t, params, fit, exec);
  const int count = std::clamp(params.screen, 1, static_cast<int>(candidates.size()));
  std::vector<Decomposition> out;
  for (std::size_t c = 0; c < static_cast<std::size_t>(count); ++c) {
    Decomposition dec = candidates[c].dec;
    if (params.refine) {
      const auto report =
          refine_start(fit, candidates[c].dec.components.vectors, params.refine_opts, params.refine_opts.max_iters);
      dec = refined_from(fit, candidates[c], report, report.iterations, t.order());
    } else {
      dec.diagnostics.label_shift = candidates[c].shift;
      dec.diagnostics.pre_refine_residual = dec.diagnostics.post_refine_residual = candidates[c].residual;
    }
    dec.diagnostics.decomp_err = decomposition_error(t, dec.components);
    out.push_back(std::move(dec));
  }
  std::stable_sort(out.begin(), out.end(), [](const Decomposition& a, const Decomposition& b) {
    return a.diagnostics.post_refine_residual < b.diagnostics.post_refine_residual;
  });
  return out;
}

double vec_err_max(const ComponentList& truth, const ComponentList& recovered, int m) {
  const Eigen::Index r = truth.rank();
  if (recovered.rank() != r || recovered.dim() != truth.dim()) {
    throw Error(ErrorCode::InvalidArgument, "vec_err_max needs component lists of the same shape");
  }
  Eigen::MatrixXd cost(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const double norm = truth.vectors.col(i).norm();
    for (Eigen::Index j = 0; j < r; ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (int s = 0; s < m; ++s) {
        const Complex eta = std::polar(1.0, 2.0 * std::numbers::pi * s / m);
        best = std::min(best, (truth.vectors.col(i) - eta * recovered.vectors.col(j)).norm());
      }
      cost(i, j) = norm > 0.0 ? best / norm : best;
    }
  }
  const auto assignment = optimal_assignment(cost);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < r; ++i) worst = std::max(worst, cost(i, assignment[static_cast<std::size_t>(i)]));
  return worst;
}

ComponentList random_components(int d, int r, std::uint64_t seed) {
  const auto draw = gaussian_vector(seed, static_cast<std::size_t>(d) * static_cast<std::size_t>(r));
  ComponentList comps;
  comps.vectors.resize(d, r);
  for (Eigen::Index c = 0; c < comps.vectors.size(); ++c) comps.vectors(c % d, c / d) = draw[static_cast<std::size_t>(c)];
  return comps;
}

}  // namespace momentmix
