#include "momentmix/generating.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "momentmix/errors.hpp"
#include "momentmix/numerics.hpp"

namespace momentmix {

void GeneratingShape::validate() const {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::ShapeCondition, why + " (n=" + std::to_string(n) + ", m=" + std::to_string(m) +
                                               ", p=" + std::to_string(p) + ", k=" + std::to_string(k) +
                                               ", r=" + std::to_string(r) + ")");
  };
  if (r < 1) fail("rank must be positive");
  if (p < 1 || p > m - 2) fail("need 1 <= p <= m-2");
  if (k < p || k >= n) fail("need p <= k < n");
  if (binomial(k, p) < static_cast<std::uint64_t>(r)) fail("C(k,p) < r");
  if (n - k - 1 < m - p - 1 || binomial(n - k - 1, m - p - 1) < static_cast<std::uint64_t>(r)) {
    fail("C(n-k-1,m-p-1) < r");
  }
}

Eigen::Index GeneratingMatrix::column_of(std::size_t head_index, int tail) const {
  return static_cast<Eigen::Index>(head_index) * (shape.n - shape.k) + (tail - shape.k - 1);
}

LinearSystem assemble_system(const IncompleteSymmetricTensor& t, const IndexSubset& alpha,
                             const std::vector<IndexSubset>& b0, int k, int n, int m, int p) {
  const auto support = support_o_alpha(alpha, k, n, m, p);
  LinearSystem sys;
  sys.a.resize(static_cast<Eigen::Index>(support.size()), static_cast<Eigen::Index>(b0.size()));
  sys.b.resize(static_cast<Eigen::Index>(support.size()));
  IndexSubset key;
  key.reserve(static_cast<std::size_t>(m));
  for (std::size_t row = 0; row < support.size(); ++row) {
    const auto& gamma = support[row];
    for (std::size_t col = 0; col < b0.size(); ++col) {
      // 0 < beta labels (<= k) < gamma labels, so the concatenation is sorted.
      key.assign(1, 0);
      key.insert(key.end(), b0[col].begin(), b0[col].end());
      key.insert(key.end(), gamma.begin(), gamma.end());
      auto v = t.find_sorted(key);
      if (!v) throw Error(ErrorCode::MissingEntry, "no entry at key " + key_to_string(key));
      sys.a(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = *v;
    }
    bool ok = true;
    key = merge_disjoint(alpha, gamma, ok);
    auto v = t.find_sorted(key);
    if (!v) throw Error(ErrorCode::MissingEntry, "no entry at key " + key_to_string(key));
    sys.b(static_cast<Eigen::Index>(row)) = *v;
  }
  return sys;
}

GeneratingMatrix solve_generating_matrix(const IncompleteSymmetricTensor& t, int r, int p, int k, Exec exec) {
  GeneratingMatrix g;
  g.shape = GeneratingShape{t.dim() - 1, t.order(), p, k, r};
  g.shape.validate();
  const int n = g.shape.n;
  const int m = g.shape.m;
  g.rows = basis_b0(k, p, r);
  g.cols = basis_b1(k, p, n);
  const auto n_cols = static_cast<std::int64_t>(g.cols.size());
  g.values.resize(r, n_cols);
  g.residuals.assign(g.cols.size(), 0.0);
  std::vector<char> ill(g.cols.size(), 0);

  // Exceptions cannot cross the OpenMP region boundary; collect the first.
  std::vector<std::string> failure(g.cols.size());
  std::vector<ErrorCode> failure_code(g.cols.size(), ErrorCode::InvalidArgument);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (std::int64_t c = 0; c < n_cols; ++c) {
    const auto uc = static_cast<std::size_t>(c);
    try {
      const auto sys = assemble_system(t, g.cols[uc], g.rows, k, n, m, p);
      const auto sol = lstsq(sys.a, sys.b);
      g.values.col(c) = sol.solution.col(0);
      g.residuals[uc] = sol.residual_norm;
      ill[uc] = sol.ill_conditioned ? 1 : 0;
    } catch (const Error& e) {
      failure[uc] = e.what();
      failure_code[uc] = e.code();
    }
  }
  for (std::size_t c = 0; c < failure.size(); ++c) {
    if (!failure[c].empty()) {
      throw Error(failure_code[c], "generating matrix column " + key_to_string(g.cols[c]) + ": " + failure[c]);
    }
  }
  g.ill_conditioned_columns = static_cast<int>(std::count(ill.begin(), ill.end(), 1));
  return g;
}

CompanionSet companion_matrices(const GeneratingMatrix& g) {
  const auto& s = g.shape;
  CompanionSet out;
  out.shape = s;
  out.matrices.reserve(static_cast<std::size_t>(s.n - s.k));
  // B0 is a prefix of the lex list of p-subsets of [1, k], so a row
  // monomial's position in B0 is also its head index in B1.
  for (int l = s.k + 1; l <= s.n; ++l) {
    Eigen::MatrixXcd nl(s.r, s.r);
    for (int nu = 0; nu < s.r; ++nu) {
      const Eigen::Index col = g.column_of(static_cast<std::size_t>(nu), l);
      for (int beta = 0; beta < s.r; ++beta) nl(nu, beta) = g.values(beta, col);
    }
    out.matrices.push_back(std::move(nl));
  }
  return out;
}

double relative_eigen_gap(const Eigen::VectorXcd& values) {
  const Eigen::Index r = values.size();
  if (r < 2) return 1.0;
  double min_gap = std::numeric_limits<double>::infinity();
  double spread = 0.0;
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = a + 1; b < r; ++b) {
      const double dist = std::abs(values(a) - values(b));
      min_gap = std::min(min_gap, dist);
      spread = std::max(spread, dist);
    }
  }
  return spread > 0.0 ? min_gap / spread : 0.0;
}

TailExtraction extract_tails(const CompanionSet& ns, std::uint64_t seed) {
  const auto& s = ns.shape;
  const int tails = s.n - s.k;
  if (static_cast<int>(ns.matrices.size()) != tails) {
    throw Error(ErrorCode::InvalidArgument, "companion set has the wrong number of matrices");
  }
  TailExtraction out;
  for (int attempt = 0; attempt <= kXiRetries; ++attempt) {
    const auto draw = gaussian_vector(derive_seed(seed, static_cast<std::uint64_t>(attempt)),
                                      static_cast<std::size_t>(tails));
    Eigen::MatrixXcd combo = Eigen::MatrixXcd::Zero(s.r, s.r);
    for (int l = 0; l < tails; ++l) combo += draw[static_cast<std::size_t>(l)] * ns.matrices[static_cast<std::size_t>(l)];
    const auto pairs = eig(combo);
    out.attempts = attempt + 1;
    out.gap = relative_eigen_gap(pairs.values);
    if (out.gap < kMinEigenGap) continue;

    out.xi = Eigen::Map<const Eigen::VectorXd>(draw.data(), tails);
    out.eigenvectors = pairs.vectors;
    out.tails.resize(tails, s.r);
    for (int i = 0; i < s.r; ++i) {
      const auto v = pairs.vectors.col(i);
      for (int l = 0; l < tails; ++l) {
        out.tails(l, i) = v.dot(ns.matrices[static_cast<std::size_t>(l)] * v);  // v^H N v
      }
    }
    return out;
  }
  throw Error(ErrorCode::DegenerateSpectrum,
              "N(xi) has a relative eigen-gap of " + std::to_string(out.gap) + " after " +
                  std::to_string(out.attempts) + " draws; input is not generic or r is misspecified");
}

}  // namespace momentmix
