// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any selected criterion fails.
//   acceptance [--criterion N]...

#include "momentmix/decomposition.hpp"
#include "momentmix/generating.hpp"
#include "momentmix/gmm.hpp"
#include "momentmix/numerics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace momentmix;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

// 1. Exact decomposition on planted tensors.
Outcome criterion1() {
  Outcome out;
  const int cells[][3] = {{15, 3, 6}, {15, 4, 8}, {15, 5, 15}, {25, 3, 11}};
  for (const auto& c : cells) {
    const int d = c[0], m = c[1], r = c[2];
    std::vector<double> errs;
    double vec_worst = 0.0, slowest = 0.0;
    int failures = 0;
    for (int s = 0; s < 20; ++s) {
      const auto t0 = Clock::now();
      const auto comps = random_components(d, r, static_cast<std::uint64_t>(100000 * m + 1000 * d + s));
      const auto t = from_components(comps, m, omega_keys(d, m));
      try {
        auto params = choose_params(d - 1, m, r);
        params.seed = static_cast<std::uint64_t>(s);
        const auto dec = decompose(t, params);
        errs.push_back(decomposition_error(t, dec.components));
        vec_worst = std::max(vec_worst, vec_err_max(comps, dec.components, m));
      } catch (const Error& e) {
        ++failures;
        errs.push_back(INFINITY);
        out.detail << " (" << d << "," << m << "," << r << ") seed " << s << ": " << e.what() << ";";
      }
      slowest = std::max(slowest, seconds_since(t0));
    }
    const double med = median(errs), worst = *std::max_element(errs.begin(), errs.end());
    out.detail << " (" << d << "," << m << "," << r << ") median " << med << " max " << worst << " vec " << vec_worst
               << " slowest " << slowest << "s;";
    out.require(failures == 0, "no failures");
    out.require(med <= 1e-9, "median decomp-err <= 1e-9");
    out.require(worst <= 1e-6, "max decomp-err <= 1e-6");
    out.require(vec_worst <= 1e-6, "vec-err-max <= 1e-6");
    out.require(slowest <= 10.0, "<= 10 s per trial");
  }
  return out;
}

// 2. Rank bounds against brute force and the published r column.
Outcome criterion2() {
  Outcome out;
  int checked = 0;
  for (int m = 3; m <= 7; ++m)
    for (int n = rank_guarantee_threshold(m); n <= 60; ++n) {
      const auto got = static_cast<std::uint64_t>(max_rank(n, m).r_max);
      const auto want = brute_force_max_rank(n, m);
      ++checked;
      if (got != want) {
        out.require(false, "n=" + std::to_string(n) + " m=" + std::to_string(m));
      }
    }
  const int ds[] = {15, 25, 30, 40};
  const std::uint64_t table[4][5] = {
      {6, 8, 15, 20, 20}, {11, 16, 55, 84, 165}, {14, 21, 91, 136, 364}, {19, 29, 171, 286, 969}};
  for (int i = 0; i < 4; ++i)
    for (int m = 3; m <= 7; ++m) {
      const auto got = static_cast<std::uint64_t>(max_rank(ds[i] - 1, m).r_max);
      ++checked;
      if (got != table[i][m - 3]) {
        out.require(false, "d=" + std::to_string(ds[i]) + " m=" + std::to_string(m) + " gave " + std::to_string(got));
      }
    }
  out.detail << " " << checked << " values compared;";
  return out;
}

// 3. Stability of approximate() under perturbation.
Outcome criterion3() {
  Outcome out;
  for (int m : {3, 4}) {
    const int d = 15, r = m == 3 ? 6 : 8;
    for (double eps : {0.1, 0.01, 0.001}) {
      double abs_sum = 0.0, rel_worst = 0.0, slowest = 0.0;
      int failures = 0;
      for (int s = 0; s < 20; ++s) {
        const auto t0 = Clock::now();
        const auto comps = random_components(d, r, static_cast<std::uint64_t>(200 + s));
        const auto clean = from_components(comps, m, omega_keys(d, m));
        const auto noisy = perturb(clean, eps, static_cast<std::uint64_t>(900 + s));
        try {
          auto params = choose_params(d - 1, m, r);
          params.seed = static_cast<std::uint64_t>(s);
          const auto dec = approximate(noisy, params, &clean);
          abs_sum += *dec.diagnostics.abs_err;
          rel_worst = std::max(rel_worst, *dec.diagnostics.rel_err);
        } catch (const Error& e) {
          ++failures;
          out.detail << " m=" << m << " eps=" << eps << " seed " << s << ": " << e.what() << ";";
        }
        slowest = std::max(slowest, seconds_since(t0));
      }
      const double mean_abs = abs_sum / 20.0;
      out.detail << " m=" << m << " eps=" << eps << " mean abs " << mean_abs << " max rel " << rel_worst
                 << " slowest " << slowest << "s;";
      out.require(failures == 0, "no failures");
      out.require(mean_abs <= eps, "mean abs-err <= eps");
      out.require(rel_worst <= 1.0, "rel-err <= 1");
      out.require(slowest <= 30.0, "<= 30 s per trial");
    }
  }
  return out;
}

// 4. GMM recovery from exact population moments.
Outcome criterion4() {
  Outcome out;
  const int cells[][3] = {{8, 3, 3}, {12, 5, 3}, {10, 4, 4}};
  for (const auto& c : cells) {
    const int d = c[0], r = c[1], m = c[2];
    double worst = 0.0;
    int failures = 0;
    for (int s = 0; s < 20; ++s) {
      const auto model = random_gmm(d, r, static_cast<std::uint64_t>(1000 + s));
      const int t = lower_order(d, r);
      const auto mm = exact_moments(model, m, learning_keys(d, m));
      const auto mt = exact_moments(model, t, omega_keys(d, t));
      try {
        LearnOptions opts;
        opts.seed = static_cast<std::uint64_t>(s);
        worst = std::max(worst, parameter_error(model, learn_from_moments(mm, mt, r, opts).model));
      } catch (const Error& e) {
        ++failures;
        out.detail << " (" << d << "," << r << "," << m << ") seed " << s << ": " << e.what() << ";";
      }
    }
    out.detail << " (" << d << "," << r << "," << m << ") max parameter error " << worst << ";";
    out.require(failures == 0, "no failures");
    out.require(worst <= 1e-6, "parameter error <= 1e-6");
  }
  return out;
}

// 5. Learning from samples against the EM baseline.
Outcome criterion5() {
  Outcome out;
  const auto t0 = Clock::now();
  std::vector<double> learned;
  int wins = 0;
  for (int s = 0; s < 10; ++s) {
    const auto model = random_gmm(15, 6, static_cast<std::uint64_t>(5000 + s));
    const auto samples = sample_gmm(model, 100000, static_cast<std::uint64_t>(7000 + s));
    double a = 0.0;
    try {
      LearnOptions opts;
      opts.seed = static_cast<std::uint64_t>(s);
      const auto rep = learn(samples, 6, 3, opts);
      a = accuracy(classify(rep.model, samples.data), samples.labels, 6);
    } catch (const Error& e) {
      out.detail << " seed " << s << ": " << e.what() << ";";
    }
    EmOptions em_opts;
    em_opts.seed = static_cast<std::uint64_t>(s);
    const auto em = em_baseline(samples.data, 6, em_opts);
    const double b = accuracy(classify(em.model, samples.data), samples.labels, 6);
    learned.push_back(a);
    wins += a >= b;
    out.detail << " seed " << s << " learn " << a << " em " << b << ";";
  }
  const double med = median(learned), total = seconds_since(t0);
  out.detail << " median " << med << " learn>=em in " << wins << "/10 total " << total << "s;";
  out.require(med >= 0.93, "median accuracy >= 0.93");
  out.require(wins >= 6, "learn >= em in at least 6 of 10 seeds");
  out.require(total <= 300.0, "<= 5 min total");
  return out;
}

Eigen::MatrixXd random_real(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  const auto v = gaussian_vector(seed, static_cast<std::size_t>(rows * cols));
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

// 6. Property checks.
Outcome criterion6() {
  Outcome out;

  double commutation = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const int d = 10, m = 3 + static_cast<int>(s % 2), r = 4;
    const auto t = from_components(random_components(d, r, 40 + s), m, omega_keys(d, m));
    const auto params = choose_params(d - 1, m, r);
    const auto ns = companion_matrices(solve_generating_matrix(t, r, params.p, params.k));
    for (std::size_t a = 0; a < ns.matrices.size(); ++a)
      for (std::size_t b = a + 1; b < ns.matrices.size(); ++b)
        commutation = std::max(
            commutation, (ns.matrices[a] * ns.matrices[b] - ns.matrices[b] * ns.matrices[a]).norm());
  }
  out.detail << " commutation " << commutation << ";";
  out.require(commutation <= 1e-8, "commutation <= 1e-8");

  double factorization = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const int d = 10, r = 3;
    const auto comps = random_components(d, r, 60 + s);
    const auto t = from_components(comps, 4, omega_keys(d, 4));
    const auto rows = subsets_lex(1, 4, 1), cols = subsets_lex(5, 9, 2);
    const Eigen::MatrixXcd a = block_matrix(t, rows, cols, true);
    Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < r; ++i) {
      Eigen::VectorXcd left(static_cast<Eigen::Index>(rows.size())), right(static_cast<Eigen::Index>(cols.size()));
      for (std::size_t q = 0; q < rows.size(); ++q) {
        Complex p = 1.0;
        for (int l : rows[q]) p *= comps.vectors(l, i);
        left(static_cast<Eigen::Index>(q)) = p;
      }
      for (std::size_t q = 0; q < cols.size(); ++q) {
        Complex p = 1.0;
        for (int l : cols[q]) p *= comps.vectors(l, i);
        right(static_cast<Eigen::Index>(q)) = p;
      }
      expect += comps.vectors(0, i) * left * right.transpose();
    }
    factorization = std::max(factorization, (a - expect).norm() / expect.norm());
  }
  out.detail << " factorization " << factorization << ";";
  out.require(factorization <= 1e-12, "factorization <= 1e-12 relative");

  // Closed form sum_j C(t,2j) mu^(t-2j) var^j (2j-1)!!.
  double moments = 0.0;
  for (int t = 0; t <= 6; ++t)
    for (double mu : {-1.7, -0.2, 0.0, 0.9, 2.4})
      for (double var : {0.0, 0.3, 1.0, 2.5}) {
        double closed = 0.0;
        for (int j = 0; 2 * j <= t; ++j) {
          double dfact = 1.0;
          for (int q = 2 * j - 1; q > 0; q -= 2) dfact *= q;
          closed += static_cast<double>(binomial(static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(2 * j))) *
                    std::pow(mu, t - 2 * j) * std::pow(var, j) * dfact;
        }
        moments = std::max(moments, std::abs(univariate_gaussian_moment(mu, var, t) - closed) /
                                        std::max(1.0, std::abs(closed)));
      }
  out.detail << " univariate moments " << moments << ";";
  out.require(moments <= 1e-12, "univariate moments <= 1e-12");

  double kkt = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Eigen::Index rows = 5 + static_cast<Eigen::Index>(s % 20), cols = 1 + static_cast<Eigen::Index>(s % 7);
    const Eigen::MatrixXd a = random_real(rows, cols, 3 * s);
    const Eigen::VectorXd b = random_real(rows, 1, 3 * s + 1);
    const auto r = nnls(a, b);
    const Eigen::VectorXd grad = a.transpose() * (a * r.x - b);
    kkt = std::max({kkt, -r.x.minCoeff(), -grad.minCoeff(), r.x.cwiseProduct(grad).cwiseAbs().maxCoeff()});
  }
  out.detail << " nnls KKT " << kkt << ";";
  out.require(kkt <= 1e-8, "nnls KKT <= 1e-8");

  int rises = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto model = random_gmm(6, 2, 300 + s);
    const auto mm = exact_moments(model, 3, learning_keys(6, 3));
    const auto mt = exact_moments(model, 1, omega_keys(6, 1));
    const auto start = random_gmm(6, 2, 700 + s);
    RefineOptions opts;
    opts.max_iters = 30;
    const auto r = refine_params(start.weights, start.means, mm, mt, opts);
    rises += r.final_cost > r.initial_cost;
  }
  out.detail << " refinement rises " << rises << "/100;";
  out.require(rises == 0, "refinement monotone");

  int not_minimal = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const int m = 3 + static_cast<int>(s % 4);
    const Eigen::MatrixXd re = random_real(6, 1, 2 * s + 5000), im = random_real(6, 1, 2 * s + 5001);
    const Eigen::MatrixXcd q = re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
    std::vector<int> chosen;
    (void)realify(q, m, &chosen);
    const auto residual = [&](int t) { return (std::polar(1.0, 2.0 * std::numbers::pi * t / m) * q).imag().norm(); };
    for (int t = 0; t < m; ++t) not_minimal += residual(chosen[0]) > residual(t) + 1e-12;
  }
  out.detail << " phase not minimal " << not_minimal << "/100;";
  out.require(not_minimal == 0, "phase correction minimal");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3,
                                                          criterion4, criterion5, criterion6};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      const int n = std::atoi(argv[++i]);
      if (n < 1 || n > static_cast<int>(criteria.size())) {
        std::fprintf(stderr, "unknown criterion %s\n", argv[i]);
        return 2;
      }
      selected.insert(n);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  if (selected.empty())
    for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) selected.insert(n);

  bool all = true;
  for (int n : selected) {
    const auto t0 = Clock::now();
    Outcome o = criteria[static_cast<std::size_t>(n - 1)]();
    std::printf("criterion %d: %s (%.1fs)%s\n", n, o.pass ? "PASS" : "FAIL", seconds_since(t0), o.detail.str().c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
