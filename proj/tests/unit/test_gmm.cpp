#include "doctest.h"

#include "momentmix/gmm.hpp"
#include "momentmix/reference.hpp"

#include <cmath>
#include <numbers>

using namespace momentmix;

namespace {

// E[z^t] for z ~ N(mu, var) from the Hermite-style closed form
// sum_j C(t, 2j) mu^(t-2j) var^j (2j-1)!!.
double closed_moment(double mu, double var, int t) {
  double sum = 0.0;
  for (int j = 0; 2 * j <= t; ++j) {
    double dfact = 1.0;
    for (int q = 2 * j - 1; q > 0; q -= 2) dfact *= q;
    sum += static_cast<double>(binomial(static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(2 * j))) *
           std::pow(mu, t - 2 * j) * std::pow(var, j) * dfact;
  }
  return sum;
}

GmmModel one_component(std::vector<double> mu, std::vector<double> var) {
  GmmModel g;
  g.weights = Eigen::VectorXd::Ones(1);
  g.means = Eigen::Map<Eigen::VectorXd>(mu.data(), static_cast<Eigen::Index>(mu.size()));
  g.variances = Eigen::Map<Eigen::VectorXd>(var.data(), static_cast<Eigen::Index>(var.size()));
  return g;
}

}  // namespace

TEST_SUITE("gmm") {
  TEST_CASE("univariate moments") {
    CHECK(univariate_gaussian_moment(1.5, 0.7, 2) == doctest::Approx(1.5 * 1.5 + 0.7));
    CHECK(univariate_gaussian_moment(1.5, 0.7, 3) == doctest::Approx(std::pow(1.5, 3) + 3 * 1.5 * 0.7));
    CHECK(univariate_gaussian_moment(0.0, 1.0, 4) == doctest::Approx(3.0));
    for (int t = 0; t <= 6; ++t)
      for (double mu : {-2.0, -0.3, 0.0, 1.1})
        for (double var : {0.0, 0.5, 2.0}) {
          const double a = univariate_gaussian_moment(mu, var, t), b = closed_moment(mu, var, t);
          CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
        }
  }

  TEST_CASE("exact_moments examples") {
    const auto g = one_component({1, 1, 1}, {4, 1, 1});
    const auto mom = exact_moments(g, 3, {TensorKey({0, 0, 1}), TensorKey({0, 1, 2})});
    CHECK(mom.at(std::vector<int>{0, 0, 1}) == doctest::Approx(5.0));
    CHECK(mom.at(std::vector<int>{0, 1, 2}) == doctest::Approx(1.0));
    CHECK(mom.at(std::vector<int>{0, 0, 1}) - 1.0 == doctest::Approx(4.0));
  }

  TEST_CASE("learning keys") {
    const auto rep = repeated_pair_keys(5, 3);
    CHECK(rep.size() == 5 * 4);
    for (const auto& k : rep) CHECK(k.single_repeated_pair());
    const auto all = learning_keys(5, 3);
    CHECK(all.size() == binomial(5, 3) + rep.size());
    CHECK(std::is_sorted(all.begin(), all.end()));
    CHECK(lower_order(15, 6) == 1);
    CHECK(lower_order(15, 16) == 2);
    CHECK(lower_order(4, 5) == 2);
  }

  TEST_CASE("random_gmm follows the recipe") {
    const auto g = random_gmm(6, 4, 3);
    CHECK_NOTHROW(g.validate());
    CHECK(std::abs(g.weights.sum() - 1.0) <= 1e-12);
    CHECK(g.weights.minCoeff() > 0.0);
    CHECK(g.variances.minCoeff() >= 0.0);
    CHECK(random_gmm(6, 4, 3).means == g.means);
  }

  TEST_CASE("sample_gmm edge cases") {
    GmmModel g;
    g.weights = Eigen::Vector2d(1.0, 0.0);
    g.means = Eigen::MatrixXd::Zero(2, 2);
    g.means.col(0) << 3, -1;
    g.means.col(1) << 5, 5;
    g.variances = Eigen::MatrixXd::Zero(2, 2);
    const auto s = sample_gmm(g, 1000, 1);
    for (int l : s.labels) CHECK(l == 0);
    for (Eigen::Index row = 0; row < s.data.rows(); ++row) {
      CHECK(s.data(row, 0) == 3.0);
      CHECK(s.data(row, 1) == -1.0);
    }
  }

  TEST_CASE("sample mean of a single component") {
    const auto g = one_component({0.5, -2.0, 1.0}, {1, 1, 1});
    const auto s = sample_gmm(g, 100000, 4);
    const Eigen::VectorXd mean = s.data.colwise().mean();
    for (int j = 0; j < 3; ++j) CHECK(std::abs(mean(j) - g.means(j, 0)) <= 0.03);
  }

  TEST_CASE("sample_moments") {
    Eigen::MatrixXd data(2, 2);
    data << 1, 2, 3, 4;
    auto mom = sample_moments(data, 2, {TensorKey({0, 1})});
    CHECK(mom.at(std::vector<int>{0, 1}) == doctest::Approx(7.0));
    mom = sample_moments(Eigen::MatrixXd::Zero(5, 3), 3, omega_keys(3, 3));
    CHECK(mom.at(std::vector<int>{0, 1, 2}) == 0.0);
  }

  TEST_CASE("sample moments converge to exact moments") {
    const auto g = random_gmm(5, 2, 12);
    const auto s = sample_gmm(g, 1000000, 13);
    const auto keys = learning_keys(5, 3);
    const auto est = sample_moments(s.data, 3, keys);
    const auto exact = exact_moments(g, 3, keys);
    const double n = static_cast<double>(s.data.rows());
    for (std::size_t q = 0; q < keys.size(); ++q) {
      // Empirical std of the per-row products.
      double sum = 0.0, sq = 0.0;
      for (Eigen::Index row = 0; row < s.data.rows(); ++row) {
        double p = 1.0;
        for (int l : keys[q].slots()) p *= s.data(row, l);
        sum += p;
        sq += p * p;
      }
      const double sd = std::sqrt(std::max(0.0, sq / n - (sum / n) * (sum / n)));
      CHECK(std::abs(est.values()[q] - exact.values()[q]) <= 5.0 * sd / std::sqrt(n));
    }
  }

  TEST_CASE("realify examples") {
    Eigen::MatrixXcd q(3, 1);
    q << 1, -2, 0.5;
    std::vector<int> chosen;
    CHECK(realify(q, 3, &chosen) == q.real());
    CHECK(chosen[0] == 0);
    // i and -i both clear the imaginary part of i*v; the tie goes to the
    // smaller root index, so the result is -v.
    Eigen::MatrixXcd iv = Complex(0, 1) * q;
    CHECK((realify(iv, 4, &chosen) + q.real()).norm() < 1e-15);
    CHECK(chosen[0] == 1);
    // eta and -eta always leave the same imaginary residual, so for even m
    // the choice is never past m/2.
    (void)realify(Complex(0, -1) * q, 4, &chosen);
    CHECK(chosen[0] == 1);
  }

  TEST_CASE("realify picks the smallest imaginary residual") {
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto re = gaussian_vector(2 * s, 6), im = gaussian_vector(2 * s + 1, 6);
      Eigen::MatrixXcd q(6, 1);
      for (int j = 0; j < 6; ++j) q(j, 0) = Complex(re[static_cast<std::size_t>(j)], im[static_cast<std::size_t>(j)]);
      const int m = 3 + static_cast<int>(s % 4);
      std::vector<int> chosen;
      (void)realify(q, m, &chosen);
      const auto residual = [&](int t) {
        return (std::polar(1.0, 2.0 * std::numbers::pi * t / m) * q).imag().norm();
      };
      for (int t = 0; t < m; ++t) CHECK(residual(chosen[0]) <= residual(t) + 1e-12);
    }
  }

  TEST_CASE("recover_weights exponent round trip") {
    // q = omega^(1/m) mu with t = 1: beta = omega^((m-1)/m).
    GmmModel g;
    g.weights = Eigen::Vector2d(0.25, 0.75);
    g.means = Eigen::MatrixXd(3, 2);
    g.means << 1, -1, 2, 0.5, -1, 3;
    g.variances = Eigen::MatrixXd::Zero(3, 2);
    const auto mt = exact_moments(g, 1, omega_keys(3, 1));
    Eigen::MatrixXd qc = g.means;
    for (int i = 0; i < 2; ++i) qc.col(i) *= std::cbrt(g.weights(i));
    const auto est = recover_weights(qc, mt, 3);
    CHECK(est.beta(0) == doctest::Approx(std::pow(0.25, 2.0 / 3.0)));
    CHECK(est.beta(1) == doctest::Approx(std::pow(0.75, 2.0 / 3.0)));
    CHECK(est.omega(0) == doctest::Approx(0.25));
    CHECK(est.omega(1) == doctest::Approx(0.75));
    CHECK((est.mu - g.means).norm() < 1e-12);
  }

  TEST_CASE("recover_weights round trip over orders") {
    for (int m = 3; m <= 5; ++m)
      for (int t = 1; t <= 2 && t < m; ++t) {
        auto g = random_gmm(6, 3, static_cast<std::uint64_t>(10 * m + t));
        const auto mt = exact_moments(g, t, omega_keys(6, t));
        Eigen::MatrixXd qc = g.means;
        for (int i = 0; i < 3; ++i) qc.col(i) *= std::pow(g.weights(i), 1.0 / m);
        const auto est = recover_weights(qc, mt, m);
        CHECK((est.omega - g.weights).norm() <= 1e-10);
        CHECK((est.mu - g.means).norm() <= 1e-10);
      }
  }

  TEST_CASE("recover_weights single component and errors") {
    auto g = random_gmm(4, 1, 2);
    const auto mt = exact_moments(g, 1, omega_keys(4, 1));
    const auto est = recover_weights(g.means * 0.3, mt, 3);
    const Eigen::VectorXd normalized = est.omega / est.omega.sum();
    CHECK(normalized(0) == 1.0);
    try {
      (void)recover_weights(g.means, exact_moments(g, 3, omega_keys(4, 3)), 3);
      FAIL("expected OrderConflict");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::OrderConflict);
    }
    try {
      (void)recover_weights(-g.means, mt, 3);
      FAIL("expected DegenerateWeight");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateWeight);
    }
  }

  TEST_CASE("recover_covariances examples") {
    const auto g = one_component({1, 1, 1}, {4, 1, 1});
    const auto mm = exact_moments(g, 3, learning_keys(3, 3));
    const auto var = recover_covariances(mm, g.means, g.weights, g.means);
    CHECK((var - g.variances).norm() <= 1e-12);

    auto zero = random_gmm(5, 2, 9);
    zero.variances.setZero();
    const auto mz = exact_moments(zero, 3, learning_keys(5, 3));
    Eigen::MatrixXd qc = zero.means;
    for (int i = 0; i < 2; ++i) qc.col(i) *= std::cbrt(zero.weights(i));
    CHECK(recover_covariances(mz, qc, zero.weights, zero.means).norm() <= 1e-12);
  }

  TEST_CASE("refine_params on exact moments") {
    const auto g = random_gmm(8, 3, 5);
    const auto mm = exact_moments(g, 3, learning_keys(8, 3));
    const auto mt = exact_moments(g, 1, omega_keys(8, 1));
    const auto at_truth = refine_params(g.weights, g.means, mm, mt);
    CHECK(at_truth.final_cost <= 1e-24);
    CHECK((at_truth.mu - g.means).norm() <= 1e-10);

    Eigen::VectorXd w0 = g.weights.array() + 1e-3;
    w0 /= w0.sum();
    const Eigen::MatrixXd mu0 = g.means.array() + 1e-3;
    const auto r = refine_params(w0, mu0, mm, mt);
    CHECK(r.final_cost <= r.initial_cost);
    CHECK((r.omega - g.weights).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK((r.mu - g.means).cwiseAbs().maxCoeff() <= 1e-6);
  }

  TEST_CASE("refine_params never raises the objective") {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto g = random_gmm(6, 2, 100 + s);
      const auto mm = exact_moments(g, 3, learning_keys(6, 3));
      const auto mt = exact_moments(g, 1, omega_keys(6, 1));
      const auto start = random_gmm(6, 2, 500 + s);
      RefineOptions opts;
      opts.max_iters = 20;
      const auto r = refine_params(start.weights, start.means, mm, mt, opts);
      CHECK(r.final_cost <= r.initial_cost);
      CHECK(std::abs(r.omega.sum() - 1.0) <= 1e-12);
    }
  }

  TEST_CASE("learning from exact moments recovers the model") {
    const auto g = random_gmm(8, 3, 2024);
    const auto mm = exact_moments(g, 3, learning_keys(8, 3));
    const auto mt = exact_moments(g, 1, omega_keys(8, 1));
    const auto rep = learn_from_moments(mm, mt, 3);
    CHECK(parameter_error(g, rep.model) <= 1e-6);
    CHECK(rep.t == 1);
  }

  TEST_CASE("learning a single Gaussian") {
    const auto g = one_component({1.0, -0.5, 2.0, 0.3, 1.2, -1.0}, {0.5, 1.5, 1.0, 2.0, 0.7, 1.1});
    const auto s = sample_gmm(g, 200000, 3);
    const auto rep = learn(s, 1, 3);
    CHECK(rep.model.weights(0) == 1.0);
    CHECK((rep.model.means - g.means).cwiseAbs().maxCoeff() <= 0.05);
    CHECK((rep.model.variances - g.variances).cwiseAbs().maxCoeff() <= 0.1);
  }

  TEST_CASE("em single component closed form") {
    const auto g = one_component({1.0, -1.0}, {2.0, 0.5});
    const auto s = sample_gmm(g, 5000, 8);
    const auto em = em_baseline(s.data, 1);
    const Eigen::VectorXd mean = s.data.colwise().mean();
    const Eigen::VectorXd var = (s.data.rowwise() - mean.transpose()).array().square().colwise().mean();
    CHECK((em.model.means.col(0) - mean).norm() <= 1e-10);
    CHECK((em.model.variances.col(0) - (var.array() + 1e-3).matrix()).norm() <= 1e-10);
  }

  TEST_CASE("em log-likelihood is monotone") {
    const auto g = random_gmm(4, 3, 31);
    const auto s = sample_gmm(g, 4000, 32);
    EmOptions opts;
    opts.seed = 5;
    const auto em = em_baseline(s.data, 3, opts);
    for (std::size_t i = 1; i < em.log_likelihood.size(); ++i)
      CHECK(em.log_likelihood[i] >= em.log_likelihood[i - 1] - 1e-10);
  }

  TEST_CASE("em separates distant clusters") {
    GmmModel g;
    g.weights = Eigen::Vector2d(0.5, 0.5);
    g.means = Eigen::MatrixXd(2, 2);
    g.means << -5, 5, -5, 5;
    g.variances = Eigen::MatrixXd::Ones(2, 2);
    const auto s = sample_gmm(g, 4000, 77);
    const auto em = em_baseline(s.data, 2);
    CHECK(accuracy(classify(em.model, s.data), s.labels, 2) >= 0.99);
  }

  TEST_CASE("classify and accuracy") {
    GmmModel g;
    g.weights = Eigen::Vector3d(0.2, 0.3, 0.5);
    g.means = Eigen::MatrixXd(1, 3);
    g.means << -10, 0, 10;
    g.variances = Eigen::MatrixXd::Constant(1, 3, 1e-6);
    const auto s = sample_gmm(g, 3000, 1);
    CHECK(accuracy(classify(g, s.data), s.labels, 3) == 1.0);

    // Relabeling the components does not change accuracy.
    GmmModel perm = g;
    perm.weights = Eigen::Vector3d(0.5, 0.2, 0.3);
    perm.means << 10, -10, 0;
    CHECK(accuracy(classify(perm, s.data), s.labels, 3) == 1.0);
    CHECK(accuracy({0, 0, 1, 1}, {1, 1, 0, 0}, 2) == 1.0);
    CHECK(accuracy({0, 1, 0, 1}, {0, 0, 0, 0}, 2) == 0.5);

    const auto single = random_gmm(3, 1, 4);
    const auto s1 = sample_gmm(single, 100, 5);
    CHECK(accuracy(classify(single, s1.data), s1.labels, 1) == 1.0);
  }

  TEST_CASE("parameter_error ignores component order") {
    const auto g = random_gmm(4, 3, 6);
    GmmModel p = g;
    p.weights = Eigen::Vector3d(g.weights(2), g.weights(0), g.weights(1));
    p.means << g.means.col(2), g.means.col(0), g.means.col(1);
    p.variances << g.variances.col(2), g.variances.col(0), g.variances.col(1);
    CHECK(parameter_error(g, p) == 0.0);
  }
}
