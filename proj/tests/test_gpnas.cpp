#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "gpstack/gpnas.hpp"
#include "gpstack/rng.hpp"

using namespace gpstack;

namespace {

Matrix random_design(Rng& rng, std::size_t n, std::size_t d) {
    Matrix x(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) x(i, j) = rng.next_normal();
    return x;
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return out;
}

Eigen::MatrixXd nested(const std::vector<std::vector<double>>& m) {
    Eigen::MatrixXd out(m.size(), m[0].size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j];
    return out;
}

} // namespace

TEST_CASE("prior_from_data: identity design recovers the targets") {
    Matrix x(2, 2);
    x(0, 0) = 1.0;
    x(1, 1) = 1.0;
    const std::vector<double> y{3.0, 5.0};
    const auto prior = prior_from_data(x, y, 0.0);
    CHECK(prior.mu0[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(prior.mu0[1] == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(prior.noise_var == 1e-12); // floored: perfect fit but n == d guard path not hit
    CHECK(prior.sigma0[0][0] == doctest::Approx(prior.noise_var).epsilon(1e-9));
    CHECK(prior.sigma0[0][1] == doctest::Approx(0.0));
}

TEST_CASE("prior_from_data: perfect line has exact least-squares mean") {
    Matrix x(3, 2);
    for (std::size_t i = 0; i < 3; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = static_cast<double>(i);
    }
    const std::vector<double> y{1.0, 3.0, 5.0};
    const auto prior = prior_from_data(x, y, 0.0);
    CHECK(prior.mu0[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(prior.mu0[1] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(prior.noise_var == 1e-12); // residuals vanish, floor applies

    // prediction surface: line evaluated at a new point
    GPNASModel as_model{prior.mu0, prior.sigma0, prior.noise_var, prior.ridge};
    Matrix probe(1, 2);
    probe(0, 0) = 1.0;
    probe(0, 1) = 3.0;
    CHECK(predict_mean(as_model, probe)[0] == doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("prior_from_data: huge ridge shrinks the mean to zero") {
    Rng rng(17);
    const Matrix x = random_design(rng, 20, 3);
    std::vector<double> y(20);
    for (auto& v : y) v = rng.next_normal() * 3.0;
    const auto prior = prior_from_data(x, y, 1e12);
    for (double w : prior.mu0) CHECK(std::abs(w) < 1e-6);
}

TEST_CASE("prior_from_data: error paths") {
    Rng rng(3);
    const Matrix wide = random_design(rng, 3, 5);
    std::vector<double> y{1.0, 2.0, 3.0};
    CHECK_THROWS_WITH_AS(prior_from_data(wide, y, 0.0), doctest::Contains("ridge"), DataError);
    CHECK_NOTHROW(prior_from_data(wide, y, 1e-3));

    // duplicated column makes X'X singular at ridge 0
    Matrix dup(4, 2);
    for (std::size_t i = 0; i < 4; ++i) {
        dup(i, 0) = static_cast<double>(i);
        dup(i, 1) = static_cast<double>(i);
    }
    std::vector<double> y4{0.0, 1.0, 2.0, 3.0};
    CHECK_THROWS_WITH_AS(prior_from_data(dup, y4, 0.0), doctest::Contains("ridge"), DataError);
}

TEST_CASE("posterior_update: vague prior recovers least squares") {
    Rng rng(29);
    const std::size_t n = 30, d = 3;
    const Matrix x = random_design(rng, n, d);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = 2.0 * x(i, 0) - x(i, 1) + 0.5 * x(i, 2) + 0.01 * rng.next_normal();

    GPNASPrior vague;
    vague.mu0.assign(d, 0.0);
    vague.sigma0.assign(d, std::vector<double>(d, 0.0));
    for (std::size_t j = 0; j < d; ++j) vague.sigma0[j][j] = 1e12;
    vague.noise_var = 1.0;

    const auto model = posterior_update(vague, x, y);

    const Eigen::MatrixXd xe = to_eigen(x);
    const Eigen::VectorXd ye = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
    const Eigen::VectorXd ls = (xe.transpose() * xe).ldlt().solve(xe.transpose() * ye);
    for (std::size_t j = 0; j < d; ++j)
        CHECK(model.mu[j] == doctest::Approx(ls(static_cast<Eigen::Index>(j))).epsilon(1e-5));
}

TEST_CASE("posterior_update: zero rows returns the prior unchanged") {
    GPNASPrior prior;
    prior.mu0 = {1.0, -2.0};
    prior.sigma0 = {{2.0, 0.5}, {0.5, 1.0}};
    prior.noise_var = 0.7;
    const Matrix empty(0, 2);
    const auto model = posterior_update(prior, empty, {});
    CHECK(model.mu == prior.mu0);
    CHECK(model.sigma == prior.sigma0);
    CHECK(model.noise_var == prior.noise_var);
}

TEST_CASE("posterior_update: matches a dense-solve oracle") {
    Rng rng(101);
    const std::size_t n = 4, d = 2;
    const Matrix x = random_design(rng, n, d);
    std::vector<double> y(n);
    for (auto& v : y) v = rng.next_normal();

    GPNASPrior prior;
    prior.mu0 = {0.3, -0.1};
    prior.sigma0 = {{1.5, 0.2}, {0.2, 0.8}};
    prior.noise_var = 0.5;

    const auto model = posterior_update(prior, x, y);

    const Eigen::MatrixXd xe = to_eigen(x);
    const Eigen::VectorXd ye = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
    const Eigen::MatrixXd s0 = nested(prior.sigma0);
    const Eigen::VectorXd m0 = Eigen::Map<const Eigen::VectorXd>(prior.mu0.data(), d);
    const Eigen::MatrixXd precision =
        s0.fullPivLu().inverse() + xe.transpose() * xe / prior.noise_var;
    const Eigen::MatrixXd sigma = precision.fullPivLu().inverse();
    const Eigen::VectorXd mu =
        sigma * (s0.fullPivLu().inverse() * m0 + xe.transpose() * ye / prior.noise_var);

    for (std::size_t i = 0; i < d; ++i) {
        CHECK(model.mu[i] == doctest::Approx(mu(static_cast<Eigen::Index>(i))).epsilon(1e-8));
        for (std::size_t j = 0; j < d; ++j)
            CHECK(model.sigma[i][j] ==
                  doctest::Approx(sigma(static_cast<Eigen::Index>(i),
                                        static_cast<Eigen::Index>(j)))
                      .epsilon(1e-8));
    }
}

TEST_CASE("posterior_update: non positive definite prior covariance is an error") {
    GPNASPrior prior;
    prior.mu0 = {0.0, 0.0};
    prior.sigma0 = {{1.0, 2.0}, {2.0, 1.0}}; // eigenvalues 3, -1
    prior.noise_var = 1.0;
    Matrix x(1, 2);
    x(0, 0) = 1.0;
    CHECK_THROWS_AS(posterior_update(prior, x, std::vector<double>{1.0}), DataError);
}

TEST_CASE("property: posterior covariance is symmetric PSD") {
    Rng rng(55);
    for (int round = 0; round < 25; ++round) {
        const std::size_t n = 2 + rng.next_below(39);
        const std::size_t d = 1 + rng.next_below(6);
        const Matrix x = random_design(rng, n, d);
        std::vector<double> y(n);
        for (auto& v : y) v = rng.next_normal();
        const double ridge = n <= d ? 1e-2 : (round % 2 ? 1e-3 : 1e-1);
        const auto prior = prior_from_data(x, y, ridge);
        const auto model = posterior_update(prior, x, y);

        const Eigen::MatrixXd sigma = nested(model.sigma);
        CHECK((sigma - sigma.transpose()).cwiseAbs().maxCoeff() < 1e-10);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("property: batch update equals sequential update") {
    Rng rng(66);
    const std::size_t n = 24, d = 4;
    const Matrix x = random_design(rng, n, d);
    std::vector<double> y(n);
    for (auto& v : y) v = rng.next_normal();

    const auto prior = prior_from_data(x, y, 1e-3);
    const auto batch = posterior_update(prior, x, y);

    const std::size_t half = n / 2;
    Matrix x1(half, d), x2(n - half, d);
    std::vector<double> y1(half), y2(n - half);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < half) {
            for (std::size_t j = 0; j < d; ++j) x1(i, j) = x(i, j);
            y1[i] = y[i];
        } else {
            for (std::size_t j = 0; j < d; ++j) x2(i - half, j) = x(i, j);
            y2[i - half] = y[i];
        }
    }
    const auto first = posterior_update(prior, x1, y1);
    const GPNASPrior mid{first.mu, first.sigma, first.noise_var, first.ridge};
    const auto sequential = posterior_update(mid, x2, y2);

    for (std::size_t i = 0; i < d; ++i) {
        CHECK(sequential.mu[i] == doctest::Approx(batch.mu[i]).epsilon(1e-8));
        for (std::size_t j = 0; j < d; ++j)
            CHECK(sequential.sigma[i][j] == doctest::Approx(batch.sigma[i][j]).epsilon(1e-8));
    }
}

TEST_CASE("predict_mean: zero weights, identity design, linearity") {
    GPNASModel model;
    model.mu = {0.0, 0.0};
    model.sigma = {{0.0, 0.0}, {0.0, 0.0}};
    Matrix x(3, 2, 1.0);
    for (double v : predict_mean(model, x)) CHECK(v == 0.0);

    model.mu = {3.0, 5.0};
    Matrix id(2, 2);
    id(0, 0) = 1.0;
    id(1, 1) = 1.0;
    const auto p = predict_mean(model, id);
    CHECK(p[0] == 3.0);
    CHECK(p[1] == 5.0);

    Rng rng(2);
    Matrix a = random_design(rng, 4, 2);
    Matrix combo(4, 2);
    const double ca = 2.5, cb = -1.5;
    Matrix b = random_design(rng, 4, 2);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 2; ++j) combo(i, j) = ca * a(i, j) + cb * b(i, j);
    const auto pa = predict_mean(model, a);
    const auto pb = predict_mean(model, b);
    const auto pc = predict_mean(model, combo);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(pc[i] == doctest::Approx(ca * pa[i] + cb * pb[i]).epsilon(1e-12));
}

TEST_CASE("predict_mean: shape mismatch is an error") {
    GPNASModel model;
    model.mu = {1.0, 2.0, 3.0};
    Matrix x(2, 2);
    CHECK_THROWS_AS(predict_mean(model, x), DataError);
}

TEST_CASE("predict_variance: noise floor, quadratic scaling, oracle") {
    GPNASModel model;
    model.mu = {0.0, 0.0};
    model.sigma = {{0.0, 0.0}, {0.0, 0.0}};
    model.noise_var = 1.0;
    Matrix x(3, 2, 0.5);
    for (double v : predict_variance(model, x)) CHECK(v == 1.0);

    model.sigma = {{1.0, 0.0}, {0.0, 1.0}};
    model.noise_var = 0.0;
    Matrix row(2, 2);
    row(0, 0) = 1.0;
    row(0, 1) = 2.0;
    row(1, 0) = 2.0;
    row(1, 1) = 4.0;
    const auto v = predict_variance(model, row);
    CHECK(v[1] == doctest::Approx(4.0 * v[0]).epsilon(1e-12));

    model.sigma = {{1.5, 0.3}, {0.3, 0.9}};
    model.noise_var = 0.25;
    Rng rng(77);
    const Matrix probe = random_design(rng, 5, 2);
    const auto vars = predict_variance(model, probe);
    for (std::size_t i = 0; i < 5; ++i) {
        const double x0 = probe(i, 0), x1 = probe(i, 1);
        const double quad = 1.5 * x0 * x0 + 2.0 * 0.3 * x0 * x1 + 0.9 * x1 * x1;
        CHECK(vars[i] == doctest::Approx(quad + 0.25).epsilon(1e-10));
        CHECK(vars[i] > 0.0);
    }
}
