#include "gpstack/gpnas.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "gpstack/errors.hpp"

namespace gpstack {

namespace {

constexpr double kNoiseFloor = 1e-12;

Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return out;
}

Eigen::VectorXd to_eigen(std::span<const double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

std::vector<double> from_eigen(const Eigen::VectorXd& v) {
    return {v.data(), v.data() + v.size()};
}

std::vector<std::vector<double>> from_eigen(const Eigen::MatrixXd& m) {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(m.cols()));
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    }
    return out;
}

Eigen::MatrixXd nested_to_eigen(const std::vector<std::vector<double>>& m, const char* what) {
    if (m.empty()) throw DataError(std::string(what) + ": empty matrix");
    const std::size_t d = m.size();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
        if (m[i].size() != d) throw DataError(std::string(what) + ": matrix not square");
        for (std::size_t j = 0; j < d; ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j];
    }
    return out;
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
    return 0.5 * (m + m.transpose());
}

// Inverse of a symmetric positive definite matrix via LLT; the LLT
// failing signals (numerical) singularity.
Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& m, const char* context) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw DataError(std::string(context) +
                        ": matrix is numerically singular or not positive definite; "
                        "use a ridge > 0");
    Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    return symmetrize(llt.solve(identity));
}

} // namespace

GPNASPrior prior_from_data(const Matrix& x, std::span<const double> y, double ridge) {
    if (x.rows() != y.size()) throw DataError("prior_from_data: row/target length mismatch");
    if (x.cols() == 0) throw DataError("prior_from_data: no columns");
    if (ridge < 0.0) throw ConfigError("prior_from_data: ridge must be >= 0");
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n < d && ridge == 0.0)
        throw DataError("prior_from_data: fewer rows than columns requires ridge > 0");

    const Eigen::MatrixXd xm = to_eigen(x);
    const Eigen::VectorXd yv = to_eigen(y);
    Eigen::MatrixXd a = xm.transpose() * xm;
    a.diagonal().array() += ridge;
    a = symmetrize(a);

    const Eigen::MatrixXd a_inv = spd_inverse(a, "prior_from_data");
    const Eigen::VectorXd mu0 = a_inv * (xm.transpose() * yv);

    const double rss = (yv - xm * mu0).squaredNorm();
    const double dof = static_cast<double>(n > d ? n - d : 1);
    const double noise_var = std::max(rss / dof, kNoiseFloor);

    GPNASPrior prior;
    prior.mu0 = from_eigen(mu0);
    prior.sigma0 = from_eigen(Eigen::MatrixXd(noise_var * a_inv));
    prior.noise_var = noise_var;
    prior.ridge = ridge;
    return prior;
}

GPNASModel posterior_update(const GPNASPrior& prior, const Matrix& x,
                            std::span<const double> y) {
    const Eigen::MatrixXd sigma0 = nested_to_eigen(prior.sigma0, "posterior_update");
    const std::size_t d = prior.mu0.size();
    if (static_cast<std::size_t>(sigma0.rows()) != d)
        throw DataError("posterior_update: prior mean/covariance dimension mismatch");
    if (!(prior.noise_var > 0.0)) throw DataError("posterior_update: noise_var must be > 0");

    if (x.rows() == 0) {
        return GPNASModel{prior.mu0, prior.sigma0, prior.noise_var, prior.ridge};
    }
    x.require_cols(d, "posterior_update");
    if (x.rows() != y.size()) throw DataError("posterior_update: row/target length mismatch");

    const Eigen::MatrixXd prior_precision = spd_inverse(sigma0, "posterior_update(prior)");
    const Eigen::MatrixXd xm = to_eigen(x);
    const Eigen::VectorXd yv = to_eigen(y);

    const Eigen::MatrixXd precision =
        symmetrize(prior_precision + (xm.transpose() * xm) / prior.noise_var);
    const Eigen::MatrixXd sigma = spd_inverse(precision, "posterior_update(posterior)");
    const Eigen::VectorXd mu =
        sigma * (prior_precision * to_eigen(prior.mu0) + (xm.transpose() * yv) / prior.noise_var);

    GPNASModel model;
    model.mu = from_eigen(mu);
    model.sigma = from_eigen(sigma);
    model.noise_var = prior.noise_var;
    model.ridge = prior.ridge;
    return model;
}

std::vector<double> predict_mean(const GPNASModel& model, const Matrix& x) {
    x.require_cols(model.mu.size(), "predict_mean");
    std::vector<double> out(x.rows(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < model.mu.size(); ++j) acc += x(i, j) * model.mu[j];
        out[i] = acc;
    }
    return out;
}

std::vector<double> predict_variance(const GPNASModel& model, const Matrix& x) {
    x.require_cols(model.mu.size(), "predict_variance");
    const Eigen::MatrixXd sigma = nested_to_eigen(model.sigma, "predict_variance");
    const Eigen::MatrixXd xm = to_eigen(x);
    const Eigen::VectorXd quad = ((xm * sigma).cwiseProduct(xm)).rowwise().sum();
    std::vector<double> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i)
        out[i] = quad(static_cast<Eigen::Index>(i)) + model.noise_var;
    return out;
}

nlohmann::json gpnas_to_json(const GPNASModel& model) {
    nlohmann::json j;
    j["mu"] = model.mu;
    j["sigma"] = model.sigma;
    j["noise_var"] = model.noise_var;
    j["ridge"] = model.ridge;
    return j;
}

GPNASModel gpnas_from_json(const nlohmann::json& j) {
    GPNASModel model;
    model.mu = j.at("mu").get<std::vector<double>>();
    model.sigma = j.at("sigma").get<std::vector<std::vector<double>>>();
    model.noise_var = j.at("noise_var").get<double>();
    model.ridge = j.at("ridge").get<double>();
    return model;
}

} // namespace gpstack
