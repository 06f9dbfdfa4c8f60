#pragma once

#include <vector>

#include "gpstack/matrix.hpp"

#include "json.hpp"

namespace gpstack {

// Data-driven Gaussian prior over linear weights: mean (X'X)^-1 X'Y,
// covariance sigma^2 (X'X)^-1, with ridge stabilization.
struct GPNASPrior {
    std::vector<double> mu0;              // prior weight mean, length d
    std::vector<std::vector<double>> sigma0; // prior weight covariance, d x d
    double noise_var = 1.0;               // observation noise sigma^2
    double ridge = 0.0;                   // lambda
};

struct GPNASModel {
    std::vector<double> mu;               // posterior weight mean
    std::vector<std::vector<double>> sigma; // posterior weight covariance
    double noise_var = 1.0;
    double ridge = 0.0;
};

// Fits the prior from data: A = X'X + lambda I, mu0 = A^-1 X'Y,
// sigma^2 = ||Y - X mu0||^2 / max(1, n - d) floored at 1e-12,
// sigma0 = sigma^2 A^-1. Requires n > d or lambda > 0.
GPNASPrior prior_from_data(const Matrix& x, std::span<const double> y, double ridge);

// Standard normal-normal conjugate update:
// Sigma = (Sigma0^-1 + X'X / s^2)^-1, mu = Sigma (Sigma0^-1 mu0 + X'Y / s^2).
// Zero rows of data returns the prior unchanged.
GPNASModel posterior_update(const GPNASPrior& prior, const Matrix& x,
                            std::span<const double> y);

// X mu per row.
std::vector<double> predict_mean(const GPNASModel& model, const Matrix& x);

// diag(X Sigma X') + s^2 per row; strictly positive.
std::vector<double> predict_variance(const GPNASModel& model, const Matrix& x);

nlohmann::json gpnas_to_json(const GPNASModel& model);
GPNASModel gpnas_from_json(const nlohmann::json& j);

} // namespace gpstack
