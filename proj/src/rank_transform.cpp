#include "gpstack/rank_transform.hpp"

#include <algorithm>
#include <cmath>

namespace gpstack {

BackTransform back_transform_from_string(const std::string& s) {
    if (s == "exact") return BackTransform::Exact;
    if (s == "paper") return BackTransform::Paper;
    throw ConfigError("back_transform: expected 'exact' or 'paper', got '" + s + "'");
}

std::string to_string(BackTransform v) {
    return v == BackTransform::Exact ? "exact" : "paper";
}

double rank_to_latent(std::int64_t y, std::int64_t n) {
    if (n < 2) throw DataError("rank_to_latent: population size must be >= 2");
    if (y < 0 || y > n - 1) {
        throw DataError("rank_to_latent: rank " + std::to_string(y) + " outside [0, " +
                        std::to_string(n - 1) + "]");
    }
    return std::log(static_cast<double>(y + 1) / static_cast<double>(n - y));
}

namespace {

double sigmoid(double z) {
    // Symmetric, saturation-safe evaluation.
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace

double latent_to_score_paper(double z, std::int64_t n) {
    if (n < 2) throw DataError("latent_to_score: population size must be >= 2");
    return static_cast<double>(n - 1) * sigmoid(z);
}

double latent_to_score_exact(double z, std::int64_t n) {
    if (n < 2) throw DataError("latent_to_score: population size must be >= 2");
    return static_cast<double>(n + 1) * sigmoid(z) - 1.0;
}

std::int64_t latent_to_rank(double z, std::int64_t n, BackTransform variant) {
    const double score =
        variant == BackTransform::Exact ? latent_to_score_exact(z, n) : latent_to_score_paper(z, n);
    const double rounded = std::round(score); // halves away from zero
    const double clamped = std::clamp(rounded, 0.0, static_cast<double>(n - 1));
    return static_cast<std::int64_t>(clamped);
}

} // namespace gpstack
