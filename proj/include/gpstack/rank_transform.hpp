#pragma once

#include <cstdint>
#include <string>

#include "gpstack/errors.hpp"

namespace gpstack {

// Which sigmoid is used to map predicted latents back to rank scale.
// Exact is the algebraic inverse of the forward transform; Paper keeps
// the (n-1)-scaled sigmoid. Both induce the same ordering.
enum class BackTransform {
    Exact,
    Paper,
};

BackTransform back_transform_from_string(const std::string& s);
std::string to_string(BackTransform v);

// z = ln((y+1)/(n-y)) for integer rank y in [0, n-1], n >= 2.
// Maps uniform rank labels onto an unbounded, roughly Gaussian scale.
double rank_to_latent(std::int64_t y, std::int64_t n);

// s = (n-1)/(1+exp(-z)), the back-mapped score in (0, n-1).
double latent_to_score_paper(double z, std::int64_t n);

// Exact-inverse score: s = (n+1)*sigmoid(z) - 1, unrounded.
double latent_to_score_exact(double z, std::int64_t n);

// Back-maps a latent to an integer rank: score per the chosen variant,
// rounded to nearest (halves away from zero), clamped to [0, n-1].
std::int64_t latent_to_rank(double z, std::int64_t n,
                            BackTransform variant = BackTransform::Exact);

} // namespace gpstack
