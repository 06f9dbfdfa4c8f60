#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gpstack/errors.hpp"
#include "gpstack/matrix.hpp"

namespace gpstack {

enum class TauVariant {
    B, // tie-corrected denominator
    A, // plain n(n-1)/2 denominator
};

TauVariant tau_variant_from_string(const std::string& s);
std::string to_string(TauVariant v);

// Exact pair counts underlying Kendall's tau.
struct TauCounts {
    std::uint64_t concordant = 0;
    std::uint64_t discordant = 0;
    std::uint64_t pairs = 0;  // n(n-1)/2
    std::uint64_t ties_a = 0; // pairs tied in a (tied-in-both included)
    std::uint64_t ties_b = 0; // pairs tied in b (tied-in-both included)
};

// O(n log n) merge-count path (Knight's algorithm).
TauCounts tau_counts(std::span<const double> a, std::span<const double> b);

// O(n^2) pairwise reference, kept for testing; must agree with
// tau_counts on every integer count.
TauCounts tau_counts_reference(std::span<const double> a, std::span<const double> b);

// tau from counts. Throws DataError when the denominator vanishes
// (a vector is all ties).
double tau_from_counts(const TauCounts& c, TauVariant variant);

double kendall_tau_b(std::span<const double> a, std::span<const double> b);
double kendall_tau(std::span<const double> a, std::span<const double> b, TauVariant variant);

// Multivariate weighted RMSE:
// sqrt(sum_i sum_d (pred(i,d)-target(i,d))^2 * w_i / sum_i w_i).
double multi_rmse(const Matrix& pred, const Matrix& target, std::span<const double> weights);

struct ScorePair {
    std::string task_id;
    std::vector<double> predicted;
    std::vector<double> actual;
};

struct TaskScore {
    std::string task_id;
    std::size_t n = 0;
    double tau = 0.0;
};

struct TaskReport {
    std::vector<TaskScore> tasks; // ordered by task id
    double mean_tau = 0.0;

    std::string to_text() const;
};

TaskReport per_task_report(const std::vector<ScorePair>& tasks, TauVariant variant = TauVariant::B);

} // namespace gpstack
