#include "gpstack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gpstack {

TauVariant tau_variant_from_string(const std::string& s) {
    if (s == "b") return TauVariant::B;
    if (s == "a") return TauVariant::A;
    throw ConfigError("tau: expected 'b' or 'a', got '" + s + "'");
}

std::string to_string(TauVariant v) { return v == TauVariant::B ? "b" : "a"; }

namespace {

void check_inputs(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DataError("kendall tau: vectors differ in length");
    if (a.size() < 2) throw DataError("kendall tau: need at least 2 observations");
    for (double v : a)
        if (!std::isfinite(v)) throw DataError("kendall tau: non-finite value in first vector");
    for (double v : b)
        if (!std::isfinite(v)) throw DataError("kendall tau: non-finite value in second vector");
}

std::uint64_t tie_pairs(std::uint64_t run) { return run * (run - 1) / 2; }

// Counts inversions in v (pairs i<j with v[i] > v[j]) by merge sort.
std::uint64_t count_inversions(std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<double> buf(n);
    std::uint64_t inversions = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
            const std::size_t mid = lo + width;
            const std::size_t hi = std::min(lo + 2 * width, n);
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (v[j] < v[i]) {
                    inversions += mid - i;
                    buf[k++] = v[j++];
                } else {
                    buf[k++] = v[i++];
                }
            }
            while (i < mid) buf[k++] = v[i++];
            while (j < hi) buf[k++] = v[j++];
            std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                      buf.begin() + static_cast<std::ptrdiff_t>(hi),
                      v.begin() + static_cast<std::ptrdiff_t>(lo));
        }
    }
    return inversions;
}

} // namespace

TauCounts tau_counts(std::span<const double> a, std::span<const double> b) {
    check_inputs(a, b);
    const std::size_t n = a.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (a[x] != a[y]) return a[x] < a[y];
        return b[x] < b[y];
    });

    TauCounts c;
    c.pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;

    // Tie runs in a, and joint ties in (a, b).
    std::uint64_t joint_ties = 0;
    {
        std::size_t run_a = 1, run_ab = 1;
        for (std::size_t i = 1; i < n; ++i) {
            const bool same_a = a[order[i]] == a[order[i - 1]];
            const bool same_ab = same_a && b[order[i]] == b[order[i - 1]];
            if (same_a) {
                ++run_a;
            } else {
                c.ties_a += tie_pairs(run_a);
                run_a = 1;
            }
            if (same_ab) {
                ++run_ab;
            } else {
                joint_ties += tie_pairs(run_ab);
                run_ab = 1;
            }
        }
        c.ties_a += tie_pairs(run_a);
        joint_ties += tie_pairs(run_ab);
    }

    // Tie runs in b.
    {
        std::vector<double> sorted_b(b.begin(), b.end());
        std::sort(sorted_b.begin(), sorted_b.end());
        std::size_t run = 1;
        for (std::size_t i = 1; i < n; ++i) {
            if (sorted_b[i] == sorted_b[i - 1]) {
                ++run;
            } else {
                c.ties_b += tie_pairs(run);
                run = 1;
            }
        }
        c.ties_b += tie_pairs(run);
    }

    // With b ascending inside each a-tie run, every inversion of the
    // b sequence is a pair strictly increasing in a and strictly
    // decreasing in b: a discordant pair.
    std::vector<double> b_in_a_order(n);
    for (std::size_t i = 0; i < n; ++i) b_in_a_order[i] = b[order[i]];
    c.discordant = count_inversions(b_in_a_order);

    const std::uint64_t not_tied = c.pairs - c.ties_a - c.ties_b + joint_ties;
    c.concordant = not_tied - c.discordant;
    return c;
}

TauCounts tau_counts_reference(std::span<const double> a, std::span<const double> b) {
    check_inputs(a, b);
    const std::size_t n = a.size();
    TauCounts c;
    c.pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool tie_a = a[i] == a[j];
            const bool tie_b = b[i] == b[j];
            if (tie_a) ++c.ties_a;
            if (tie_b) ++c.ties_b;
            if (tie_a || tie_b) continue;
            const bool up_a = a[i] < a[j];
            const bool up_b = b[i] < b[j];
            if (up_a == up_b) {
                ++c.concordant;
            } else {
                ++c.discordant;
            }
        }
    }
    return c;
}

double tau_from_counts(const TauCounts& c, TauVariant variant) {
    const double numer =
        static_cast<double>(c.concordant) - static_cast<double>(c.discordant);
    if (variant == TauVariant::A) {
        if (c.pairs == 0) throw DataError("kendall tau: no pairs");
        return numer / static_cast<double>(c.pairs);
    }
    const double da = static_cast<double>(c.pairs - c.ties_a);
    const double db = static_cast<double>(c.pairs - c.ties_b);
    if (da == 0.0 || db == 0.0)
        throw DataError("kendall tau undefined: a vector is all ties");
    return numer / std::sqrt(da * db);
}

double kendall_tau_b(std::span<const double> a, std::span<const double> b) {
    return tau_from_counts(tau_counts(a, b), TauVariant::B);
}

double kendall_tau(std::span<const double> a, std::span<const double> b, TauVariant variant) {
    return tau_from_counts(tau_counts(a, b), variant);
}

double multi_rmse(const Matrix& pred, const Matrix& target, std::span<const double> weights) {
    if (pred.rows() != target.rows() || pred.cols() != target.cols())
        throw DataError("multi_rmse: shape mismatch");
    if (weights.size() != pred.rows()) throw DataError("multi_rmse: weight length mismatch");

    double total_weight = 0.0;
    double accum = 0.0;
    for (std::size_t i = 0; i < pred.rows(); ++i) {
        if (weights[i] < 0.0) throw DataError("multi_rmse: negative weight");
        total_weight += weights[i];
        double row = 0.0;
        for (std::size_t d = 0; d < pred.cols(); ++d) {
            const double e = pred(i, d) - target(i, d);
            row += e * e;
        }
        accum += row * weights[i];
    }
    if (total_weight <= 0.0) throw DataError("multi_rmse: total weight is zero");
    return std::sqrt(accum / total_weight);
}

TaskReport per_task_report(const std::vector<ScorePair>& tasks, TauVariant variant) {
    if (tasks.empty()) throw DataError("per_task_report: no tasks");
    TaskReport report;
    report.tasks.reserve(tasks.size());
    for (const auto& pair : tasks) {
        try {
            TaskScore score;
            score.task_id = pair.task_id;
            score.n = pair.predicted.size();
            score.tau = kendall_tau(pair.predicted, pair.actual, variant);
            report.tasks.push_back(score);
        } catch (const Error& e) {
            throw DataError("task '" + pair.task_id + "': " + e.what());
        }
    }
    std::sort(report.tasks.begin(), report.tasks.end(),
              [](const TaskScore& x, const TaskScore& y) { return x.task_id < y.task_id; });
    double sum = 0.0;
    for (const auto& t : report.tasks) sum += t.tau;
    report.mean_tau = sum / static_cast<double>(report.tasks.size());
    return report;
}

std::string TaskReport::to_text() const {
    std::ostringstream out;
    out << "task\tn\ttau\n";
    for (const auto& t : tasks) {
        out << t.task_id << "\t" << t.n << "\t" << t.tau << "\n";
    }
    out << "mean\t-\t" << mean_tau << "\n";
    return out.str();
}

} // namespace gpstack
