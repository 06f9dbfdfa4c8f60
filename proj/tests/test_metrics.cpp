#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gpstack/metrics.hpp"
#include "gpstack/rng.hpp"

using namespace gpstack;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n, int grid) {
    std::vector<double> v(n);
    for (auto& x : v) {
        x = grid > 0 ? static_cast<double>(rng.next_below(static_cast<std::uint64_t>(grid)))
                     : rng.next_normal();
    }
    return v;
}

bool counts_equal(const TauCounts& a, const TauCounts& b) {
    return a.concordant == b.concordant && a.discordant == b.discordant && a.pairs == b.pairs &&
           a.ties_a == b.ties_a && a.ties_b == b.ties_b;
}

} // namespace

TEST_CASE("kendall tau: perfect concordance and reversal") {
    const std::vector<double> a{0.3, 1.5, 2.0, 7.25, 9.0};
    CHECK(kendall_tau_b(a, a) == 1.0);
    std::vector<double> rev(a.rbegin(), a.rend());
    CHECK(kendall_tau_b(a, rev) == -1.0);
}

TEST_CASE("kendall tau: hand-counted three-element case") {
    const std::vector<double> a{1, 2, 3};
    const std::vector<double> b{3, 1, 2};
    CHECK(kendall_tau_b(a, b) == -1.0 / 3.0);
    CHECK(kendall_tau(a, b, TauVariant::A) == -1.0 / 3.0);
}

TEST_CASE("kendall tau: symmetry and sign flip") {
    Rng rng(8);
    const auto a = random_vector(rng, 80, 9);
    const auto b = random_vector(rng, 80, 0);
    CHECK(kendall_tau_b(a, b) == kendall_tau_b(b, a));

    std::vector<double> neg_b(b.size());
    std::transform(b.begin(), b.end(), neg_b.begin(), [](double v) { return -v; });
    CHECK(kendall_tau_b(a, neg_b) == -kendall_tau_b(a, b)); // b tie-free
}

TEST_CASE("kendall tau: invariant under strictly increasing transforms") {
    Rng rng(21);
    const auto a = random_vector(rng, 120, 6);
    const auto b = random_vector(rng, 120, 4);
    const TauCounts base = tau_counts(a, b);

    std::vector<double> a2(a.size()), b2(b.size());
    std::transform(a.begin(), a.end(), a2.begin(), [](double v) { return std::exp(v); });
    std::transform(b.begin(), b.end(), b2.begin(), [](double v) { return 2.0 * v + 1.0; });
    CHECK(counts_equal(tau_counts(a2, b2), base));
}

TEST_CASE("kendall tau: merge-count path equals pairwise reference exactly") {
    Rng rng(1771);
    for (int round = 0; round < 60; ++round) {
        const std::size_t n = 2 + rng.next_below(800);
        const int grid = round % 3 == 0 ? 0 : static_cast<int>(2 + rng.next_below(12));
        const auto a = random_vector(rng, n, grid);
        const auto b = random_vector(rng, n, round % 2 == 0 ? grid : 0);
        const TauCounts fast = tau_counts(a, b);
        const TauCounts ref = tau_counts_reference(a, b);
        if (!counts_equal(fast, ref)) {
            FAIL("count mismatch at round " << round << " n=" << n);
        }
        CHECK(fast.concordant + fast.discordant <= fast.pairs);
    }
}

TEST_CASE("kendall tau: error cases") {
    const std::vector<double> ties{2.0, 2.0, 2.0};
    const std::vector<double> ok{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(kendall_tau_b(ties, ok), DataError);
    CHECK_THROWS_AS(kendall_tau_b(ok, ties), DataError);
    CHECK_THROWS_AS(kendall_tau_b(std::vector<double>{1.0}, std::vector<double>{2.0}), DataError);
    CHECK_THROWS_AS(kendall_tau_b(ok, std::vector<double>{1.0, 2.0}), DataError);
    // tau-a stays defined under ties as long as pairs exist
    CHECK(kendall_tau(ties, ok, TauVariant::A) == 0.0);
}

TEST_CASE("multi_rmse: zero on equal inputs, plain RMSE at dim 1") {
    Matrix pred(2, 1), target(2, 1);
    pred(0, 0) = 0.0;
    pred(1, 0) = 3.0;
    const std::vector<double> w{1.0, 1.0};
    CHECK(multi_rmse(pred, pred, w) == 0.0);
    CHECK(multi_rmse(pred, target, w) == doctest::Approx(std::sqrt(4.5)).epsilon(1e-15));
}

TEST_CASE("multi_rmse: weight concentrated on one row") {
    Matrix pred(3, 2), target(3, 2);
    pred(1, 0) = 3.0;
    pred(1, 1) = 4.0; // row error norm 5
    const std::vector<double> w{0.0, 2.5, 0.0};
    CHECK(multi_rmse(pred, target, w) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("multi_rmse: invariant under uniform weight scaling") {
    Rng rng(5);
    Matrix pred(10, 3), target(10, 3);
    std::vector<double> w(10);
    for (std::size_t i = 0; i < 10; ++i) {
        w[i] = rng.next_double() + 0.1;
        for (std::size_t d = 0; d < 3; ++d) {
            pred(i, d) = rng.next_normal();
            target(i, d) = rng.next_normal();
        }
    }
    const double base = multi_rmse(pred, target, w);
    std::vector<double> scaled = w;
    for (auto& x : scaled) x *= 7.5;
    CHECK(multi_rmse(pred, target, scaled) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("multi_rmse: error paths") {
    Matrix pred(2, 1), target(3, 1);
    CHECK_THROWS_AS(multi_rmse(pred, target, std::vector<double>{1, 1}), DataError);
    Matrix t2(2, 1);
    CHECK_THROWS_AS(multi_rmse(pred, t2, std::vector<double>{0.0, 0.0}), DataError);
    CHECK_THROWS_AS(multi_rmse(pred, t2, std::vector<double>{1.0, -1.0}), DataError);
}

TEST_CASE("per_task_report: means and ordering") {
    ScorePair perfect{"beta", {1, 2, 3}, {10, 20, 30}};
    ScorePair anti{"alpha", {1, 2, 3, 4}, {2, 1, 4, 3}};
    const TaskReport single = per_task_report({perfect});
    CHECK(single.mean_tau == 1.0);

    const TaskReport both = per_task_report({perfect, anti});
    CHECK(both.tasks[0].task_id == "alpha"); // stable id ordering
    CHECK(both.tasks[1].task_id == "beta");
    CHECK(both.mean_tau ==
          doctest::Approx(0.5 * (1.0 + kendall_tau_b(anti.predicted, anti.actual))));
}

TEST_CASE("per_task_report: eight tasks match the pairwise reference") {
    Rng rng(2024);
    std::vector<ScorePair> tasks;
    for (int t = 0; t < 8; ++t) {
        ScorePair pair;
        pair.task_id = "task_" + std::to_string(t);
        pair.predicted = random_vector(rng, 150, t % 2 ? 10 : 0);
        pair.actual = random_vector(rng, 150, 12);
        tasks.push_back(std::move(pair));
    }
    const TaskReport report = per_task_report(tasks);
    double mean = 0.0;
    for (const auto& score : report.tasks) {
        const auto& pair = *std::find_if(tasks.begin(), tasks.end(), [&](const ScorePair& p) {
            return p.task_id == score.task_id;
        });
        const double expected =
            tau_from_counts(tau_counts_reference(pair.predicted, pair.actual), TauVariant::B);
        CHECK(score.tau == expected);
        mean += expected;
    }
    CHECK(report.mean_tau == doctest::Approx(mean / 8.0).epsilon(1e-15));
}

TEST_CASE("per_task_report: task id attached to metric errors") {
    ScorePair bad{"broken", {1.0, 1.0}, {1.0, 2.0}};
    CHECK_THROWS_WITH_AS(per_task_report({bad}), doctest::Contains("broken"), DataError);
}
