// Benchmark comparing the serial reference kernels against the
// OpenMP-parallel ones: tree split search inside a full GBM fit, batch
// prediction, and the out-of-fold stacking grid. Also times the
// O(n log n) Kendall tau against the O(n^2) reference.

#include <chrono>
#include <cstdio>
#include <functional>

#include "gpstack/gbm.hpp"
#include "gpstack/metrics.hpp"
#include "gpstack/parallel.hpp"
#include "gpstack/rng.hpp"
#include "gpstack/stacking.hpp"

using namespace gpstack;

namespace {

double time_seconds(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return elapsed.count();
}

void report(const char* name, double serial_s, double parallel_s) {
    std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %.2fx\n", name, serial_s,
                parallel_s, serial_s / parallel_s);
}

Matrix random_matrix(std::size_t n, std::size_t d, Rng& rng) {
    Matrix x(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) x(i, j) = rng.next_double();
    return x;
}

} // namespace

int main() {
    std::printf("threads available: %d\n\n", max_threads());
    Rng rng(42);

    // Continuous features so exact split search has real work per node.
    const std::size_t n = 8000, d = 64;
    const Matrix x = random_matrix(n, d, rng);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = x(i, 0) * 2.0 - x(i, 3) + x(i, 5) * x(i, 7) + 0.1 * rng.next_normal();
    }

    GBMConfig fit_cfg;
    fit_cfg.name = "bench";
    fit_cfg.n_iterations = 20;
    fit_cfg.max_depth = 6;
    fit_cfg.learning_rate = 0.1;
    fit_cfg.seed = 7;

    GBMModel model;
    const double fit_serial = time_seconds([&] { model = gbm_fit(x, y, fit_cfg, Exec::Serial); });
    const double fit_parallel =
        time_seconds([&] { model = gbm_fit(x, y, fit_cfg, Exec::Parallel); });
    report("gbm fit (split search)", fit_serial, fit_parallel);

    const Matrix x_big = random_matrix(200000, d, rng);
    std::vector<double> preds_serial, preds_parallel;
    const double pred_serial =
        time_seconds([&] { preds_serial = gbm_predict(model, x_big, Exec::Serial); });
    const double pred_parallel =
        time_seconds([&] { preds_parallel = gbm_predict(model, x_big, Exec::Parallel); });
    report("gbm batch predict", pred_serial, pred_parallel);
    if (preds_serial != preds_parallel) {
        std::printf("ERROR: serial and parallel predictions diverge\n");
        return 1;
    }

    // Out-of-fold grid: K x pool cells.
    const std::size_t n_small = 600;
    Matrix x_small(n_small, d);
    std::vector<double> y_small(n_small);
    for (std::size_t i = 0; i < n_small; ++i) {
        for (std::size_t j = 0; j < d; ++j) x_small(i, j) = x(i, j);
        y_small[i] = y[i];
    }
    std::vector<GBMConfig> pool = submodel_pool();
    for (auto& cfg : pool) cfg.n_iterations = 60;
    const FoldSpec folds = make_folds(n_small, 5, 11);
    Matrix oof_serial, oof_parallel;
    const double oof_s = time_seconds(
        [&] { oof_serial = oof_predictions(pool, x_small, y_small, folds, Exec::Serial); });
    const double oof_p = time_seconds(
        [&] { oof_parallel = oof_predictions(pool, x_small, y_small, folds, Exec::Parallel); });
    report("out-of-fold grid", oof_s, oof_p);
    if (oof_serial.data() != oof_parallel.data()) {
        std::printf("ERROR: serial and parallel OOF matrices diverge\n");
        return 1;
    }

    // Kendall tau: merge-count path vs pairwise reference.
    const std::size_t tau_n = 20000;
    std::vector<double> a(tau_n), b(tau_n);
    for (std::size_t i = 0; i < tau_n; ++i) {
        a[i] = static_cast<double>(rng.next_below(400)); // plenty of ties
        b[i] = a[i] + 40.0 * rng.next_normal();
    }
    TauCounts fast, ref;
    const double tau_fast = time_seconds([&] { fast = tau_counts(a, b); });
    const double tau_ref = time_seconds([&] { ref = tau_counts_reference(a, b); });
    std::printf("%-28s fast   %8.3f s   reference %6.3f s   (n=%zu)\n", "kendall tau", tau_fast,
                tau_ref, tau_n);
    if (fast.concordant != ref.concordant || fast.discordant != ref.discordant) {
        std::printf("ERROR: tau paths disagree\n");
        return 1;
    }

    std::printf("\nall kernel pairs agree\n");
    return 0;
}
