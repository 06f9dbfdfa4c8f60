#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpstack/encoding.hpp"
#include "gpstack/gbm.hpp"
#include "gpstack/gpnas.hpp"
#include "gpstack/rank_transform.hpp"
#include "gpstack/schema.hpp"

#include "json.hpp"

namespace gpstack {

struct FoldSpec {
    int k = 5;
    std::uint64_t seed = 0;
    std::vector<int> assignment; // per-row fold index in [0, k)

    std::size_t n() const { return assignment.size(); }
};

// Seeded shuffle of [0, n) dealt round-robin into k folds; fold sizes
// differ by at most one.
FoldSpec make_folds(std::size_t n, int k, std::uint64_t seed);

// Out-of-fold prediction matrix: M(i, j) is the prediction for row i
// by sub-model config j trained on every fold except row i's. The
// (fold, config) fit grid is embarrassingly parallel; each cell fills
// a disjoint block of M, so results are deterministic under either
// execution policy.
Matrix oof_predictions(const std::vector<GBMConfig>& configs, const Matrix& x,
                       std::span<const double> z, const FoldSpec& folds,
                       Exec exec = Exec::Parallel);

struct TransformSettings {
    std::size_t n_train = 0;
    BackTransform back_transform = BackTransform::Exact;
};

struct StackEnsemble {
    SearchSpaceSchema schema;
    ColumnMask column_mask;
    FoldSpec fold_spec;
    TransformSettings transform;
    std::vector<GBMModel> submodels; // full-data fits, order fixed
    GPNASModel meta;                 // weights over submodels + intercept
    double meta_ridge = 0.0;
};

// Full stacking fit: every sub-model fitted on all rows for inference,
// the meta-estimator fitted on out-of-fold predictions (plus an
// intercept column) via the data-driven prior and conjugate update.
// x is the reduced (masked) feature matrix; z the latent targets.
// When oof_out is non-null it receives the n x m out-of-fold matrix.
StackEnsemble fit_stack(const Matrix& x, std::span<const double> z,
                        const std::vector<GBMConfig>& pool, int k_folds, double meta_ridge,
                        std::uint64_t fold_seed, Exec exec = Exec::Parallel,
                        Matrix* oof_out = nullptr);

// Latent predictions for already-masked feature rows.
std::vector<double> stack_predict(const StackEnsemble& ensemble, const Matrix& x_reduced,
                                  Exec exec = Exec::Parallel);

// Per-submodel latent predictions (columns in submodel order), for
// diagnostics and single-model/average baselines.
Matrix submodel_predictions(const StackEnsemble& ensemble, const Matrix& x_reduced,
                            Exec exec = Exec::Parallel);

// Back-maps stacked latents to integer ranks against a population of
// size n_test. Ties are permitted.
std::vector<std::int64_t> predict_ranks(const StackEnsemble& ensemble, const Matrix& x_reduced,
                                        std::int64_t n_test, Exec exec = Exec::Parallel);

// Appends a constant-1 intercept column.
Matrix with_intercept(const Matrix& m);

nlohmann::json ensemble_to_json(const StackEnsemble& ensemble);
StackEnsemble ensemble_from_json(const nlohmann::json& j);

} // namespace gpstack
