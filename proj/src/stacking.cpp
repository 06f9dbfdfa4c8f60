#include "gpstack/stacking.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>

#include "gpstack/rng.hpp"

namespace gpstack {

namespace {

// Runs fn(0..n-1) under the chosen policy. Iterations must write
// disjoint outputs. Exceptions are captured and rethrown after the
// region so they never cross the OpenMP boundary.
template <typename Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
    if (exec == Exec::Parallel) {
        std::atomic<bool> failed{false};
        std::exception_ptr error = nullptr;
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            if (failed.load(std::memory_order_relaxed)) continue;
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
                if (!failed.exchange(true)) {
#pragma omp critical(gpstack_for_each_index)
                    error = std::current_exception();
                }
            }
        }
        if (error) std::rethrow_exception(error);
    } else {
        for (std::size_t i = 0; i < n; ++i) fn(i);
    }
}

} // namespace

FoldSpec make_folds(std::size_t n, int k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("make_folds: K must be >= 2");
    if (static_cast<std::size_t>(k) > n)
        throw DataError("make_folds: K = " + std::to_string(k) + " exceeds n = " +
                        std::to_string(n));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);

    FoldSpec spec;
    spec.k = k;
    spec.seed = seed;
    spec.assignment.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        spec.assignment[order[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
    return spec;
}

Matrix oof_predictions(const std::vector<GBMConfig>& configs, const Matrix& x,
                       std::span<const double> z, const FoldSpec& folds, Exec exec) {
    const std::size_t n = x.rows();
    const std::size_t m = configs.size();
    if (m == 0) throw ConfigError("oof_predictions: empty sub-model pool");
    if (folds.assignment.size() != n) throw DataError("oof_predictions: fold spec size mismatch");
    if (z.size() != n) throw DataError("oof_predictions: target length mismatch");

    // Row partition by fold.
    std::vector<std::vector<std::size_t>> fold_rows(static_cast<std::size_t>(folds.k));
    for (std::size_t i = 0; i < n; ++i)
        fold_rows[static_cast<std::size_t>(folds.assignment[i])].push_back(i);
    for (const auto& rows : fold_rows) {
        if (n - rows.size() < 2)
            throw DataError("oof_predictions: training complement has fewer than 2 rows");
    }

    Matrix meta(n, m);
    const std::size_t cells = static_cast<std::size_t>(folds.k) * m;
    for_each_index(cells, exec, [&](std::size_t cell) {
        const std::size_t fold = cell / m;
        const std::size_t j = cell % m;
        const auto& held_out = fold_rows[fold];
        if (held_out.empty()) return;

        std::vector<std::size_t> train_rows;
        train_rows.reserve(n - held_out.size());
        for (std::size_t i = 0; i < n; ++i)
            if (folds.assignment[i] != static_cast<int>(fold)) train_rows.push_back(i);

        Matrix x_train(train_rows.size(), x.cols());
        std::vector<double> z_train(train_rows.size());
        for (std::size_t r = 0; r < train_rows.size(); ++r) {
            for (std::size_t c = 0; c < x.cols(); ++c) x_train(r, c) = x(train_rows[r], c);
            z_train[r] = z[train_rows[r]];
        }

        Matrix x_held(held_out.size(), x.cols());
        for (std::size_t r = 0; r < held_out.size(); ++r)
            for (std::size_t c = 0; c < x.cols(); ++c) x_held(r, c) = x(held_out[r], c);

        try {
            // Inner fits run serial: the grid is the parallel axis.
            const GBMModel model = gbm_fit(x_train, z_train, configs[j], Exec::Serial);
            const std::vector<double> preds = gbm_predict(model, x_held, Exec::Serial);
            for (std::size_t r = 0; r < held_out.size(); ++r) meta(held_out[r], j) = preds[r];
        } catch (const ConfigError& e) {
            throw ConfigError("sub-model '" + configs[j].name + "', fold " +
                              std::to_string(fold) + ": " + e.what());
        } catch (const Error& e) {
            throw DataError("sub-model '" + configs[j].name + "', fold " + std::to_string(fold) +
                            ": " + e.what());
        }
    });
    return meta;
}

Matrix with_intercept(const Matrix& m) {
    Matrix out(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
        out(i, m.cols()) = 1.0;
    }
    return out;
}

StackEnsemble fit_stack(const Matrix& x, std::span<const double> z,
                        const std::vector<GBMConfig>& pool, int k_folds, double meta_ridge,
                        std::uint64_t fold_seed, Exec exec, Matrix* oof_out) {
    if (pool.empty()) throw ConfigError("fit_stack: empty sub-model pool");
    if (x.rows() != z.size()) throw DataError("fit_stack: target length mismatch");

    StackEnsemble ensemble;
    ensemble.fold_spec = make_folds(x.rows(), k_folds, fold_seed);
    ensemble.meta_ridge = meta_ridge;

    // Inference sub-models: full-data fits.
    ensemble.submodels.resize(pool.size());
    for_each_index(pool.size(), exec, [&](std::size_t j) {
        try {
            ensemble.submodels[j] = gbm_fit(x, z, pool[j], Exec::Serial);
        } catch (const ConfigError& e) {
            throw ConfigError("sub-model '" + pool[j].name + "': " + e.what());
        } catch (const Error& e) {
            throw DataError("sub-model '" + pool[j].name + "': " + e.what());
        }
    });

    // Meta level: out-of-fold predictions with an intercept column.
    Matrix oof = oof_predictions(pool, x, z, ensemble.fold_spec, exec);
    const Matrix meta_features = with_intercept(oof);
    if (oof_out) *oof_out = std::move(oof);
    const GPNASPrior prior = prior_from_data(meta_features, z, meta_ridge);
    ensemble.meta = posterior_update(prior, meta_features, z);
    return ensemble;
}

Matrix submodel_predictions(const StackEnsemble& ensemble, const Matrix& x_reduced, Exec exec) {
    Matrix preds(x_reduced.rows(), ensemble.submodels.size());
    for (std::size_t j = 0; j < ensemble.submodels.size(); ++j) {
        const std::vector<double> col = gbm_predict(ensemble.submodels[j], x_reduced, exec);
        for (std::size_t i = 0; i < x_reduced.rows(); ++i) preds(i, j) = col[i];
    }
    return preds;
}

std::vector<double> stack_predict(const StackEnsemble& ensemble, const Matrix& x_reduced,
                                  Exec exec) {
    const Matrix meta_features = with_intercept(submodel_predictions(ensemble, x_reduced, exec));
    return predict_mean(ensemble.meta, meta_features);
}

std::vector<std::int64_t> predict_ranks(const StackEnsemble& ensemble, const Matrix& x_reduced,
                                        std::int64_t n_test, Exec exec) {
    if (n_test < 2) throw DataError("predict_ranks: population size must be >= 2");
    const std::vector<double> latents = stack_predict(ensemble, x_reduced, exec);
    std::vector<std::int64_t> ranks(latents.size());
    for (std::size_t i = 0; i < latents.size(); ++i)
        ranks[i] = latent_to_rank(latents[i], n_test, ensemble.transform.back_transform);
    return ranks;
}

nlohmann::json ensemble_to_json(const StackEnsemble& ensemble) {
    nlohmann::json j;
    j["format"] = "gpstack-ensemble";
    j["version"] = 1;
    j["schema"] = {
        {"max_layers", ensemble.schema.max_layers},
        {"depth_symbols", std::string(ensemble.schema.depth_symbols.begin(),
                                      ensemble.schema.depth_symbols.end())},
        {"includes_embed_column", ensemble.schema.includes_embed_column},
    };
    j["column_mask"] = {
        {"input_width", ensemble.column_mask.input_width},
        {"kept", ensemble.column_mask.kept},
        {"kept_names", ensemble.column_mask.kept_names},
        {"dropped_names", ensemble.column_mask.dropped_names},
    };
    j["fold_spec"] = {
        {"k", ensemble.fold_spec.k},
        {"seed", ensemble.fold_spec.seed},
        {"n", ensemble.fold_spec.assignment.size()},
    };
    j["transform"] = {
        {"n_train", ensemble.transform.n_train},
        {"back_transform", to_string(ensemble.transform.back_transform)},
    };
    j["meta_ridge"] = ensemble.meta_ridge;
    nlohmann::json models = nlohmann::json::array();
    for (const GBMModel& model : ensemble.submodels) models.push_back(gbm_to_json(model));
    j["submodels"] = std::move(models);
    j["meta"] = gpnas_to_json(ensemble.meta);
    return j;
}

StackEnsemble ensemble_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "gpstack-ensemble")
        throw DataError("ensemble_from_json: not a gpstack-ensemble document");
    if (j.at("version").get<int>() != 1)
        throw DataError("ensemble_from_json: unsupported version");

    StackEnsemble ensemble;
    const auto& schema = j.at("schema");
    ensemble.schema.max_layers = schema.at("max_layers").get<int>();
    const auto symbols = schema.at("depth_symbols").get<std::string>();
    ensemble.schema.depth_symbols.assign(symbols.begin(), symbols.end());
    ensemble.schema.includes_embed_column = schema.at("includes_embed_column").get<bool>();

    const auto& mask = j.at("column_mask");
    ensemble.column_mask.input_width = mask.at("input_width").get<std::size_t>();
    ensemble.column_mask.kept = mask.at("kept").get<std::vector<std::size_t>>();
    ensemble.column_mask.kept_names = mask.at("kept_names").get<std::vector<std::string>>();
    ensemble.column_mask.dropped_names =
        mask.at("dropped_names").get<std::vector<std::string>>();

    const auto& folds = j.at("fold_spec");
    ensemble.fold_spec =
        make_folds(folds.at("n").get<std::size_t>(), folds.at("k").get<int>(),
                   folds.at("seed").get<std::uint64_t>());

    const auto& transform = j.at("transform");
    ensemble.transform.n_train = transform.at("n_train").get<std::size_t>();
    ensemble.transform.back_transform =
        back_transform_from_string(transform.at("back_transform").get<std::string>());

    ensemble.meta_ridge = j.at("meta_ridge").get<double>();
    for (const auto& model : j.at("submodels"))
        ensemble.submodels.push_back(gbm_from_json(model));
    ensemble.meta = gpnas_from_json(j.at("meta"));

    if (ensemble.meta.mu.size() != ensemble.submodels.size() + 1)
        throw DataError("ensemble_from_json: meta dimension does not match sub-model count");
    return ensemble;
}

} // namespace gpstack
