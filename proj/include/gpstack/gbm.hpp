#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpstack/matrix.hpp"
#include "gpstack/parallel.hpp"

#include "json.hpp"

namespace gpstack {

enum class Loss {
    SquaredError,
    Huber,
};

Loss loss_from_string(const std::string& s);
std::string to_string(Loss loss);

struct GBMConfig {
    std::string name = "gbm";
    Loss loss = Loss::SquaredError;
    double huber_delta = 1.0;      // only read for Loss::Huber
    double learning_rate = 0.1;    // in (0, 1]
    int n_iterations = 100;        // >= 1
    int max_depth = 4;             // >= 1
    int min_samples_leaf = 1;      // >= 1
    double subsample = 1.0;        // row fraction per iteration, in (0, 1]
    int n_bins = 0;                // 0 = exact splits, otherwise >= 2
    std::uint64_t seed = 0;

    bool histogram_mode() const { return n_bins != 0; }
    void validate() const; // throws ConfigError naming the offending field
};

// Flattened binary tree. split_feature == -1 marks a leaf.
struct TreeNode {
    int split_feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
};

struct RegressionTree {
    std::vector<TreeNode> nodes; // node 0 is the root; empty tree predicts 0

    double predict_row(std::span<const double> row) const {
        if (nodes.empty()) return 0.0;
        int at = 0;
        while (nodes[at].split_feature >= 0) {
            const TreeNode& nd = nodes[at];
            at = row[static_cast<std::size_t>(nd.split_feature)] <= nd.threshold ? nd.left
                                                                                 : nd.right;
        }
        return nodes[at].value;
    }
};

struct GBMModel {
    GBMConfig config; // snapshot taken at fit time
    double base_prediction = 0.0;
    double shrinkage = 0.1;
    std::size_t n_features = 0;
    std::vector<RegressionTree> trees;
};

// Equal-frequency candidate thresholds per feature, computed once on
// the training set for histogram mode, together with the prebinned
// code of every (row, feature) cell of that same matrix.
struct FeatureBins {
    std::vector<std::vector<double>> thresholds; // per feature, ascending
    std::vector<std::uint16_t> codes;            // row-major bin indices
    std::size_t n_cols = 0;

    std::size_t code(std::size_t row, std::size_t feature) const {
        return codes[row * n_cols + feature];
    }
};

FeatureBins compute_bins(const Matrix& x, int n_bins);

// Greedy top-down CART fit on the given rows. Split criterion is the
// reduction in sum of squared deviations; gain ties break toward the
// lowest feature index, then the lowest threshold. Leaf values are the
// mean of the rows' targets. `targets` is indexed by row id of `x`.
// For histogram configs, `bins` supplies the candidate thresholds
// (computed from `x` when null).
RegressionTree fit_tree(const Matrix& x, std::span<const double> targets,
                        std::span<const std::size_t> rows, const GBMConfig& cfg,
                        Exec exec = Exec::Parallel, const FeatureBins* bins = nullptr);

// Negative gradient of the loss at `pred`: the residual for squared
// error, the delta-clipped residual for Huber.
std::vector<double> negative_gradient(Loss loss, double huber_delta, std::span<const double> y,
                                      std::span<const double> pred);

GBMModel gbm_fit(const Matrix& x, std::span<const double> targets, const GBMConfig& cfg,
                 Exec exec = Exec::Parallel);

std::vector<double> gbm_predict(const GBMModel& model, const Matrix& x,
                                Exec exec = Exec::Parallel);

// Per-preset hyperparameter overrides, applied by submodel_pool.
struct PresetOverride {
    std::optional<Loss> loss;
    std::optional<double> huber_delta;
    std::optional<double> learning_rate;
    std::optional<int> n_iterations;
    std::optional<int> max_depth;
    std::optional<int> min_samples_leaf;
    std::optional<double> subsample;
    std::optional<int> n_bins; // 0 = exact
    std::optional<std::uint64_t> seed;
};

using PoolOverrides = std::map<std::string, PresetOverride>;

// The default sub-model pool: seven presets diversified over loss,
// split mode, depth, learning rate, subsampling and seed. Preset seeds
// are derived from pool_seed and are pairwise distinct. Overrides are
// keyed by preset name; an unknown name is a config error.
std::vector<GBMConfig> submodel_pool(const PoolOverrides& overrides = {},
                                     std::uint64_t pool_seed = 1);

// Versioned self-describing serialization; round-trips bit-exactly.
nlohmann::json gbm_to_json(const GBMModel& model);
GBMModel gbm_from_json(const nlohmann::json& j);

} // namespace gpstack
