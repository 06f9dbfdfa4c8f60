#include "gpstack/gbm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include "gpstack/errors.hpp"
#include "gpstack/rng.hpp"

namespace gpstack {

Loss loss_from_string(const std::string& s) {
    if (s == "squared_error") return Loss::SquaredError;
    if (s == "huber") return Loss::Huber;
    throw ConfigError("loss: expected 'squared_error' or 'huber', got '" + s + "'");
}

std::string to_string(Loss loss) {
    return loss == Loss::SquaredError ? "squared_error" : "huber";
}

void GBMConfig::validate() const {
    if (loss == Loss::Huber && !(huber_delta > 0.0))
        throw ConfigError("preset '" + name + "': huber_delta must be > 0");
    if (!(learning_rate > 0.0) || learning_rate > 1.0)
        throw ConfigError("preset '" + name + "': learning_rate must be in (0, 1]");
    if (n_iterations < 1)
        throw ConfigError("preset '" + name + "': n_iterations must be >= 1");
    if (max_depth < 1) throw ConfigError("preset '" + name + "': max_depth must be >= 1");
    if (min_samples_leaf < 1)
        throw ConfigError("preset '" + name + "': min_samples_leaf must be >= 1");
    if (!(subsample > 0.0) || subsample > 1.0)
        throw ConfigError("preset '" + name + "': subsample must be in (0, 1]");
    if (n_bins != 0 && (n_bins < 2 || n_bins > 65535))
        throw ConfigError("preset '" + name + "': n_bins must be 'exact' or in [2, 65535]");
}

FeatureBins compute_bins(const Matrix& x, int n_bins) {
    FeatureBins bins;
    bins.thresholds.resize(x.cols());
    const std::size_t n = x.rows();
    for (std::size_t f = 0; f < x.cols(); ++f) {
        std::vector<double> values = x.column(f);
        std::sort(values.begin(), values.end());

        // Run-length encode the distinct values.
        std::vector<double> distinct;
        std::vector<std::size_t> cumulative;
        for (std::size_t i = 0; i < n; ++i) {
            if (distinct.empty() || values[i] != distinct.back()) {
                distinct.push_back(values[i]);
                cumulative.push_back(i + 1);
            } else {
                cumulative.back() = i + 1;
            }
        }

        auto& out = bins.thresholds[f];
        if (distinct.size() <= static_cast<std::size_t>(n_bins)) {
            // Few distinct values: one bin each, boundaries everywhere.
            for (std::size_t i = 0; i + 1 < distinct.size(); ++i)
                out.push_back(0.5 * (distinct[i] + distinct[i + 1]));
        } else {
            // Cut where the equal-frequency bucket index changes; heavy
            // values absorb whole buckets.
            for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
                const std::size_t bucket_here =
                    (cumulative[i] - 1) * static_cast<std::size_t>(n_bins) / n;
                const std::size_t bucket_next =
                    cumulative[i] * static_cast<std::size_t>(n_bins) / n;
                if (bucket_next > bucket_here)
                    out.push_back(0.5 * (distinct[i] + distinct[i + 1]));
            }
        }
    }

    bins.n_cols = x.cols();
    bins.codes.resize(n * x.cols());
    for (std::size_t f = 0; f < x.cols(); ++f) {
        const auto& t = bins.thresholds[f];
        for (std::size_t i = 0; i < n; ++i) {
            bins.codes[i * x.cols() + f] = static_cast<std::uint16_t>(
                std::upper_bound(t.begin(), t.end(), x(i, f)) - t.begin());
        }
    }
    return bins;
}

namespace {

constexpr double kMinSplitGain = 1e-12;

struct FeatureSplit {
    bool valid = false;
    double gain = 0.0;
    double threshold = 0.0;
};

// Sum in ascending value order. Keeps every cross-row reduction
// bit-identical under training row permutations, so split gains and
// leaf values cannot be perturbed by input order.
double canonical_sum(std::span<const double> targets, std::span<const std::size_t> rows) {
    std::vector<double> values;
    values.reserve(rows.size());
    for (std::size_t row : rows) values.push_back(targets[row]);
    std::sort(values.begin(), values.end());
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

// One entry of a per-feature sorted list: the feature value travels
// with the row id so candidate scans stay contiguous in memory.
struct SortedEntry {
    double value;
    std::uint32_t row;
};

// Candidate scan for one feature in exact mode: entries arrive sorted
// by (value, target); thresholds are midpoints between consecutive
// distinct values. Returns the best candidate honoring
// min_samples_leaf, lowest threshold on gain ties.
FeatureSplit scan_feature_exact(std::span<const double> targets,
                                std::span<const SortedEntry> sorted, double total_sum,
                                int min_samples_leaf) {
    FeatureSplit best;
    const std::size_t n = sorted.size();
    const double total_gain_base =
        total_sum * total_sum / static_cast<double>(n);
    double left_sum = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        left_sum += targets[sorted[p].row];
        const double v = sorted[p].value;
        const double v_next = sorted[p + 1].value;
        if (v == v_next) continue;
        const std::size_t n_left = p + 1;
        const std::size_t n_right = n - n_left;
        if (n_left < static_cast<std::size_t>(min_samples_leaf) ||
            n_right < static_cast<std::size_t>(min_samples_leaf))
            continue;
        const double right_sum = total_sum - left_sum;
        const double gain = left_sum * left_sum / static_cast<double>(n_left) +
                            right_sum * right_sum / static_cast<double>(n_right) -
                            total_gain_base;
        if (!best.valid || gain > best.gain) {
            best.valid = true;
            best.gain = gain;
            best.threshold = 0.5 * (v + v_next);
        }
    }
    return best;
}

// Histogram-mode scan: node rows are accumulated into the feature's
// fixed equal-frequency bins (prebinned once per training set), then
// the bin boundaries are swept.
FeatureSplit scan_feature_hist(std::span<const double> targets,
                               std::span<const std::size_t> rows, std::size_t feature,
                               const FeatureBins& bins, double total_sum,
                               int min_samples_leaf) {
    FeatureSplit best;
    const auto& thresholds = bins.thresholds[feature];
    if (thresholds.empty()) return best;
    const std::size_t n_cuts = thresholds.size();
    std::vector<double> bin_sum(n_cuts + 1, 0.0);
    std::vector<std::size_t> bin_count(n_cuts + 1, 0);
    for (std::size_t row : rows) {
        const std::size_t bin = bins.code(row, feature);
        bin_sum[bin] += targets[row];
        ++bin_count[bin];
    }
    const std::size_t n = rows.size();
    const double total_gain_base = total_sum * total_sum / static_cast<double>(n);
    double left_sum = 0.0;
    std::size_t left_count = 0;
    for (std::size_t cut = 0; cut < n_cuts; ++cut) {
        left_sum += bin_sum[cut];
        left_count += bin_count[cut];
        const std::size_t right_count = n - left_count;
        if (left_count < static_cast<std::size_t>(min_samples_leaf) ||
            right_count < static_cast<std::size_t>(min_samples_leaf))
            continue;
        if (left_count == 0 || right_count == 0) continue;
        const double right_sum = total_sum - left_sum;
        const double gain = left_sum * left_sum / static_cast<double>(left_count) +
                            right_sum * right_sum / static_cast<double>(right_count) -
                            total_gain_base;
        if (!best.valid || gain > best.gain) {
            best.valid = true;
            best.gain = gain;
            best.threshold = thresholds[cut];
        }
    }
    return best;
}

struct BestSplit {
    bool valid = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = 0.0;
};

// Node state during growth. Exact mode keeps one row list per feature,
// sorted by (value, target, row id) and filtered on each split so
// child lists stay sorted. Histogram mode only needs the plain row
// list.
struct NodeRows {
    std::vector<std::size_t> rows;                    // always populated
    std::vector<std::vector<SortedEntry>> sorted;     // exact mode only
};

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, std::span<const double> targets, const GBMConfig& cfg,
                Exec exec, const FeatureBins* bins)
        : x_(x), targets_(targets), cfg_(cfg), exec_(exec), bins_(bins),
          go_left_(x.rows(), 0) {}

    RegressionTree build(std::span<const std::size_t> rows) {
        NodeRows root;
        root.rows.assign(rows.begin(), rows.end());
        if (!cfg_.histogram_mode()) {
            root.sorted.resize(x_.cols());
            auto sort_feature = [&](std::size_t f) {
                auto& list = root.sorted[f];
                list.resize(root.rows.size());
                for (std::size_t i = 0; i < root.rows.size(); ++i) {
                    list[i] = {x_(root.rows[i], f),
                               static_cast<std::uint32_t>(root.rows[i])};
                }
                std::sort(list.begin(), list.end(),
                          [&](const SortedEntry& a, const SortedEntry& b) {
                              if (a.value != b.value) return a.value < b.value;
                              if (targets_[a.row] != targets_[b.row])
                                  return targets_[a.row] < targets_[b.row];
                              return a.row < b.row;
                          });
            };
            if (exec_ == Exec::Parallel) {
#pragma omp parallel for schedule(static)
                for (long long f = 0; f < static_cast<long long>(x_.cols()); ++f)
                    sort_feature(static_cast<std::size_t>(f));
            } else {
                for (std::size_t f = 0; f < x_.cols(); ++f) sort_feature(f);
            }
        }
        grow(std::move(root), 0);
        return std::move(tree_);
    }

private:
    int add_node() {
        tree_.nodes.emplace_back();
        return static_cast<int>(tree_.nodes.size()) - 1;
    }

    double node_sum(const NodeRows& node) const { return canonical_sum(targets_, node.rows); }

    BestSplit find_best_split(const NodeRows& node, double total_sum) const {
        const std::size_t d = x_.cols();
        std::vector<FeatureSplit> candidates(d);
        auto scan = [&](std::size_t f) {
            if (cfg_.histogram_mode()) {
                candidates[f] = scan_feature_hist(targets_, node.rows, f, *bins_, total_sum,
                                                  cfg_.min_samples_leaf);
            } else {
                candidates[f] =
                    scan_feature_exact(targets_, node.sorted[f], total_sum,
                                       cfg_.min_samples_leaf);
            }
        };
        // Small nodes are not worth a fork/join; the per-feature scan
        // is linear in the node size.
        const bool worth_parallel = node.rows.size() * d >= 16384;
        if (exec_ == Exec::Parallel && worth_parallel) {
#pragma omp parallel for schedule(static)
            for (long long f = 0; f < static_cast<long long>(d); ++f)
                scan(static_cast<std::size_t>(f));
        } else {
            for (std::size_t f = 0; f < d; ++f) scan(f);
        }

        // Deterministic reduction in feature order: strict improvement
        // keeps the lowest feature index on ties.
        BestSplit best;
        for (std::size_t f = 0; f < d; ++f) {
            const FeatureSplit& c = candidates[f];
            if (!c.valid) continue;
            if (!best.valid || c.gain > best.gain) {
                best.valid = true;
                best.feature = f;
                best.threshold = c.threshold;
                best.gain = c.gain;
            }
        }
        if (best.valid && best.gain <= kMinSplitGain) best.valid = false;
        return best;
    }

    int grow(NodeRows node, int depth) {
        const int idx = add_node();
        const std::size_t n = node.rows.size();
        const double total_sum = node_sum(node);

        const bool can_split = depth < cfg_.max_depth &&
                               n >= 2 * static_cast<std::size_t>(cfg_.min_samples_leaf);
        BestSplit best;
        if (can_split) best = find_best_split(node, total_sum);
        if (!best.valid) {
            tree_.nodes[idx].value = total_sum / static_cast<double>(n);
            return idx;
        }

        // Route decision gathered once per row; the per-feature
        // partitions below then run on contiguous data.
        NodeRows left, right;
        for (std::size_t row : node.rows) {
            const bool goes_left = x_(row, best.feature) <= best.threshold;
            go_left_[row] = goes_left;
            (goes_left ? left.rows : right.rows).push_back(row);
        }
        if (!cfg_.histogram_mode()) {
            left.sorted.resize(x_.cols());
            right.sorted.resize(x_.cols());
            auto partition_feature = [&](std::size_t f) {
                left.sorted[f].reserve(left.rows.size());
                right.sorted[f].reserve(right.rows.size());
                for (const SortedEntry& entry : node.sorted[f]) {
                    (go_left_[entry.row] ? left.sorted[f] : right.sorted[f]).push_back(entry);
                }
            };
            if (exec_ == Exec::Parallel && node.rows.size() * x_.cols() >= 16384) {
#pragma omp parallel for schedule(static)
                for (long long f = 0; f < static_cast<long long>(x_.cols()); ++f)
                    partition_feature(static_cast<std::size_t>(f));
            } else {
                for (std::size_t f = 0; f < x_.cols(); ++f) partition_feature(f);
            }
        }
        node = NodeRows{}; // free before recursing

        tree_.nodes[idx].split_feature = static_cast<int>(best.feature);
        tree_.nodes[idx].threshold = best.threshold;
        const int left_idx = grow(std::move(left), depth + 1);
        const int right_idx = grow(std::move(right), depth + 1);
        tree_.nodes[idx].left = left_idx;
        tree_.nodes[idx].right = right_idx;
        return idx;
    }

    const Matrix& x_;
    std::span<const double> targets_;
    const GBMConfig& cfg_;
    Exec exec_;
    const FeatureBins* bins_;
    std::vector<std::uint8_t> go_left_; // scratch routing mask by row id
    RegressionTree tree_;
};

} // namespace

RegressionTree fit_tree(const Matrix& x, std::span<const double> targets,
                        std::span<const std::size_t> rows, const GBMConfig& cfg, Exec exec,
                        const FeatureBins* bins) {
    cfg.validate();
    if (rows.empty()) throw DataError("fit_tree: empty row subset");
    if (targets.size() != x.rows()) throw DataError("fit_tree: target length mismatch");
    for (std::size_t row : rows) {
        if (row >= x.rows()) throw DataError("fit_tree: row index out of range");
        if (!std::isfinite(targets[row])) throw DataError("fit_tree: non-finite target");
    }
    FeatureBins local_bins;
    if (cfg.histogram_mode() && bins == nullptr) {
        local_bins = compute_bins(x, cfg.n_bins);
        bins = &local_bins;
    }
    TreeBuilder builder(x, targets, cfg, exec, bins);
    return builder.build(rows);
}

std::vector<double> negative_gradient(Loss loss, double huber_delta, std::span<const double> y,
                                      std::span<const double> pred) {
    if (y.size() != pred.size()) throw DataError("negative_gradient: length mismatch");
    std::vector<double> grad(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!std::isfinite(y[i]) || !std::isfinite(pred[i]))
            throw DataError("negative_gradient: non-finite input");
        const double r = y[i] - pred[i];
        if (loss == Loss::SquaredError) {
            grad[i] = r;
        } else {
            grad[i] = std::clamp(r, -huber_delta, huber_delta);
        }
    }
    return grad;
}

namespace {

double mean_of(std::span<const double> v) {
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end());
    double s = 0.0;
    for (double x : sorted) s += x;
    return s / static_cast<double>(v.size());
}

double median_of(std::span<const double> v) {
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

} // namespace

GBMModel gbm_fit(const Matrix& x, std::span<const double> targets, const GBMConfig& cfg,
                 Exec exec) {
    cfg.validate();
    if (x.rows() < 2) throw DataError("gbm_fit: need at least 2 rows");
    if (targets.size() != x.rows()) throw DataError("gbm_fit: target length mismatch");
    for (double t : targets)
        if (!std::isfinite(t)) throw DataError("gbm_fit: non-finite target");

    GBMModel model;
    model.config = cfg;
    model.shrinkage = cfg.learning_rate;
    model.n_features = x.cols();
    model.base_prediction =
        cfg.loss == Loss::SquaredError ? mean_of(targets) : median_of(targets);
    model.trees.reserve(static_cast<std::size_t>(cfg.n_iterations));

    const std::size_t n = x.rows();
    std::vector<double> preds(n, model.base_prediction);

    FeatureBins bins;
    if (cfg.histogram_mode()) bins = compute_bins(x, cfg.n_bins);

    const std::size_t k =
        std::min(n, static_cast<std::size_t>(
                        std::ceil(cfg.subsample * static_cast<double>(n))));
    Rng rng(cfg.seed);
    std::vector<std::size_t> all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});

    for (int iter = 0; iter < cfg.n_iterations; ++iter) {
        const std::vector<std::size_t> rows =
            k == n ? all_rows : rng.sample_indices(n, k);
        const std::vector<double> grad =
            negative_gradient(cfg.loss, cfg.huber_delta, targets, preds);
        RegressionTree tree = fit_tree(x, grad, rows, cfg, exec,
                                       cfg.histogram_mode() ? &bins : nullptr);
        if (exec == Exec::Parallel && n >= 4096) {
#pragma omp parallel for schedule(static)
            for (long long i = 0; i < static_cast<long long>(n); ++i) {
                preds[i] += cfg.learning_rate *
                            tree.predict_row(x.row(static_cast<std::size_t>(i)));
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                preds[i] += cfg.learning_rate * tree.predict_row(x.row(i));
            }
        }
        model.trees.push_back(std::move(tree));
    }
    return model;
}

std::vector<double> gbm_predict(const GBMModel& model, const Matrix& x, Exec exec) {
    x.require_cols(model.n_features, "gbm_predict");
    std::vector<double> out(x.rows());
    auto predict_row = [&](std::size_t i) {
        double acc = 0.0;
        for (const RegressionTree& tree : model.trees) acc += tree.predict_row(x.row(i));
        out[i] = model.base_prediction + model.shrinkage * acc;
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(x.rows()); ++i)
            predict_row(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < x.rows(); ++i) predict_row(i);
    }
    return out;
}

std::vector<GBMConfig> submodel_pool(const PoolOverrides& overrides, std::uint64_t pool_seed) {
    // Five named boosting roles plus the two extra Huber-loss members.
    struct PresetDef {
        const char* name;
        Loss loss;
        double lr;
        int iters;
        int depth;
        int min_leaf;
        double subsample;
        int n_bins;
    };
    static constexpr PresetDef kDefaults[] = {
        {"gbrt-mse", Loss::SquaredError, 0.05, 420, 2, 4, 0.50, 0},
        {"gbrt-huber", Loss::Huber, 0.10, 320, 2, 3, 0.55, 0},
        {"histgb", Loss::SquaredError, 0.08, 360, 2, 3, 0.50, 32},
        {"catgb-mse", Loss::SquaredError, 0.10, 300, 2, 3, 0.55, 16},
        {"catgb-huber", Loss::Huber, 0.12, 300, 2, 3, 0.60, 16},
        {"xgb", Loss::SquaredError, 0.12, 260, 2, 3, 0.60, 0},
        {"lgb", Loss::SquaredError, 0.06, 340, 3, 4, 0.60, 64},
    };

    std::vector<GBMConfig> pool;
    pool.reserve(std::size(kDefaults));
    for (const PresetDef& def : kDefaults) {
        GBMConfig cfg;
        cfg.name = def.name;
        cfg.loss = def.loss;
        cfg.learning_rate = def.lr;
        cfg.n_iterations = def.iters;
        cfg.max_depth = def.depth;
        cfg.min_samples_leaf = def.min_leaf;
        cfg.subsample = def.subsample;
        cfg.n_bins = def.n_bins;
        cfg.seed = derive_seed(pool_seed, cfg.name);
        pool.push_back(cfg);
    }

    for (const auto& [name, ov] : overrides) {
        auto it = std::find_if(pool.begin(), pool.end(),
                               [&](const GBMConfig& c) { return c.name == name; });
        if (it == pool.end())
            throw ConfigError("submodel_pool: unknown preset '" + name + "'");
        if (ov.loss) it->loss = *ov.loss;
        if (ov.huber_delta) it->huber_delta = *ov.huber_delta;
        if (ov.learning_rate) it->learning_rate = *ov.learning_rate;
        if (ov.n_iterations) it->n_iterations = *ov.n_iterations;
        if (ov.max_depth) it->max_depth = *ov.max_depth;
        if (ov.min_samples_leaf) it->min_samples_leaf = *ov.min_samples_leaf;
        if (ov.subsample) it->subsample = *ov.subsample;
        if (ov.n_bins) it->n_bins = *ov.n_bins;
        if (ov.seed) it->seed = *ov.seed;
    }
    for (const GBMConfig& cfg : pool) cfg.validate();
    return pool;
}

namespace {

nlohmann::json config_to_json(const GBMConfig& cfg) {
    nlohmann::json j;
    j["name"] = cfg.name;
    j["loss"] = to_string(cfg.loss);
    j["huber_delta"] = cfg.huber_delta;
    j["learning_rate"] = cfg.learning_rate;
    j["n_iterations"] = cfg.n_iterations;
    j["max_depth"] = cfg.max_depth;
    j["min_samples_leaf"] = cfg.min_samples_leaf;
    j["subsample"] = cfg.subsample;
    if (cfg.histogram_mode()) {
        j["n_bins"] = cfg.n_bins;
    } else {
        j["n_bins"] = "exact";
    }
    j["seed"] = cfg.seed;
    return j;
}

GBMConfig config_from_json(const nlohmann::json& j) {
    GBMConfig cfg;
    cfg.name = j.at("name").get<std::string>();
    cfg.loss = loss_from_string(j.at("loss").get<std::string>());
    cfg.huber_delta = j.at("huber_delta").get<double>();
    cfg.learning_rate = j.at("learning_rate").get<double>();
    cfg.n_iterations = j.at("n_iterations").get<int>();
    cfg.max_depth = j.at("max_depth").get<int>();
    cfg.min_samples_leaf = j.at("min_samples_leaf").get<int>();
    cfg.subsample = j.at("subsample").get<double>();
    const auto& bins = j.at("n_bins");
    cfg.n_bins = bins.is_string() ? 0 : bins.get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
}

} // namespace

nlohmann::json gbm_to_json(const GBMModel& model) {
    nlohmann::json j;
    j["format"] = "gpstack-gbm";
    j["version"] = 1;
    j["config"] = config_to_json(model.config);
    j["base_prediction"] = model.base_prediction;
    j["shrinkage"] = model.shrinkage;
    j["n_features"] = model.n_features;
    nlohmann::json trees = nlohmann::json::array();
    for (const RegressionTree& tree : model.trees) {
        nlohmann::json t;
        auto& feature = t["split_feature"] = nlohmann::json::array();
        auto& threshold = t["threshold"] = nlohmann::json::array();
        auto& left = t["left"] = nlohmann::json::array();
        auto& right = t["right"] = nlohmann::json::array();
        auto& value = t["value"] = nlohmann::json::array();
        for (const TreeNode& nd : tree.nodes) {
            feature.push_back(nd.split_feature);
            threshold.push_back(nd.threshold);
            left.push_back(nd.left);
            right.push_back(nd.right);
            value.push_back(nd.value);
        }
        trees.push_back(std::move(t));
    }
    j["trees"] = std::move(trees);
    return j;
}

GBMModel gbm_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "gpstack-gbm")
        throw DataError("gbm_from_json: not a gpstack-gbm document");
    if (j.at("version").get<int>() != 1)
        throw DataError("gbm_from_json: unsupported version");
    GBMModel model;
    model.config = config_from_json(j.at("config"));
    model.base_prediction = j.at("base_prediction").get<double>();
    model.shrinkage = j.at("shrinkage").get<double>();
    model.n_features = j.at("n_features").get<std::size_t>();
    for (const auto& t : j.at("trees")) {
        RegressionTree tree;
        const auto& feature = t.at("split_feature");
        const auto& threshold = t.at("threshold");
        const auto& left = t.at("left");
        const auto& right = t.at("right");
        const auto& value = t.at("value");
        const std::size_t n = feature.size();
        if (threshold.size() != n || left.size() != n || right.size() != n ||
            value.size() != n)
            throw DataError("gbm_from_json: inconsistent node arrays");
        tree.nodes.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            tree.nodes[i].split_feature = feature[i].get<int>();
            tree.nodes[i].threshold = threshold[i].get<double>();
            tree.nodes[i].left = left[i].get<int>();
            tree.nodes[i].right = right[i].get<int>();
            tree.nodes[i].value = value[i].get<double>();
        }
        model.trees.push_back(std::move(tree));
    }
    return model;
}

} // namespace gpstack
