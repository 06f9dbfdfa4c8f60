#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gpstack/config.hpp"
#include "gpstack/metrics.hpp"
#include "gpstack/parallel.hpp"
#include "gpstack/stacking.hpp"

namespace gpstack {

struct SynthGenOptions {
    PipelineConfig config;
    std::filesystem::path out_dir;
};

// Writes per-task train.csv / test.csv / test_truth.csv /
// hidden_latent.csv plus a manifest with the seeds used. Returns the
// manifest text (also written to out_dir/manifest.json).
std::string cmd_synth_gen(const SynthGenOptions& opts);

struct TrainOptions {
    PipelineConfig config;
    std::filesystem::path data_dir;
    std::vector<std::string> task_ids; // empty = every task_* under data_dir
    std::filesystem::path out_dir;
    Exec exec = Exec::Parallel;
};

void cmd_train(const TrainOptions& opts);

struct PredictOptions {
    std::filesystem::path ensemble_file;
    std::filesystem::path test_csv;
    std::filesystem::path out_csv;
    std::optional<std::int64_t> n_test; // default: test CSV row count
    Exec exec = Exec::Parallel;
};

void cmd_predict(const PredictOptions& opts);

struct EvaluateOptions {
    std::vector<std::filesystem::path> predictions;
    std::vector<std::filesystem::path> truths; // pairs with predictions
    std::vector<std::string> task_ids;         // optional labels
    TauVariant tau = TauVariant::B;
    std::optional<std::filesystem::path> out_json;
};

TaskReport cmd_evaluate(const EvaluateOptions& opts);

// Task directories (containing train.csv) under a data directory.
std::vector<std::string> discover_tasks(const std::filesystem::path& data_dir);

// Shared by train and predict: parse + encode + mask application.
Matrix encode_and_reduce(const std::vector<std::string>& archs, const SearchSpaceSchema& schema,
                         const ColumnMask& mask);

nlohmann::json report_to_json(const TaskReport& report);

} // namespace gpstack
