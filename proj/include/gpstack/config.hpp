#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "gpstack/gbm.hpp"
#include "gpstack/metrics.hpp"
#include "gpstack/rank_transform.hpp"
#include "gpstack/schema.hpp"

namespace gpstack {

// Per-task settings after defaults and task-section overrides merge.
// The meta ridge default is sized against the latent-scale Gram of the
// out-of-fold meta features (diagonal around n * var(z) ~ 1e3), where
// near-collinear sub-model columns need real shrinkage.
struct TaskSettings {
    int k_folds = 5;
    double meta_ridge = 50.0;
    BackTransform back_transform = BackTransform::Exact;
    TauVariant tau = TauVariant::B;
    PoolOverrides presets;
};

struct SynthSettings {
    int n_tasks = 8;
    std::size_t n_train = 500;
    std::size_t n_test = 2000;
    double noise_scale = 1.0;
};

// Whole-pipeline configuration. Loaded from JSON with strict
// validation: unknown keys are config errors, values are checked
// against module ranges at load time.
struct PipelineConfig {
    SearchSpaceSchema schema;
    std::uint64_t seed = 1;
    SynthSettings synth;
    TaskSettings defaults;
    std::map<std::string, TaskSettings> tasks; // fully merged over defaults

    TaskSettings for_task(const std::string& task_id) const {
        auto it = tasks.find(task_id);
        return it != tasks.end() ? it->second : defaults;
    }

    std::uint64_t task_seed(const std::string& task_id) const;
};

PipelineConfig default_config();
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig parse_config(const std::string& json_text, const std::string& origin);

} // namespace gpstack
