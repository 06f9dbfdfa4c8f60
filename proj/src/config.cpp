#include "gpstack/config.hpp"

#include <set>

#include "json.hpp"

#include "gpstack/csv.hpp"
#include "gpstack/rng.hpp"

namespace gpstack {

std::uint64_t PipelineConfig::task_seed(const std::string& task_id) const {
    return derive_seed(seed, "task:" + task_id);
}

PipelineConfig default_config() {
    PipelineConfig cfg;
    cfg.schema.validate();
    return cfg;
}

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.contains(key))
            throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
T get_as(const json& obj, const std::string& key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + ": invalid value for '" + key + "'");
    }
}

void parse_schema(const json& obj, SearchSpaceSchema& schema, const std::string& where) {
    reject_unknown_keys(obj, {"max_layers", "depth_symbols", "includes_embed_column"}, where);
    if (obj.contains("max_layers")) schema.max_layers = get_as<int>(obj, "max_layers", where);
    if (obj.contains("depth_symbols")) {
        const auto s = get_as<std::string>(obj, "depth_symbols", where);
        schema.depth_symbols.assign(s.begin(), s.end());
    }
    if (obj.contains("includes_embed_column"))
        schema.includes_embed_column = get_as<bool>(obj, "includes_embed_column", where);
    schema.validate();
}

void parse_synth(const json& obj, SynthSettings& synth, const std::string& where) {
    reject_unknown_keys(obj, {"n_tasks", "n_train", "n_test", "noise_scale"}, where);
    if (obj.contains("n_tasks")) synth.n_tasks = get_as<int>(obj, "n_tasks", where);
    if (obj.contains("n_train")) synth.n_train = get_as<std::size_t>(obj, "n_train", where);
    if (obj.contains("n_test")) synth.n_test = get_as<std::size_t>(obj, "n_test", where);
    if (obj.contains("noise_scale"))
        synth.noise_scale = get_as<double>(obj, "noise_scale", where);
    if (synth.n_tasks < 1) throw ConfigError(where + ": n_tasks must be >= 1");
    if (synth.n_train < 2) throw ConfigError(where + ": n_train must be >= 2");
    if (synth.n_test < 2) throw ConfigError(where + ": n_test must be >= 2");
    if (!(synth.noise_scale >= 0.0)) throw ConfigError(where + ": noise_scale must be >= 0");
}

PresetOverride parse_preset(const json& obj, const std::string& where) {
    reject_unknown_keys(obj,
                        {"loss", "huber_delta", "learning_rate", "n_iterations", "max_depth",
                         "min_samples_leaf", "subsample", "n_bins", "seed"},
                        where);
    PresetOverride ov;
    if (obj.contains("loss"))
        ov.loss = loss_from_string(get_as<std::string>(obj, "loss", where));
    if (obj.contains("huber_delta")) ov.huber_delta = get_as<double>(obj, "huber_delta", where);
    if (obj.contains("learning_rate"))
        ov.learning_rate = get_as<double>(obj, "learning_rate", where);
    if (obj.contains("n_iterations")) ov.n_iterations = get_as<int>(obj, "n_iterations", where);
    if (obj.contains("max_depth")) ov.max_depth = get_as<int>(obj, "max_depth", where);
    if (obj.contains("min_samples_leaf"))
        ov.min_samples_leaf = get_as<int>(obj, "min_samples_leaf", where);
    if (obj.contains("subsample")) ov.subsample = get_as<double>(obj, "subsample", where);
    if (obj.contains("n_bins")) {
        const auto& bins = obj.at("n_bins");
        if (bins.is_string()) {
            if (bins.get<std::string>() != "exact")
                throw ConfigError(where + ": n_bins must be an integer >= 2 or \"exact\"");
            ov.n_bins = 0;
        } else {
            ov.n_bins = get_as<int>(obj, "n_bins", where);
        }
    }
    if (obj.contains("seed")) ov.seed = get_as<std::uint64_t>(obj, "seed", where);
    return ov;
}

void parse_task_settings(const json& obj, TaskSettings& settings, const std::string& where) {
    reject_unknown_keys(obj, {"k_folds", "meta_ridge", "back_transform", "tau", "presets"},
                        where);
    if (obj.contains("k_folds")) settings.k_folds = get_as<int>(obj, "k_folds", where);
    if (obj.contains("meta_ridge")) settings.meta_ridge = get_as<double>(obj, "meta_ridge", where);
    if (obj.contains("back_transform"))
        settings.back_transform =
            back_transform_from_string(get_as<std::string>(obj, "back_transform", where));
    if (obj.contains("tau"))
        settings.tau = tau_variant_from_string(get_as<std::string>(obj, "tau", where));
    if (obj.contains("presets")) {
        const auto& presets = obj.at("presets");
        if (!presets.is_object()) throw ConfigError(where + ": presets must be an object");
        for (const auto& [name, body] : presets.items()) {
            settings.presets[name] = parse_preset(body, where + ".presets." + name);
        }
    }
    if (settings.k_folds < 2) throw ConfigError(where + ": k_folds must be >= 2");
    if (!(settings.meta_ridge >= 0.0)) throw ConfigError(where + ": meta_ridge must be >= 0");
}

} // namespace

PipelineConfig parse_config(const std::string& json_text, const std::string& origin) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": invalid JSON: " + e.what());
    }
    if (!root.is_object()) throw ConfigError(origin + ": top level must be an object");
    reject_unknown_keys(root, {"schema", "seed", "synth", "defaults", "tasks"}, origin);

    PipelineConfig cfg = default_config();
    if (root.contains("schema")) parse_schema(root.at("schema"), cfg.schema, origin + ".schema");
    if (root.contains("seed")) cfg.seed = get_as<std::uint64_t>(root, "seed", origin);
    if (root.contains("synth")) parse_synth(root.at("synth"), cfg.synth, origin + ".synth");
    if (root.contains("defaults"))
        parse_task_settings(root.at("defaults"), cfg.defaults, origin + ".defaults");
    if (root.contains("tasks")) {
        const auto& tasks = root.at("tasks");
        if (!tasks.is_object()) throw ConfigError(origin + ": tasks must be an object");
        for (const auto& [task_id, body] : tasks.items()) {
            TaskSettings merged = cfg.defaults;
            parse_task_settings(body, merged, origin + ".tasks." + task_id);
            cfg.tasks[task_id] = std::move(merged);
        }
    }

    // Validate preset overrides against the pool now, not at train time.
    for (const auto& [task_id, settings] : cfg.tasks) (void)submodel_pool(settings.presets);
    (void)submodel_pool(cfg.defaults.presets);
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_file(path), path.string());
}

} // namespace gpstack
