// gpstack command line: generate synthetic ranking tasks, train the
// stacked predictor, predict test ranks, and score with Kendall tau.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gpstack/commands.hpp"
#include "gpstack/csv.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitDataError = 3;

struct GlobalFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> back_transform;
    std::optional<std::string> tau;
    int jobs = 0;
};

gpstack::PipelineConfig resolve_config(const GlobalFlags& flags) {
    gpstack::PipelineConfig cfg = flags.config_path.empty()
                                      ? gpstack::default_config()
                                      : gpstack::load_config(flags.config_path);
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.back_transform) {
        const auto v = gpstack::back_transform_from_string(*flags.back_transform);
        cfg.defaults.back_transform = v;
        for (auto& [id, task] : cfg.tasks) task.back_transform = v;
    }
    if (flags.tau) {
        const auto v = gpstack::tau_variant_from_string(*flags.tau);
        cfg.defaults.tau = v;
        for (auto& [id, task] : cfg.tasks) task.tau = v;
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Architecture rank prediction with stacked boosting ensembles"};
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_option("--config", flags.config_path, "Pipeline config JSON file");
    app.add_option("--seed", flags.seed, "Override the global seed");
    app.add_option("--back-transform", flags.back_transform, "Rank back-transform: exact|paper");
    app.add_option("--tau", flags.tau, "Kendall tau variant: b|a");
    app.add_option("--jobs", flags.jobs, "Max worker threads (0 = all cores)");

    auto* synth = app.add_subcommand("synth-gen", "Generate synthetic ranking tasks");
    std::string synth_out;
    synth->add_option("--out", synth_out, "Output directory")->required();

    auto* train = app.add_subcommand("train", "Train one stacked ensemble per task");
    std::string train_data, train_out;
    std::vector<std::string> train_tasks;
    train->add_option("--data", train_data, "Directory with task_*/train.csv")->required();
    train->add_option("--out", train_out, "Output directory for ensembles")->required();
    train->add_option("--task", train_tasks, "Train only these task ids (repeatable)");

    auto* predict = app.add_subcommand("predict", "Predict test ranks with a trained ensemble");
    std::string predict_ensemble, predict_test, predict_out;
    std::optional<std::int64_t> predict_n;
    predict->add_option("--ensemble", predict_ensemble, "ensemble.json path")->required();
    predict->add_option("--test", predict_test, "Test CSV (header: arch)")->required();
    predict->add_option("--out", predict_out, "Predictions CSV path")->required();
    predict->add_option("--n-test", predict_n,
                        "Population size for the back-transform (default: row count)");

    auto* evaluate = app.add_subcommand("evaluate", "Kendall tau of predictions vs truth");
    std::vector<std::string> eval_preds, eval_truths, eval_ids;
    std::string eval_out;
    evaluate->add_option("--pred", eval_preds, "Predictions CSV (repeatable)")->required();
    evaluate->add_option("--truth", eval_truths, "Truth CSV (repeatable, pairs with --pred)")
        ->required();
    evaluate->add_option("--task", eval_ids, "Task labels (repeatable)");
    evaluate->add_option("--out", eval_out, "Write the JSON report here");

    // Let --config/--seed/--jobs/... appear after the subcommand too.
    for (auto* sub : {synth, train, predict, evaluate}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        gpstack::set_max_threads(flags.jobs);
        if (synth->parsed()) {
            gpstack::SynthGenOptions opts;
            opts.config = resolve_config(flags);
            opts.out_dir = synth_out;
            std::cout << gpstack::cmd_synth_gen(opts);
        } else if (train->parsed()) {
            gpstack::TrainOptions opts;
            opts.config = resolve_config(flags);
            opts.data_dir = train_data;
            opts.out_dir = train_out;
            opts.task_ids = train_tasks;
            gpstack::cmd_train(opts);
            std::cout << "trained " << (opts.task_ids.empty() ? std::string("all tasks")
                                                              : std::to_string(opts.task_ids.size()) +
                                                                    " task(s)")
                      << " into " << train_out << "\n";
        } else if (predict->parsed()) {
            gpstack::PredictOptions opts;
            opts.ensemble_file = predict_ensemble;
            opts.test_csv = predict_test;
            opts.out_csv = predict_out;
            opts.n_test = predict_n;
            gpstack::cmd_predict(opts);
            std::cout << "wrote " << predict_out << "\n";
        } else if (evaluate->parsed()) {
            gpstack::EvaluateOptions opts;
            for (const auto& p : eval_preds) opts.predictions.emplace_back(p);
            for (const auto& t : eval_truths) opts.truths.emplace_back(t);
            opts.task_ids = eval_ids;
            if (flags.tau) opts.tau = gpstack::tau_variant_from_string(*flags.tau);
            if (!eval_out.empty()) opts.out_json = eval_out;
            const gpstack::TaskReport report = gpstack::cmd_evaluate(opts);
            std::cout << report.to_text();
        }
    } catch (const gpstack::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const gpstack::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
