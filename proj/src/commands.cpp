#include "gpstack/commands.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "gpstack/csv.hpp"
#include "gpstack/encoding.hpp"
#include "gpstack/rng.hpp"
#include "gpstack/synthetic.hpp"

namespace gpstack {

namespace {

// Runs task bodies either serially or across tasks. When only one
// task is in play, the outer loop stays serial so the inner fit grid
// can use the thread pool instead.
template <typename Fn>
void run_tasks(std::size_t n_tasks, Exec exec, Fn&& body) {
    const Exec outer = (exec == Exec::Parallel && n_tasks > 1) ? Exec::Parallel : Exec::Serial;
    const Exec inner = (outer == Exec::Parallel) ? Exec::Serial : exec;
    if (outer == Exec::Parallel) {
        std::exception_ptr error = nullptr;
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n_tasks); ++i) {
            try {
                body(static_cast<std::size_t>(i), inner);
            } catch (...) {
#pragma omp critical(gpstack_run_tasks)
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
    } else {
        for (std::size_t i = 0; i < n_tasks; ++i) body(i, inner);
    }
}

std::vector<std::string> format_all(const std::vector<LabeledArch>& rows,
                                    const SearchSpaceSchema& schema) {
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(format_architecture(row.arch, schema));
    return out;
}

} // namespace

std::string cmd_synth_gen(const SynthGenOptions& opts) {
    const PipelineConfig& cfg = opts.config;
    nlohmann::json manifest;
    manifest["format"] = "gpstack-synth-manifest";
    manifest["version"] = 1;
    manifest["seed"] = cfg.seed;
    manifest["tasks"] = nlohmann::json::array();

    std::vector<nlohmann::json> task_entries(static_cast<std::size_t>(cfg.synth.n_tasks));
    run_tasks(static_cast<std::size_t>(cfg.synth.n_tasks), Exec::Parallel,
              [&](std::size_t i, Exec) {
                  const std::string task_id = "task_" + std::to_string(i);
                  const TaskGenerator gen = default_task_generator(
                      cfg.schema, static_cast<int>(i), cfg.seed, cfg.synth.n_train,
                      cfg.synth.n_test, cfg.synth.noise_scale);
                  const SyntheticTask task = gen_task(gen, task_id);

                  const auto dir = opts.out_dir / task_id;
                  std::vector<ArchRankRow> train_rows(task.train.size());
                  for (std::size_t r = 0; r < task.train.size(); ++r) {
                      train_rows[r] = {format_architecture(task.train[r].arch, cfg.schema),
                                       task.train[r].rank};
                  }
                  write_arch_rank_csv(dir / "train.csv", train_rows);
                  write_arch_csv(dir / "test.csv", format_all(task.test, cfg.schema));
                  std::vector<ArchRankRow> truth_rows(task.test.size());
                  for (std::size_t r = 0; r < task.test.size(); ++r) {
                      truth_rows[r] = {format_architecture(task.test[r].arch, cfg.schema),
                                       task.test[r].rank};
                  }
                  write_arch_rank_csv(dir / "test_truth.csv", truth_rows);

                  // Diagnostics only; training code never reads this file.
                  std::ostringstream hidden;
                  hidden << "arch,true_latent,observed_latent\n";
                  std::size_t at = 0;
                  for (const auto* split : {&task.train, &task.test}) {
                      for (const auto& row : *split) {
                          hidden << format_architecture(row.arch, cfg.schema) << ","
                                 << format_double(task.true_latent[at]) << ","
                                 << format_double(task.observed_latent[at]) << "\n";
                          ++at;
                      }
                  }
                  atomic_write(dir / "hidden_latent.csv", hidden.str());

                  task_entries[i] = {{"id", task_id},
                                     {"seed", gen.seed},
                                     {"n_train", gen.n_train},
                                     {"n_test", gen.n_test},
                                     {"noise_sd", gen.noise_sd}};
              });
    for (auto& entry : task_entries) manifest["tasks"].push_back(std::move(entry));
    const std::string text = manifest.dump(2) + "\n";
    atomic_write(opts.out_dir / "manifest.json", text);
    return text;
}

std::vector<std::string> discover_tasks(const std::filesystem::path& data_dir) {
    if (!std::filesystem::is_directory(data_dir))
        throw DataError("data directory '" + data_dir.string() + "' does not exist");
    std::vector<std::string> ids;
    for (const auto& entry : std::filesystem::directory_iterator(data_dir)) {
        if (entry.is_directory() && std::filesystem::exists(entry.path() / "train.csv"))
            ids.push_back(entry.path().filename().string());
    }
    std::sort(ids.begin(), ids.end());
    if (ids.empty())
        throw DataError("no task directories with train.csv under '" + data_dir.string() + "'");
    return ids;
}

Matrix encode_and_reduce(const std::vector<std::string>& archs, const SearchSpaceSchema& schema,
                         const ColumnMask& mask) {
    std::vector<RawArchitecture> parsed;
    parsed.reserve(archs.size());
    for (std::size_t i = 0; i < archs.size(); ++i) {
        try {
            parsed.push_back(parse_architecture(archs[i], schema));
        } catch (const Error& e) {
            throw DataError("row " + std::to_string(i + 1) + " ('" + archs[i] + "'): " + e.what());
        }
    }
    return mask.apply(encode_dataset(parsed, schema, EncodingKind::Ordinal));
}

namespace {

void train_one_task(const PipelineConfig& cfg, const std::string& task_id,
                    const std::filesystem::path& data_dir,
                    const std::filesystem::path& out_dir, Exec exec) {
    const TaskSettings settings = cfg.for_task(task_id);
    const std::uint64_t task_seed = cfg.task_seed(task_id);

    const auto rows = read_arch_rank_csv(data_dir / task_id / "train.csv");
    if (rows.empty()) throw DataError("task '" + task_id + "': train.csv has no data rows");
    const std::int64_t n = static_cast<std::int64_t>(rows.size());

    std::vector<RawArchitecture> archs;
    archs.reserve(rows.size());
    std::vector<double> z(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        archs.push_back(parse_architecture(rows[i].arch, cfg.schema));
        z[i] = rank_to_latent(rows[i].rank, n);
    }

    const Matrix full = encode_dataset(archs, cfg.schema, EncodingKind::Ordinal);
    const ColumnMask mask = drop_constant_columns(full, ordinal_column_names(cfg.schema));
    const Matrix x = mask.apply(full);

    const std::vector<GBMConfig> pool =
        submodel_pool(settings.presets, derive_seed(task_seed, "pool"));
    Matrix oof;
    StackEnsemble ensemble =
        fit_stack(x, z, pool, settings.k_folds, settings.meta_ridge,
                  derive_seed(task_seed, "folds"), exec, &oof);
    ensemble.schema = cfg.schema;
    ensemble.column_mask = mask;
    ensemble.transform = {rows.size(), settings.back_transform};

    const auto dir = out_dir / task_id;
    atomic_write(dir / "ensemble.json", ensemble_to_json(ensemble).dump(2) + "\n");

    // Training report: fold spec, per-sub-model out-of-fold tau, meta
    // weights.
    nlohmann::json report;
    report["task"] = task_id;
    report["n_train"] = rows.size();
    report["fold_spec"] = {{"k", ensemble.fold_spec.k}, {"seed", ensemble.fold_spec.seed}};
    report["meta_ridge"] = settings.meta_ridge;
    report["back_transform"] = to_string(settings.back_transform);
    nlohmann::json submodel_stats = nlohmann::json::array();
    for (std::size_t j = 0; j < pool.size(); ++j) {
        submodel_stats.push_back({{"name", pool[j].name},
                                  {"oof_tau", kendall_tau_b(oof.column(j), z)},
                                  {"meta_weight", ensemble.meta.mu[j]}});
    }
    report["submodels"] = std::move(submodel_stats);
    report["intercept"] = ensemble.meta.mu.back();
    report["meta_noise_var"] = ensemble.meta.noise_var;
    atomic_write(dir / "report.json", report.dump(2) + "\n");

    std::ostringstream text;
    text << "task " << task_id << ": n_train=" << rows.size() << " K=" << ensemble.fold_spec.k
         << " ridge=" << settings.meta_ridge << "\n";
    text << "submodel\toof_tau\tmeta_weight\n";
    for (const auto& s : report["submodels"]) {
        text << s["name"].get<std::string>() << "\t" << format_double(s["oof_tau"].get<double>())
             << "\t" << format_double(s["meta_weight"].get<double>()) << "\n";
    }
    text << "intercept\t-\t" << format_double(ensemble.meta.mu.back()) << "\n";
    atomic_write(dir / "report.txt", text.str());
}

} // namespace

void cmd_train(const TrainOptions& opts) {
    std::vector<std::string> task_ids =
        opts.task_ids.empty() ? discover_tasks(opts.data_dir) : opts.task_ids;
    run_tasks(task_ids.size(), opts.exec, [&](std::size_t i, Exec inner) {
        try {
            train_one_task(opts.config, task_ids[i], opts.data_dir, opts.out_dir, inner);
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw DataError("task '" + task_ids[i] + "': " + e.what());
        }
    });
}

void cmd_predict(const PredictOptions& opts) {
    const StackEnsemble ensemble =
        ensemble_from_json(nlohmann::json::parse(read_file(opts.ensemble_file)));
    const std::vector<std::string> archs = read_arch_csv(opts.test_csv);

    if (archs.empty()) {
        atomic_write(opts.out_csv, "arch,predicted_rank\n");
        return;
    }
    const std::int64_t n_test =
        opts.n_test.value_or(static_cast<std::int64_t>(archs.size()));
    if (n_test < 2)
        throw DataError("predict: population size must be >= 2 (got " + std::to_string(n_test) +
                        ")");

    const Matrix x = encode_and_reduce(archs, ensemble.schema, ensemble.column_mask);
    const std::vector<std::int64_t> ranks = predict_ranks(ensemble, x, n_test, opts.exec);

    std::vector<ArchRankRow> rows(archs.size());
    for (std::size_t i = 0; i < archs.size(); ++i) rows[i] = {archs[i], ranks[i]};
    write_arch_rank_csv(opts.out_csv, rows, "predicted_rank");
}

namespace {

std::vector<double> join_on_arch(const std::vector<ArchRankRow>& pred,
                                 const std::vector<ArchRankRow>& truth,
                                 std::vector<double>& truth_out, const std::string& task_id) {
    std::map<std::string, std::int64_t> truth_by_arch;
    std::vector<std::string> duplicates;
    for (const auto& row : truth) {
        if (!truth_by_arch.emplace(row.arch, row.rank).second) duplicates.push_back(row.arch);
    }
    std::map<std::string, std::int64_t> pred_by_arch;
    for (const auto& row : pred) {
        if (!pred_by_arch.emplace(row.arch, row.rank).second) duplicates.push_back(row.arch);
    }
    auto offenders = [](const std::vector<std::string>& keys) {
        std::string out;
        const std::size_t shown = std::min<std::size_t>(keys.size(), 10);
        for (std::size_t i = 0; i < shown; ++i) {
            if (i) out += ", ";
            out += keys[i];
        }
        if (keys.size() > shown) out += ", ... (" + std::to_string(keys.size()) + " total)";
        return out;
    };
    if (!duplicates.empty())
        throw DataError("task '" + task_id + "': duplicate arch keys: " + offenders(duplicates));

    std::vector<std::string> missing;
    for (const auto& row : pred)
        if (!truth_by_arch.contains(row.arch)) missing.push_back(row.arch);
    for (const auto& row : truth)
        if (!pred_by_arch.contains(row.arch)) missing.push_back(row.arch);
    if (!missing.empty())
        throw DataError("task '" + task_id + "': unmatched arch keys: " + offenders(missing));

    std::vector<double> pred_out;
    pred_out.reserve(pred.size());
    truth_out.clear();
    truth_out.reserve(pred.size());
    for (const auto& row : pred) {
        pred_out.push_back(static_cast<double>(row.rank));
        truth_out.push_back(static_cast<double>(truth_by_arch.at(row.arch)));
    }
    return pred_out;
}

} // namespace

nlohmann::json report_to_json(const TaskReport& report) {
    nlohmann::json j;
    j["format"] = "gpstack-report";
    j["version"] = 1;
    j["tasks"] = nlohmann::json::array();
    for (const auto& t : report.tasks)
        j["tasks"].push_back({{"id", t.task_id}, {"n", t.n}, {"tau", t.tau}});
    j["mean_tau"] = report.mean_tau;
    return j;
}

TaskReport cmd_evaluate(const EvaluateOptions& opts) {
    if (opts.predictions.empty()) throw ConfigError("evaluate: no prediction files given");
    if (opts.predictions.size() != opts.truths.size())
        throw ConfigError("evaluate: need one truth file per prediction file");
    if (!opts.task_ids.empty() && opts.task_ids.size() != opts.predictions.size())
        throw ConfigError("evaluate: task id count must match prediction file count");

    std::vector<ScorePair> pairs;
    for (std::size_t i = 0; i < opts.predictions.size(); ++i) {
        const std::string task_id =
            opts.task_ids.empty() ? opts.predictions[i].parent_path().filename().string()
                                  : opts.task_ids[i];
        const auto pred = read_arch_rank_csv(opts.predictions[i], "predicted_rank");
        const auto truth = read_arch_rank_csv(opts.truths[i]);
        ScorePair pair;
        pair.task_id = task_id.empty() ? ("pair_" + std::to_string(i)) : task_id;
        pair.predicted = join_on_arch(pred, truth, pair.actual, pair.task_id);
        pairs.push_back(std::move(pair));
    }
    const TaskReport report = per_task_report(pairs, opts.tau);
    if (opts.out_json) atomic_write(*opts.out_json, report_to_json(report).dump(2) + "\n");
    return report;
}

} // namespace gpstack
