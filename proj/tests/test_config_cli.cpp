#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "gpstack/commands.hpp"
#include "gpstack/csv.hpp"

using namespace gpstack;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("gpstack_test_" + tag + "_" +
                                            std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

// Three rank plateaus keyed off the depth symbol; every preset learns
// this exactly, so train-set self-prediction reproduces the ranks.
void write_plateau_fixture(const fs::path& dir) {
    std::vector<ArchRankRow> rows;
    const struct {
        char depth;
        int actives;
        std::int64_t rank;
    } groups[] = {{'j', 10, 5}, {'k', 11, 20}, {'l', 12, 35}};
    for (const auto& g : groups) {
        for (int copy = 0; copy < 14; ++copy) {
            std::string arch(1, g.depth);
            for (int layer = 0; layer < 12; ++layer) {
                if (layer < g.actives) {
                    // vary the last active layer so rows stay distinct
                    arch += (layer == g.actives - 1 && copy % 3 == 1) ? "13"
                            : (layer == g.actives - 1 && copy % 3 == 2)
                                ? "21"
                                : (copy % 2 ? "12" : "32");
                } else {
                    arch += "00";
                }
            }
            rows.push_back({arch, g.rank});
        }
    }
    write_arch_rank_csv(dir / "fixture" / "train.csv", rows);
}

std::string fast_config_json(int n_iterations = 80) {
    std::string presets;
    for (const char* name :
         {"gbrt-mse", "gbrt-huber", "histgb", "catgb-mse", "catgb-huber", "xgb", "lgb"}) {
        if (!presets.empty()) presets += ",";
        presets += std::string("\"") + name +
                   "\": {\"n_iterations\": " + std::to_string(n_iterations) +
                   ", \"learning_rate\": 0.3, \"max_depth\": 3, \"min_samples_leaf\": 2, "
                   "\"subsample\": 1.0}";
    }
    return "{\"seed\": 11, \"defaults\": {\"k_folds\": 5, \"presets\": {" + presets + "}}}";
}

} // namespace

TEST_CASE("parse_config: defaults and per-task merge") {
    const auto cfg = parse_config(R"({
        "seed": 99,
        "schema": {"max_layers": 12, "depth_symbols": "jkl"},
        "synth": {"n_tasks": 3, "n_train": 50, "n_test": 60},
        "defaults": {"k_folds": 4, "meta_ridge": 0.01},
        "tasks": {"task_1": {"k_folds": 7, "presets": {"xgb": {"max_depth": 2}}}}
    })", "test");
    CHECK(cfg.seed == 99);
    CHECK(cfg.synth.n_tasks == 3);
    CHECK(cfg.defaults.k_folds == 4);
    CHECK(cfg.for_task("task_0").k_folds == 4); // falls back to defaults
    CHECK(cfg.for_task("task_1").k_folds == 7);
    CHECK(cfg.for_task("task_1").meta_ridge == 0.01); // inherited
    const auto base = submodel_pool();
    const auto pool = submodel_pool(cfg.for_task("task_1").presets);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (pool[i].name == "xgb") {
            CHECK(pool[i].max_depth == 2);
        } else {
            CHECK(pool[i].max_depth == base[i].max_depth);
        }
    }
}

TEST_CASE("parse_config: unknown keys are rejected everywhere") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"sed": 1})", "t"), doctest::Contains("sed"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"schema": {"max_layer": 5}})", "t"),
                         doctest::Contains("max_layer"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"synth": {"n_trains": 5}})", "t"),
                         doctest::Contains("n_trains"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"defaults": {"folds": 3}})", "t"),
                         doctest::Contains("folds"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"tasks": {"task_0": {"presets": {"xgb": {"depth": 3}}}}})", "t"),
        doctest::Contains("depth"), ConfigError);
}

TEST_CASE("parse_config: values validated at load time") {
    CHECK_THROWS_AS(parse_config(R"({"defaults": {"k_folds": 1}})", "t"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"defaults": {"meta_ridge": -1.0}})", "t"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"defaults": {"back_transform": "both"}})", "t"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"defaults": {"tau": "c"}})", "t"), ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"defaults": {"presets": {"xgb": {"learning_rate": 0.0}}}})", "t"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"defaults": {"presets": {"xgb": {"n_bins": 1}}}})", "t"), ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"defaults": {"presets": {"nope": {"max_depth": 3}}}})", "t"),
        ConfigError);
    CHECK_NOTHROW(
        parse_config(R"({"defaults": {"presets": {"xgb": {"n_bins": "exact"}}}})", "t"));
    CHECK_THROWS_AS(parse_config("{", "t"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"schema": {"depth_symbols": "jj"}})", "t"), ConfigError);
}

TEST_CASE("cmd_synth_gen: file shapes, separation and rerun determinism") {
    TempDir tmp("synth");
    SynthGenOptions opts;
    opts.config = default_config();
    opts.config.seed = 5;
    opts.config.synth.n_train = 30;
    opts.config.synth.n_test = 40;
    opts.out_dir = tmp.path;
    const std::string manifest = cmd_synth_gen(opts);
    CHECK(manifest.find("task_7") != std::string::npos);
    for (int t = 0; t < 8; ++t)
        CHECK(fs::exists(tmp.path / ("task_" + std::to_string(t)) / "train.csv"));

    const auto train = read_file(tmp.path / "task_0" / "train.csv");
    CHECK(std::count(train.begin(), train.end(), '\n') == 31); // header + n_train
    CHECK(train.rfind("arch,rank", 0) == 0);
    const auto test = read_file(tmp.path / "task_0" / "test.csv");
    CHECK(test.rfind("arch\n", 0) == 0);
    CHECK(test.find(',') == std::string::npos); // no hidden columns
    CHECK(read_file(tmp.path / "task_0" / "hidden_latent.csv")
              .rfind("arch,true_latent,observed_latent", 0) == 0);

    // rerun with the same seed: byte-identical artifacts
    TempDir tmp2("synth2");
    opts.out_dir = tmp2.path;
    cmd_synth_gen(opts);
    for (const char* name : {"train.csv", "test.csv", "test_truth.csv", "hidden_latent.csv"}) {
        CHECK(read_file(tmp.path / "task_3" / name) == read_file(tmp2.path / "task_3" / name));
    }
    CHECK(read_file(tmp.path / "manifest.json") == read_file(tmp2.path / "manifest.json"));
}

TEST_CASE("cmd_train + cmd_predict: plateau fixture reproduces its ranks") {
    TempDir tmp("train");
    write_plateau_fixture(tmp.path);

    TrainOptions train_opts;
    train_opts.config = parse_config(fast_config_json(), "inline");
    train_opts.data_dir = tmp.path;
    train_opts.out_dir = tmp.path / "models";
    cmd_train(train_opts);

    CHECK(fs::exists(tmp.path / "models" / "fixture" / "ensemble.json"));
    CHECK(fs::exists(tmp.path / "models" / "fixture" / "report.json"));
    CHECK(fs::exists(tmp.path / "models" / "fixture" / "report.txt"));

    // self-prediction: strip ranks from the training file
    const auto rows = read_arch_rank_csv(tmp.path / "fixture" / "train.csv");
    std::vector<std::string> archs;
    for (const auto& row : rows) archs.push_back(row.arch);
    write_arch_csv(tmp.path / "self_test.csv", archs);

    PredictOptions pred_opts;
    pred_opts.ensemble_file = tmp.path / "models" / "fixture" / "ensemble.json";
    pred_opts.test_csv = tmp.path / "self_test.csv";
    pred_opts.out_csv = tmp.path / "self_pred.csv";
    cmd_predict(pred_opts);

    const auto preds = read_arch_rank_csv(tmp.path / "self_pred.csv", "predicted_rank");
    REQUIRE(preds.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(preds[i].arch == rows[i].arch); // row order preserved
        CHECK(preds[i].rank == rows[i].rank);
    }
}

TEST_CASE("cmd_train: deterministic artifacts, empty csv rejected") {
    TempDir tmp("det");
    write_plateau_fixture(tmp.path);
    TrainOptions opts;
    opts.config = parse_config(fast_config_json(20), "inline");
    opts.data_dir = tmp.path;

    opts.out_dir = tmp.path / "m1";
    cmd_train(opts);
    opts.out_dir = tmp.path / "m2";
    cmd_train(opts);
    CHECK(read_file(tmp.path / "m1" / "fixture" / "ensemble.json") ==
          read_file(tmp.path / "m2" / "fixture" / "ensemble.json"));
    CHECK(read_file(tmp.path / "m1" / "fixture" / "report.json") ==
          read_file(tmp.path / "m2" / "fixture" / "report.json"));

    // header-only training file
    TempDir empty("empty");
    fs::create_directories(empty.path / "fixture");
    atomic_write(empty.path / "fixture" / "train.csv", "arch,rank\n");
    opts.data_dir = empty.path;
    opts.out_dir = empty.path / "models";
    CHECK_THROWS_AS(cmd_train(opts), DataError);
}

TEST_CASE("cmd_predict: empty test file produces a header-only output") {
    TempDir tmp("pred");
    write_plateau_fixture(tmp.path);
    TrainOptions train_opts;
    train_opts.config = parse_config(fast_config_json(20), "inline");
    train_opts.data_dir = tmp.path;
    train_opts.out_dir = tmp.path / "models";
    cmd_train(train_opts);

    atomic_write(tmp.path / "empty_test.csv", "arch\n");
    PredictOptions opts;
    opts.ensemble_file = tmp.path / "models" / "fixture" / "ensemble.json";
    opts.test_csv = tmp.path / "empty_test.csv";
    opts.out_csv = tmp.path / "empty_pred.csv";
    cmd_predict(opts);
    CHECK(read_file(tmp.path / "empty_pred.csv") == "arch,predicted_rank\n");

    // schema mismatch: malformed arch names the offending row
    atomic_write(tmp.path / "bad_test.csv",
                 "arch\nl4211\nl121212121212121212121212\n");
    opts.test_csv = tmp.path / "bad_test.csv";
    opts.out_csv = tmp.path / "bad_pred.csv";
    CHECK_THROWS_WITH_AS(cmd_predict(opts), doctest::Contains("row 1"), DataError);
}

TEST_CASE("cmd_evaluate: identity, reversal and the hand-counted case") {
    TempDir tmp("eval");
    std::vector<ArchRankRow> truth;
    for (int i = 0; i < 3; ++i) {
        std::string arch = "l";
        for (int layer = 0; layer < 12; ++layer) arch += (layer == 0 && i == 1)   ? "13"
                                                         : (layer == 0 && i == 2) ? "21"
                                                                                  : "12";
        truth.push_back({arch, i + 1});
    }
    write_arch_rank_csv(tmp.path / "truth.csv", truth);

    auto write_pred = [&](const std::vector<std::int64_t>& ranks, const fs::path& p) {
        std::vector<ArchRankRow> rows = truth;
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = ranks[i];
        write_arch_rank_csv(p, rows, "predicted_rank");
    };

    EvaluateOptions opts;
    opts.truths = {tmp.path / "truth.csv"};
    opts.task_ids = {"demo"};

    write_pred({1, 2, 3}, tmp.path / "same.csv");
    opts.predictions = {tmp.path / "same.csv"};
    CHECK(cmd_evaluate(opts).mean_tau == 1.0);

    write_pred({3, 2, 1}, tmp.path / "reversed.csv");
    opts.predictions = {tmp.path / "reversed.csv"};
    CHECK(cmd_evaluate(opts).mean_tau == -1.0);

    write_pred({3, 1, 2}, tmp.path / "hand.csv");
    opts.predictions = {tmp.path / "hand.csv"};
    opts.out_json = tmp.path / "report.json";
    const auto report = cmd_evaluate(opts);
    CHECK(report.mean_tau == -1.0 / 3.0);
    CHECK(read_file(tmp.path / "report.json").find("demo") != std::string::npos);
}

TEST_CASE("cmd_evaluate: unmatched and duplicate keys list offenders") {
    TempDir tmp("join");
    const std::string a = "l" + std::string(24, '1');
    std::string b = a;
    b[1] = '2';
    write_arch_rank_csv(tmp.path / "truth.csv", {{a, 0}, {b, 1}});
    write_arch_rank_csv(tmp.path / "pred_missing.csv", {{a, 0}}, "predicted_rank");

    EvaluateOptions opts;
    opts.predictions = {tmp.path / "pred_missing.csv"};
    opts.truths = {tmp.path / "truth.csv"};
    CHECK_THROWS_WITH_AS(cmd_evaluate(opts), doctest::Contains(b.c_str()), DataError);

    write_arch_rank_csv(tmp.path / "pred_dup.csv", {{a, 0}, {a, 1}, {b, 0}}, "predicted_rank");
    opts.predictions = {tmp.path / "pred_dup.csv"};
    CHECK_THROWS_WITH_AS(cmd_evaluate(opts), doctest::Contains("duplicate"), DataError);

    opts.predictions = {tmp.path / "pred_missing.csv", tmp.path / "pred_missing.csv"};
    CHECK_THROWS_AS(cmd_evaluate(opts), ConfigError); // pairing mismatch
}

TEST_CASE("discover_tasks: sorted ids, errors on empty") {
    TempDir tmp("disc");
    fs::create_directories(tmp.path / "task_1");
    fs::create_directories(tmp.path / "task_0");
    fs::create_directories(tmp.path / "not_a_task");
    atomic_write(tmp.path / "task_1" / "train.csv", "arch,rank\n");
    atomic_write(tmp.path / "task_0" / "train.csv", "arch,rank\n");
    CHECK(discover_tasks(tmp.path) == std::vector<std::string>{"task_0", "task_1"});
    CHECK_THROWS_AS(discover_tasks(tmp.path / "not_a_task"), DataError);
}
