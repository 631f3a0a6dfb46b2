#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "novak/errors.hpp"
#include "novak/harness.hpp"

using namespace novak;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

constexpr const char* kQuadConfig = R"({
  "problem": {"name": "quadratic", "dimension": 10, "condition": 10.0, "seed": 7},
  "optimizer": {"kind": "novak", "alpha": 0.01},
  "run": {"steps": 100, "log_every": 10, "seeds": [1, 2], "output": "quad"}
})";

} // namespace

TEST_CASE("run config parses and validates") {
    const RunConfig cfg = parse_run_config(kQuadConfig);
    CHECK(cfg.problem.name == "quadratic");
    CHECK(cfg.problem.dimension == 10);
    CHECK(cfg.optimizer.kind == "novak");
    CHECK(cfg.optimizer.novak.alpha == 0.01);
    CHECK(cfg.steps == 100);
    CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2});
}

TEST_CASE("unknown config keys fail loudly") {
    CHECK_THROWS_WITH_AS(
        parse_run_config(R"({
          "problem": {"name": "quadratic", "dimension": 4, "seeed": 1},
          "optimizer": {"kind": "novak"},
          "run": {"steps": 10}
        })"),
        doctest::Contains("seeed"), ConfigError);

    CHECK_THROWS_AS(parse_run_config(R"({
          "problem": {"name": "quadratic", "dimension": 4},
          "optimizer": {"kind": "novak", "alpha": "fast"},
          "run": {"steps": 10}
        })"),
                    ConfigError);

    CHECK_THROWS_AS(parse_run_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({
          "problem": {"name": "quadratic", "dimension": 4},
          "optimizer": {"kind": "novak"},
          "run": {"steps": 0}
        })"),
                    ConfigError);
}

TEST_CASE("csv round-trips records exactly") {
    std::vector<TrajectoryRecord> records(2);
    records[0].step = 10;
    records[0].loss = 1.0 / 3.0;
    records[0].grad_norm = 1e-17;
    records[0].effective_lr = 0.1;
    records[0].update_norm = 2.5e300;
    records[0].accuracy = std::numeric_limits<double>::quiet_NaN();
    records[0].persistent_vector_count = 3;
    records[1].step = 20;
    records[1].loss = -0.0625;
    records[1].grad_norm = 7.123456789012345e-5;
    records[1].effective_lr = 1e-3;
    records[1].update_norm = 0.0;
    records[1].accuracy = 0.875;
    records[1].persistent_vector_count = 4;

    const std::string path = temp_path("novak_roundtrip.csv");
    write_csv(records, path);
    const auto back = read_csv(path);
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back[i].step == records[i].step);
        CHECK(back[i].loss == records[i].loss);
        CHECK(back[i].grad_norm == records[i].grad_norm);
        CHECK(back[i].effective_lr == records[i].effective_lr);
        CHECK(back[i].update_norm == records[i].update_norm);
        CHECK(back[i].persistent_vector_count == records[i].persistent_vector_count);
        if (std::isnan(records[i].accuracy)) {
            CHECK(std::isnan(back[i].accuracy));
        } else {
            CHECK(back[i].accuracy == records[i].accuracy);
        }
    }
    std::remove(path.c_str());
}

TEST_CASE("empty record list writes a header-only file") {
    const std::string path = temp_path("novak_empty.csv");
    write_csv({}, path);
    const std::string text = read_file(path);
    CHECK(text ==
          "step,loss,grad_norm,effective_lr,update_norm,accuracy,persistent_vector_count\n");
    CHECK(read_csv(path).empty());
    std::remove(path.c_str());
}

TEST_CASE("same config and seed produce byte-identical csv") {
    const RunConfig cfg = parse_run_config(kQuadConfig);
    const auto runs1 = run_experiment(cfg);
    const auto runs2 = run_experiment(cfg);
    REQUIRE(runs1.size() == 2);

    const std::string p1 = temp_path("novak_det1.csv");
    const std::string p2 = temp_path("novak_det2.csv");
    write_csv(runs1[0].records, p1);
    write_csv(runs2[0].records, p2);
    CHECK(read_file(p1) == read_file(p2));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("sgd below the stability limit descends monotonically on a quadratic") {
    RunConfig cfg;
    cfg.problem.name = "quadratic";
    cfg.problem.dimension = 12;
    cfg.problem.condition = 20.0;
    cfg.problem.seed = 3;
    cfg.optimizer.kind = "sgd_momentum";
    cfg.optimizer.baseline.kind = BaselineKind::sgd_momentum;
    cfg.optimizer.baseline.alpha = 0.05; // < 2 / L_max = 0.1
    cfg.optimizer.baseline.momentum = 0.0;
    cfg.steps = 400;
    cfg.log_every = 20;
    cfg.seeds = {5};

    const auto runs = run_experiment(cfg);
    REQUIRE(runs.size() == 1);
    CHECK_FALSE(runs[0].failed);
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& rec : runs[0].records) {
        CHECK(rec.loss < prev);
        prev = rec.loss;
    }
}

TEST_CASE("novak reduction and adam produce the same loss column end to end") {
    const char* base = R"({
      "problem": {"name": "quadratic", "dimension": 20, "condition": 30.0, "seed": 11},
      "optimizer": %s,
      "run": {"steps": 500, "log_every": 25, "seeds": [9], "output": "x"}
    })";
    char novak_cfg[1024], adam_cfg[1024];
    std::snprintf(novak_cfg, sizeof(novak_cfg), base,
                  R"({"kind": "novak", "alpha": 0.001, "weight_decay": 0.0,
                      "rectified": false, "nesterov_mode": "none", "lookahead_mode": "none",
                      "clip_threshold": 0.0})");
    std::snprintf(adam_cfg, sizeof(adam_cfg), base,
                  R"({"kind": "adam", "alpha": 0.001})");

    const auto novak_runs = run_experiment(parse_run_config(novak_cfg));
    const auto adam_runs = run_experiment(parse_run_config(adam_cfg));
    REQUIRE(novak_runs[0].records.size() == adam_runs[0].records.size());
    for (std::size_t i = 0; i < novak_runs[0].records.size(); ++i) {
        CHECK(std::abs(novak_runs[0].records[i].loss - adam_runs[0].records[i].loss) <= 1e-10);
    }
}

TEST_CASE("divergence is recorded as a failure, not a crash") {
    RunConfig cfg;
    cfg.problem.name = "rosenbrock";
    cfg.problem.dimension = 2;
    cfg.optimizer.kind = "sgd_momentum";
    cfg.optimizer.baseline.kind = BaselineKind::sgd_momentum;
    cfg.optimizer.baseline.alpha = 1e3; // far past the stability limit
    cfg.optimizer.baseline.momentum = 0.0;
    cfg.steps = 50;
    cfg.log_every = 1;
    cfg.seeds = {1};

    const auto runs = run_experiment(cfg);
    REQUIRE(runs.size() == 1);
    CHECK(runs[0].failed);
    CHECK(runs[0].failed_step >= 1);
    CHECK_FALSE(runs[0].failure_reason.empty());
}

TEST_CASE("early stopping halts on a plateau") {
    RunConfig cfg;
    cfg.problem.name = "quadratic";
    cfg.problem.dimension = 4;
    cfg.problem.condition = 2.0;
    cfg.optimizer.kind = "sgd_momentum";
    cfg.optimizer.baseline.kind = BaselineKind::sgd_momentum;
    cfg.optimizer.baseline.alpha = 0.5;
    cfg.optimizer.baseline.momentum = 0.0;
    cfg.steps = 100000;
    cfg.log_every = 10;
    cfg.seeds = {2};
    cfg.early_stop = true;
    cfg.patience = 10;
    cfg.tolerance = 1e-3;

    const auto runs = run_experiment(cfg);
    REQUIRE(runs.size() == 1);
    CHECK_FALSE(runs[0].failed);
    CHECK(runs[0].records.back().step < 100000); // stopped well short of budget
}

TEST_CASE("summarize aggregates seeds and flags failures") {
    auto make_records = [](double final_loss, bool nan_mid) {
        std::vector<TrajectoryRecord> records;
        for (int i = 1; i <= 5; ++i) {
            TrajectoryRecord rec;
            rec.step = i * 10;
            rec.loss = nan_mid && i == 3 ? std::nan("") : final_loss * (6 - i);
            rec.accuracy = std::numeric_limits<double>::quiet_NaN();
            rec.persistent_vector_count = 3;
            records.push_back(rec);
        }
        return records;
    };

    SUBCASE("single run has zero standard deviation") {
        const auto s = summarize({{"novak/quad", make_records(0.5, false)}}, 1e-3);
        REQUIRE(s.size() == 1);
        CHECK(s[0].runs == 1);
        CHECK(s[0].failures == 0);
        CHECK(s[0].final_loss_sd == 0.0);
        CHECK(s[0].final_loss_mean == doctest::Approx(0.5));
    }

    SUBCASE("NaN runs are counted as failures and excluded from stats") {
        const auto s = summarize({{"novak/quad", make_records(0.5, false)},
                                  {"novak/quad", make_records(0.7, false)},
                                  {"novak/quad", make_records(0.6, true)}},
                                 1e-3);
        REQUIRE(s.size() == 1);
        CHECK(s[0].runs == 3);
        CHECK(s[0].failures == 1);
        CHECK(s[0].final_loss_mean == doctest::Approx(0.6));
    }

    SUBCASE("threshold never reached yields the budget+1 sentinel") {
        const auto s = summarize({{"novak/quad", make_records(0.5, false)}}, 1e-9);
        CHECK(s[0].mean_steps_to_threshold == doctest::Approx(51.0));
    }

    SUBCASE("threshold reached reports the first crossing step") {
        const auto s = summarize({{"novak/quad", make_records(0.5, false)}}, 1.2);
        CHECK(s[0].mean_steps_to_threshold == doctest::Approx(40.0)); // loss 1.0 at step 40
    }
}

TEST_CASE("census column orders lookahead modes as expected") {
    auto peak_for = [](const char* mode) {
        RunConfig cfg;
        cfg.problem.name = "quadratic";
        cfg.problem.dimension = 6;
        cfg.problem.condition = 5.0;
        cfg.optimizer.kind = "novak";
        cfg.optimizer.novak.lookahead_mode = lookahead_mode_from_string(mode);
        cfg.optimizer.novak.full_features_mode = true; // allow basic
        cfg.steps = 30;
        cfg.log_every = 5;
        cfg.seeds = {1};
        const auto runs = run_experiment(cfg);
        int peak = 0;
        for (const auto& rec : runs[0].records) {
            peak = std::max(peak, rec.persistent_vector_count);
        }
        return peak;
    };
    const int none = peak_for("none");
    const int me = peak_for("memory_efficient");
    const int basic = peak_for("basic");
    CHECK(none == 3);
    CHECK(none <= me);
    CHECK(basic == none + 1);
}

TEST_CASE("classification traces below chance count as failures") {
    std::vector<TrajectoryRecord> records(1);
    records[0].step = 10;
    records[0].loss = 0.3;
    records[0].accuracy = 0.4;
    records[0].persistent_vector_count = 3;
    const auto s = summarize({{"mlp", records}}, 1e-3);
    CHECK(s[0].failures == 1);
}
