// Command-line experiment runner: `run` executes an optimizer x problem
// configuration and writes per-seed trajectory CSVs, `summarize` aggregates
// CSVs into a table, `check` runs a quick invariant battery.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "novak/errors.hpp"
#include "novak/harness.hpp"
#include "novak/lookahead.hpp"
#include "novak/moments.hpp"
#include "novak/optimizer.hpp"
#include "novak/problems.hpp"
#include "novak/scaling.hpp"

namespace {

std::string seed_csv_path(const std::string& output_dir, const std::string& base,
                          std::uint64_t seed) {
    return (std::filesystem::path(output_dir) / (base + "_seed" + std::to_string(seed) + ".csv"))
        .string();
}

int cmd_run(const std::string& config_path, const std::string& output_dir,
            std::int64_t seed_override, bool quiet) {
    novak::RunConfig config = novak::load_run_config(config_path);
    if (seed_override >= 0) {
        config.seeds = {static_cast<std::uint64_t>(seed_override)};
    }
    std::filesystem::create_directories(output_dir);

    const auto results = novak::run_experiment(config);
    bool any_failed = false;
    for (const auto& result : results) {
        for (const auto& warning : result.warnings) {
            if (!quiet) std::cerr << "warning: " << warning << "\n";
        }
        const std::string path = seed_csv_path(output_dir, config.output, result.seed);
        novak::write_csv(result.records, path);
        if (result.failed) {
            any_failed = true;
            if (!quiet) {
                std::cout << path << ": FAILED at step " << result.failed_step << " ("
                          << result.failure_reason << ")\n";
            }
            continue;
        }
        if (!quiet) {
            const auto& last = result.records.back();
            std::printf("%s: steps=%zu final_loss=%.6g", path.c_str(), last.step, last.loss);
            if (!std::isnan(last.accuracy)) std::printf(" holdout_acc=%.4f", last.accuracy);
            std::printf(" wall_ms=%.1f\n", last.wall_time_ms);
        }
    }
    return any_failed ? 1 : 0;
}

int cmd_summarize(const std::vector<std::string>& csv_paths, double threshold) {
    std::vector<novak::SummaryInput> inputs;
    for (const auto& path : csv_paths) {
        novak::SummaryInput input;
        std::string stem = std::filesystem::path(path).stem().string();
        const auto pos = stem.rfind("_seed");
        input.label = pos == std::string::npos ? stem : stem.substr(0, pos);
        input.records = novak::read_csv(path);
        inputs.push_back(std::move(input));
    }
    const auto summaries = novak::summarize(inputs, threshold);
    std::cout << novak::format_summary_table(summaries);
    return 0;
}

bool report(const char* name, bool ok) {
    std::printf("%-34s %s\n", name, ok ? "ok" : "FAILED");
    return ok;
}

// Quick self-contained invariant battery for `check`.
int cmd_check() {
    bool all = true;

    // hyperparameter validation rejects out-of-range values
    {
        bool ok = false;
        novak::OptimizerConfig bad;
        bad.beta1 = 1.0;
        try {
            bad.normalize();
        } catch (const novak::ConfigError&) {
            ok = true;
        }
        all &= report("config validation", ok);
    }

    // bounded moments on a random clipped stream (G = 1)
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<double> m(8, 0.0), v(8, 0.0), g(8);
        bool ok = true;
        for (int t = 0; t < 20000 && ok; ++t) {
            for (auto& x : g) x = dist(rng);
            novak::update_moments(m, v, g, 0.9, 0.999);
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (std::abs(m[i]) > 1.0 || v[i] > 1.0 || v[i] < 0.0) ok = false;
            }
        }
        all &= report("bounded moments", ok);
    }

    // rectifier branch values and range
    {
        bool ok = true;
        novak::OptimizerConfig cfg;
        cfg.alpha = 1e-3;
        for (std::int64_t t = 1; t <= 20000 && ok; ++t) {
            const auto rect = novak::rectification(t, 0.999);
            const double lr = novak::effective_lr(cfg, t, rect);
            if (rect.rectify) {
                ok = rect.r > 0.0 && rect.r <= 1.0;
            } else {
                const double expect = cfg.alpha / novak::bias_denominator(cfg.beta1, t);
                ok = std::abs(lr - expect) <= 1e-15 * std::abs(expect);
            }
        }
        all &= report("rectified lr bounds", ok);
    }

    // zero-gradient trajectory equals the closed-form decay
    {
        novak::OptimizerConfig cfg;
        cfg.alpha = 0.1;
        cfg.weight_decay = 0.01;
        cfg.nesterov_mode = novak::NesterovMode::none;
        cfg.lookahead_mode = novak::LookaheadMode::none;
        novak::ParameterModel model{{"theta", {1.0, -2.0}, {2}, novak::Role::other}};
        novak::NovakOptimizer opt(model, cfg);
        novak::GradientSet zeros = novak::zeros_like(model);
        bool ok = true;
        for (int t = 1; t <= 100 && ok; ++t) {
            opt.step(zeros);
            const double expect = std::pow(1.0 - cfg.alpha * cfg.weight_decay, t);
            ok = std::abs(opt.model()[0].values[0] - expect) <= 1e-12 &&
                 std::abs(opt.model()[0].values[1] + 2.0 * expect) <= 1e-12;
        }
        all &= report("decoupled decay closed form", ok);
    }

    // k = 1 lookahead cross-variant identity
    {
        novak::ParameterModel a{{"p", {1.0, 2.0}, {2}, novak::Role::other}};
        novak::ParameterModel b = a;
        novak::LookaheadState me;
        me.mode = novak::LookaheadMode::memory_efficient;
        novak::LookaheadState basic;
        basic.mode = novak::LookaheadMode::basic;
        novak::la_begin_window(a, me);
        novak::la_begin_window(b, basic);
        a[0].values = {0.7, 2.5};
        b[0].values = {0.7, 2.5};
        novak::la_accumulate(a, me);
        basic.inner_step_index = 1;
        novak::la_sync(a, me, 0.5, 1);
        novak::basic_sync(b, basic, 0.5);
        all &= report("lookahead k=1 identity", a[0].values == b[0].values);
    }

    // determinism: identical config + seed produce identical trajectories
    {
        novak::RunConfig cfg;
        cfg.problem.name = "quadratic";
        cfg.problem.dimension = 10;
        cfg.problem.condition = 10.0;
        cfg.steps = 50;
        cfg.log_every = 5;
        cfg.seeds = {3};
        const auto run1 = novak::run_experiment(cfg);
        const auto run2 = novak::run_experiment(cfg);
        bool ok = run1.size() == 1 && run1[0].records.size() == run2[0].records.size();
        for (std::size_t i = 0; ok && i < run1[0].records.size(); ++i) {
            const auto& r1 = run1[0].records[i];
            const auto& r2 = run2[0].records[i];
            ok = r1.step == r2.step && r1.loss == r2.loss && r1.grad_norm == r2.grad_norm &&
                 r1.effective_lr == r2.effective_lr && r1.update_norm == r2.update_norm;
        }
        all &= report("determinism", ok);
    }

    // finite differences agree with the analytic quadratic gradient
    {
        const auto problem = novak::quadratic_problem(6, 25.0, 11);
        std::vector<double> theta{0.4, -1.2, 0.9, 2.0, -0.3, 1.1};
        const auto analytic = problem.grad(theta);
        const auto fd = novak::finite_difference_gradient(problem, theta, 1e-5);
        bool ok = true;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            const double scale = std::max({std::abs(analytic[i]), std::abs(fd[i]), 1e-10});
            if (std::abs(analytic[i] - fd[i]) / scale > 1e-6) ok = false;
        }
        all &= report("finite-difference gradients", ok);
    }

    std::printf("%s\n", all ? "all checks passed" : "CHECKS FAILED");
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"NOVAK optimizer benchmark harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir = ".";
    std::int64_t seed_override = -1;
    bool quiet = false;

    auto* run = app.add_subcommand("run", "execute a run configuration");
    run->add_option("config", config_path, "JSON run configuration")->required();
    run->add_option("--output-dir", output_dir, "directory for CSV output");
    run->add_option("--seed-override", seed_override, "replace the config's seed list");
    run->add_flag("--quiet", quiet, "suppress progress output");

    std::vector<std::string> csv_paths;
    double threshold = 1e-3;
    auto* summ = app.add_subcommand("summarize", "aggregate trajectory CSVs");
    summ->add_option("csv", csv_paths, "CSV files from `run`")->required();
    summ->add_option("--threshold", threshold, "loss threshold for steps-to-threshold");

    auto* check = app.add_subcommand("check", "run the invariant battery");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, output_dir, seed_override, quiet);
        if (summ->parsed()) return cmd_summarize(csv_paths, threshold);
        if (check->parsed()) return cmd_check();
    } catch (const novak::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
