#include "novak/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include "json.hpp"

#include "novak/errors.hpp"
#include "novak/optimizer.hpp"

namespace novak {

namespace {

using nlohmann::json;

// splitmix64-style mixing for per-step sampling seeds
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t step) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (step + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& section) {
    for (const auto& item : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            throw ConfigError("unknown key '" + item.key() + "' in " + section);
        }
    }
}

template <typename T>
T require_type(const json& j, const std::string& key, const std::string& section) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad value for '" + key + "' in " + section + ": " + e.what());
    }
}

template <typename T>
void read_if_present(const json& j, const std::string& key, const std::string& section, T& out) {
    if (j.contains(key)) out = require_type<T>(j, key, section);
}

ProblemSpec parse_problem(const json& j) {
    reject_unknown_keys(j,
                        {"name", "dimension", "condition", "noise_sigma", "n_samples",
                         "depth", "width", "seed"},
                        "problem");
    ProblemSpec spec;
    spec.name = require_type<std::string>(j, "name", "problem");
    read_if_present(j, "dimension", "problem", spec.dimension);
    read_if_present(j, "condition", "problem", spec.condition);
    read_if_present(j, "noise_sigma", "problem", spec.noise_sigma);
    read_if_present(j, "n_samples", "problem", spec.n_samples);
    read_if_present(j, "depth", "problem", spec.depth);
    read_if_present(j, "width", "problem", spec.width);
    read_if_present(j, "seed", "problem", spec.seed);
    return spec;
}

OptimizerSpec parse_optimizer(const json& j) {
    reject_unknown_keys(
        j,
        {"kind", "alpha", "beta1", "beta2", "weight_decay", "epsilon", "momentum",
         "nesterov_mode", "nesterov_coeff", "n_taylor", "lookahead_mode", "lookahead_alpha",
         "lookahead_k", "rectified", "decoupled_decay", "adaptive_beta", "tau1", "tau2",
         "use_gc", "clip_threshold", "sparse_threshold", "layer_adaptation", "auto_lr",
         "auto_lr_variant", "auto_lr_gamma", "trust_clip", "full_features_mode"},
        "optimizer");
    OptimizerSpec spec;
    spec.kind = require_type<std::string>(j, "kind", "optimizer");

    if (spec.kind == "novak") {
        auto& cfg = spec.novak;
        read_if_present(j, "alpha", "optimizer", cfg.alpha);
        read_if_present(j, "beta1", "optimizer", cfg.beta1);
        read_if_present(j, "beta2", "optimizer", cfg.beta2);
        read_if_present(j, "weight_decay", "optimizer", cfg.weight_decay);
        read_if_present(j, "epsilon", "optimizer", cfg.epsilon);
        if (j.contains("nesterov_mode")) {
            cfg.nesterov_mode =
                nesterov_mode_from_string(require_type<std::string>(j, "nesterov_mode", "optimizer"));
        }
        read_if_present(j, "nesterov_coeff", "optimizer", cfg.nesterov_coeff);
        read_if_present(j, "n_taylor", "optimizer", cfg.n_taylor);
        if (j.contains("lookahead_mode")) {
            cfg.lookahead_mode = lookahead_mode_from_string(
                require_type<std::string>(j, "lookahead_mode", "optimizer"));
        }
        read_if_present(j, "lookahead_alpha", "optimizer", cfg.lookahead_alpha);
        read_if_present(j, "lookahead_k", "optimizer", cfg.lookahead_k);
        read_if_present(j, "rectified", "optimizer", cfg.rectified);
        read_if_present(j, "decoupled_decay", "optimizer", cfg.decoupled_decay);
        read_if_present(j, "adaptive_beta", "optimizer", cfg.adaptive_beta);
        read_if_present(j, "tau1", "optimizer", cfg.tau1);
        read_if_present(j, "tau2", "optimizer", cfg.tau2);
        read_if_present(j, "use_gc", "optimizer", cfg.use_gc);
        read_if_present(j, "clip_threshold", "optimizer", cfg.clip_threshold);
        read_if_present(j, "sparse_threshold", "optimizer", cfg.sparse_threshold);
        read_if_present(j, "layer_adaptation", "optimizer", cfg.layer_adaptation);
        read_if_present(j, "auto_lr", "optimizer", cfg.auto_lr);
        if (j.contains("auto_lr_variant")) {
            cfg.auto_lr_variant = auto_lr_variant_from_string(
                require_type<std::string>(j, "auto_lr_variant", "optimizer"));
        }
        read_if_present(j, "auto_lr_gamma", "optimizer", cfg.auto_lr_gamma);
        if (j.contains("trust_clip")) {
            auto clip = require_type<std::vector<double>>(j, "trust_clip", "optimizer");
            if (clip.size() != 2) throw ConfigError("trust_clip must be [lo, hi]");
            cfg.trust_clip_lo = clip[0];
            cfg.trust_clip_hi = clip[1];
        }
        read_if_present(j, "full_features_mode", "optimizer", cfg.full_features_mode);
    } else {
        auto& cfg = spec.baseline;
        cfg.kind = baseline_kind_from_string(spec.kind);
        read_if_present(j, "alpha", "optimizer", cfg.alpha);
        read_if_present(j, "beta1", "optimizer", cfg.beta1);
        read_if_present(j, "beta2", "optimizer", cfg.beta2);
        read_if_present(j, "epsilon", "optimizer", cfg.epsilon);
        read_if_present(j, "weight_decay", "optimizer", cfg.weight_decay);
        read_if_present(j, "momentum", "optimizer", cfg.momentum);
        read_if_present(j, "lookahead_alpha", "optimizer", cfg.lookahead_alpha);
        read_if_present(j, "lookahead_k", "optimizer", cfg.lookahead_k);
    }
    return spec;
}

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

constexpr const char* kCsvHeader =
    "step,loss,grad_norm,effective_lr,update_norm,accuracy,persistent_vector_count";

} // namespace

Problem ProblemSpec::build() const {
    return problem_from_name(name, dimension, condition, noise_sigma, n_samples, depth,
                             width, seed);
}

void RunConfig::validate() const {
    if (steps < 1) throw ConfigError("run.steps must be >= 1");
    if (log_every < 1) throw ConfigError("run.log_every must be >= 1");
    if (seeds.empty()) throw ConfigError("run.seeds must not be empty");
    if (output.empty()) throw ConfigError("run.output must not be empty");
    if (patience < 1) throw ConfigError("run.patience must be >= 1");
    if (!(tolerance > 0.0)) throw ConfigError("run.tolerance must be positive");
    problem.build(); // resolves the problem name and numeric preconditions
    if (optimizer.kind == "novak") {
        OptimizerConfig probe = optimizer.novak;
        probe.normalize();
    } else {
        baseline_kind_from_string(optimizer.kind);
        optimizer.baseline.validate();
    }
}

RunConfig parse_run_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown_keys(j, {"problem", "optimizer", "run"}, "config");
    if (!j.contains("problem") || !j.contains("optimizer") || !j.contains("run")) {
        throw ConfigError("config needs 'problem', 'optimizer' and 'run' sections");
    }

    RunConfig cfg;
    cfg.problem = parse_problem(j.at("problem"));
    cfg.optimizer = parse_optimizer(j.at("optimizer"));

    const json& run = j.at("run");
    reject_unknown_keys(run,
                        {"steps", "batch_size", "log_every", "seeds", "output", "early_stop",
                         "patience", "tolerance", "loss_threshold"},
                        "run");
    cfg.steps = require_type<std::size_t>(run, "steps", "run");
    read_if_present(run, "batch_size", "run", cfg.batch_size);
    read_if_present(run, "log_every", "run", cfg.log_every);
    if (run.contains("seeds")) {
        cfg.seeds = require_type<std::vector<std::uint64_t>>(run, "seeds", "run");
    } else {
        cfg.seeds = {0};
    }
    read_if_present(run, "output", "run", cfg.output);
    read_if_present(run, "early_stop", "run", cfg.early_stop);
    read_if_present(run, "patience", "run", cfg.patience);
    read_if_present(run, "tolerance", "run", cfg.tolerance);
    read_if_present(run, "loss_threshold", "run", cfg.loss_threshold);

    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

namespace {

// Slices a flat gradient back into the model's group layout.
GradientSet gradient_from_flat(const ParameterModel& layout, const std::vector<double>& flat) {
    GradientSet out;
    out.groups.reserve(layout.size());
    std::size_t offset = 0;
    for (const auto& group : layout) {
        out.groups.emplace_back(flat.begin() + offset, flat.begin() + offset + group.size());
        offset += group.size();
    }
    return out;
}

struct AnyOptimizer {
    std::unique_ptr<NovakOptimizer> novak;
    std::unique_ptr<BaselineOptimizer> baseline;

    const ParameterModel& model() const {
        return novak ? novak->model() : baseline->model();
    }
    int persistent_vectors() const {
        return novak ? novak->memory_census().persistent_total()
                     : baseline->persistent_vectors();
    }
};

} // namespace

std::vector<RunResult> run_experiment(const RunConfig& config) {
    config.validate();
    const Problem problem = config.problem.build();

    std::vector<RunResult> results;
    results.reserve(config.seeds.size());
    for (std::uint64_t seed : config.seeds) {
        RunResult result;
        result.seed = seed;

        AnyOptimizer opt;
        if (config.optimizer.kind == "novak") {
            opt.novak = std::make_unique<NovakOptimizer>(problem.initial_model(seed),
                                                         config.optimizer.novak);
            result.warnings = opt.novak->warnings();
        } else {
            opt.baseline = std::make_unique<BaselineOptimizer>(problem.initial_model(seed),
                                                               config.optimizer.baseline);
        }

        const auto t_start = std::chrono::steady_clock::now();
        const bool stochastic = config.batch_size > 0 && problem.stochastic_grad != nullptr;

        double best_logged_loss = std::numeric_limits<double>::infinity();
        std::size_t stale_logged_points = 0;

        for (std::size_t step = 1; step <= config.steps; ++step) {
            std::vector<double> flat = flatten(opt.model());
            std::vector<double> flat_grad =
                stochastic ? problem.stochastic_grad(flat, mix_seed(seed, step), config.batch_size)
                           : problem.grad(flat);
            GradientSet grads = gradient_from_flat(opt.model(), flat_grad);

            double grad_norm = 0.0;
            double effective_lr = 0.0;
            try {
                if (opt.novak) {
                    StepReport report = opt.novak->step(grads);
                    grad_norm = report.grad_norm;
                    effective_lr = report.effective_lr;
                } else {
                    grad_norm = global_l2_norm(grads);
                    effective_lr = config.optimizer.baseline.alpha;
                    opt.baseline->step(grads);
                }
            } catch (const NumericError& e) {
                result.failed = true;
                result.failed_step = step;
                result.failure_reason = e.what();
            }

            const bool logged = result.failed || step % config.log_every == 0 ||
                                step == config.steps;
            if (!logged) continue;

            std::vector<double> flat_after = flatten(opt.model());
            double update_sq = 0.0;
            for (std::size_t i = 0; i < flat.size(); ++i) {
                const double d = flat_after[i] - flat[i];
                update_sq += d * d;
            }

            TrajectoryRecord rec;
            rec.step = step;
            rec.loss = result.failed ? std::numeric_limits<double>::quiet_NaN()
                                     : problem.eval(flat_after);
            rec.grad_norm = grad_norm;
            rec.effective_lr = effective_lr;
            rec.update_norm = std::sqrt(update_sq);
            rec.accuracy = problem.holdout_accuracy
                               ? problem.holdout_accuracy(flat_after)
                               : std::numeric_limits<double>::quiet_NaN();
            rec.persistent_vector_count = opt.persistent_vectors();
            rec.wall_time_ms = std::chrono::duration<double, std::milli>(
                                   std::chrono::steady_clock::now() - t_start)
                                   .count();
            result.records.push_back(rec);

            if (!result.failed && std::isnan(rec.loss)) {
                result.failed = true;
                result.failed_step = step;
                result.failure_reason = "loss is NaN";
            }
            if (result.failed) break;

            if (config.early_stop) {
                const double improvement =
                    (best_logged_loss - rec.loss) /
                    std::max(std::abs(best_logged_loss), 1e-300);
                if (std::isfinite(best_logged_loss) && improvement < config.tolerance) {
                    ++stale_logged_points;
                } else {
                    stale_logged_points = 0;
                }
                best_logged_loss = std::min(best_logged_loss, rec.loss);
                if (stale_logged_points >= config.patience) break;
            }
        }
        results.push_back(std::move(result));
    }
    return results;
}

void write_csv(const std::vector<TrajectoryRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << kCsvHeader << "\n";
    for (const auto& rec : records) {
        out << rec.step << ',' << format_real(rec.loss) << ',' << format_real(rec.grad_norm)
            << ',' << format_real(rec.effective_lr) << ',' << format_real(rec.update_norm)
            << ',' << format_real(rec.accuracy) << ',' << rec.persistent_vector_count << "\n";
    }
    if (!out.good()) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<TrajectoryRecord> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw std::runtime_error("'" + path + "' does not start with the expected header");
    }
    std::vector<TrajectoryRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 7) {
            throw std::runtime_error("'" + path + "': malformed row '" + line + "'");
        }
        TrajectoryRecord rec;
        rec.step = std::stoull(fields[0]);
        rec.loss = std::strtod(fields[1].c_str(), nullptr);
        rec.grad_norm = std::strtod(fields[2].c_str(), nullptr);
        rec.effective_lr = std::strtod(fields[3].c_str(), nullptr);
        rec.update_norm = std::strtod(fields[4].c_str(), nullptr);
        rec.accuracy = std::strtod(fields[5].c_str(), nullptr);
        rec.persistent_vector_count = std::stoi(fields[6]);
        records.push_back(rec);
    }
    return records;
}

std::vector<RunSummary> summarize(const std::vector<SummaryInput>& runs, double loss_threshold) {
    std::map<std::string, std::vector<const SummaryInput*>> by_label;
    for (const auto& run : runs) {
        if (run.records.empty()) throw ConfigError("summarize: empty trajectory for " + run.label);
        by_label[run.label].push_back(&run);
    }

    std::vector<RunSummary> out;
    for (const auto& [label, group] : by_label) {
        RunSummary s;
        s.label = label;
        s.runs = group.size();

        std::vector<double> final_losses;
        std::vector<double> steps_to_threshold;
        for (const SummaryInput* run : group) {
            bool nan_seen = false;
            for (const auto& rec : run->records) {
                if (std::isnan(rec.loss)) nan_seen = true;
                s.peak_persistent_vectors =
                    std::max(s.peak_persistent_vectors, rec.persistent_vector_count);
            }
            const auto& last = run->records.back();
            const bool chance_fail = !std::isnan(last.accuracy) && last.accuracy <= 0.5;
            if (nan_seen || chance_fail) {
                ++s.failures;
                continue;
            }
            final_losses.push_back(last.loss);
            double reached = static_cast<double>(last.step) + 1.0; // sentinel
            for (const auto& rec : run->records) {
                if (rec.loss < loss_threshold) {
                    reached = static_cast<double>(rec.step);
                    break;
                }
            }
            steps_to_threshold.push_back(reached);
        }

        if (!final_losses.empty()) {
            double mean = 0.0;
            for (double x : final_losses) mean += x;
            mean /= static_cast<double>(final_losses.size());
            double var = 0.0;
            for (double x : final_losses) var += (x - mean) * (x - mean);
            var = final_losses.size() > 1 ? var / static_cast<double>(final_losses.size() - 1)
                                          : 0.0;
            s.final_loss_mean = mean;
            s.final_loss_sd = std::sqrt(var);
            double mst = 0.0;
            for (double x : steps_to_threshold) mst += x;
            s.mean_steps_to_threshold = mst / static_cast<double>(steps_to_threshold.size());
        } else {
            s.final_loss_mean = std::numeric_limits<double>::quiet_NaN();
            s.final_loss_sd = std::numeric_limits<double>::quiet_NaN();
            s.mean_steps_to_threshold = std::numeric_limits<double>::quiet_NaN();
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::string format_summary_table(const std::vector<RunSummary>& summaries) {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-36s %5s %9s %13s %13s %14s %6s\n", "label", "runs",
                  "failures", "loss_mean", "loss_sd", "steps_to_thr", "peak_p");
    out << buf;
    for (const auto& s : summaries) {
        std::snprintf(buf, sizeof(buf), "%-36s %5zu %9zu %13.6g %13.6g %14.6g %6d\n",
                      s.label.c_str(), s.runs, s.failures, s.final_loss_mean, s.final_loss_sd,
                      s.mean_steps_to_threshold, s.peak_persistent_vectors);
        out << buf;
    }
    return out.str();
}

} // namespace novak
