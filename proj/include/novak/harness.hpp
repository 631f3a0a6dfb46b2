#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "novak/baselines.hpp"
#include "novak/config.hpp"
#include "novak/problems.hpp"

namespace novak {

struct ProblemSpec {
    std::string name; // quadratic | noisy_quadratic | rosenbrock | logistic | deep_mlp
    std::size_t dimension = 0;
    double condition = 1.0;
    double noise_sigma = 0.0;
    std::size_t n_samples = 0;
    std::size_t depth = 0;
    std::size_t width = 0;
    std::uint64_t seed = 0;

    Problem build() const;
};

struct OptimizerSpec {
    std::string kind = "novak"; // novak or a baseline name
    OptimizerConfig novak;
    BaselineConfig baseline;
};

struct RunConfig {
    ProblemSpec problem;
    OptimizerSpec optimizer;
    std::size_t steps = 0;
    std::size_t batch_size = 0; // 0 = full batch
    std::size_t log_every = 1;
    std::vector<std::uint64_t> seeds;
    std::string output = "run";
    bool early_stop = false;
    std::size_t patience = 10;
    double tolerance = 1e-3; // relative loss improvement
    double loss_threshold = 1e-3; // steps-to-threshold reporting

    void validate() const;
};

/// One logged row. wall_time_ms is measured and therefore kept out of the
/// CSV so identical runs serialize to identical bytes.
struct TrajectoryRecord {
    std::size_t step = 0;
    double loss = 0.0;
    double grad_norm = 0.0;
    double effective_lr = 0.0;
    double update_norm = 0.0;
    double accuracy = 0.0; // NaN for non-classification problems
    int persistent_vector_count = 0;
    double wall_time_ms = 0.0;
};

struct RunResult {
    std::uint64_t seed = 0;
    std::vector<TrajectoryRecord> records;
    bool failed = false;
    std::size_t failed_step = 0;
    std::string failure_reason;
    std::vector<std::string> warnings;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

std::vector<RunResult> run_experiment(const RunConfig& config);

void write_csv(const std::vector<TrajectoryRecord>& records, const std::string& path);
std::vector<TrajectoryRecord> read_csv(const std::string& path);

struct SummaryInput {
    std::string label; // optimizer x problem
    std::vector<TrajectoryRecord> records;
};

struct RunSummary {
    std::string label;
    std::size_t runs = 0;
    std::size_t failures = 0;
    double final_loss_mean = 0.0;
    double final_loss_sd = 0.0;
    double mean_steps_to_threshold = 0.0; // budget+1 sentinel when never reached
    int peak_persistent_vectors = 0;
};

/// Groups inputs by label; failed runs (NaN loss, or final accuracy at or
/// below chance on classification traces) count as failures and are
/// excluded from the loss statistics.
std::vector<RunSummary> summarize(const std::vector<SummaryInput>& runs, double loss_threshold);

std::string format_summary_table(const std::vector<RunSummary>& summaries);

} // namespace novak
