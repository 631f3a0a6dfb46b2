#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "novak/config.hpp"
#include "novak/gradient_ops.hpp"
#include "novak/lookahead.hpp"
#include "novak/moments.hpp"
#include "novak/params.hpp"
#include "novak/scaling.hpp"

namespace novak {

/// First/second moment vectors plus the step counter and cached beta
/// powers. prev_m snapshots m_{t-1} before the moment update of the current
/// step; it is kept only for the Nesterov modes that extrapolate with it.
struct MomentState {
    std::vector<std::vector<double>> m;
    std::vector<std::vector<double>> v;
    std::int64_t t = 0;
    double beta1_power = 1.0;
    double beta2_power = 1.0;
    std::vector<std::vector<double>> prev_m;
};

/// Per-step diagnostics consumed by the harness.
struct StepReport {
    double effective_lr = 0.0;           // global factor, excluding per-group trust
    std::optional<double> rectifier;     // r_t when the rectified branch fired
    double grad_norm = 0.0;              // global L2 norm of the incoming gradients
    std::vector<double> update_norms;    // L2 norm of the applied update, per group
    double update_norm_global = 0.0;
    bool used_closure = false;
};

/// One NOVAK optimizer instance. Owns a parameter model and all optimizer
/// state; step() runs the ten-phase update. Single writer per instance;
/// distinct instances may run in parallel.
class NovakOptimizer {
public:
    NovakOptimizer(ParameterModel model, OptimizerConfig config);

    /// Advances one step. grads must match the model layout. closure is
    /// required for true_nesterov while t <= n_taylor; it is evaluated with
    /// the model temporarily moved to theta + beta_n * m_prev and the
    /// original parameters restored afterwards.
    StepReport step(const GradientSet& grads, const GradientClosure& closure = nullptr);

    const ParameterModel& model() const { return model_; }
    const OptimizerConfig& config() const { return config_; }
    const MomentState& moments() const { return moments_; }
    const LookaheadState& lookahead_state() const { return lookahead_; }
    const AutoLrState& auto_lr_state() const { return auto_lr_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    StateCensus memory_census() const;

private:
    ParameterModel model_;
    OptimizerConfig config_;
    MomentState moments_;
    LookaheadState lookahead_;
    AutoLrState auto_lr_;
    std::vector<std::string> warnings_;
};

/// Census of persistent p-length vectors held by a live optimizer.
StateCensus state_memory_census(const NovakOptimizer& optimizer);

} // namespace novak
