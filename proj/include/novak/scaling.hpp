#pragma once

#include <cstdint>
#include <optional>

#include "novak/config.hpp"
#include "novak/moments.hpp"

namespace novak {

/// clip(theta_norm / u_norm, lo, hi). Zero norms give the neutral ratio 1
/// so a freshly zero-initialized layer still trains.
double trust_ratio(double theta_norm, double u_norm, double clip_lo, double clip_hi);

/// Smoothed gradient / parameter norm EMAs for auto-LR scaling.
/// Both are zero only before the first step.
struct AutoLrState {
    double g_ema = 0.0;
    double theta_ema = 0.0;
};

/// Updates the EMAs with the current norms and returns the scaling factor:
/// ratio_clip gives clip(g_ema / theta_ema, 0.1, 2); log_ema gives
/// 1 / (1 + ln(max(g_ema, 1))). Always finite and positive.
double auto_lr_scale(AutoLrState& state, double g_norm, double theta_norm,
                     const OptimizerConfig& cfg);

/// Step-size factor multiplying the update direction u = m_hat/sqrt(v_hat+eps).
/// Without rectification this is the base alpha. With rectification it is
/// alpha * r_t / (1 - beta1^t) on the rectified branch and
/// alpha / (1 - beta1^t) otherwise. Trust and auto-LR factors multiply on
/// top when supplied (full features mode).
double effective_lr(const OptimizerConfig& cfg, std::int64_t t,
                    const std::optional<Rectification>& rect,
                    std::optional<double> trust = std::nullopt,
                    std::optional<double> auto_scale = std::nullopt);

} // namespace novak
