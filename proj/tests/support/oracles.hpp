// Independent brute-force implementations used only by tests. These share
// no update-rule code with the library they certify: every formula here is
// written out directly, with naive loops and full materialization.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace oracles {

using Vec = std::vector<double>;
using GradientFn = std::function<Vec(const Vec&)>;

/// theta0 + alpha_la * mean_i(theta_i - theta0), all iterates materialized.
Vec storing_lookahead_oracle(const Vec& theta0, const std::vector<Vec>& fast_iterates,
                             double alpha_la);

/// (1 - alpha*lam)^t * theta0, componentwise.
Vec closed_form_decay(const Vec& theta0, double alpha, double lam, std::int64_t t);

struct AdamParams {
    double alpha = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Recorded per-step parameter snapshots plus the gradient consumed at
/// each step, enough to replay the trajectory.
struct TraceOracle {
    std::vector<Vec> snapshots;
    std::vector<Vec> inputs;
};

/// Textbook Adam with epsilon inside the square root:
/// theta -= alpha * m_hat / sqrt(v_hat + eps).
TraceOracle reference_adam_trajectory(const GradientFn& grad, const Vec& theta0,
                                      std::int64_t steps, const AdamParams& params);

/// Adam plus the variance-rectification schedule: the step factor is
/// alpha * r_t / (1 - beta1^t) when rho_t >= 5 and alpha / (1 - beta1^t)
/// otherwise, applied to m_hat / sqrt(v_hat + eps).
TraceOracle reference_radam_trajectory(const GradientFn& grad, const Vec& theta0,
                                       std::int64_t steps, const AdamParams& params);

} // namespace oracles
