#include "novak/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "novak/errors.hpp"

namespace novak {

double trust_ratio(double theta_norm, double u_norm, double clip_lo, double clip_hi) {
    if (!(clip_lo > 0.0)) {
        throw ConfigError("trust_ratio: lower clip bound must be positive");
    }
    if (theta_norm == 0.0 || u_norm == 0.0) {
        return 1.0;
    }
    return std::clamp(theta_norm / u_norm, clip_lo, clip_hi);
}

double auto_lr_scale(AutoLrState& state, double g_norm, double theta_norm,
                     const OptimizerConfig& cfg) {
    const double gamma = cfg.auto_lr_gamma;
    state.g_ema = gamma * g_norm + (1.0 - gamma) * state.g_ema;
    state.theta_ema = gamma * theta_norm + (1.0 - gamma) * state.theta_ema;

    if (cfg.auto_lr_variant == AutoLrVariant::log_ema) {
        return 1.0 / (1.0 + std::log(std::max(state.g_ema, 1.0)));
    }
    if (state.theta_ema == 0.0) {
        return state.g_ema == 0.0 ? 1.0 : 2.0;
    }
    return std::clamp(state.g_ema / state.theta_ema, 0.1, 2.0);
}

double effective_lr(const OptimizerConfig& cfg, std::int64_t t,
                    const std::optional<Rectification>& rect,
                    std::optional<double> trust,
                    std::optional<double> auto_scale) {
    double lr = cfg.alpha;
    if (rect.has_value()) {
        const double denom = bias_denominator(cfg.beta1, t);
        lr = rect->rectify ? cfg.alpha * rect->r / denom : cfg.alpha / denom;
    }
    if (trust.has_value()) lr *= *trust;
    if (auto_scale.has_value()) lr *= *auto_scale;
    return lr;
}

} // namespace novak
