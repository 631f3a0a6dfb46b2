#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "novak/config.hpp"

namespace novak {

/// Per-step momentum decays. With adaptive_beta off this is (beta1, beta2);
/// otherwise both warm up as beta * (1 - exp(-t / tau)), monotone in t and
/// asymptoting to the base values.
std::pair<double, double> effective_betas(std::int64_t t, const OptimizerConfig& cfg);

/// 1 - beta^t. Switches to 1 - exp(t * ln(beta)) for t > 1000 so the power
/// does not underflow before the subtraction. Throws ConfigError at beta == 1.
double bias_denominator(double beta, std::int64_t t);

/// In-place EMA update: m = b1*m + (1-b1)*g, v = b2*v + (1-b2)*g^2.
void update_moments(std::vector<double>& m, std::vector<double>& v,
                    const std::vector<double>& g, double beta1_t, double beta2_t);

/// m_hat = m / (1 - beta1^t), v_hat = v / (1 - beta2^t).
std::pair<std::vector<double>, std::vector<double>>
bias_correct(const std::vector<double>& m, const std::vector<double>& v,
             std::int64_t t, double beta1, double beta2);

/// Variance rectification state for one step. rectify is the rho_t >= 5
/// gate; r is defined (in (0, 1]) only when the gate is open.
struct Rectification {
    double rho_inf = 0.0;
    double rho_t = 0.0;
    bool rectify = false;
    double r = 1.0;
};

Rectification rectification(std::int64_t t, double beta2);

} // namespace novak
