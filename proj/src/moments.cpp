#include "novak/moments.hpp"

#include <cmath>

#include "novak/errors.hpp"

namespace novak {

std::pair<double, double> effective_betas(std::int64_t t, const OptimizerConfig& cfg) {
    if (!cfg.adaptive_beta) {
        return {cfg.beta1, cfg.beta2};
    }
    double b1 = cfg.beta1 * (1.0 - std::exp(-static_cast<double>(t) / cfg.tau1));
    double b2 = cfg.beta2 * (1.0 - std::exp(-static_cast<double>(t) / cfg.tau2));
    return {b1, b2};
}

double bias_denominator(double beta, std::int64_t t) {
    if (beta == 1.0) {
        throw ConfigError("bias correction undefined for beta == 1");
    }
    if (beta == 0.0) return 1.0;
    if (t <= 1000) {
        return 1.0 - std::pow(beta, static_cast<double>(t));
    }
    return 1.0 - std::exp(static_cast<double>(t) * std::log(beta));
}

void update_moments(std::vector<double>& m, std::vector<double>& v,
                    const std::vector<double>& g, double beta1_t, double beta2_t) {
    if (m.size() != g.size() || v.size() != g.size()) {
        throw DimensionError("update_moments: moment/gradient lengths differ");
    }
    const double c1 = 1.0 - beta1_t;
    const double c2 = 1.0 - beta2_t;
    for (std::size_t i = 0; i < g.size(); ++i) {
        m[i] = beta1_t * m[i] + c1 * g[i];
        v[i] = beta2_t * v[i] + c2 * g[i] * g[i];
    }
}

std::pair<std::vector<double>, std::vector<double>>
bias_correct(const std::vector<double>& m, const std::vector<double>& v,
             std::int64_t t, double beta1, double beta2) {
    const double d1 = bias_denominator(beta1, t);
    const double d2 = bias_denominator(beta2, t);
    std::vector<double> m_hat(m.size());
    std::vector<double> v_hat(v.size());
    for (std::size_t i = 0; i < m.size(); ++i) m_hat[i] = m[i] / d1;
    for (std::size_t i = 0; i < v.size(); ++i) v_hat[i] = v[i] / d2;
    return {std::move(m_hat), std::move(v_hat)};
}

Rectification rectification(std::int64_t t, double beta2) {
    Rectification out;
    out.rho_inf = 2.0 / (1.0 - beta2) - 1.0;
    const double beta2_t = t <= 1000
        ? std::pow(beta2, static_cast<double>(t))
        : std::exp(static_cast<double>(t) * std::log(beta2));
    const double denom = 1.0 - beta2_t;
    out.rho_t = out.rho_inf - 2.0 * static_cast<double>(t) * beta2_t / denom;
    out.rectify = out.rho_t >= 5.0;
    if (out.rectify) {
        out.r = std::sqrt(((out.rho_t - 4.0) * (out.rho_t - 2.0) * out.rho_inf) /
                          ((out.rho_inf - 4.0) * (out.rho_inf - 2.0) * out.rho_t));
    }
    return out;
}

} // namespace novak
