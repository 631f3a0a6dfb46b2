#include "support/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracles {

Vec storing_lookahead_oracle(const Vec& theta0, const std::vector<Vec>& fast_iterates,
                             double alpha_la) {
    if (fast_iterates.empty()) {
        throw std::invalid_argument("storing_lookahead_oracle: no fast iterates");
    }
    Vec mean_offset(theta0.size(), 0.0);
    for (const Vec& iterate : fast_iterates) {
        for (std::size_t i = 0; i < theta0.size(); ++i) {
            mean_offset[i] += iterate[i] - theta0[i];
        }
    }
    Vec out(theta0.size());
    for (std::size_t i = 0; i < theta0.size(); ++i) {
        out[i] = theta0[i] + alpha_la * (mean_offset[i] / static_cast<double>(fast_iterates.size()));
    }
    return out;
}

Vec closed_form_decay(const Vec& theta0, double alpha, double lam, std::int64_t t) {
    const double factor = std::pow(1.0 - alpha * lam, static_cast<double>(t));
    Vec out(theta0.size());
    for (std::size_t i = 0; i < theta0.size(); ++i) out[i] = factor * theta0[i];
    return out;
}

TraceOracle reference_adam_trajectory(const GradientFn& grad, const Vec& theta0,
                                      std::int64_t steps, const AdamParams& params) {
    TraceOracle trace;
    Vec theta = theta0;
    Vec m(theta.size(), 0.0);
    Vec v(theta.size(), 0.0);
    for (std::int64_t t = 1; t <= steps; ++t) {
        const Vec g = grad(theta);
        const double d1 = 1.0 - std::pow(params.beta1, static_cast<double>(t));
        const double d2 = 1.0 - std::pow(params.beta2, static_cast<double>(t));
        for (std::size_t i = 0; i < theta.size(); ++i) {
            m[i] = params.beta1 * m[i] + (1.0 - params.beta1) * g[i];
            v[i] = params.beta2 * v[i] + (1.0 - params.beta2) * g[i] * g[i];
            const double m_hat = m[i] / d1;
            const double v_hat = v[i] / d2;
            theta[i] -= params.alpha * m_hat / std::sqrt(v_hat + params.epsilon);
        }
        trace.snapshots.push_back(theta);
        trace.inputs.push_back(g);
    }
    return trace;
}

TraceOracle reference_radam_trajectory(const GradientFn& grad, const Vec& theta0,
                                       std::int64_t steps, const AdamParams& params) {
    TraceOracle trace;
    Vec theta = theta0;
    Vec m(theta.size(), 0.0);
    Vec v(theta.size(), 0.0);
    const double rho_inf = 2.0 / (1.0 - params.beta2) - 1.0;
    for (std::int64_t t = 1; t <= steps; ++t) {
        const Vec g = grad(theta);
        const double beta1_t = std::pow(params.beta1, static_cast<double>(t));
        const double beta2_t = std::pow(params.beta2, static_cast<double>(t));
        const double d1 = 1.0 - beta1_t;
        const double d2 = 1.0 - beta2_t;
        const double rho_t = rho_inf - 2.0 * static_cast<double>(t) * beta2_t / d2;

        double factor;
        if (rho_t >= 5.0) {
            const double r = std::sqrt(((rho_t - 4.0) * (rho_t - 2.0) * rho_inf) /
                                       ((rho_inf - 4.0) * (rho_inf - 2.0) * rho_t));
            factor = params.alpha * r / d1;
        } else {
            factor = params.alpha / d1;
        }

        for (std::size_t i = 0; i < theta.size(); ++i) {
            m[i] = params.beta1 * m[i] + (1.0 - params.beta1) * g[i];
            v[i] = params.beta2 * v[i] + (1.0 - params.beta2) * g[i] * g[i];
            const double m_hat = m[i] / d1;
            const double v_hat = v[i] / d2;
            theta[i] -= factor * m_hat / std::sqrt(v_hat + params.epsilon);
        }
        trace.snapshots.push_back(theta);
        trace.inputs.push_back(g);
    }
    return trace;
}

} // namespace oracles
