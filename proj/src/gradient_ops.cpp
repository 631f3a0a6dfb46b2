#include "novak/gradient_ops.hpp"

#include <cmath>
#include <cstddef>

#include "novak/errors.hpp"

namespace novak {

std::vector<double> centralize_gradient(const std::vector<double>& g,
                                        const std::vector<std::size_t>& shape) {
    if (shape.size() <= 1) {
        return g;
    }
    std::size_t prod = 1;
    for (std::size_t extent : shape) prod *= extent;
    if (prod != g.size()) {
        throw DimensionError("centralize_gradient: shape product != vector length");
    }
    const std::size_t slices = shape[0];
    const std::size_t slice_len = g.size() / slices;
    std::vector<double> out(g.size());
    for (std::size_t s = 0; s < slices; ++s) {
        const std::size_t base = s * slice_len;
        double mean = 0.0;
        for (std::size_t i = 0; i < slice_len; ++i) mean += g[base + i];
        mean /= static_cast<double>(slice_len);
        for (std::size_t i = 0; i < slice_len; ++i) out[base + i] = g[base + i] - mean;
    }
    return out;
}

GradientSet clip_gradient_global(const GradientSet& grads, double c) {
    if (!(c > 0.0)) {
        throw ConfigError("clip threshold must be positive");
    }
    const double norm = global_l2_norm(grads);
    if (norm <= c) {
        return grads;
    }
    const double scale = c / norm;
    GradientSet out = grads;
    for (auto& group : out.groups) {
        for (double& x : group) x *= scale;
    }
    return out;
}

NesterovResult nesterov_transform(NesterovMode mode, const std::vector<double>& g,
                                  const std::vector<double>& m_prev, double beta_n,
                                  std::int64_t t, int n_taylor, bool closure_available) {
    NesterovResult out;
    switch (mode) {
        case NesterovMode::none:
        case NesterovMode::classical:
            out.g_tilde = g;
            return out;
        case NesterovMode::true_nesterov:
            if (!closure_available) {
                throw ConfigError("true_nesterov requires a gradient closure");
            }
            if (t <= n_taylor) {
                // Caller evaluated the closure at theta + beta_n * m_prev;
                // g already is the extrapolated gradient.
                out.g_tilde = g;
                out.used_closure = true;
                return out;
            }
            [[fallthrough]];
        case NesterovMode::approximation: {
            if (g.size() != m_prev.size()) {
                throw DimensionError("nesterov_transform: gradient/momentum lengths differ");
            }
            out.g_tilde.resize(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) {
                out.g_tilde[i] = g[i] + beta_n * (g[i] - m_prev[i]);
            }
            return out;
        }
    }
    out.g_tilde = g;
    return out;
}

std::vector<double> classical_nesterov_blend(const std::vector<double>& m_hat,
                                             const std::vector<double>& u, double beta1) {
    if (m_hat.size() != u.size()) {
        throw DimensionError("classical_nesterov_blend: lengths differ");
    }
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        out[i] = beta1 * m_hat[i] + (1.0 - beta1) * u[i];
    }
    return out;
}

std::vector<double> sparse_threshold(const std::vector<double>& u, double tau) {
    if (tau < 0.0) {
        throw ConfigError("sparse threshold must be nonnegative");
    }
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        out[i] = std::abs(u[i]) > tau ? u[i] : 0.0;
    }
    return out;
}

} // namespace novak
