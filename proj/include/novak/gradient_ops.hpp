#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "novak/config.hpp"
#include "novak/params.hpp"

namespace novak {

/// Re-evaluates gradients with the model temporarily moved to another point
/// (the true-Nesterov closure; see NovakOptimizer::step for the protocol).
using GradientClosure = std::function<GradientSet(const ParameterModel&)>;

/// Gradient centering for multi-axis groups: subtracts from each
/// leading-axis slice its mean over the remaining axes. Rank <= 1 shapes
/// pass through unchanged.
std::vector<double> centralize_gradient(const std::vector<double>& g,
                                        const std::vector<std::size_t>& shape);

/// Scales all groups uniformly so the global L2 norm is at most c.
GradientSet clip_gradient_global(const GradientSet& grads, double c);

struct NesterovResult {
    std::vector<double> g_tilde;
    bool used_closure = false;
};

/// First-order surrogate for the gradient at the momentum-extrapolated
/// point: g + beta_n * (g - m_prev). none and classical return g unchanged
/// (classical blends later, in the update phase).
NesterovResult nesterov_transform(NesterovMode mode, const std::vector<double>& g,
                                  const std::vector<double>& m_prev, double beta_n,
                                  std::int64_t t, int n_taylor, bool closure_available);

/// beta1 * m_hat + (1 - beta1) * u, the Nadam-style blended direction.
std::vector<double> classical_nesterov_blend(const std::vector<double>& m_hat,
                                             const std::vector<double>& u, double beta1);

/// Zeroes entries with |u[i]| <= tau.
std::vector<double> sparse_threshold(const std::vector<double>& u, double tau);

} // namespace novak
