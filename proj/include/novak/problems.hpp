#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "novak/params.hpp"

namespace novak {

/// A differentiable test objective with analytic gradients. Problems are
/// immutable and freely shareable; evaluation is reentrant.
struct Problem {
    std::string name;
    std::size_t dimension = 0;

    std::function<double(const std::vector<double>&)> eval;
    std::function<std::vector<double>(const std::vector<double>&)> grad;

    /// Mini-batch gradient; null for deterministic problems. The seed fully
    /// determines the sample, making runs reproducible.
    std::function<std::vector<double>(const std::vector<double>&, std::uint64_t, std::size_t)>
        stochastic_grad;

    /// Held-out accuracy for classification problems; null otherwise.
    std::function<double(const std::vector<double>&)> holdout_accuracy;

    /// Seeded starting point, organized into shaped parameter groups.
    std::function<ParameterModel(std::uint64_t)> initial_model;

    std::optional<double> optimum_value;
    std::optional<double> lipschitz_hint;
};

/// L(theta) = 1/2 theta^T A theta with A diagonal, eigenvalues log-spaced in
/// [1, condition_number] and shuffled across coordinates by the seed.
Problem quadratic_problem(std::size_t dimension, double condition_number, std::uint64_t seed);

/// Quadratic with Gaussian noise of scale sigma added to stochastic gradients.
Problem noisy_quadratic_problem(std::size_t dimension, double condition_number,
                                double noise_sigma, std::uint64_t seed);

/// Chained Rosenbrock; optimum 0 at all-ones.
Problem rosenbrock_problem(std::size_t n);

/// Binary logistic regression on synthetic near-separable data with an
/// 80/20 train/holdout split fixed by the seed.
Problem logistic_regression_problem(std::size_t n_features, std::size_t n_samples,
                                    std::uint64_t seed);

/// Plain tanh MLP (no skip connections, no normalization) on a two-spirals
/// classification task, with manual backprop and per-layer parameter groups.
Problem deep_plain_mlp_problem(std::size_t depth, std::size_t width, std::uint64_t seed);

/// Central differences: component i is (L(theta+h e_i) - L(theta-h e_i)) / 2h.
std::vector<double> finite_difference_gradient(const Problem& problem,
                                               const std::vector<double>& theta, double h);

Problem problem_from_name(const std::string& name, std::size_t dimension, double condition,
                          double noise_sigma, std::size_t n_samples, std::size_t depth,
                          std::size_t width, std::uint64_t seed);

} // namespace novak
