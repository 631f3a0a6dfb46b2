#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "novak/params.hpp"

namespace novak {

enum class BaselineKind { sgd_momentum, adam, adamw, radam, lookahead_adam };

std::string to_string(BaselineKind kind);
BaselineKind baseline_kind_from_string(const std::string& s);

struct BaselineConfig {
    BaselineKind kind = BaselineKind::adam;
    double alpha = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double weight_decay = 0.0;
    double momentum = 0.9;       // sgd_momentum only
    double lookahead_alpha = 0.5; // lookahead_adam only
    int lookahead_k = 10;

    void validate() const;
};

/// Reference optimizers for comparison runs and reduction tests. Same
/// single-writer contract as NovakOptimizer. Epsilon sits inside the square
/// root, matching the core optimizer so reductions can be exact.
class BaselineOptimizer {
public:
    BaselineOptimizer(ParameterModel model, BaselineConfig config);

    void step(const GradientSet& grads);

    const ParameterModel& model() const { return model_; }
    const BaselineConfig& config() const { return config_; }
    std::int64_t step_count() const { return t_; }

    /// Persistent p-length state vectors including the parameters.
    int persistent_vectors() const;

private:
    void step_sgd(const GradientSet& grads);
    void step_adam_family(const GradientSet& grads);

    ParameterModel model_;
    BaselineConfig config_;
    std::int64_t t_ = 0;
    std::vector<std::vector<double>> velocity_; // sgd_momentum
    std::vector<std::vector<double>> m_;
    std::vector<std::vector<double>> v_;
    std::vector<std::vector<double>> slow_; // lookahead_adam
    int inner_index_ = 0;
};

} // namespace novak
