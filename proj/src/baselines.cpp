#include "novak/baselines.hpp"

#include <cmath>

#include "novak/errors.hpp"
#include "novak/moments.hpp"

namespace novak {

std::string to_string(BaselineKind kind) {
    switch (kind) {
        case BaselineKind::sgd_momentum: return "sgd_momentum";
        case BaselineKind::adam: return "adam";
        case BaselineKind::adamw: return "adamw";
        case BaselineKind::radam: return "radam";
        case BaselineKind::lookahead_adam: return "lookahead_adam";
    }
    return "?";
}

BaselineKind baseline_kind_from_string(const std::string& s) {
    if (s == "sgd_momentum") return BaselineKind::sgd_momentum;
    if (s == "adam") return BaselineKind::adam;
    if (s == "adamw") return BaselineKind::adamw;
    if (s == "radam") return BaselineKind::radam;
    if (s == "lookahead_adam") return BaselineKind::lookahead_adam;
    throw ConfigError("unknown baseline optimizer '" + s + "'");
}

void BaselineConfig::validate() const {
    if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("beta1 must be in [0, 1)");
    if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("beta2 must be in [0, 1)");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be nonnegative");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must be in [0, 1)");
    if (!(lookahead_alpha > 0.0 && lookahead_alpha < 1.0)) {
        throw ConfigError("lookahead_alpha must be in (0, 1)");
    }
    if (lookahead_k < 1) throw ConfigError("lookahead_k must be >= 1");
    if (kind == BaselineKind::radam && !(beta2 < 1.0 - 1e-8)) {
        throw ConfigError("radam requires beta2 < 1 - 1e-8");
    }
}

BaselineOptimizer::BaselineOptimizer(ParameterModel model, BaselineConfig config)
    : model_(std::move(model)), config_(config) {
    validate_model(model_);
    config_.validate();

    if (config_.kind == BaselineKind::sgd_momentum) {
        for (const auto& group : model_) {
            velocity_.emplace_back(group.values.size(), 0.0);
        }
    } else {
        for (const auto& group : model_) {
            m_.emplace_back(group.values.size(), 0.0);
            v_.emplace_back(group.values.size(), 0.0);
        }
        if (config_.kind == BaselineKind::lookahead_adam) {
            for (const auto& group : model_) {
                slow_.push_back(group.values);
            }
        }
    }
}

void BaselineOptimizer::step(const GradientSet& grads) {
    validate_gradients(model_, grads);
    const std::string bad = first_non_finite_group(model_, grads);
    if (!bad.empty()) {
        throw NumericError("non-finite gradient in group '" + bad + "'");
    }
    ++t_;
    if (config_.kind == BaselineKind::sgd_momentum) {
        step_sgd(grads);
    } else {
        step_adam_family(grads);
    }
}

void BaselineOptimizer::step_sgd(const GradientSet& grads) {
    for (std::size_t gi = 0; gi < model_.size(); ++gi) {
        auto& theta = model_[gi].values;
        auto& vel = velocity_[gi];
        const auto& g = grads.groups[gi];
        for (std::size_t i = 0; i < theta.size(); ++i) {
            double grad = g[i];
            if (config_.weight_decay != 0.0) grad += config_.weight_decay * theta[i];
            vel[i] = config_.momentum * vel[i] + grad;
            theta[i] -= config_.alpha * vel[i];
        }
    }
}

void BaselineOptimizer::step_adam_family(const GradientSet& grads) {
    const double d1 = bias_denominator(config_.beta1, t_);
    const double d2 = bias_denominator(config_.beta2, t_);

    // Step factor: plain alpha for adam/adamw/lookahead_adam; radam applies
    // the rectified schedule on top of the bias-corrected moments.
    double factor = config_.alpha;
    if (config_.kind == BaselineKind::radam) {
        const Rectification rect = rectification(t_, config_.beta2);
        factor = rect.rectify ? config_.alpha * rect.r / d1 : config_.alpha / d1;
    }

    if (config_.kind == BaselineKind::adamw && config_.weight_decay != 0.0) {
        const double shrink = 1.0 - config_.alpha * config_.weight_decay;
        for (auto& group : model_) {
            for (double& x : group.values) x *= shrink;
        }
    }

    for (std::size_t gi = 0; gi < model_.size(); ++gi) {
        auto& theta = model_[gi].values;
        auto& m = m_[gi];
        auto& v = v_[gi];
        const auto& g = grads.groups[gi];
        for (std::size_t i = 0; i < theta.size(); ++i) {
            double grad = g[i];
            const bool coupled_decay = config_.kind == BaselineKind::adam ||
                                       config_.kind == BaselineKind::lookahead_adam;
            if (coupled_decay && config_.weight_decay != 0.0) {
                grad += config_.weight_decay * theta[i]; // coupled L2, classic Adam
            }
            m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * grad;
            v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * grad * grad;
            const double m_hat = m[i] / d1;
            const double v_hat = v[i] / d2;
            theta[i] -= factor * m_hat / std::sqrt(v_hat + config_.epsilon);
        }
    }

    if (config_.kind == BaselineKind::lookahead_adam) {
        ++inner_index_;
        if (inner_index_ == config_.lookahead_k) {
            inner_index_ = 0;
            for (std::size_t gi = 0; gi < model_.size(); ++gi) {
                auto& theta = model_[gi].values;
                auto& slow = slow_[gi];
                for (std::size_t i = 0; i < theta.size(); ++i) {
                    slow[i] += config_.lookahead_alpha * (theta[i] - slow[i]);
                    theta[i] = slow[i];
                }
            }
        }
    }
}

int BaselineOptimizer::persistent_vectors() const {
    switch (config_.kind) {
        case BaselineKind::sgd_momentum: return 2;
        case BaselineKind::adam:
        case BaselineKind::adamw:
        case BaselineKind::radam: return 3;
        case BaselineKind::lookahead_adam: return 4;
    }
    return 0;
}

} // namespace novak
