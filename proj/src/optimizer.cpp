#include "novak/optimizer.hpp"

#include <cmath>

#include "novak/errors.hpp"

namespace novak {

NovakOptimizer::NovakOptimizer(ParameterModel model, OptimizerConfig config)
    : model_(std::move(model)), config_(std::move(config)) {
    validate_model(model_);
    warnings_ = config_.normalize();

    moments_.m.reserve(model_.size());
    moments_.v.reserve(model_.size());
    for (const auto& group : model_) {
        moments_.m.emplace_back(group.values.size(), 0.0);
        moments_.v.emplace_back(group.values.size(), 0.0);
    }
    if (config_.nesterov_mode == NesterovMode::true_nesterov ||
        config_.nesterov_mode == NesterovMode::approximation) {
        moments_.prev_m = moments_.m;
    }

    lookahead_.mode = config_.lookahead_mode;
    if (lookahead_.mode != LookaheadMode::none) {
        la_begin_window(model_, lookahead_);
    }
}

StepReport NovakOptimizer::step(const GradientSet& grads, const GradientClosure& closure) {
    validate_gradients(model_, grads);
    const std::string bad_group = first_non_finite_group(model_, grads);
    if (!bad_group.empty()) {
        throw NumericError("non-finite gradient in group '" + bad_group + "'");
    }

    const std::int64_t t = moments_.t + 1;
    const bool wants_extrapolation =
        config_.nesterov_mode == NesterovMode::true_nesterov ||
        config_.nesterov_mode == NesterovMode::approximation;

    StepReport report;
    report.grad_norm = global_l2_norm(grads);

    // m_{t-1}, snapshotted before this step's moment update touches m.
    if (wants_extrapolation) {
        moments_.prev_m = moments_.m;
    }

    // Phase 1: closure evaluation at the extrapolated point (true Nesterov,
    // before the Taylor fallback kicks in). Original parameters are saved
    // and restored around the closure call.
    GradientSet g = grads;
    bool used_closure = false;
    if (config_.nesterov_mode == NesterovMode::true_nesterov && t <= config_.n_taylor) {
        if (!closure) {
            throw ConfigError("true_nesterov requires a gradient closure while t <= n_taylor");
        }
        std::vector<std::vector<double>> saved;
        saved.reserve(model_.size());
        for (const auto& group : model_) saved.push_back(group.values);
        for (std::size_t gi = 0; gi < model_.size(); ++gi) {
            auto& theta = model_[gi].values;
            const auto& mp = moments_.prev_m[gi];
            for (std::size_t i = 0; i < theta.size(); ++i) {
                theta[i] += config_.nesterov_coeff * mp[i];
            }
        }
        try {
            g = closure(model_);
        } catch (...) {
            for (std::size_t gi = 0; gi < model_.size(); ++gi) {
                model_[gi].values = std::move(saved[gi]);
            }
            throw;
        }
        for (std::size_t gi = 0; gi < model_.size(); ++gi) {
            model_[gi].values = std::move(saved[gi]);
        }
        validate_gradients(model_, g);
        const std::string bad = first_non_finite_group(model_, g);
        if (!bad.empty()) {
            throw NumericError("non-finite closure gradient in group '" + bad + "'");
        }
        used_closure = true;
    }
    report.used_closure = used_closure;

    // Phase 2: centralization, global norm clipping, Nesterov approximation.
    if (config_.use_gc) {
        for (std::size_t gi = 0; gi < model_.size(); ++gi) {
            if (model_[gi].rank() > 1) {
                g.groups[gi] = centralize_gradient(g.groups[gi], model_[gi].shape);
            }
        }
    }
    if (config_.clip_threshold > 0.0) {
        g = clip_gradient_global(g, config_.clip_threshold);
    }
    if (wants_extrapolation && !used_closure) {
        for (std::size_t gi = 0; gi < g.groups.size(); ++gi) {
            g.groups[gi] =
                nesterov_transform(NesterovMode::approximation, g.groups[gi],
                                   moments_.prev_m[gi], config_.nesterov_coeff, t,
                                   config_.n_taylor, false)
                    .g_tilde;
        }
    }

    // Phase 3: per-step momentum decays.
    const auto [beta1_t, beta2_t] = effective_betas(t, config_);

    // Phase 4: moment EMAs.
    for (std::size_t gi = 0; gi < g.groups.size(); ++gi) {
        update_moments(moments_.m[gi], moments_.v[gi], g.groups[gi], beta1_t, beta2_t);
    }
    moments_.t = t;
    moments_.beta1_power = std::pow(config_.beta1, static_cast<double>(t));
    moments_.beta2_power = std::pow(config_.beta2, static_cast<double>(t));

    // Phase 5: bias correction with the base beta powers.
    std::vector<std::vector<double>> m_hat(model_.size());
    std::vector<std::vector<double>> v_hat(model_.size());
    for (std::size_t gi = 0; gi < model_.size(); ++gi) {
        auto corrected = bias_correct(moments_.m[gi], moments_.v[gi], t,
                                      config_.beta1, config_.beta2);
        m_hat[gi] = std::move(corrected.first);
        v_hat[gi] = std::move(corrected.second);
    }

    // Phase 6: variance rectification.
    std::optional<Rectification> rect;
    if (config_.rectified) {
        rect = rectification(t, config_.beta2);
        if (rect->rectify) report.rectifier = rect->r;
    }

    // Phase 8 direction first: trust ratios in Phase 7 need its norms.
    std::vector<std::vector<double>> u(model_.size());
    for (std::size_t gi = 0; gi < model_.size(); ++gi) {
        const auto& mh = m_hat[gi];
        const auto& vh = v_hat[gi];
        auto& ug = u[gi];
        ug.resize(mh.size());
        for (std::size_t i = 0; i < mh.size(); ++i) {
            ug[i] = mh[i] / std::sqrt(vh[i] + config_.epsilon);
        }
    }

    // Phase 7: layer-wise trust ratios and auto-LR, full features mode only.
    const bool use_trust = config_.full_features_mode && config_.layer_adaptation;
    const bool use_auto = config_.full_features_mode && config_.auto_lr;
    std::vector<double> trust(model_.size(), 1.0);
    if (use_trust) {
        for (std::size_t gi = 0; gi < model_.size(); ++gi) {
            trust[gi] = trust_ratio(l2_norm(model_[gi].values), l2_norm(u[gi]),
                                    config_.trust_clip_lo, config_.trust_clip_hi);
        }
    }
    std::optional<double> auto_scale;
    if (use_auto) {
        double theta_sq = 0.0;
        for (const auto& group : model_) {
            for (double x : group.values) theta_sq += x * x;
        }
        auto_scale = auto_lr_scale(auto_lr_, global_l2_norm(g), std::sqrt(theta_sq), config_);
    }

    // Phase 8 continued: sparse masking, then the classical momentum blend.
    if (config_.sparse_threshold > 0.0) {
        for (auto& ug : u) ug = sparse_threshold(ug, config_.sparse_threshold);
    }
    if (config_.nesterov_mode == NesterovMode::classical) {
        for (std::size_t gi = 0; gi < u.size(); ++gi) {
            u[gi] = classical_nesterov_blend(m_hat[gi], u[gi], config_.beta1);
        }
    }

    const double lr_global = effective_lr(config_, t, rect, std::nullopt, auto_scale);
    report.effective_lr = lr_global;

    // Phase 9: decoupled decay with the base rate, then the adaptive update.
    if (config_.decoupled_decay && config_.weight_decay > 0.0) {
        const double shrink = 1.0 - config_.alpha * config_.weight_decay;
        for (auto& group : model_) {
            for (double& x : group.values) x *= shrink;
        }
    }
    report.update_norms.resize(model_.size());
    double update_sq = 0.0;
    for (std::size_t gi = 0; gi < model_.size(); ++gi) {
        const double scale = lr_global * trust[gi];
        auto& theta = model_[gi].values;
        const auto& ug = u[gi];
        double norm_sq = 0.0;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            const double delta = scale * ug[i];
            theta[i] -= delta;
            norm_sq += delta * delta;
        }
        report.update_norms[gi] = std::sqrt(norm_sq);
        update_sq += norm_sq;
    }
    report.update_norm_global = std::sqrt(update_sq);

    for (const auto& group : model_) {
        if (!all_finite(group.values)) {
            throw NumericError("non-finite parameter in group '" + group.name + "' after update");
        }
    }

    // Phase 10: lookahead accumulation / synchronization.
    if (lookahead_.mode == LookaheadMode::memory_efficient) {
        la_accumulate(model_, lookahead_);
        if (lookahead_.inner_step_index == config_.lookahead_k) {
            la_sync(model_, lookahead_, config_.lookahead_alpha, config_.lookahead_k);
        }
    } else if (lookahead_.mode == LookaheadMode::basic) {
        ++lookahead_.inner_step_index;
        if (lookahead_.inner_step_index == config_.lookahead_k) {
            basic_sync(model_, lookahead_, config_.lookahead_alpha);
        }
    }

    return report;
}

StateCensus NovakOptimizer::memory_census() const {
    StateCensus census = lookahead_census(lookahead_);
    census.params = 1;
    census.first_moment = 1;
    census.second_moment = 1;
    return census;
}

StateCensus state_memory_census(const NovakOptimizer& optimizer) {
    return optimizer.memory_census();
}

} // namespace novak
