#include "novak/config.hpp"

#include "novak/errors.hpp"

namespace novak {

std::string to_string(NesterovMode mode) {
    switch (mode) {
        case NesterovMode::true_nesterov: return "true_nesterov";
        case NesterovMode::approximation: return "approximation";
        case NesterovMode::classical: return "classical";
        case NesterovMode::none: return "none";
    }
    return "?";
}

std::string to_string(LookaheadMode mode) {
    switch (mode) {
        case LookaheadMode::memory_efficient: return "memory_efficient";
        case LookaheadMode::basic: return "basic";
        case LookaheadMode::none: return "none";
    }
    return "?";
}

std::string to_string(AutoLrVariant variant) {
    switch (variant) {
        case AutoLrVariant::ratio_clip: return "ratio_clip";
        case AutoLrVariant::log_ema: return "log_ema";
    }
    return "?";
}

NesterovMode nesterov_mode_from_string(const std::string& s) {
    if (s == "true_nesterov") return NesterovMode::true_nesterov;
    if (s == "approximation") return NesterovMode::approximation;
    if (s == "classical") return NesterovMode::classical;
    if (s == "none") return NesterovMode::none;
    throw ConfigError("unknown nesterov_mode '" + s +
                      "'; expected true_nesterov, approximation, classical or none");
}

LookaheadMode lookahead_mode_from_string(const std::string& s) {
    if (s == "memory_efficient") return LookaheadMode::memory_efficient;
    if (s == "basic") return LookaheadMode::basic;
    if (s == "none") return LookaheadMode::none;
    if (s == "gradient_avg" || s == "stochastic") {
        throw ConfigError("lookahead mode '" + s +
                          "' is not implemented; use memory_efficient, basic or none");
    }
    throw ConfigError("unknown lookahead_mode '" + s +
                      "'; expected memory_efficient, basic or none");
}

AutoLrVariant auto_lr_variant_from_string(const std::string& s) {
    if (s == "ratio_clip") return AutoLrVariant::ratio_clip;
    if (s == "log_ema") return AutoLrVariant::log_ema;
    throw ConfigError("unknown auto_lr_variant '" + s + "'; expected ratio_clip or log_ema");
}

std::vector<std::string> OptimizerConfig::normalize() {
    if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("beta1 must be in [0, 1)");
    if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("beta2 must be in [0, 1)");
    if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be nonnegative");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(nesterov_coeff >= 0.0 && nesterov_coeff < 1.0)) {
        throw ConfigError("nesterov_coeff must be in [0, 1)");
    }
    if (n_taylor < 1) throw ConfigError("n_taylor must be a positive integer");
    if (!(lookahead_alpha > 0.0 && lookahead_alpha < 1.0)) {
        throw ConfigError("lookahead_alpha must be in (0, 1)");
    }
    if (lookahead_k < 1) throw ConfigError("lookahead_k must be >= 1");
    if (rectified && !(beta2 < 1.0 - 1e-8)) {
        throw ConfigError("rectified mode requires beta2 < 1 - 1e-8");
    }
    if (!(tau1 > 0.0) || !(tau2 > 0.0)) throw ConfigError("tau1 and tau2 must be positive");
    if (clip_threshold < 0.0) {
        throw ConfigError("clip_threshold must be positive, or 0 to disable clipping");
    }
    if (sparse_threshold < 0.0) throw ConfigError("sparse_threshold must be nonnegative");
    if (!(auto_lr_gamma > 0.0 && auto_lr_gamma <= 1.0)) {
        throw ConfigError("auto_lr_gamma must be in (0, 1]");
    }
    if (!(trust_clip_lo > 0.0) || !(trust_clip_hi > 0.0) || trust_clip_lo > trust_clip_hi) {
        throw ConfigError("trust_clip bounds must be positive with lo <= hi");
    }

    std::vector<std::string> warnings;
    if (!full_features_mode) {
        if (nesterov_mode == NesterovMode::true_nesterov) {
            nesterov_mode = NesterovMode::approximation;
            warnings.push_back(
                "true_nesterov requires full_features_mode; substituting approximation");
        }
        if (lookahead_mode == LookaheadMode::basic) {
            lookahead_mode = LookaheadMode::memory_efficient;
            warnings.push_back(
                "basic lookahead requires full_features_mode; substituting memory_efficient");
        }
        if (layer_adaptation) {
            warnings.push_back("layer_adaptation has no effect without full_features_mode");
        }
        if (auto_lr) {
            warnings.push_back("auto_lr has no effect without full_features_mode");
        }
    }
    return warnings;
}

} // namespace novak
