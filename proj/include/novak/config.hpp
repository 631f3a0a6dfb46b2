#pragma once

#include <string>
#include <vector>

namespace novak {

enum class NesterovMode { true_nesterov, approximation, classical, none };
enum class LookaheadMode { memory_efficient, basic, none };
enum class AutoLrVariant { ratio_clip, log_ema };

std::string to_string(NesterovMode mode);
std::string to_string(LookaheadMode mode);
std::string to_string(AutoLrVariant variant);

NesterovMode nesterov_mode_from_string(const std::string& s);
LookaheadMode lookahead_mode_from_string(const std::string& s);
AutoLrVariant auto_lr_variant_from_string(const std::string& s);

/// All optimizer hyperparameters and feature flags. Defaults are the fast
/// path: rectification, decoupled decay, Nesterov approximation and
/// memory-efficient lookahead on; research-mode extras off.
struct OptimizerConfig {
    double alpha = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double weight_decay = 0.01;
    double epsilon = 1e-8;

    NesterovMode nesterov_mode = NesterovMode::approximation;
    double nesterov_coeff = 0.9;  // beta_N
    int n_taylor = 150;           // true -> approximation fallback step

    LookaheadMode lookahead_mode = LookaheadMode::memory_efficient;
    double lookahead_alpha = 0.5;
    int lookahead_k = 10;

    bool rectified = true;
    bool decoupled_decay = true;

    bool adaptive_beta = false;
    double tau1 = 1000.0;
    double tau2 = 5000.0;

    bool use_gc = false;
    double clip_threshold = 1.0;   // global gradient norm; <= 0 disables
    double sparse_threshold = 0.0; // update magnitude mask; 0 disables

    bool layer_adaptation = false;
    bool auto_lr = false;
    AutoLrVariant auto_lr_variant = AutoLrVariant::ratio_clip;
    double auto_lr_gamma = 0.1;
    double trust_clip_lo = 0.1;
    double trust_clip_hi = 10.0;

    bool full_features_mode = false;

    /// Validates numeric ranges (throws ConfigError) and applies the fast
    /// path downgrades in place: outside full features mode, true Nesterov
    /// becomes approximation and basic lookahead becomes memory-efficient.
    /// Returns one warning line per substitution.
    std::vector<std::string> normalize();
};

} // namespace novak
