#pragma once

#include <vector>

#include "novak/config.hpp"
#include "novak/params.hpp"

namespace novak {

/// Slow-weight state for one synchronization window. The memory-efficient
/// variant keeps a checkpoint of the window's starting parameters plus the
/// running offset sum Delta; the basic variant keeps a persistent slow copy
/// in slow_checkpoint and no Delta.
struct LookaheadState {
    LookaheadMode mode = LookaheadMode::none;
    std::vector<std::vector<double>> slow_checkpoint;
    std::vector<std::vector<double>> delta;
    int inner_step_index = 0;
};

/// Opens a window: checkpoint := current parameters, Delta := 0, index := 0.
void la_begin_window(const ParameterModel& model, LookaheadState& state);

/// Memory-efficient accumulation: Delta += (theta_current - checkpoint),
/// so Delta / k is the mean fast-weight offset over the window.
void la_accumulate(const ParameterModel& model, LookaheadState& state);

/// Memory-efficient synchronization after k inner steps:
/// theta_slow_new = checkpoint + alpha_la * Delta / k, fast weights reset to
/// it, and a new window begins there.
void la_sync(ParameterModel& model, LookaheadState& state, double alpha_la, int k);

/// Basic-variant synchronization: slow += alpha_la * (fast - slow), fast
/// reset to slow, window restarts.
void basic_sync(ParameterModel& model, LookaheadState& state, double alpha_la);

/// Census of persistent p-length state vectors by component. The
/// memory-efficient checkpoint and Delta are flagged transient: they live
/// only within a synchronization window.
struct StateCensus {
    int params = 0;
    int first_moment = 0;
    int second_moment = 0;
    int slow_checkpoint = 0;
    int delta = 0;
    bool lookahead_transient = false;

    int persistent_total() const {
        int n = params + first_moment + second_moment;
        if (!lookahead_transient) n += slow_checkpoint + delta;
        return n;
    }
    int transient_total() const {
        return lookahead_transient ? slow_checkpoint + delta : 0;
    }
    int live_total() const {
        return params + first_moment + second_moment + slow_checkpoint + delta;
    }
};

StateCensus lookahead_census(const LookaheadState& state);

} // namespace novak
