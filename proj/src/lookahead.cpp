#include "novak/lookahead.hpp"

#include "novak/errors.hpp"

namespace novak {

void la_begin_window(const ParameterModel& model, LookaheadState& state) {
    if (state.mode == LookaheadMode::none) {
        throw ContractError("la_begin_window: lookahead is disabled");
    }
    state.slow_checkpoint.clear();
    state.slow_checkpoint.reserve(model.size());
    for (const auto& group : model) {
        state.slow_checkpoint.push_back(group.values);
    }
    if (state.mode == LookaheadMode::memory_efficient) {
        state.delta.clear();
        state.delta.reserve(model.size());
        for (const auto& group : model) {
            state.delta.emplace_back(group.values.size(), 0.0);
        }
    }
    state.inner_step_index = 0;
}

void la_accumulate(const ParameterModel& model, LookaheadState& state) {
    if (state.mode != LookaheadMode::memory_efficient) {
        throw ContractError("la_accumulate: only the memory_efficient variant stores Delta");
    }
    if (model.size() != state.delta.size()) {
        throw DimensionError("la_accumulate: model/state group counts differ");
    }
    for (std::size_t gi = 0; gi < model.size(); ++gi) {
        const auto& theta = model[gi].values;
        const auto& checkpoint = state.slow_checkpoint[gi];
        auto& delta = state.delta[gi];
        for (std::size_t i = 0; i < theta.size(); ++i) {
            delta[i] += theta[i] - checkpoint[i];
        }
    }
    ++state.inner_step_index;
}

void la_sync(ParameterModel& model, LookaheadState& state, double alpha_la, int k) {
    if (state.mode != LookaheadMode::memory_efficient) {
        throw ContractError("la_sync: only the memory_efficient variant synchronizes via Delta");
    }
    if (state.inner_step_index != k) {
        throw ContractError("la_sync called after " + std::to_string(state.inner_step_index) +
                            " inner steps; window length is " + std::to_string(k));
    }
    for (std::size_t gi = 0; gi < model.size(); ++gi) {
        auto& theta = model[gi].values;
        auto& checkpoint = state.slow_checkpoint[gi];
        auto& delta = state.delta[gi];
        for (std::size_t i = 0; i < theta.size(); ++i) {
            const double slow = checkpoint[i] + alpha_la * (delta[i] / static_cast<double>(k));
            theta[i] = slow;
            checkpoint[i] = slow;
            delta[i] = 0.0;
        }
    }
    state.inner_step_index = 0;
}

void basic_sync(ParameterModel& model, LookaheadState& state, double alpha_la) {
    if (state.mode != LookaheadMode::basic) {
        throw ContractError("basic_sync: state is not in basic mode");
    }
    if (state.inner_step_index == 0) {
        throw ContractError("basic_sync called before any inner step");
    }
    for (std::size_t gi = 0; gi < model.size(); ++gi) {
        auto& theta = model[gi].values;
        auto& slow = state.slow_checkpoint[gi];
        for (std::size_t i = 0; i < theta.size(); ++i) {
            slow[i] += alpha_la * (theta[i] - slow[i]);
            theta[i] = slow[i];
        }
    }
    state.inner_step_index = 0;
}

StateCensus lookahead_census(const LookaheadState& state) {
    StateCensus census;
    switch (state.mode) {
        case LookaheadMode::none:
            break;
        case LookaheadMode::basic:
            census.slow_checkpoint = state.slow_checkpoint.empty() ? 0 : 1;
            break;
        case LookaheadMode::memory_efficient:
            census.slow_checkpoint = state.slow_checkpoint.empty() ? 0 : 1;
            census.delta = state.delta.empty() ? 0 : 1;
            census.lookahead_transient = true;
            break;
    }
    return census;
}

} // namespace novak
