#include "novak/params.hpp"

#include <cmath>

#include "novak/errors.hpp"

namespace novak {

void validate_model(const ParameterModel& model) {
    for (const auto& group : model) {
        std::size_t prod = 1;
        for (std::size_t extent : group.shape) {
            if (extent == 0) {
                throw DimensionError("group '" + group.name + "' has a zero shape extent");
            }
            prod *= extent;
        }
        if (group.shape.empty()) prod = group.values.size();
        if (prod != group.values.size()) {
            throw DimensionError("group '" + group.name + "' shape product " +
                                 std::to_string(prod) + " != value count " +
                                 std::to_string(group.values.size()));
        }
    }
}

void validate_gradients(const ParameterModel& model, const GradientSet& grads) {
    if (grads.groups.size() != model.size()) {
        throw DimensionError("gradient set has " + std::to_string(grads.groups.size()) +
                             " groups, model has " + std::to_string(model.size()));
    }
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (grads.groups[i].size() != model[i].values.size()) {
            throw DimensionError("gradient group '" + model[i].name + "' length " +
                                 std::to_string(grads.groups[i].size()) + " != parameter length " +
                                 std::to_string(model[i].values.size()));
        }
    }
}

GradientSet zeros_like(const ParameterModel& model) {
    GradientSet out;
    out.groups.reserve(model.size());
    for (const auto& group : model) {
        out.groups.emplace_back(group.values.size(), 0.0);
    }
    return out;
}

std::vector<double> elementwise_apply(const std::vector<double>& a,
                                      const std::vector<double>& b,
                                      const std::function<double(double, double)>& op) {
    if (a.size() != b.size()) {
        throw DimensionError("elementwise_apply: lengths differ (" + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()) + ")");
    }
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = op(a[i], b[i]);
    }
    return out;
}

double l2_norm(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    double norm = std::sqrt(sum);
    if (std::isnan(norm)) {
        throw NumericError("l2_norm: NaN input");
    }
    return norm;
}

double global_l2_norm(const GradientSet& grads) {
    double sum = 0.0;
    for (const auto& g : grads.groups) {
        for (double x : g) sum += x * x;
    }
    double norm = std::sqrt(sum);
    if (std::isnan(norm)) {
        throw NumericError("global_l2_norm: NaN input");
    }
    return norm;
}

std::vector<double> flatten(const ParameterModel& model) {
    std::vector<double> flat;
    std::size_t total = 0;
    for (const auto& group : model) total += group.values.size();
    flat.reserve(total);
    for (const auto& group : model) {
        flat.insert(flat.end(), group.values.begin(), group.values.end());
    }
    return flat;
}

ParameterModel unflatten(const ParameterModel& layout, const std::vector<double>& flat) {
    std::size_t total = 0;
    for (const auto& group : layout) total += group.values.size();
    if (total != flat.size()) {
        throw DimensionError("unflatten: flat length " + std::to_string(flat.size()) +
                             " != layout total " + std::to_string(total));
    }
    ParameterModel out = layout;
    std::size_t offset = 0;
    for (auto& group : out) {
        for (auto& v : group.values) v = flat[offset++];
    }
    return out;
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

std::string first_non_finite_group(const ParameterModel& model, const GradientSet& grads) {
    for (std::size_t i = 0; i < grads.groups.size(); ++i) {
        if (!all_finite(grads.groups[i])) {
            return i < model.size() ? model[i].name : ("group " + std::to_string(i));
        }
    }
    return {};
}

} // namespace novak
