#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace novak {

enum class Role { weight_matrix, bias, other };

/// A named block of parameters with shape metadata. The shape is kept even
/// for flat vectors so per-layer operations (gradient centralization,
/// trust ratios) can be decided without framework introspection.
struct ParameterGroup {
    std::string name;
    std::vector<double> values;
    std::vector<std::size_t> shape; // product of extents == values.size()
    Role role = Role::other;

    std::size_t size() const { return values.size(); }
    std::size_t rank() const { return shape.size(); }
};

using ParameterModel = std::vector<ParameterGroup>;

/// Per-group gradient vectors matching a ParameterModel group-for-group.
struct GradientSet {
    std::vector<std::vector<double>> groups;

    std::size_t group_count() const { return groups.size(); }
};

// Checks that shape products match value lengths; throws DimensionError.
void validate_model(const ParameterModel& model);

// Checks group count and per-group lengths against the model.
void validate_gradients(const ParameterModel& model, const GradientSet& grads);

// Zero-filled gradients with the model's layout.
GradientSet zeros_like(const ParameterModel& model);

/// result[i] = op(a[i], b[i]); inputs are not modified.
std::vector<double> elementwise_apply(const std::vector<double>& a,
                                      const std::vector<double>& b,
                                      const std::function<double(double, double)>& op);

/// sqrt(sum v[i]^2). Throws NumericError on NaN input.
double l2_norm(const std::vector<double>& v);

/// Global L2 norm across every group of a gradient set.
double global_l2_norm(const GradientSet& grads);

/// Concatenation of group values in declared order.
std::vector<double> flatten(const ParameterModel& model);

/// Inverse of flatten: writes flat back into a copy of the layout template.
ParameterModel unflatten(const ParameterModel& layout, const std::vector<double>& flat);

// Name of the first group containing a non-finite entry, or empty string.
std::string first_non_finite_group(const ParameterModel& model, const GradientSet& grads);
bool all_finite(const std::vector<double>& v);

} // namespace novak
