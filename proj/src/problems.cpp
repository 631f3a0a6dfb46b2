#include "novak/problems.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>

#include "novak/errors.hpp"

namespace novak {

namespace {

double stable_softplus(double z) {
    // log(1 + e^z) without overflow for large |z|
    return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                    : std::exp(z) / (1.0 + std::exp(z));
}

ParameterModel single_group_model(const std::string& name, std::vector<double> values) {
    ParameterGroup group;
    group.name = name;
    group.shape = {values.size()};
    group.values = std::move(values);
    return {std::move(group)};
}

} // namespace

Problem quadratic_problem(std::size_t dimension, double condition_number, std::uint64_t seed) {
    if (dimension == 0) throw ConfigError("quadratic: dimension must be positive");
    if (condition_number < 1.0) throw ConfigError("quadratic: condition number must be >= 1");

    auto eigenvalues = std::make_shared<std::vector<double>>(dimension);
    for (std::size_t i = 0; i < dimension; ++i) {
        const double frac = dimension > 1 ? static_cast<double>(i) / (dimension - 1) : 0.0;
        (*eigenvalues)[i] = std::exp(frac * std::log(condition_number));
    }
    std::mt19937_64 rng(seed);
    std::shuffle(eigenvalues->begin(), eigenvalues->end(), rng);

    Problem p;
    p.name = "quadratic";
    p.dimension = dimension;
    p.optimum_value = 0.0;
    p.lipschitz_hint = condition_number;
    p.eval = [eigenvalues](const std::vector<double>& theta) {
        double sum = 0.0;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            sum += 0.5 * (*eigenvalues)[i] * theta[i] * theta[i];
        }
        return sum;
    };
    p.grad = [eigenvalues](const std::vector<double>& theta) {
        std::vector<double> g(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i) {
            g[i] = (*eigenvalues)[i] * theta[i];
        }
        return g;
    };
    p.initial_model = [dimension](std::uint64_t init_seed) {
        std::mt19937_64 init_rng(init_seed ^ 0x9e3779b97f4a7c15ull);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<double> theta(dimension);
        for (auto& x : theta) x = dist(init_rng);
        return single_group_model("theta", std::move(theta));
    };
    return p;
}

Problem noisy_quadratic_problem(std::size_t dimension, double condition_number,
                                double noise_sigma, std::uint64_t seed) {
    Problem p = quadratic_problem(dimension, condition_number, seed);
    p.name = "noisy_quadratic";
    auto grad = p.grad;
    p.stochastic_grad = [grad, noise_sigma](const std::vector<double>& theta,
                                            std::uint64_t step_seed, std::size_t) {
        std::vector<double> g = grad(theta);
        std::mt19937_64 rng(step_seed);
        std::normal_distribution<double> noise(0.0, noise_sigma);
        for (auto& x : g) x += noise(rng);
        return g;
    };
    return p;
}

Problem rosenbrock_problem(std::size_t n) {
    if (n < 2 || n % 2 != 0) throw ConfigError("rosenbrock: n must be an even integer >= 2");

    Problem p;
    p.name = "rosenbrock";
    p.dimension = n;
    p.optimum_value = 0.0;
    p.eval = [](const std::vector<double>& x) {
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < x.size(); ++i) {
            const double a = x[i + 1] - x[i] * x[i];
            const double b = 1.0 - x[i];
            sum += 100.0 * a * a + b * b;
        }
        return sum;
    };
    p.grad = [](const std::vector<double>& x) {
        std::vector<double> g(x.size(), 0.0);
        for (std::size_t i = 0; i + 1 < x.size(); ++i) {
            const double a = x[i + 1] - x[i] * x[i];
            g[i] += -400.0 * x[i] * a - 2.0 * (1.0 - x[i]);
            g[i + 1] += 200.0 * a;
        }
        return g;
    };
    p.initial_model = [n](std::uint64_t init_seed) {
        std::mt19937_64 rng(init_seed ^ 0xda3e39cb94b95bdbull);
        std::uniform_real_distribution<double> jitter(-0.1, 0.1);
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = (i % 2 == 0 ? -1.2 : 1.0) + jitter(rng);
        }
        return single_group_model("x", std::move(x));
    };
    return p;
}

namespace {

struct LogisticData {
    std::size_t n_features = 0;
    std::vector<std::vector<double>> x_train, x_hold;
    std::vector<double> y_train, y_hold; // labels in {0, 1}
};

// Separable with a margin of 0.1 along a random unit direction, then
// feature noise small enough to keep the margin open.
std::shared_ptr<LogisticData> make_logistic_data(std::size_t n_features,
                                                 std::size_t n_samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::normal_distribution<double> feature_noise(0.0, 0.02 / std::sqrt(double(n_features)));
    constexpr double kMargin = 0.1;

    std::vector<double> w_true(n_features);
    double norm = 0.0;
    for (auto& w : w_true) {
        w = normal(rng);
        norm += w * w;
    }
    norm = std::sqrt(norm);
    for (auto& w : w_true) w /= norm;

    std::vector<std::vector<double>> xs(n_samples, std::vector<double>(n_features));
    std::vector<double> ys(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        double z = 0.0;
        do {
            z = 0.0;
            for (std::size_t j = 0; j < n_features; ++j) {
                xs[i][j] = normal(rng);
                z += xs[i][j] * w_true[j];
            }
        } while (std::abs(z) < kMargin);
        ys[i] = z > 0.0 ? 1.0 : 0.0;
        for (std::size_t j = 0; j < n_features; ++j) xs[i][j] += feature_noise(rng);
    }

    std::vector<std::size_t> order(n_samples);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    auto data = std::make_shared<LogisticData>();
    data->n_features = n_features;
    const std::size_t n_train = (n_samples * 4) / 5;
    for (std::size_t i = 0; i < n_samples; ++i) {
        if (i < n_train) {
            data->x_train.push_back(xs[order[i]]);
            data->y_train.push_back(ys[order[i]]);
        } else {
            data->x_hold.push_back(xs[order[i]]);
            data->y_hold.push_back(ys[order[i]]);
        }
    }
    return data;
}

std::vector<double> logistic_gradient(const LogisticData& data,
                                      const std::vector<double>& theta,
                                      const std::vector<std::size_t>& indices) {
    std::vector<double> g(theta.size(), 0.0);
    for (std::size_t idx : indices) {
        const auto& x = data.x_train[idx];
        double z = 0.0;
        for (std::size_t j = 0; j < theta.size(); ++j) z += x[j] * theta[j];
        const double err = sigmoid(z) - data.y_train[idx];
        for (std::size_t j = 0; j < theta.size(); ++j) g[j] += err * x[j];
    }
    const double inv = 1.0 / static_cast<double>(indices.size());
    for (auto& v : g) v *= inv;
    return g;
}

} // namespace

Problem logistic_regression_problem(std::size_t n_features, std::size_t n_samples,
                                    std::uint64_t seed) {
    if (n_features == 0) throw ConfigError("logistic: n_features must be positive");
    if (n_samples < 10) throw ConfigError("logistic: n_samples too small");
    auto data = make_logistic_data(n_features, n_samples, seed);

    Problem p;
    p.name = "logistic";
    p.dimension = n_features;
    p.eval = [data](const std::vector<double>& theta) {
        double loss = 0.0;
        for (std::size_t i = 0; i < data->x_train.size(); ++i) {
            double z = 0.0;
            for (std::size_t j = 0; j < theta.size(); ++j) z += data->x_train[i][j] * theta[j];
            loss += stable_softplus(z) - data->y_train[i] * z;
        }
        return loss / static_cast<double>(data->x_train.size());
    };
    p.grad = [data](const std::vector<double>& theta) {
        std::vector<std::size_t> all(data->x_train.size());
        std::iota(all.begin(), all.end(), 0);
        return logistic_gradient(*data, theta, all);
    };
    p.stochastic_grad = [data](const std::vector<double>& theta, std::uint64_t step_seed,
                               std::size_t batch) {
        if (batch == 0 || batch > data->x_train.size()) {
            throw ConfigError("logistic: batch size must be in [1, train size]");
        }
        std::mt19937_64 rng(step_seed);
        std::uniform_int_distribution<std::size_t> pick(0, data->x_train.size() - 1);
        std::vector<std::size_t> indices(batch);
        for (auto& idx : indices) idx = pick(rng);
        return logistic_gradient(*data, theta, indices);
    };
    p.holdout_accuracy = [data](const std::vector<double>& theta) {
        std::size_t correct = 0;
        for (std::size_t i = 0; i < data->x_hold.size(); ++i) {
            double z = 0.0;
            for (std::size_t j = 0; j < theta.size(); ++j) z += data->x_hold[i][j] * theta[j];
            if ((z > 0.0 ? 1.0 : 0.0) == data->y_hold[i]) ++correct;
        }
        return static_cast<double>(correct) / static_cast<double>(data->x_hold.size());
    };
    p.initial_model = [n_features](std::uint64_t init_seed) {
        std::mt19937_64 rng(init_seed ^ 0xc2b2ae3d27d4eb4full);
        std::normal_distribution<double> dist(0.0, 0.01);
        std::vector<double> theta(n_features);
        for (auto& x : theta) x = dist(rng);
        return single_group_model("weights", std::move(theta));
    };
    return p;
}

namespace {

struct MlpSpec {
    std::size_t depth = 0; // number of linear layers
    std::size_t width = 0;
    std::vector<std::size_t> sizes; // layer input/output sizes, length depth+1
    std::vector<std::vector<double>> x_train, x_hold; // 2-d inputs
    std::vector<double> y_train, y_hold;
    std::size_t param_count = 0;
};

// Two interleaved spirals spanning roughly [-2, 2]^2.
void make_two_spirals(MlpSpec& spec, std::uint64_t seed) {
    constexpr std::size_t kPointsPerClass = 160;
    constexpr double kTurns = 1.0;
    constexpr double kNoise = 0.06;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, kNoise);

    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    for (int cls = 0; cls < 2; ++cls) {
        for (std::size_t i = 0; i < kPointsPerClass; ++i) {
            const double u = (static_cast<double>(i) + unit(rng)) / kPointsPerClass;
            const double phi = u * kTurns * 2.0 * M_PI + cls * M_PI;
            const double r = 0.25 + 1.75 * u;
            xs.push_back({r * std::cos(phi) + noise(rng), r * std::sin(phi) + noise(rng)});
            ys.push_back(static_cast<double>(cls));
        }
    }

    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t n_train = (xs.size() * 4) / 5;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i < n_train) {
            spec.x_train.push_back(xs[order[i]]);
            spec.y_train.push_back(ys[order[i]]);
        } else {
            spec.x_hold.push_back(xs[order[i]]);
            spec.y_hold.push_back(ys[order[i]]);
        }
    }
}

struct LayerView {
    const double* w = nullptr; // [out][in], row-major
    const double* b = nullptr;
    std::size_t w_offset = 0, b_offset = 0;
    std::size_t in = 0, out = 0;
};

std::vector<LayerView> layer_views(const MlpSpec& spec, const std::vector<double>& theta) {
    std::vector<LayerView> views(spec.depth);
    std::size_t offset = 0;
    for (std::size_t l = 0; l < spec.depth; ++l) {
        views[l].in = spec.sizes[l];
        views[l].out = spec.sizes[l + 1];
        views[l].w_offset = offset;
        views[l].w = theta.data() + offset;
        offset += views[l].in * views[l].out;
        views[l].b_offset = offset;
        views[l].b = theta.data() + offset;
        offset += views[l].out;
    }
    return views;
}

// Forward pass for one sample; activations[l] holds the layer-l output
// (post-tanh for hidden layers, raw logit for the final layer).
double mlp_forward(const MlpSpec& spec, const std::vector<LayerView>& layers,
                   const std::vector<double>& input,
                   std::vector<std::vector<double>>* activations) {
    std::vector<double> current = input;
    if (activations) activations->clear();
    for (std::size_t l = 0; l < spec.depth; ++l) {
        const auto& layer = layers[l];
        std::vector<double> next(layer.out);
        for (std::size_t o = 0; o < layer.out; ++o) {
            double z = layer.b[o];
            const double* row = layer.w + o * layer.in;
            for (std::size_t i = 0; i < layer.in; ++i) z += row[i] * current[i];
            next[o] = (l + 1 < spec.depth) ? std::tanh(z) : z;
        }
        if (activations) activations->push_back(next);
        current = std::move(next);
    }
    return current[0]; // single logit
}

double mlp_loss(const MlpSpec& spec, const std::vector<double>& theta,
                const std::vector<std::size_t>& indices) {
    const auto layers = layer_views(spec, theta);
    double loss = 0.0;
    for (std::size_t idx : indices) {
        const double z = mlp_forward(spec, layers, spec.x_train[idx], nullptr);
        loss += stable_softplus(z) - spec.y_train[idx] * z;
    }
    return loss / static_cast<double>(indices.size());
}

std::vector<double> mlp_gradient(const MlpSpec& spec, const std::vector<double>& theta,
                                 const std::vector<std::size_t>& indices) {
    const auto layers = layer_views(spec, theta);
    std::vector<double> grad(theta.size(), 0.0);

    std::vector<std::vector<double>> activations;
    for (std::size_t idx : indices) {
        const auto& input = spec.x_train[idx];
        const double z = mlp_forward(spec, layers, input, &activations);

        std::vector<double> delta{sigmoid(z) - spec.y_train[idx]}; // dL/dz per layer
        for (std::size_t l = spec.depth; l-- > 0;) {
            const auto& layer = layers[l];
            const auto& below = l == 0 ? input : activations[l - 1];
            double* gw = grad.data() + layer.w_offset;
            double* gb = grad.data() + layer.b_offset;
            for (std::size_t o = 0; o < layer.out; ++o) {
                gb[o] += delta[o];
                double* grow = gw + o * layer.in;
                for (std::size_t i = 0; i < layer.in; ++i) grow[i] += delta[o] * below[i];
            }
            if (l == 0) break;
            std::vector<double> prev(layer.in, 0.0);
            for (std::size_t o = 0; o < layer.out; ++o) {
                const double* row = layer.w + o * layer.in;
                for (std::size_t i = 0; i < layer.in; ++i) prev[i] += row[i] * delta[o];
            }
            // tanh'(z) = 1 - a^2, with a the stored activation of layer l-1
            const auto& act = activations[l - 1];
            for (std::size_t i = 0; i < layer.in; ++i) prev[i] *= 1.0 - act[i] * act[i];
            delta = std::move(prev);
        }
    }
    const double inv = 1.0 / static_cast<double>(indices.size());
    for (auto& v : grad) v *= inv;
    return grad;
}

} // namespace

Problem deep_plain_mlp_problem(std::size_t depth, std::size_t width, std::uint64_t seed) {
    if (depth < 8) throw ConfigError("deep_mlp: depth must be >= 8");
    if (width < 2) throw ConfigError("deep_mlp: width must be >= 2");

    auto spec = std::make_shared<MlpSpec>();
    spec->depth = depth;
    spec->width = width;
    spec->sizes.push_back(2);
    for (std::size_t l = 0; l + 1 < depth; ++l) spec->sizes.push_back(width);
    spec->sizes.push_back(1);
    for (std::size_t l = 0; l < depth; ++l) {
        spec->param_count += spec->sizes[l] * spec->sizes[l + 1] + spec->sizes[l + 1];
    }
    make_two_spirals(*spec, seed);

    Problem p;
    p.name = "deep_mlp";
    p.dimension = spec->param_count;
    p.eval = [spec](const std::vector<double>& theta) {
        std::vector<std::size_t> all(spec->x_train.size());
        std::iota(all.begin(), all.end(), 0);
        return mlp_loss(*spec, theta, all);
    };
    p.grad = [spec](const std::vector<double>& theta) {
        std::vector<std::size_t> all(spec->x_train.size());
        std::iota(all.begin(), all.end(), 0);
        return mlp_gradient(*spec, theta, all);
    };
    p.stochastic_grad = [spec](const std::vector<double>& theta, std::uint64_t step_seed,
                               std::size_t batch) {
        if (batch == 0 || batch > spec->x_train.size()) {
            throw ConfigError("deep_mlp: batch size must be in [1, train size]");
        }
        std::mt19937_64 rng(step_seed);
        std::uniform_int_distribution<std::size_t> pick(0, spec->x_train.size() - 1);
        std::vector<std::size_t> indices(batch);
        for (auto& idx : indices) idx = pick(rng);
        return mlp_gradient(*spec, theta, indices);
    };
    p.holdout_accuracy = [spec](const std::vector<double>& theta) {
        const auto layers = layer_views(*spec, theta);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < spec->x_hold.size(); ++i) {
            const double z = mlp_forward(*spec, layers, spec->x_hold[i], nullptr);
            if ((z > 0.0 ? 1.0 : 0.0) == spec->y_hold[i]) ++correct;
        }
        return static_cast<double>(correct) / static_cast<double>(spec->x_hold.size());
    };
    p.initial_model = [spec](std::uint64_t init_seed) {
        std::mt19937_64 rng(init_seed ^ 0xa0761d6478bd642full);
        // Xavier weights plus wide hidden biases. The bias spread pushes a
        // large share of units into tanh saturation, giving the plain deep
        // network its characteristic pathology at init: early-layer
        // gradients orders of magnitude below late-layer ones.
        std::normal_distribution<double> bias_dist(0.0, 0.8);
        ParameterModel model;
        for (std::size_t l = 0; l < spec->depth; ++l) {
            const std::size_t in = spec->sizes[l];
            const std::size_t out = spec->sizes[l + 1];
            const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
            std::uniform_real_distribution<double> dist(-limit, limit);

            ParameterGroup w;
            w.name = "layer" + std::to_string(l) + "_w";
            w.shape = {out, in};
            w.role = Role::weight_matrix;
            w.values.resize(out * in);
            for (auto& x : w.values) x = dist(rng);
            model.push_back(std::move(w));

            ParameterGroup b;
            b.name = "layer" + std::to_string(l) + "_b";
            b.shape = {out};
            b.role = Role::bias;
            b.values.resize(out);
            const bool hidden = l + 1 < spec->depth;
            for (auto& x : b.values) x = hidden ? bias_dist(rng) : 0.0;
            model.push_back(std::move(b));
        }
        return model;
    };
    return p;
}

std::vector<double> finite_difference_gradient(const Problem& problem,
                                               const std::vector<double>& theta, double h) {
    if (!(h > 0.0)) throw ConfigError("finite_difference_gradient: h must be positive");
    std::vector<double> fd(theta.size());
    std::vector<double> point = theta;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double saved = point[i];
        point[i] = saved + h;
        const double up = problem.eval(point);
        point[i] = saved - h;
        const double down = problem.eval(point);
        point[i] = saved;
        fd[i] = (up - down) / (2.0 * h);
    }
    return fd;
}

Problem problem_from_name(const std::string& name, std::size_t dimension, double condition,
                          double noise_sigma, std::size_t n_samples, std::size_t depth,
                          std::size_t width, std::uint64_t seed) {
    if (name == "quadratic") return quadratic_problem(dimension, condition, seed);
    if (name == "noisy_quadratic") {
        return noisy_quadratic_problem(dimension, condition, noise_sigma, seed);
    }
    if (name == "rosenbrock") return rosenbrock_problem(dimension);
    if (name == "logistic") return logistic_regression_problem(dimension, n_samples, seed);
    if (name == "deep_mlp") return deep_plain_mlp_problem(depth, width, seed);
    throw ConfigError("unknown problem '" + name + "'");
}

} // namespace novak
