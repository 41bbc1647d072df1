#include "transim/cors.hpp"

#include "transim/random_stream.hpp"
#include "transim/types.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>

namespace transim {

void Bounds::validate() const {
    if (lower.empty() || lower.size() != upper.size()) throw ValidationError("bounds: dimension mismatch");
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i])) {
            throw ValidationError(fmt::format("bounds: dimension {} needs finite lower < upper", i));
        }
    }
}

std::size_t default_design_size(std::size_t dimension) { return 2 * (dimension + 1); }

std::vector<std::vector<double>> latin_hypercube(std::size_t n, std::size_t dimension, std::uint64_t seed) {
    RandomStream stream = RandomStream::derive(seed, 0x4c4853);
    std::vector<std::vector<double>> points(n, std::vector<double>(dimension));
    std::vector<std::size_t> strata(n);
    for (std::size_t k = 0; k < dimension; ++k) {
        std::iota(strata.begin(), strata.end(), std::size_t{0});
        for (std::size_t i = n; i > 1; --i) {
            const auto j = static_cast<std::size_t>(stream.uniform() * static_cast<double>(i));
            std::swap(strata[i - 1], strata[std::min(j, i - 1)]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            points[i][k] = (static_cast<double>(strata[i]) + stream.uniform()) / static_cast<double>(n);
        }
    }
    return points;
}

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(sum);
}

double min_distance(std::span<const double> x, const std::vector<std::vector<double>>& points) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : points) best = std::min(best, distance(x, p));
    return best;
}

class Scaler {
public:
    Scaler(const Bounds& bounds, bool warp) : bounds_(bounds), warp_(warp) {}

    std::vector<double> to_box(std::span<const double> unit) const {
        std::vector<double> x(unit.size());
        for (std::size_t i = 0; i < unit.size(); ++i) {
            const double span = bounds_.upper[i] - bounds_.lower[i];
            x[i] = warp_ ? bounds_.upper[i] - span * (1.0 - unit[i]) * (1.0 - unit[i])
                         : bounds_.lower[i] + unit[i] * span;
        }
        return x;
    }

private:
    const Bounds& bounds_;
    bool warp_;
};

/// Folds a point back into the unit box by reflection at the faces.
void reflect_unit(std::vector<double>& x) {
    for (auto& v : x) {
        v = std::fmod(std::abs(v), 2.0);
        if (v > 1.0) v = 2.0 - v;
    }
}

/// Surrogate over transformed responses log(value + shift). Fitted values are
/// mapped back, so the model still interpolates the evaluated objective.
struct Model {
    RbfSurrogate rbf;
    double shift = 0.0;
    bool log_scale = false;

    double operator()(std::span<const double> x) const {
        const double s = rbf(x);
        return log_scale ? std::exp(s) - shift : s;
    }
};

/// Fits the surrogate, nudging coincident centres apart if the system is singular.
Model fit_surrogate(std::vector<std::vector<double>> points, const std::vector<double>& values, bool log_scale,
                    RandomStream& stream) {
    Model model;
    model.log_scale = log_scale;
    std::vector<double> targets = values;
    if (log_scale) {
        const double lowest = *std::min_element(values.begin(), values.end());
        model.shift = 1.0 - std::min(lowest, 0.0);
        for (auto& v : targets) v = std::log(v + model.shift);
    }
    for (int attempt = 0; attempt < 8; ++attempt) {
        try {
            model.rbf.fit(points, targets);
            return model;
        } catch (const Error&) {
            const double jitter = 1e-7 * std::pow(10.0, attempt);
            for (std::size_t i = 1; i < points.size(); ++i) {
                for (std::size_t j = 0; j < i; ++j) {
                    if (distance(points[i], points[j]) < 1e-9 + jitter) {
                        for (auto& v : points[i]) v += jitter * (stream.uniform() - 0.5);
                    }
                }
            }
        }
    }
    throw Error("cors: surrogate could not be fitted");
}

struct Pick {
    std::vector<double> x;
    double predicted = 0.0;
};

/// Minimises the surrogate over the unit box subject to a minimum distance
/// from evaluated points: best of a candidate cloud, then compass polishing.
Pick minimise_surrogate(const Model& surrogate, const std::vector<std::vector<double>>& evaluated,
                        std::span<const double> incumbent, double radius, std::size_t candidate_count,
                        RandomStream& stream) {
    const std::size_t d = incumbent.size();
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scales[] = {0.2, 0.05, 0.01};

    std::vector<std::vector<double>> candidates;
    candidates.reserve(candidate_count);
    for (std::size_t c = 0; c < candidate_count; ++c) {
        std::vector<double> x(d);
        if (c % 2 == 0) {
            for (auto& v : x) v = stream.uniform();
        } else {
            const double sigma = scales[(c / 2) % 3];
            for (std::size_t k = 0; k < d; ++k) x[k] = incumbent[k] + sigma * normal(stream);
            reflect_unit(x);
        }
        candidates.push_back(std::move(x));
    }

    const std::vector<double>* chosen = nullptr;
    double chosen_value = std::numeric_limits<double>::infinity();
    double widest = -1.0;
    const std::vector<double>* widest_point = nullptr;
    for (const auto& x : candidates) {
        const double gap = min_distance(x, evaluated);
        if (gap > widest) {
            widest = gap;
            widest_point = &x;
        }
        if (gap < radius) continue;
        const double value = surrogate(x);
        if (value < chosen_value) {
            chosen_value = value;
            chosen = &x;
        }
    }
    if (!chosen) return {*widest_point, surrogate(*widest_point)};

    Pick pick{*chosen, chosen_value};
    for (double step = 0.05; step > 1e-4; step *= 0.5) {
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::size_t k = 0; k < d; ++k) {
                for (double sign : {-1.0, 1.0}) {
                    auto trial = pick.x;
                    trial[k] = std::clamp(trial[k] + sign * step, 0.0, 1.0);
                    if (trial == pick.x || min_distance(trial, evaluated) < radius) continue;
                    const double value = surrogate(trial);
                    if (value < pick.predicted) {
                        pick = {std::move(trial), value};
                        improved = true;
                    }
                }
            }
        }
    }
    return pick;
}

}  // namespace

CorsResult cors_optimize(const BlackBox& objective, const Bounds& bounds, const CorsOptions& options) {
    bounds.validate();
    const std::size_t d = bounds.dimension();
    const std::size_t design = options.design_size ? options.design_size : default_design_size(d);
    if (design < d + 1) throw ValidationError(fmt::format("cors: design size must be at least {}", d + 1));
    if (options.budget < design) {
        throw ValidationError(fmt::format("cors: budget {} is below the initial design size {}", options.budget, design));
    }
    if (options.distance_cycle.empty()) throw ValidationError("cors: empty distance cycle");

    const Scaler scaler(bounds, options.warp_upper);
    std::vector<std::vector<double>> unit_points = latin_hypercube(design, d, options.seed);
    std::vector<double> values(design);

    auto evaluate = [&](const std::vector<double>& unit) {
        const auto x = scaler.to_box(unit);
        const double v = objective(x);
        if (!std::isfinite(v)) throw Error("cors: objective returned a non-finite value");
        return v;
    };

    if (options.threads > 1) {
        std::vector<std::future<double>> pending;
        for (std::size_t start = 0; start < design; start += options.threads) {
            pending.clear();
            const std::size_t stop = std::min(design, start + options.threads);
            for (std::size_t i = start; i < stop; ++i) {
                pending.push_back(std::async(std::launch::async, evaluate, std::cref(unit_points[i])));
            }
            for (std::size_t i = start; i < stop; ++i) values[i] = pending[i - start].get();
        }
    } else {
        for (std::size_t i = 0; i < design; ++i) values[i] = evaluate(unit_points[i]);
    }

    CorsResult result;
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < design; ++i) {
        if (values[i] < values[best_index]) best_index = i;
        result.trace.push_back({i + 1, scaler.to_box(unit_points[i]), values[i], values[best_index], true, 0.0});
    }

    RandomStream stream = RandomStream::derive(options.seed, 0x434f5253);
    const double diagonal = std::sqrt(static_cast<double>(d));
    for (std::size_t iteration = 0; unit_points.size() < options.budget; ++iteration) {
        const auto surrogate = fit_surrogate(unit_points, values, options.log_scale, stream);
        for (std::size_t i = 0; i < unit_points.size(); ++i) {
            result.max_interpolation_error =
                std::max(result.max_interpolation_error, std::abs(surrogate(unit_points[i]) - values[i]));
        }

        const double radius = options.distance_cycle[iteration % options.distance_cycle.size()] * diagonal;
        auto pick = minimise_surrogate(surrogate, unit_points, unit_points[best_index], radius, options.candidates,
                                       stream);
        const double value = evaluate(pick.x);
        unit_points.push_back(pick.x);
        values.push_back(value);
        if (value < values[best_index]) best_index = values.size() - 1;
        result.trace.push_back(
            {values.size(), scaler.to_box(pick.x), value, values[best_index], false, pick.predicted});
    }

    const auto final_surrogate = fit_surrogate(unit_points, values, options.log_scale, stream);
    for (std::size_t i = 0; i < unit_points.size(); ++i) {
        result.max_interpolation_error =
            std::max(result.max_interpolation_error, std::abs(final_surrogate(unit_points[i]) - values[i]));
    }

    result.best_x = scaler.to_box(unit_points[best_index]);
    result.best_value = values[best_index];
    return result;
}

}  // namespace transim
