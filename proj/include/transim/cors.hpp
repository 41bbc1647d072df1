#pragma once

#include "transim/rbf_surrogate.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace transim {

struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dimension() const { return lower.size(); }
    /// Throws ValidationError unless finite with lower < upper in every dimension.
    void validate() const;
};

struct CorsOptions {
    std::size_t budget = 100;
    std::uint64_t seed = 1;
    /// 0 selects 2 * (dim + 1).
    std::size_t design_size = 0;
    /// Minimum-distance requirement as fractions of the unit-box diagonal,
    /// cycled from global to local.
    std::vector<double> distance_cycle = {0.25, 0.1, 0.05, 0.02, 0.005, 0.001};
    std::size_t candidates = 2000;
    /// Threads for the initial design; refinement is always sequential.
    unsigned threads = 1;
    /// Fit the RBF to log(value + shift) so a few huge values do not flatten
    /// the model near the optimum.
    bool log_scale = true;
    /// Map the unit cube quadratically so resolution is finest next to the
    /// upper bound: x = upper - (upper - lower) * (1 - u)^2.
    bool warp_upper = false;
};

struct CorsTraceEntry {
    std::size_t iteration = 0;  // 1-based evaluation count
    std::vector<double> x;
    double value = 0.0;
    double best = 0.0;  // incumbent after this evaluation
    bool design = false;
    double surrogate_at_x = 0.0;  // prediction before evaluating, 0 for design points
};

struct CorsResult {
    std::vector<double> best_x;
    double best_value = 0.0;
    std::vector<CorsTraceEntry> trace;
    /// Largest |s(x_i) - f(x_i)| over evaluated points after each refit.
    double max_interpolation_error = 0.0;
};

using BlackBox = std::function<double(std::span<const double>)>;

std::size_t default_design_size(std::size_t dimension);

/// Latin hypercube sample of `n` points in the unit cube.
std::vector<std::vector<double>> latin_hypercube(std::size_t n, std::size_t dimension, std::uint64_t seed);

/// Constrained optimization with response surfaces: space-filling design,
/// then repeatedly minimise a cubic RBF surrogate subject to a cycling
/// minimum distance from evaluated points, evaluating each pick, until the
/// budget is spent. Deterministic given the seed.
CorsResult cors_optimize(const BlackBox& objective, const Bounds& bounds, const CorsOptions& options);

}  // namespace transim
