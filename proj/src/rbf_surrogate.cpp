#include "transim/rbf_surrogate.hpp"

#include "transim/types.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>

#include <cmath>

namespace transim {

namespace {

double cubic(double r) { return r * r * r; }

double distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(sum);
}

}  // namespace

void RbfSurrogate::fit(const std::vector<std::vector<double>>& points, std::span<const double> values) {
    if (points.empty() || points.size() != values.size()) throw Error("rbf: point and value counts differ");
    const std::size_t n = points.size();
    const std::size_t d = points.front().size();
    for (const auto& p : points) {
        if (p.size() != d) throw Error("rbf: inconsistent point dimensions");
    }
    if (n < d + 1) throw Error(fmt::format("rbf: need at least {} points, have {}", d + 1, n));

    const std::size_t m = n + d + 1;
    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        for (std::size_t j = 0; j < n; ++j) {
            system(ii, static_cast<Eigen::Index>(j)) = cubic(distance(points[i], points[j]));
        }
        system(ii, static_cast<Eigen::Index>(n)) = 1.0;
        system(static_cast<Eigen::Index>(n), ii) = 1.0;
        for (std::size_t k = 0; k < d; ++k) {
            const auto kk = static_cast<Eigen::Index>(n + 1 + k);
            system(ii, kk) = points[i][k];
            system(kk, ii) = points[i][k];
        }
        rhs(ii) = values[i];
    }

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible()) throw Error("rbf: interpolation system is singular");
    const Eigen::VectorXd solution = lu.solve(rhs);
    if (!solution.allFinite()) throw Error("rbf: interpolation system is singular");

    dimension_ = d;
    centres_ = points;
    weights_.assign(solution.data(), solution.data() + n);
    tail_.assign(solution.data() + n, solution.data() + m);
}

double RbfSurrogate::operator()(std::span<const double> x) const {
    double value = tail_.empty() ? 0.0 : tail_[0];
    for (std::size_t k = 0; k < dimension_; ++k) value += tail_[k + 1] * x[k];
    for (std::size_t i = 0; i < centres_.size(); ++i) value += weights_[i] * cubic(distance(x, centres_[i]));
    return value;
}

}  // namespace transim
