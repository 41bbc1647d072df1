#pragma once

#include <span>
#include <vector>

namespace transim {

/// Cubic radial basis interpolant with a linear polynomial tail:
///   s(x) = sum_i w_i |x - x_i|^3 + c_0 + c^T x
/// with the side conditions sum_i w_i = 0 and sum_i w_i x_i = 0.
class RbfSurrogate {
public:
    /// Fits the interpolant. Throws Error when the augmented system is
    /// singular (duplicate centres, or fewer than dim+1 affinely independent points).
    void fit(const std::vector<std::vector<double>>& points, std::span<const double> values);

    double operator()(std::span<const double> x) const;

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return centres_.size(); }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& tail() const { return tail_; }

private:
    std::size_t dimension_ = 0;
    std::vector<std::vector<double>> centres_;
    std::vector<double> weights_;
    std::vector<double> tail_;  // c_0, c_1..c_d
};

}  // namespace transim
