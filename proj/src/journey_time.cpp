#include "transim/journey_time.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace transim {

std::size_t HistogramBins::bin_count() const {
    return static_cast<std::size_t>(std::ceil(max_s / width_s)) + 1;
}

std::size_t HistogramBins::bin_of(std::optional<double> journey_s) const {
    const std::size_t overflow = bin_count() - 1;
    if (!journey_s || *journey_s >= max_s) return overflow;
    if (*journey_s < 0.0) return 0;
    return std::min(overflow - 1, static_cast<std::size_t>(std::floor(*journey_s / width_s)));
}

std::vector<double> HistogramBins::edges() const {
    std::vector<double> out;
    const std::size_t n = bin_count();
    out.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::min(max_s, static_cast<double>(i) * width_s));
    out.push_back(std::numeric_limits<double>::infinity());
    return out;
}

std::map<FlowKey, JourneyTimeDistribution> journey_time_distributions(const std::vector<AfcRecord>& records,
                                                                      IntervalGrid grid, HistogramBins bins) {
    std::map<FlowKey, std::vector<double>> counts;
    const std::size_t n = bins.bin_count();
    for (const auto& r : records) {
        auto& hist = counts[{r.od, grid.index_of(r.tap_in_s)}];
        if (hist.empty()) hist.assign(n, 0.0);
        std::optional<double> journey;
        if (r.tap_out_s) journey = *r.tap_out_s - r.tap_in_s;
        hist[bins.bin_of(journey)] += 1.0;
    }
    const auto edges = bins.edges();
    std::map<FlowKey, JourneyTimeDistribution> out;
    for (auto& [key, hist] : counts) {
        double total = 0.0;
        for (double c : hist) total += c;
        JourneyTimeDistribution d;
        d.edges = edges;
        d.samples = static_cast<std::size_t>(total);
        d.mass = std::move(hist);
        for (auto& m : d.mass) m /= total;
        out.emplace(key, std::move(d));
    }
    return out;
}

JourneyTimeDistribution smooth_against(const JourneyTimeDistribution& observed, const JourneyTimeDistribution& model,
                                       double epsilon) {
    if (observed.edges != model.edges) throw BinMismatchError("smoothing: histograms use different bin edges");
    bool needed = false;
    for (std::size_t i = 0; i < observed.mass.size(); ++i) {
        if (model.mass[i] > 0.0 && observed.mass[i] <= 0.0) needed = true;
    }
    if (!needed) return observed;
    JourneyTimeDistribution out = observed;
    const double total = 1.0 + epsilon * static_cast<double>(out.mass.size());
    for (auto& m : out.mass) m = (m + epsilon) / total;
    return out;
}

double kl_divergence(const JourneyTimeDistribution& p, const JourneyTimeDistribution& q) {
    if (p.edges != q.edges || p.mass.size() != q.mass.size()) {
        throw BinMismatchError("kl divergence: histograms use different bin edges");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < p.mass.size(); ++i) {
        if (p.mass[i] <= 0.0) continue;
        if (q.mass[i] <= 0.0) return std::numeric_limits<double>::infinity();
        sum += p.mass[i] * std::log(p.mass[i] / q.mass[i]);
    }
    return std::max(sum, 0.0);
}

}  // namespace transim
