#pragma once

#include "transim/exit_flows.hpp"

#include <map>
#include <vector>

namespace transim {

/// Fixed-width bins over [0, max) plus one overflow bin that also holds
/// passengers who never tapped out.
struct HistogramBins {
    double width_s = 60.0;
    double max_s = 7200.0;

    std::size_t bin_count() const;
    std::size_t bin_of(std::optional<double> journey_s) const;
    std::vector<double> edges() const;
};

struct JourneyTimeDistribution {
    std::vector<double> edges;  // bin_count()+1 edges, the last one +inf
    std::vector<double> mass;
    std::size_t samples = 0;
};

/// Journey-time distributions keyed by OD and tap-in interval.
std::map<FlowKey, JourneyTimeDistribution> journey_time_distributions(const std::vector<AfcRecord>& records,
                                                                      IntervalGrid grid, HistogramBins bins);

/// Additive smoothing of `observed` used only when some bin carries model
/// mass but no observed mass; otherwise returns it unchanged.
JourneyTimeDistribution smooth_against(const JourneyTimeDistribution& observed, const JourneyTimeDistribution& model,
                                       double epsilon);

/// sum_x p(x) log(p(x)/q(x)); zero-mass bins of p contribute nothing. Returns
/// +inf when q has a zero where p has mass. Throws BinMismatchError when the
/// bin edges differ.
double kl_divergence(const JourneyTimeDistribution& p, const JourneyTimeDistribution& q);

}  // namespace transim
