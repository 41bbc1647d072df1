#pragma once

#include "transim/afc.hpp"

#include <cmath>
#include <map>

namespace transim {

struct FlowKey {
    OdPair od;
    int interval = 0;
    friend auto operator<=>(const FlowKey&, const FlowKey&) = default;
};

/// Time slicing shared by flows and distributions: interval i covers
/// [origin + i*length, origin + (i+1)*length).
struct IntervalGrid {
    double origin_s = 17 * 3600.0;
    double length_s = 900.0;

    int index_of(double time_s) const { return static_cast<int>(std::floor((time_s - origin_s) / length_s)); }
    double start_of(int index) const { return origin_s + index * length_s; }
    double end_of(int index) const { return start_of(index + 1); }
};

/// Sparse q[o,d,t]: exits per OD pair and exit interval.
class ExitFlowTensor {
public:
    ExitFlowTensor() = default;
    explicit ExitFlowTensor(IntervalGrid grid) : grid_(grid) {}

    const IntervalGrid& grid() const { return grid_; }
    void add_exit(OdPair od, double tap_out_s, long count = 1);
    void set(FlowKey key, long count);
    long count(FlowKey key) const;
    long total() const;
    const std::map<FlowKey, long>& counts() const { return counts_; }

    friend bool operator==(const ExitFlowTensor& a, const ExitFlowTensor& b) { return a.counts_ == b.counts_; }

private:
    IntervalGrid grid_;
    std::map<FlowKey, long> counts_;
};

/// q[o,d,t] from records that carry a tap-out.
ExitFlowTensor exit_flows(const std::vector<AfcRecord>& records, IntervalGrid grid);

}  // namespace transim
