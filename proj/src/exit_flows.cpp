#include "transim/exit_flows.hpp"

namespace transim {

void ExitFlowTensor::add_exit(OdPair od, double tap_out_s, long count) {
    counts_[{od, grid_.index_of(tap_out_s)}] += count;
}

void ExitFlowTensor::set(FlowKey key, long count) {
    if (count == 0) {
        counts_.erase(key);
    } else {
        counts_[key] = count;
    }
}

long ExitFlowTensor::count(FlowKey key) const {
    const auto it = counts_.find(key);
    return it == counts_.end() ? 0 : it->second;
}

long ExitFlowTensor::total() const {
    long sum = 0;
    for (const auto& [key, c] : counts_) sum += c;
    return sum;
}

ExitFlowTensor exit_flows(const std::vector<AfcRecord>& records, IntervalGrid grid) {
    ExitFlowTensor flows(grid);
    for (const auto& r : records) {
        if (r.tap_out_s) flows.add_exit(r.od, *r.tap_out_s);
    }
    return flows;
}

}  // namespace transim
