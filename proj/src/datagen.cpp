#include "transim/datagen.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace transim {

std::size_t DemandProfile::interval_count() const {
    return static_cast<std::size_t>(std::llround((end_s - start_s) / interval_s));
}

void DemandProfile::validate() const {
    if (!(interval_s > 0.0)) throw ValidationError("demand profile: interval must be positive");
    if (!(start_s <= warmup_end_s && warmup_end_s <= cooldown_start_s && cooldown_start_s <= end_s && start_s < end_s)) {
        throw ValidationError("demand profile: windows must be contiguous and ordered");
    }
    const double intervals = (end_s - start_s) / interval_s;
    if (std::abs(intervals - std::round(intervals)) > 1e-9) {
        throw ValidationError("demand profile: horizon is not a whole number of intervals");
    }
    for (const auto& od : ods) {
        if (od.od.origin == od.od.destination) throw ValidationError("demand profile: origin equals destination");
        if (od.rates_per_hour.size() != interval_count()) {
            throw ValidationError(fmt::format("demand profile: expected {} rates per OD, got {}", interval_count(),
                                              od.rates_per_hour.size()));
        }
        for (double r : od.rates_per_hour) {
            if (!std::isfinite(r) || r < 0.0) throw ValidationError("demand profile: rates must be >= 0");
        }
    }
}

std::vector<AfcRecord> generate_demand(const DemandProfile& profile, std::uint64_t seed) {
    profile.validate();
    std::vector<AfcRecord> records;
    for (std::size_t o = 0; o < profile.ods.size(); ++o) {
        const auto& od = profile.ods[o];
        for (std::size_t i = 0; i < od.rates_per_hour.size(); ++i) {
            const double mean = od.rates_per_hour[i] * profile.interval_s / 3600.0;
            if (mean <= 0.0) continue;
            auto stream = RandomStream::derive(seed, (static_cast<std::uint64_t>(o) << 20) | i);
            std::poisson_distribution<long> poisson(mean);
            const long count = poisson(stream);
            const double begin = profile.start_s + static_cast<double>(i) * profile.interval_s;
            for (long n = 0; n < count; ++n) {
                // Whole seconds, as recorded by fare gates.
                const double t = std::floor(begin + stream.uniform() * profile.interval_s);
                records.push_back({std::string{}, od.od, t, std::nullopt});
            }
        }
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const AfcRecord& a, const AfcRecord& b) { return a.tap_in_s < b.tap_in_s; });
    for (std::size_t n = 0; n < records.size(); ++n) records[n].passenger_id = fmt::format("P{:07d}", n + 1);
    return records;
}

Timetable generate_timetable(const Network& network, const std::vector<ServicePattern>& patterns) {
    Timetable timetable;
    for (const auto& pattern : patterns) {
        if (!(pattern.headway_s > 0.0) || pattern.dwell_s < 0.0) {
            throw ValidationError(fmt::format("service '{}': headway must be > 0 and dwell >= 0", pattern.line_id));
        }
        const auto line_index = network.line_index(pattern.line_id);
        const auto& line = network.line(line_index);
        int run = 0;
        for (double start = pattern.first_departure_s; start <= pattern.last_departure_s + 1e-9;
             start += pattern.headway_s) {
            Trip trip;
            trip.train_id = fmt::format("{}_{:03d}", pattern.line_id, ++run);
            trip.line = line_index;
            double t = start - pattern.dwell_s;
            for (std::size_t s = 0; s < line.stops.size(); ++s) {
                if (s > 0) t += line.run_times_s[s - 1];
                trip.stops.push_back({line.stops[s], t, t + pattern.dwell_s});
                t += pattern.dwell_s;
            }
            timetable.trips.push_back(std::move(trip));
        }
    }
    timetable.validate(network);
    return timetable;
}

GroundTruth generate_ground_truth(const Network& network, const Timetable& timetable,
                                  const ChoiceSetLibrary& choice_sets, const std::vector<AfcRecord>& demand,
                                  const ChoiceParams& true_params, const SimConfig& config) {
    GroundTruth truth;
    truth.output = run_simulation(network, timetable, choice_sets, true_params, demand, config);
    truth.afc = truth.output.afc_records();
    for (const auto& p : truth.output.passengers) {
        if (!p.path) continue;
        truth.true_paths.push_back({p.id, *p.path, p.times_left_behind});
    }
    return truth;
}

}  // namespace transim
