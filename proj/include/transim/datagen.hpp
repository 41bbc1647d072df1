#pragma once

#include "transim/simulator.hpp"

#include <string>
#include <vector>

namespace transim {

struct OdDemand {
    OdPair od;
    std::vector<double> rates_per_hour;  // one per profile interval
};

/// Time-varying OD entry rates over [start, end) split into warm-up,
/// estimation and cool-down windows.
struct DemandProfile {
    double start_s = 17 * 3600.0;
    double warmup_end_s = 18 * 3600.0;
    double cooldown_start_s = 19 * 3600.0;
    double end_s = 20 * 3600.0;
    double interval_s = 900.0;
    std::vector<OdDemand> ods;

    std::size_t interval_count() const;
    /// Throws ValidationError on negative rates, wrong rate counts or
    /// windows out of order.
    void validate() const;
};

/// Poisson counts per OD and interval, tap-in times uniform within the
/// interval. Passenger ids are assigned in tap-in order.
std::vector<AfcRecord> generate_demand(const DemandProfile& profile, std::uint64_t seed);

struct ServicePattern {
    std::string line_id;
    double first_departure_s = 0.0;
    double last_departure_s = 0.0;
    double headway_s = 300.0;
    double dwell_s = 30.0;
};

/// Regular-headway timetable: arrival = previous departure + run time.
Timetable generate_timetable(const Network& network, const std::vector<ServicePattern>& patterns);

struct TruePathRecord {
    std::string passenger_id;
    std::size_t path = 0;
    int times_left_behind = 0;
};

struct GroundTruth {
    std::vector<AfcRecord> afc;
    std::vector<TruePathRecord> true_paths;  // held out from calibration
    SimOutput output;
};

GroundTruth generate_ground_truth(const Network& network, const Timetable& timetable,
                                  const ChoiceSetLibrary& choice_sets, const std::vector<AfcRecord>& demand,
                                  const ChoiceParams& true_params, const SimConfig& config);

/// Desk-scale stand-in for a metro network: 10 stations, 3 bidirectional
/// lines, an evening-peak demand profile and the timetable that serves it.
struct BundledCase {
    NetworkSpec network;
    std::vector<ServicePattern> services;
    std::vector<std::pair<std::string, std::string>> target_ods;  // ODs with alternative paths
    /// Built against a Network constructed from `network`.
    DemandProfile demand(const Network& network) const;
};

BundledCase bundled_small_network();

}  // namespace transim
