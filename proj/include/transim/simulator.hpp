#pragma once

#include "transim/afc.hpp"
#include "transim/choice_model.hpp"
#include "transim/exit_flows.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace transim {

enum class EventKind : std::uint8_t { arrival = 0, departure = 1 };

struct Event {
    double time_s = 0.0;
    EventKind kind = EventKind::arrival;
    std::size_t trip = 0;  // index into Timetable::trips
    std::size_t stop = 0;  // position within the trip
    Platform platform;
};

/// One arrival and one departure per (trip, stop), ordered by time, then
/// arrivals before departures, then train id, then stop position.
std::vector<Event> build_event_list(const Timetable& timetable);

enum class UnreachablePolicy { drop, abort };

/// Optional multiplicative lognormal noise on walk times with unit mean.
struct WalkNoise {
    bool enabled = false;
    double cv = 0.2;
};

struct SimConfig {
    IntervalGrid grid;
    double horizon_start_s = 17 * 3600.0;
    double horizon_end_s = 20 * 3600.0;
    double walk_speed_mps = 1.5;
    std::uint64_t seed = 1;
    std::optional<int> capacity;  // overrides every line's capacity when set
    bool unlimited_capacity = false;
    WalkNoise walk_noise;
    UnreachablePolicy unreachable = UnreachablePolicy::drop;
    bool record_boardings = true;
};

enum class PassengerStatus : std::uint8_t { pending, queued, onboard, exited, dropped };

std::string to_string(PassengerStatus status);

struct PassengerRecord {
    std::string id;
    OdPair od;
    double tap_in_s = 0.0;
    std::optional<double> tap_out_s;
    std::optional<std::size_t> path;  // index into the OD's choice set
    int times_left_behind = 0;
    PassengerStatus status = PassengerStatus::pending;
    std::size_t leg = 0;
    double platform_arrival_s = 0.0;
    double access_s = 0.0;
    double transfer_walk_s = 0.0;
    double egress_s = 0.0;
};

struct BoardingRecord {
    std::size_t passenger = 0;
    std::size_t leg = 0;
    std::size_t trip = 0;
    Platform platform;
    double platform_arrival_s = 0.0;
    double departure_s = 0.0;
};

/// Train load on the segment leaving `from`, after boarding.
struct LoadRecord {
    std::size_t trip = 0;
    LineIndex line;
    StationIndex from;
    StationIndex to;
    double departure_s = 0.0;
    int load = 0;
    int capacity = 0;
};

/// Platform queue right after a departure was served.
struct QueueSample {
    double time_s = 0.0;
    Platform platform;
    std::size_t length = 0;
    std::size_t boarded = 0;
    std::size_t left_behind = 0;
};

struct SimOutput {
    IntervalGrid grid;
    std::vector<PassengerRecord> passengers;  // same order as the demand input
    ExitFlowTensor exit_flows;
    std::vector<LoadRecord> loads;
    std::vector<QueueSample> queues;
    std::vector<BoardingRecord> boardings;
    std::size_t dropped = 0;
    std::vector<std::string> warnings;

    /// AFC-style view: tap-out present only for exited passengers.
    std::vector<AfcRecord> afc_records() const;
};

/// Event-driven passenger loading. Mutable state of a single run; strictly
/// sequential. The network, timetable and choice sets must outlive it.
class Simulation {
public:
    Simulation(const Network& network, const Timetable& timetable, const ChoiceSetLibrary& choice_sets,
               ChoiceRule rule, std::span<const AfcRecord> demand, SimConfig config);

    /// Assigns paths to everyone who tapped in at or before `time_s` and
    /// queues them at their first platform.
    void admit_until(double time_s);

    void process_arrival(const Event& event);
    void process_departure(const Event& event);

    /// admit_until(event time) followed by the matching handler.
    void process(const Event& event);

    /// Admits the remaining demand and returns the indicators. Passengers
    /// still travelling are reported with their current status.
    SimOutput finish();

    const PassengerRecord& passenger(std::size_t index) const { return passengers_.at(index); }
    int onboard_count(std::size_t trip) const { return trains_.at(trip).onboard; }
    int capacity_of(std::size_t trip) const { return trains_.at(trip).capacity; }
    /// Passenger indices waiting at the platform, head first.
    std::vector<std::size_t> queue_at(Platform platform) const;

private:
    struct QueueEntry {
        double arrival_s;
        std::uint64_t sequence;
        std::size_t passenger;
    };

    struct TrainState {
        std::size_t next_stop = 0;
        bool at_platform = false;
        int onboard = 0;
        int capacity = 0;
        std::vector<std::vector<std::size_t>> alighting;  // by trip stop position
        std::vector<int> position_of_station;             // -1 when not served
    };

    struct Draws {
        RandomStream stream;
    };

    std::size_t platform_slot(Platform p) const;
    void enqueue(Platform platform, std::size_t passenger, double arrival_s);
    double walk_seconds(std::size_t passenger, double distance_m);
    const Path& path_of(std::size_t passenger) const;
    void check_time(double time_s);

    const Network& network_;
    const Timetable& timetable_;
    const ChoiceSetLibrary& choice_sets_;
    ChoiceRule rule_;
    SimConfig config_;

    std::vector<PassengerRecord> passengers_;
    std::vector<Draws> draws_;
    std::vector<std::size_t> admission_order_;
    std::size_t next_admission_ = 0;
    std::map<OdPair, PathProbabilities> probability_cache_;

    std::vector<TrainState> trains_;
    std::vector<std::deque<QueueEntry>> queues_;
    std::uint64_t queue_sequence_ = 0;
    double last_event_s_;

    ExitFlowTensor exit_flows_;
    std::vector<LoadRecord> loads_;
    std::vector<QueueSample> queue_samples_;
    std::vector<BoardingRecord> boardings_;
    std::size_t dropped_ = 0;
    std::map<OdPair, std::size_t> unreachable_;
};

SimOutput run_simulation(const Network& network, const Timetable& timetable, const ChoiceSetLibrary& choice_sets,
                         const ChoiceRule& rule, std::span<const AfcRecord> demand, const SimConfig& config);

}  // namespace transim
