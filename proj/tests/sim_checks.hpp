#pragma once

#include "fixtures.hpp"
#include "transim/choice_model.hpp"
#include "transim/datagen.hpp"
#include "transim/simulator.hpp"

#include <fmt/format.h>

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace sim_checks {

using namespace transim;

struct Scenario {
    std::unique_ptr<Network> network;
    Timetable timetable;
    ChoiceSetLibrary choice_sets;
    std::vector<AfcRecord> demand;
    ChoiceRule rule;
    SimConfig config;
};

/// Small random network, headway timetable with some truncated trips, and
/// random tap-ins between 17:00 and 19:30.
inline Scenario random_scenario(std::uint64_t seed, bool unlimited) {
    std::mt19937_64 rng(seed);
    Scenario s;
    const std::size_t stations = 4 + rng() % 4;
    s.network = std::make_unique<Network>(fixtures::random_spec(rng, stations, 1 + rng() % 3));
    const auto& net = *s.network;

    std::vector<ServicePattern> patterns;
    for (const auto& line : net.lines()) {
        const double first = 16 * 3600.0 + 50 * 60.0 + static_cast<double>(rng() % 600);
        const double headway = 120.0 + static_cast<double>(rng() % 480);
        patterns.push_back({line.id, first, 20 * 3600.0, headway, static_cast<double>(10 + rng() % 50)});
    }
    s.timetable = generate_timetable(net, patterns);
    for (auto& trip : s.timetable.trips) {
        if (rng() % 5 == 0 && trip.stops.size() > 2) trip.stops.resize(2 + rng() % (trip.stops.size() - 2));
    }
    s.timetable.validate(net);

    std::uniform_int_distribution<int> tap(17 * 3600, 19 * 3600 + 1800);
    const std::size_t passengers = 20 + rng() % 120;
    for (std::size_t i = 0; i < passengers; ++i) {
        const std::size_t o = rng() % stations;
        std::size_t d = rng() % stations;
        if (d == o) d = (d + 1) % stations;
        s.demand.push_back({fmt::format("Q{:05}", i), {StationIndex(o), StationIndex(d)}, double(tap(rng)), std::nullopt});
    }
    std::sort(s.demand.begin(), s.demand.end(), [](const auto& a, const auto& b) { return a.tap_in_s < b.tap_in_s; });

    ChoiceSetOptions options;
    options.max_paths = 1 + rng() % 4;
    s.choice_sets = build_choice_sets(net, distinct_ods(s.demand), options);

    std::uniform_real_distribution<double> coef(-2.0, 0.0);
    if (rng() % 4 == 0) {
        s.rule = ShortestPathRule{};
    } else {
        s.rule = ChoiceParams{coef(rng) / 2, coef(rng), coef(rng), coef(rng)};
    }
    s.config.seed = seed;
    s.config.unlimited_capacity = unlimited;
    if (!unlimited) s.config.capacity = 1 + static_cast<int>(rng() % 6);
    return s;
}

inline SimOutput run(const Scenario& s) {
    return run_simulation(*s.network, s.timetable, s.choice_sets, s.rule, s.demand, s.config);
}

/// Conservation, capacity, FCFS, event order, journey-time lower bound.
inline std::vector<std::string> invariant_violations(const Scenario& s, const SimOutput& out) {
    std::vector<std::string> bad;
    const auto& net = *s.network;

    // conservation per OD
    std::map<OdPair, std::array<long, 5>> status;
    std::map<OdPair, long> tapped;
    for (const auto& p : out.passengers) {
        ++status[p.od][static_cast<std::size_t>(p.status)];
        ++tapped[p.od];
    }
    for (const auto& [od, n] : tapped) {
        const auto& c = status[od];
        if (c[0] != 0) bad.push_back("passenger left pending at the end");
        if (n != c[1] + c[2] + c[3] + c[4]) bad.push_back("conservation broken");
        long exits = 0;
        for (const auto& [key, count] : out.exit_flows.counts()) exits += key.od == od ? count : 0;
        if (exits != c[3]) bad.push_back("exit flows disagree with exited passengers");
    }

    // capacity
    for (const auto& load : out.loads) {
        if (load.load < 0 || load.load > load.capacity) bad.push_back(fmt::format("load {} over capacity {}", load.load, load.capacity));
    }

    // event order of recorded mutations
    for (std::size_t i = 1; i < out.loads.size(); ++i) {
        if (out.loads[i].departure_s < out.loads[i - 1].departure_s) bad.push_back("loads out of time order");
    }
    for (std::size_t i = 1; i < out.boardings.size(); ++i) {
        if (out.boardings[i].departure_s < out.boardings[i - 1].departure_s) bad.push_back("boardings out of time order");
    }

    // FCFS: nobody who reached the platform earlier and could use the train is overtaken
    std::map<std::pair<std::size_t, std::size_t>, const BoardingRecord*> boarded;
    for (const auto& b : out.boardings) boarded[{b.passenger, b.leg}] = &b;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::size_t, std::size_t>>> waiting;  // by platform
    for (std::size_t i = 0; i < out.passengers.size(); ++i) {
        const auto& p = out.passengers[i];
        if (!p.path) continue;
        const auto& path = s.choice_sets.at(p.od).paths[*p.path];
        for (std::size_t leg = 0; leg < path.legs.size() && leg <= p.leg; ++leg) {
            waiting[{path.legs[leg].board.get(), path.legs[leg].line.get()}].push_back({i, leg});
        }
    }
    auto arrival_of = [&](std::size_t passenger, std::size_t leg) -> std::optional<double> {
        const auto it = boarded.find({passenger, leg});
        if (it != boarded.end()) return it->second->platform_arrival_s;
        const auto& p = out.passengers[passenger];
        if (p.leg == leg && p.status == PassengerStatus::queued) return p.platform_arrival_s;
        return std::nullopt;
    };
    for (const auto& b : out.boardings) {
        const auto& trip = s.timetable.trips[b.trip];
        const auto board_pos = trip.stop_position(b.platform.station);
        for (const auto& [other, leg] : waiting[{b.platform.station.get(), b.platform.line.get()}]) {
            if (other == b.passenger) continue;
            const auto arrival = arrival_of(other, leg);
            if (!arrival || !(*arrival < b.platform_arrival_s)) continue;
            const auto& op = out.passengers[other];
            const auto& oleg = s.choice_sets.at(op.od).paths[*op.path].legs[leg];
            const auto alight_pos = trip.stop_position(oleg.alight);
            if (!alight_pos || *alight_pos <= *board_pos) continue;  // this train was no use to them
            const auto it = boarded.find({other, leg});
            if (it == boarded.end() || it->second->departure_s > b.departure_s) {
                bad.push_back(fmt::format("passenger {} overtaken by {} at {}", op.id, out.passengers[b.passenger].id,
                                          format_clock(b.departure_s)));
            }
        }
    }

    // journey-time lower bound
    for (const auto& p : out.passengers) {
        if (p.status != PassengerStatus::exited) continue;
        const auto& path = s.choice_sets.at(p.od).paths[*p.path];
        const double bound = path.attributes.in_vehicle_min * 60.0 + p.access_s + p.transfer_walk_s + p.egress_s;
        if (*p.tap_out_s - p.tap_in_s < bound - 1e-6) bad.push_back(fmt::format("{} faster than physically possible", p.id));
    }
    return bad;
}

/// With unlimited capacity every passenger rides the first train that leaves
/// after they reach the platform and reaches their alighting station.
inline std::vector<std::string> timetable_lookup_violations(const Scenario& s, const SimOutput& out) {
    std::vector<std::string> bad;
    const auto& net = *s.network;
    const double speed = s.config.walk_speed_mps;
    for (const auto& p : out.passengers) {
        if (!p.path) continue;
        const auto& path = s.choice_sets.at(p.od).paths[*p.path];
        double ready = p.tap_in_s + net.gate_distance_m(p.od.origin, path.legs.front().line) / speed;
        std::optional<double> exit_time;
        for (std::size_t leg = 0; leg < path.legs.size(); ++leg) {
            const auto& l = path.legs[leg];
            const Trip* best = nullptr;
            double best_dep = 0.0;
            for (const auto& trip : s.timetable.trips) {
                if (trip.line != l.line) continue;
                const auto b = trip.stop_position(l.board);
                const auto a = trip.stop_position(l.alight);
                if (!b || !a || *a <= *b) continue;
                const double dep = trip.stops[*b].departure_s;
                if (dep < ready) continue;
                if (!best || dep < best_dep || (dep == best_dep && trip.train_id < best->train_id)) {
                    best = &trip;
                    best_dep = dep;
                }
            }
            if (!best) break;
            const double arrive = best->stops[*best->stop_position(l.alight)].arrival_s;
            if (leg + 1 == path.legs.size()) {
                exit_time = arrive + net.gate_distance_m(l.alight, l.line) / speed;
            } else {
                ready = arrive + net.transfer_distance_m(l.alight, l.line, path.legs[leg + 1].line) / speed;
            }
        }
        if (exit_time.has_value() != (p.status == PassengerStatus::exited)) {
            bad.push_back(fmt::format("{}: exit status differs from the lookup", p.id));
        } else if (exit_time && *exit_time != *p.tap_out_s) {
            bad.push_back(fmt::format("{}: tap-out {} but lookup gives {}", p.id, *p.tap_out_s, *exit_time));
        }
    }
    return bad;
}

/// Three trains of capacity 2 on X-M-Y and eight passengers.
///   T1 leaves X 18:05 with p1 p2; p3 p4 p5 wait. At M p6 is refused.
///   T2 leaves X 18:10 with p3 p4; p5 p7 wait. At M p6 is refused again.
///   T3 leaves X 18:15 with p5 p7. p7 gets off at M, p6 takes the seat, p8 is refused.
struct OverloadFixture {
    std::unique_ptr<Network> network;
    Timetable timetable;
    ChoiceSetLibrary choice_sets;
    std::vector<AfcRecord> demand;
    SimConfig config;

    OverloadFixture() {
        using fixtures::at;
        network = std::make_unique<Network>(
            fixtures::make_spec({{"X", 0, 0}, {"M", 1, 0}, {"Y", 2, 0}}, {{"L", {"X", "M", "Y"}, {120, 120}, 2}}));
        const auto& net = *network;
        timetable.trips = {
            fixtures::make_trip(net, "T1", "L",
                                {{at("18:04:30"), at("18:05:00")}, {at("18:07:00"), at("18:07:30")}, {at("18:09:30"), at("18:09:30")}}),
            fixtures::make_trip(net, "T2", "L",
                                {{at("18:09:30"), at("18:10:00")}, {at("18:12:00"), at("18:12:30")}, {at("18:14:30"), at("18:14:30")}}),
            fixtures::make_trip(net, "T3", "L",
                                {{at("18:14:30"), at("18:15:00")}, {at("18:17:00"), at("18:17:30")}, {at("18:19:30"), at("18:19:30")}}),
        };
        demand = {
            fixtures::tap_in(net, "p1", "X", "Y", "18:00:00"), fixtures::tap_in(net, "p2", "X", "Y", "18:00:10"),
            fixtures::tap_in(net, "p3", "X", "Y", "18:00:20"), fixtures::tap_in(net, "p4", "X", "Y", "18:00:30"),
            fixtures::tap_in(net, "p5", "X", "Y", "18:00:40"), fixtures::tap_in(net, "p6", "M", "Y", "18:01:00"),
            fixtures::tap_in(net, "p7", "X", "M", "18:06:00"), fixtures::tap_in(net, "p8", "M", "Y", "18:13:00"),
        };
        choice_sets = build_choice_sets(net, distinct_ods(demand), {});
    }

    SimOutput run() const {
        return run_simulation(*network, timetable, choice_sets, kReferenceParams, demand, config);
    }

    /// (train, passenger) in boarding order.
    static std::vector<std::pair<std::string, std::string>> expected_boardings() {
        return {{"T1", "p1"}, {"T1", "p2"}, {"T2", "p3"}, {"T2", "p4"}, {"T3", "p5"}, {"T3", "p7"}, {"T3", "p6"}};
    }
    static std::vector<int> expected_left_behind() { return {0, 0, 1, 1, 2, 2, 1, 1}; }
    /// Segment loads in departure order: (train, from, load).
    static std::vector<std::tuple<std::string, std::string, int>> expected_loads() {
        return {{"T1", "X", 2}, {"T1", "M", 2}, {"T2", "X", 2}, {"T2", "M", 2}, {"T3", "X", 2}, {"T3", "M", 2}};
    }
    static std::vector<std::string> expected_tap_outs() {
        return {"18:09:30", "18:09:30", "18:14:30", "18:14:30", "18:19:30", "18:19:30", "18:17:00", ""};
    }
};

/// Differences between a run and the hand trace above.
inline std::vector<std::string> overload_mismatches(const OverloadFixture& f, const SimOutput& out) {
    std::vector<std::string> bad;
    const auto& net = *f.network;
    std::vector<std::pair<std::string, std::string>> boardings;
    for (const auto& b : out.boardings) boardings.push_back({f.timetable.trips[b.trip].train_id, out.passengers[b.passenger].id});
    if (boardings != OverloadFixture::expected_boardings()) bad.push_back("boarding order differs");

    std::vector<int> left;
    std::vector<std::string> tap_outs;
    for (const auto& p : out.passengers) {
        left.push_back(p.times_left_behind);
        tap_outs.push_back(p.tap_out_s ? format_clock(*p.tap_out_s) : "");
    }
    if (left != OverloadFixture::expected_left_behind()) bad.push_back("times_left_behind differs");
    if (tap_outs != OverloadFixture::expected_tap_outs()) bad.push_back("tap-out times differ");

    std::vector<std::tuple<std::string, std::string, int>> loads;
    for (const auto& l : out.loads) loads.push_back({f.timetable.trips[l.trip].train_id, net.station(l.from).id, l.load});
    if (loads != OverloadFixture::expected_loads()) bad.push_back("segment loads differ");

    if (out.passengers.back().status != PassengerStatus::queued) bad.push_back("p8 should still be waiting");
    return bad;
}

}  // namespace sim_checks
