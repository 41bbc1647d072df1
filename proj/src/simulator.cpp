#include "transim/simulator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace transim {

namespace {

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

}  // namespace

std::vector<Event> build_event_list(const Timetable& timetable) {
    std::vector<Event> events;
    for (std::size_t t = 0; t < timetable.trips.size(); ++t) {
        const auto& trip = timetable.trips[t];
        for (std::size_t s = 0; s < trip.stops.size(); ++s) {
            const Platform platform{trip.stops[s].station, trip.line};
            events.push_back({trip.stops[s].arrival_s, EventKind::arrival, t, s, platform});
            events.push_back({trip.stops[s].departure_s, EventKind::departure, t, s, platform});
        }
    }
    std::sort(events.begin(), events.end(), [&](const Event& a, const Event& b) {
        if (a.time_s != b.time_s) return a.time_s < b.time_s;
        if (a.kind != b.kind) return a.kind < b.kind;
        const auto& ida = timetable.trips[a.trip].train_id;
        const auto& idb = timetable.trips[b.trip].train_id;
        if (ida != idb) return ida < idb;
        return a.stop < b.stop;
    });
    return events;
}

std::string to_string(PassengerStatus status) {
    switch (status) {
        case PassengerStatus::pending: return "pending";
        case PassengerStatus::queued: return "queued";
        case PassengerStatus::onboard: return "onboard";
        case PassengerStatus::exited: return "exited";
        case PassengerStatus::dropped: return "dropped";
    }
    return "unknown";
}

std::vector<AfcRecord> SimOutput::afc_records() const {
    std::vector<AfcRecord> records;
    records.reserve(passengers.size());
    for (const auto& p : passengers) {
        AfcRecord r{p.id, p.od, p.tap_in_s, std::nullopt};
        if (p.status == PassengerStatus::exited) r.tap_out_s = p.tap_out_s;
        records.push_back(std::move(r));
    }
    return records;
}

Simulation::Simulation(const Network& network, const Timetable& timetable, const ChoiceSetLibrary& choice_sets,
                       ChoiceRule rule, std::span<const AfcRecord> demand, SimConfig config)
    : network_(network),
      timetable_(timetable),
      choice_sets_(choice_sets),
      rule_(std::move(rule)),
      config_(config),
      last_event_s_(-std::numeric_limits<double>::infinity()),
      exit_flows_(config.grid) {
    if (!(config_.walk_speed_mps > 0.0)) throw ValidationError("simulation: walk speed must be positive");
    if (!(config_.grid.length_s > 0.0)) throw ValidationError("simulation: interval length must be positive");
    if (!(config_.horizon_end_s >= config_.horizon_start_s)) throw ValidationError("simulation: empty horizon");
    if (config_.capacity && *config_.capacity <= 0) throw ValidationError("simulation: capacity must be positive");

    passengers_.reserve(demand.size());
    draws_.reserve(demand.size());
    for (const auto& r : demand) {
        if (!std::isfinite(r.tap_in_s) || r.tap_in_s < config_.horizon_start_s || r.tap_in_s > config_.horizon_end_s) {
            throw ValidationError(fmt::format("passenger '{}': tap-in outside the simulation horizon", r.passenger_id));
        }
        if (r.od.origin.get() >= network_.station_count() || r.od.destination.get() >= network_.station_count()) {
            throw ValidationError(fmt::format("passenger '{}': unknown station", r.passenger_id));
        }
        PassengerRecord p;
        p.id = r.passenger_id;
        p.od = r.od;
        p.tap_in_s = r.tap_in_s;
        passengers_.push_back(std::move(p));
        draws_.push_back({RandomStream::derive(config_.seed, fnv1a(r.passenger_id))});
    }
    admission_order_.resize(passengers_.size());
    std::iota(admission_order_.begin(), admission_order_.end(), std::size_t{0});
    std::stable_sort(admission_order_.begin(), admission_order_.end(), [&](std::size_t a, std::size_t b) {
        return passengers_[a].tap_in_s < passengers_[b].tap_in_s;
    });

    trains_.resize(timetable_.trips.size());
    for (std::size_t t = 0; t < trains_.size(); ++t) {
        const auto& trip = timetable_.trips[t];
        auto& train = trains_[t];
        if (config_.unlimited_capacity) {
            train.capacity = std::numeric_limits<int>::max();
        } else {
            train.capacity = config_.capacity.value_or(network_.line(trip.line).capacity);
        }
        train.alighting.resize(trip.stops.size());
        train.position_of_station.assign(network_.station_count(), -1);
        for (std::size_t s = trip.stops.size(); s-- > 0;) {
            train.position_of_station[trip.stops[s].station.get()] = static_cast<int>(s);
        }
    }
    queues_.resize(network_.station_count() * network_.line_count());
}

std::size_t Simulation::platform_slot(Platform p) const {
    return p.station.get() * network_.line_count() + p.line.get();
}

const Path& Simulation::path_of(std::size_t passenger) const {
    const auto& p = passengers_[passenger];
    return choice_sets_.at(p.od).paths.at(*p.path);
}

double Simulation::walk_seconds(std::size_t passenger, double distance_m) {
    const double base = distance_m / config_.walk_speed_mps;
    if (!config_.walk_noise.enabled || base == 0.0) return base;
    const double sigma2 = std::log1p(config_.walk_noise.cv * config_.walk_noise.cv);
    std::normal_distribution<double> normal(-0.5 * sigma2, std::sqrt(sigma2));
    return base * std::exp(normal(draws_[passenger].stream));
}

void Simulation::enqueue(Platform platform, std::size_t passenger, double arrival_s) {
    auto& queue = queues_[platform_slot(platform)];
    const QueueEntry entry{arrival_s, queue_sequence_++, passenger};
    const auto at = std::upper_bound(queue.begin(), queue.end(), entry, [](const QueueEntry& a, const QueueEntry& b) {
        if (a.arrival_s != b.arrival_s) return a.arrival_s < b.arrival_s;
        return a.sequence < b.sequence;
    });
    queue.insert(at, entry);
    auto& p = passengers_[passenger];
    p.platform_arrival_s = arrival_s;
    p.status = PassengerStatus::queued;
}

void Simulation::check_time(double time_s) {
    if (time_s < last_event_s_) {
        throw InconsistentStateError(fmt::format("event at {} s precedes the previous event at {} s", time_s,
                                                 last_event_s_));
    }
    last_event_s_ = time_s;
}

void Simulation::admit_until(double time_s) {
    while (next_admission_ < admission_order_.size()) {
        const std::size_t index = admission_order_[next_admission_];
        auto& p = passengers_[index];
        if (p.tap_in_s > time_s) break;
        ++next_admission_;

        const auto cs = choice_sets_.find(p.od);
        if (cs == choice_sets_.end() || cs->second.paths.empty()) {
            if (config_.unreachable == UnreachablePolicy::abort) {
                throw NoPathError(fmt::format("passenger '{}': no path from '{}' to '{}'", p.id,
                                              network_.station(p.od.origin).id, network_.station(p.od.destination).id));
            }
            p.status = PassengerStatus::dropped;
            ++dropped_;
            ++unreachable_[p.od];
            continue;
        }

        auto cached = probability_cache_.find(p.od);
        if (cached == probability_cache_.end()) {
            cached = probability_cache_.emplace(p.od, rule_probabilities(network_, cs->second, rule_)).first;
        }
        p.path = sample_path(cached->second.probs, draws_[index].stream);
        p.leg = 0;
        const auto& first = cs->second.paths[*p.path].legs.front();
        p.access_s = walk_seconds(index, network_.gate_distance_m(p.od.origin, first.line));
        enqueue({p.od.origin, first.line}, index, p.tap_in_s + p.access_s);
    }
}

void Simulation::process_arrival(const Event& event) {
    check_time(event.time_s);
    auto& train = trains_.at(event.trip);
    if (train.at_platform || train.next_stop != event.stop) {
        throw InconsistentStateError(fmt::format("train '{}' is not approaching stop {}",
                                                 timetable_.trips[event.trip].train_id, event.stop));
    }
    train.at_platform = true;

    auto alighting = std::move(train.alighting[event.stop]);
    train.alighting[event.stop].clear();
    const auto station = event.platform.station;
    for (std::size_t index : alighting) {
        auto& p = passengers_[index];
        if (p.status != PassengerStatus::onboard) {
            throw InconsistentStateError(fmt::format("passenger '{}' alights but is not onboard", p.id));
        }
        const auto& legs = path_of(index).legs;
        const auto& leg = legs[p.leg];
        if (leg.alight != station) {
            throw InconsistentStateError(fmt::format("passenger '{}' alights at the wrong station", p.id));
        }
        --train.onboard;
        if (p.leg + 1 == legs.size()) {
            p.egress_s = walk_seconds(index, network_.gate_distance_m(station, leg.line));
            p.tap_out_s = event.time_s + p.egress_s;
            p.status = PassengerStatus::exited;
            p.leg = legs.size();
            exit_flows_.add_exit(p.od, *p.tap_out_s);
        } else {
            const auto& next = legs[p.leg + 1];
            const double walk = walk_seconds(index, network_.transfer_distance_m(station, leg.line, next.line));
            p.transfer_walk_s += walk;
            ++p.leg;
            enqueue({station, next.line}, index, event.time_s + walk);
        }
    }
    if (train.onboard < 0) throw InconsistentStateError("negative train load");
}

void Simulation::process_departure(const Event& event) {
    check_time(event.time_s);
    auto& train = trains_.at(event.trip);
    const auto& trip = timetable_.trips[event.trip];
    if (!train.at_platform || train.next_stop != event.stop) {
        throw InconsistentStateError(fmt::format("train '{}' is not at stop {}", trip.train_id, event.stop));
    }

    auto& queue = queues_[platform_slot(event.platform)];
    std::deque<QueueEntry> remaining;
    std::size_t boarded = 0;
    std::size_t left_behind = 0;
    for (const auto& entry : queue) {
        if (entry.arrival_s > event.time_s) {
            remaining.push_back(entry);
            continue;
        }
        auto& p = passengers_[entry.passenger];
        const auto& leg = path_of(entry.passenger).legs[p.leg];
        const int alight_pos = train.position_of_station[leg.alight.get()];
        if (alight_pos <= static_cast<int>(event.stop)) {
            remaining.push_back(entry);  // this train does not reach the passenger's alighting station
            continue;
        }
        if (train.onboard < train.capacity) {
            ++train.onboard;
            ++boarded;
            train.alighting[static_cast<std::size_t>(alight_pos)].push_back(entry.passenger);
            p.status = PassengerStatus::onboard;
            if (config_.record_boardings) {
                boardings_.push_back({entry.passenger, p.leg, event.trip, event.platform, entry.arrival_s,
                                      event.time_s});
            }
        } else {
            ++p.times_left_behind;
            ++left_behind;
            remaining.push_back(entry);
        }
    }
    queue = std::move(remaining);

    if (event.stop + 1 < trip.stops.size()) {
        loads_.push_back({event.trip, trip.line, trip.stops[event.stop].station, trip.stops[event.stop + 1].station,
                          event.time_s, train.onboard, train.capacity});
    }
    queue_samples_.push_back({event.time_s, event.platform, queue.size(), boarded, left_behind});
    train.at_platform = false;
    ++train.next_stop;
}

void Simulation::process(const Event& event) {
    admit_until(event.time_s);
    if (event.kind == EventKind::arrival) {
        process_arrival(event);
    } else {
        process_departure(event);
    }
}

std::vector<std::size_t> Simulation::queue_at(Platform platform) const {
    std::vector<std::size_t> out;
    for (const auto& entry : queues_.at(platform_slot(platform))) out.push_back(entry.passenger);
    return out;
}

SimOutput Simulation::finish() {
    admit_until(config_.horizon_end_s);
    SimOutput out;
    out.grid = config_.grid;
    out.passengers = passengers_;
    out.exit_flows = exit_flows_;
    out.loads = loads_;
    out.queues = queue_samples_;
    out.boardings = boardings_;
    out.dropped = dropped_;
    for (const auto& [od, count] : unreachable_) {
        out.warnings.push_back(fmt::format("{} passenger(s) dropped: no path from '{}' to '{}'", count,
                                           network_.station(od.origin).id, network_.station(od.destination).id));
    }
    return out;
}

SimOutput run_simulation(const Network& network, const Timetable& timetable, const ChoiceSetLibrary& choice_sets,
                         const ChoiceRule& rule, std::span<const AfcRecord> demand, const SimConfig& config) {
    Simulation simulation(network, timetable, choice_sets, rule, demand, config);
    for (const auto& event : build_event_list(timetable)) simulation.process(event);
    return simulation.finish();
}

}  // namespace transim
