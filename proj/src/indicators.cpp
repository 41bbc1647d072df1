#include "transim/indicators.hpp"

#include "transim/csv.hpp"
#include "transim/time_format.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>

namespace transim {

namespace {

double nearest_rank(const std::vector<double>& sorted, double fraction) {
    const auto rank = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(sorted.size())));
    return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

}  // namespace

IndicatorTables extract_indicators(const SimOutput& output, const Network& network, const Timetable& timetable,
                                   double interval_s) {
    IndicatorTables tables;
    const IntervalGrid grid{output.grid.origin_s, interval_s};

    for (const auto& load : output.loads) {
        tables.segment_loads.push_back({timetable.trips.at(load.trip).train_id, network.line(load.line).id,
                                        network.station(load.from).id, network.station(load.to).id, load.departure_s,
                                        load.load, load.capacity});
    }

    std::map<FlowKey, std::vector<double>> journeys;
    for (const auto& p : output.passengers) {
        if (p.status != PassengerStatus::exited) continue;
        journeys[{p.od, grid.index_of(p.tap_in_s)}].push_back(*p.tap_out_s - p.tap_in_s);
    }
    for (auto& [key, times] : journeys) {
        std::sort(times.begin(), times.end());
        double sum = 0.0;
        for (double t : times) sum += t;
        tables.journey_times.push_back({key, times.size(), sum / static_cast<double>(times.size()),
                                        nearest_rank(times, 0.5), nearest_rank(times, 0.9), nearest_rank(times, 0.95)});
    }

    std::map<std::pair<Platform, int>, std::pair<std::size_t, std::size_t>> denials;
    std::map<Platform, PeakQueueRow> peaks;
    for (const auto& q : output.queues) {
        auto& cell = denials[{q.platform, grid.index_of(q.time_s)}];
        cell.first += q.boarded;
        cell.second += q.left_behind;
        auto [it, inserted] = peaks.try_emplace(q.platform, PeakQueueRow{q.platform, q.length, q.time_s});
        if (!inserted && q.length > it->second.peak_length) it->second = {q.platform, q.length, q.time_s};
    }
    for (const auto& [key, counts] : denials) {
        const auto [boarded, left] = counts;
        if (boarded + left == 0) continue;
        tables.left_behind.push_back({key.first, key.second, boarded, left,
                                      static_cast<double>(left) / static_cast<double>(boarded + left)});
    }
    for (const auto& [platform, row] : peaks) tables.peak_queues.push_back(row);
    return tables;
}

void write_sim_output(const std::filesystem::path& dir, const SimOutput& output, const IndicatorTables& tables,
                      const Network& network) {
    std::filesystem::create_directories(dir);
    const auto sid = [&](StationIndex s) { return network.station(s).id; };
    const auto lid = [&](LineIndex l) { return network.line(l).id; };

    CsvTable passengers;
    passengers.header = {"passenger_id", "origin", "destination", "tap_in_time", "tap_out_time",
                         "path",         "times_left_behind", "status"};
    for (const auto& p : output.passengers) {
        passengers.rows.push_back({p.id, sid(p.od.origin), sid(p.od.destination), format_clock(p.tap_in_s),
                                   p.tap_out_s ? format_clock(*p.tap_out_s) : std::string{},
                                   p.path ? std::to_string(*p.path) : std::string{},
                                   std::to_string(p.times_left_behind), to_string(p.status)});
    }
    write_csv(dir / "passengers.out", passengers);

    CsvTable flows;
    flows.header = {"origin", "destination", "interval_index", "count"};
    for (const auto& [key, count] : output.exit_flows.counts()) {
        flows.rows.push_back({sid(key.od.origin), sid(key.od.destination), std::to_string(key.interval),
                              std::to_string(count)});
    }
    write_csv(dir / "od_exit_flows.out", flows);

    CsvTable loads;
    loads.header = {"train_id", "line_id", "from_station", "to_station", "departure_time", "load", "capacity"};
    for (const auto& row : tables.segment_loads) {
        loads.rows.push_back({row.train_id, row.line_id, row.from_station, row.to_station, format_clock(row.departure_s),
                              std::to_string(row.load), std::to_string(row.capacity)});
    }
    write_csv(dir / "loads.out", loads);

    CsvTable queues;
    queues.header = {"time", "station_id", "line_id", "queue_length", "boarded", "left_behind"};
    for (const auto& q : output.queues) {
        queues.rows.push_back({format_clock(q.time_s), sid(q.platform.station), lid(q.platform.line),
                               std::to_string(q.length), std::to_string(q.boarded), std::to_string(q.left_behind)});
    }
    write_csv(dir / "queues.out", queues);

    CsvTable journeys;
    journeys.header = {"origin", "destination", "interval_index", "count", "mean_s", "p50_s", "p90_s", "p95_s"};
    for (const auto& row : tables.journey_times) {
        journeys.rows.push_back({sid(row.key.od.origin), sid(row.key.od.destination), std::to_string(row.key.interval),
                                 std::to_string(row.count), format_number(row.mean_s, 1), format_number(row.p50_s, 1),
                                 format_number(row.p90_s, 1), format_number(row.p95_s, 1)});
    }
    write_csv(dir / "journey_times.out", journeys);

    CsvTable left;
    left.header = {"station_id", "line_id", "interval_index", "boarded", "left_behind", "rate"};
    for (const auto& row : tables.left_behind) {
        left.rows.push_back({sid(row.platform.station), lid(row.platform.line), std::to_string(row.interval),
                             std::to_string(row.boarded), std::to_string(row.left_behind), format_number(row.rate, 4)});
    }
    write_csv(dir / "left_behind.out", left);

    CsvTable peaks;
    peaks.header = {"station_id", "line_id", "peak_queue_length", "peak_time"};
    for (const auto& row : tables.peak_queues) {
        peaks.rows.push_back({sid(row.platform.station), lid(row.platform.line), std::to_string(row.peak_length),
                              format_clock(row.peak_time_s)});
    }
    write_csv(dir / "peak_queues.out", peaks);
}

}  // namespace transim
