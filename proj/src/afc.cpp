#include "transim/afc.hpp"

#include "transim/csv.hpp"
#include "transim/time_format.hpp"

#include <algorithm>

namespace transim {

std::vector<AfcRecord> read_afc(const std::filesystem::path& path, const Network& network) {
    const auto table = read_csv(path);
    const auto c_id = table.column("passenger_id");
    const auto c_o = table.column("origin");
    const auto c_d = table.column("destination");
    const auto c_in = table.column("tap_in_time");
    const bool has_out = table.has_column("tap_out_time");
    const auto c_out = has_out ? table.column("tap_out_time") : 0;

    std::vector<AfcRecord> records;
    records.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        AfcRecord r;
        r.passenger_id = row[c_id];
        r.od = {network.station_index(row[c_o]), network.station_index(row[c_d])};
        r.tap_in_s = parse_clock(row[c_in]);
        if (has_out && !row[c_out].empty()) r.tap_out_s = parse_clock(row[c_out]);
        records.push_back(std::move(r));
    }
    return records;
}

void write_afc(const std::filesystem::path& path, const std::vector<AfcRecord>& records, const Network& network,
               bool with_tap_out) {
    CsvTable table;
    table.header = {"passenger_id", "origin", "destination", "tap_in_time"};
    if (with_tap_out) table.header.emplace_back("tap_out_time");
    for (const auto& r : records) {
        std::vector<std::string> row = {r.passenger_id, network.station(r.od.origin).id,
                                        network.station(r.od.destination).id, format_clock(r.tap_in_s)};
        if (with_tap_out) row.push_back(r.tap_out_s ? format_clock(*r.tap_out_s) : std::string{});
        table.rows.push_back(std::move(row));
    }
    write_csv(path, table);
}

std::vector<OdPair> distinct_ods(const std::vector<AfcRecord>& records) {
    std::vector<OdPair> ods;
    ods.reserve(records.size());
    for (const auto& r : records) ods.push_back(r.od);
    std::sort(ods.begin(), ods.end());
    ods.erase(std::unique(ods.begin(), ods.end()), ods.end());
    return ods;
}

}  // namespace transim
