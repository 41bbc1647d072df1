#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace transim {

/// Comma-separated table with a header row. No quoting: identifiers in this
/// project never contain commas.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws ValidationError when absent.
    std::size_t column(const std::string& name) const;
    bool has_column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

}  // namespace transim
