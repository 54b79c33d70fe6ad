#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace coagfrag::io {

/// Numeric table with a mandatory header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a named column; throws ValidationError if missing.
    std::size_t column(std::string_view name) const;
};

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

std::string format_csv(const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Comma-delimited, '\n' (or "\r\n") line endings, first line is the header. Blank lines
/// are skipped. Errors name the source and the 1-based line number.
CsvTable parse_csv(std::string_view text, std::string_view source = "<input>");
CsvTable read_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace coagfrag::io
