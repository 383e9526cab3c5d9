#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace owc {

// Parse failure with file and line context.
struct ParseError : std::runtime_error {
    ParseError(const std::string& file, int line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
          line_number(line) {}
    int line_number;
};

// Minimal strict CSV: comma-separated numeric rows under a fixed header.
// Lines starting with '#' before the header are kept as leading comments.
struct CsvTable {
    std::vector<std::string> comments; // leading '#' lines, without the '#'
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::filesystem::path& path, const std::vector<std::string>& expected_header);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& comments,
               const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

// Full-precision decimal formatting ("%.17g"), used for every numeric output.
std::string format_full(double v);

} // namespace owc
