#pragma once

#include <string>
#include <vector>

namespace invman::cli {

/// Shortest-safe rendering: 17 significant digits, so parsing it back gives
/// the same binary64 value.
std::string format_double(double x);

struct TsvTable {
    std::vector<std::string> header;   // without the leading '#'
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    std::string render() const;
};

/// Splits rendered TSV back into header lines, column names and rows.
TsvTable parse_tsv(const std::string& text);

}  // namespace invman::cli
