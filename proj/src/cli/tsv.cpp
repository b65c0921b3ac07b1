#include "invman/cli/tsv.hpp"

#include "invman/errors.hpp"

#include <cstdio>
#include <sstream>

namespace invman::cli {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        out.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return out;
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void TsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) {
        throw Error(ErrorKind::InternalConsistency,
                    "row has " + std::to_string(row.size()) + " fields, table has " +
                        std::to_string(columns.size()) + " columns");
    }
    rows.push_back(std::move(row));
}

std::string TsvTable::render() const {
    std::string out;
    auto join = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += '\t';
            out += fields[i];
        }
        out += '\n';
    };
    for (const auto& h : header) out += "# " + h + "\n";
    join(columns);
    for (const auto& r : rows) join(r);
    return out;
}

TsvTable parse_tsv(const std::string& text) {
    TsvTable t;
    std::istringstream in(text);
    std::string line;
    bool have_columns = false;
    while (std::getline(in, line)) {
        if (!have_columns && line.rfind("#", 0) == 0) {
            t.header.push_back(line.size() > 2 ? line.substr(2) : std::string());
        } else if (!have_columns) {
            t.columns = split_tabs(line);
            have_columns = true;
        } else {
            t.rows.push_back(split_tabs(line));
        }
    }
    return t;
}

}  // namespace invman::cli
