#pragma once
// CSV output: comma separated, '.' decimal point, '\n' line endings, mandatory header row,
// optional leading "# key = value" comment block. Doubles use %.17g so output round-trips.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "qtr/error.hpp"

namespace qtr {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CsvTable {
    std::vector<std::pair<std::string, std::string>> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) {
        if (row.size() != header.size()) throw Error("CSV row width does not match header");
        rows.push_back(std::move(row));
    }

    std::string str() const {
        std::string out;
        for (const auto& [k, v] : comments) out += "# " + k + " = " + v + "\n";
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        line(header);
        for (const auto& r : rows) line(r);
        return out;
    }

    void write(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ConfigError("cannot write '" + path + "'");
        f << str();
        if (!f) throw ConfigError("failed writing '" + path + "'");
    }
};

}  // namespace qtr
