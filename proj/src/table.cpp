#include "eigsim/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "eigsim/errors.hpp"

namespace eigsim {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

void write_csv(const OutputTable& table, std::ostream& out) {
    for (const auto& [key, value] : table.meta)
        out << "# " << key << " = " << value << "\n";
    for (size_t i = 0; i < table.columns.size(); ++i)
        out << table.columns[i] << (i + 1 < table.columns.size() ? "," : "");
    out << "\n";
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out << format_double(row[i]) << (i + 1 < row.size() ? "," : "");
        out << "\n";
    }
    for (const auto& line : table.footer) out << "# " << line << "\n";
}

void write_json(const OutputTable& table, std::ostream& out) {
    nlohmann::ordered_json j;
    auto& meta = j["meta"];
    for (const auto& [key, value] : table.meta) meta[key] = value;
    j["columns"] = table.columns;
    auto& rows = j["rows"];
    rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        auto jr = nlohmann::ordered_json::array();
        for (double v : row) {
            if (std::isfinite(v))
                jr.push_back(v);
            else
                jr.push_back(nullptr); // JSON has no NaN
        }
        rows.push_back(std::move(jr));
    }
    if (!table.footer.empty()) j["notes"] = table.footer;
    out << j.dump(2) << "\n";
}

void write_table(const OutputTable& table, const std::string& path,
                 const std::string& format) {
    const bool json = format == "json";
    if (!json && format != "csv")
        throw ConfigError("unknown output format '" + format + "'");

    auto emit = [&](std::ostream& os) {
        json ? write_json(table, os) : write_csv(table, os);
        if (!os) throw std::ios_base::failure("write failed");
    };
    if (path == "-" || path.empty()) {
        emit(std::cout);
    } else {
        std::ofstream file(path, std::ios::binary);
        if (!file)
            throw std::ios_base::failure("cannot open output file '" + path +
                                         "'");
        emit(file);
    }
}

} // namespace eigsim
