#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace eigsim {

// Plot-ready tabular output. CSV carries the metadata as '#' comment lines
// before the column header; JSON carries it as a "meta" object. Both are
// byte-deterministic for identical inputs.
struct OutputTable {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> footer; // extra comment lines after the data
};

// Locale-independent, 12 significant digits, '.' decimal separator.
std::string format_double(double v);

void write_csv(const OutputTable& table, std::ostream& out);
void write_json(const OutputTable& table, std::ostream& out);

// Dispatches on format ("csv" | "json"); path "-" writes to stdout.
void write_table(const OutputTable& table, const std::string& path,
                 const std::string& format);

} // namespace eigsim
