#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "rfnn/error.hpp"

namespace rfnn {

/// Formats a double with 17 significant digits (lossless decimal round trip).
std::string format_double(double value);

/// Comma-separated writer: optional '#' comment lines, one header row, then
/// data rows with doubles rendered by format_double.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);

    void comment(const std::string& line);
    void header(const std::vector<std::string>& columns);
    void raw_row(const std::vector<std::string>& cells);
    void row(const std::vector<double>& values);

private:
    std::ofstream out_;
    std::string path_;
};

/// Parsed CSV contents; comment lines are retained separately.
struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column_index(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

} // namespace rfnn
