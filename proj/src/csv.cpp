#include "rfnn/csv.hpp"

#include <cstdio>
#include <sstream>

namespace rfnn {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path), path_(path) {
    if (!out_) throw Error("cannot open '" + path + "' for writing");
}

void CsvWriter::comment(const std::string& line) { out_ << "# " << line << '\n'; }

void CsvWriter::header(const std::vector<std::string>& columns) { raw_row(columns); }

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw Error("failed writing '" + path_ + "'");
}

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    raw_row(cells);
}

int CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    throw Error("csv column '" + name + "' not found");
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    CsvTable table;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            table.comments.push_back(line);
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!saw_header) {
            table.columns = std::move(cells);
            saw_header = true;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    if (!saw_header) throw Error("csv '" + path + "' has no header row");
    return table;
}

} // namespace rfnn
