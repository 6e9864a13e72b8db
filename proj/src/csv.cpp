#include "itad/csv.hpp"

#include <cstdio>
#include <sstream>

#include "itad/errors.hpp"

namespace itad::csv {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Writer::Writer(const std::filesystem::path& path,
               const std::vector<std::string>& header)
    : path_(path) {
    out_.open(path, std::ios::binary);
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
    columns_ = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void Writer::row(const std::vector<double>& values) {
    if (values.size() != columns_)
        throw IoError("csv row width mismatch in " + path_.string());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_value(values[i]);
    }
    out_ << '\n';
}

void Writer::close() {
    out_.close();
    if (out_.fail()) throw IoError("failed writing " + path_.string());
}

int Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return int(i);
    return -1;
}

Table read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    Table t;
    std::string line;
    if (!std::getline(in, line)) return t;  // empty file: no header, no rows
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream rs(line);
        while (std::getline(rs, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw IoError("non-numeric cell '" + cell + "' in " + path.string());
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace itad::csv
