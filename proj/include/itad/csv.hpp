#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace itad::csv {

// Numeric CSV writer: header row, 17 significant digits, '.' decimal
// separator, '\n' line endings. Byte-stable for identical inputs.
class Writer {
public:
    Writer(const std::filesystem::path& path,
           const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void close();

private:
    std::ofstream out_;
    std::size_t columns_ = 0;
    std::filesystem::path path_;
};

std::string format_value(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const;  // -1 if absent
};

Table read(const std::filesystem::path& path);

}  // namespace itad::csv
