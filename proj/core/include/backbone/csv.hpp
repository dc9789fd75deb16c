#pragma once

#include <string>
#include <vector>

namespace backbone {

// Minimal RFC-4180-ish CSV support: comma separated, double-quote escaping,
// UTF-8 passthrough. Enough for the flat tables this project exchanges.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 if absent
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);

std::string csv_escape(const std::string& field);
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace backbone
