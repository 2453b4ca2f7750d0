#include "elswap/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace elswap {

CsvWriter::CsvWriter(const std::filesystem::path& file, std::vector<std::string> header,
                     int sig_digits)
    : n_cols_(header.size()), digits_(sig_digits) {
    out_.open(file, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out_)
        throw std::runtime_error("csv: cannot open " + file.string() + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i)
        out_ << header[i] << (i + 1 < header.size() ? "," : "\n");
}

std::string CsvWriter::format(double v, int sig_digits) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", sig_digits, v);
    return buf;
}

void CsvWriter::row(std::span<const double> values) {
    if (values.size() != n_cols_)
        throw std::invalid_argument("csv: row width does not match the header");
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << format(values[i], digits_) << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::row(const std::string& label, std::span<const std::string> cells) {
    if (cells.size() + 1 != n_cols_)
        throw std::invalid_argument("csv: row width does not match the header");
    out_ << label;
    for (const auto& c : cells)
        out_ << ',' << c;
    out_ << '\n';
}

CsvTable read_csv(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw std::runtime_error("csv: cannot open " + file.string());
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (line.back() == ',')
            cells.emplace_back();
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

std::size_t CsvTable::col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    throw std::invalid_argument("csv: no column named " + name);
}

double CsvTable::num(std::size_t r, std::size_t c) const {
    const std::string& s = rows.at(r).at(c);
    if (s.empty())
        throw std::runtime_error("csv: empty cell where a number was expected");
    return std::strtod(s.c_str(), nullptr);
}

int output_precision(int fallback) {
    if (const char* env = std::getenv("ELSWAP_PRECISION")) {
        const int p = std::atoi(env);
        if (p >= 1 && p <= 17)
            return p;
    }
    return fallback;
}

}  // namespace elswap
