#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace elswap {

/// CSV emission: header row, comma separator, LF line endings, numbers
/// printed with a fixed count of significant digits (12 by default).
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& file, std::vector<std::string> header,
              int sig_digits = 12);

    void row(std::span<const double> values);
    /// Row with a leading label column; empty cells allowed via NaN-free
    /// string cells.
    void row(const std::string& label, std::span<const std::string> cells);

    static std::string format(double v, int sig_digits);

  private:
    std::ofstream out_;
    std::size_t n_cols_;
    int digits_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t col(const std::string& name) const;
    double num(std::size_t r, std::size_t c) const;
    const std::string& cell(std::size_t r, std::size_t c) const { return rows[r][c]; }
};

CsvTable read_csv(const std::filesystem::path& file);

/// Output precision, honoring the ELSWAP_PRECISION environment override.
int output_precision(int fallback = 12);

}  // namespace elswap
