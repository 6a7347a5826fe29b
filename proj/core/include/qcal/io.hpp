#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace qcal {

// Shortest representation that still round-trips a double (17 significant
// digits); the one formatter every CSV column goes through.
std::string format_double(double v);

// Header-first CSV with a fixed column order. Throws Error on any stream
// failure, at the latest in close().
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    ~CsvWriter();

    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<double>& values);
    void close();

  private:
    std::string path_;
    std::ofstream out_;
    std::size_t n_columns_;
    bool closed_ = false;
};

void ensure_directory(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

struct SvgSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string label;
};

// Auto-scaled polyline quick-look; the CSV next to it stays canonical.
// Callers pass pre-transformed values (e.g. log10) for log axes.
void write_svg_quicklook(const std::string& path, const std::vector<SvgSeries>& series,
                         const std::string& title, const std::string& x_label,
                         const std::string& y_label);

}  // namespace qcal
