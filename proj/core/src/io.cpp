#include "qcal/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>

#include "qcal/errors.hpp"

namespace qcal {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : path_(path), out_(path, std::ios::trunc), n_columns_(columns.size()) {
    if (!out_) throw Error("io: cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

CsvWriter::~CsvWriter() {
    try {
        close();
    } catch (...) {
        // destructor swallows; call close() to observe failures
    }
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != n_columns_)
        throw Error("io: row width " + std::to_string(values.size()) + " != header width " +
                    std::to_string(n_columns_) + " in '" + path_ + "'");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_double(values[i]);
    }
    out_ << '\n';
}

void CsvWriter::close() {
    if (closed_) return;
    closed_ = true;
    out_.flush();
    if (!out_) throw Error("io: write failed on '" + path_ + "'");
    out_.close();
}

void ensure_directory(const std::string& path) {
    if (path.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw Error("io: cannot create directory '" + path + "': " + ec.message());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("io: cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw Error("io: write failed on '" + path + "'");
}

namespace {

std::string svg_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace

void write_svg_quicklook(const std::string& path, const std::vector<SvgSeries>& series,
                         const std::string& title, const std::string& x_label,
                         const std::string& y_label) {
    constexpr double width = 800.0, height = 500.0;
    constexpr double ml = 70.0, mr = 20.0, mt = 40.0, mb = 55.0;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const auto& s : series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x_min = std::min(x_min, s.x[i]);
            x_max = std::max(x_max, s.x[i]);
            y_min = std::min(y_min, s.y[i]);
            y_max = std::max(y_max, s.y[i]);
        }
    if (!(x_min <= x_max)) {
        x_min = 0.0;
        x_max = 1.0;
        y_min = 0.0;
        y_max = 1.0;
    }
    if (x_max == x_min) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if (y_max == y_min) {
        y_min -= 0.5;
        y_max += 0.5;
    }
    const double x_pad = 0.04 * (x_max - x_min), y_pad = 0.06 * (y_max - y_min);
    x_min -= x_pad;
    x_max += x_pad;
    y_min -= y_pad;
    y_max += y_pad;

    const auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
    const auto py = [&](double y) { return mt + ph - (y - y_min) / (y_max - y_min) * ph; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    constexpr int n_colors = 5;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#444\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
        << "font-family=\"sans-serif\">" << svg_escape(title) << "</text>\n";

    constexpr int n_ticks = 5;
    for (int k = 0; k <= n_ticks; ++k) {
        const double fx = x_min + (x_max - x_min) * k / n_ticks;
        const double fy = y_min + (y_max - y_min) * k / n_ticks;
        svg << "<line x1=\"" << px(fx) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(fx)
            << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"#444\"/>\n"
            << "<text x=\"" << px(fx) << "\" y=\"" << mt + ph + 20
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
            << tick_label(fx) << "</text>\n"
            << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(fy) << "\" x2=\"" << ml << "\" y2=\""
            << py(fy) << "\" stroke=\"#444\"/>\n"
            << "<text x=\"" << ml - 8 << "\" y=\"" << py(fy) + 4
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
            << tick_label(fy) << "</text>\n";
    }
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">"
        << svg_escape(x_label) << "</text>\n"
        << "<text x=\"18\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
        << "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">" << svg_escape(y_label)
        << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = palette[s % n_colors];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        const auto& sr = series[s];
        for (std::size_t i = 0; i < std::min(sr.x.size(), sr.y.size()); ++i) {
            if (!std::isfinite(sr.x[i]) || !std::isfinite(sr.y[i])) continue;
            svg << px(sr.x[i]) << ',' << py(sr.y[i]) << ' ';
        }
        svg << "\"/>\n";
        if (!sr.label.empty())
            svg << "<text x=\"" << ml + pw - 8 << "\" y=\"" << mt + 18 + 16 * s
                << "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\" fill=\""
                << color << "\">" << svg_escape(sr.label) << "</text>\n";
    }
    svg << "</svg>\n";
    write_text_file(path, svg.str());
}

}  // namespace qcal
