#ifndef SLELAB_IO_HPP
#define SLELAB_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace slelab {

/// Shortest-round-trip-safe decimal form: 17 significant digits.
/// All numeric file output goes through this so that re-runs are
/// byte-identical.
std::string format_g17(double x);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

/// FNV-1a 64-bit digest of a byte string, as 16 lowercase hex chars.
std::string fnv1a64_hex(const std::string& bytes);

/// Minimal hand-rolled log-log scatter plot with a fitted line.
/// Deterministic output (no timestamps, fixed float formatting).
struct LogLogPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> x;       // positive
    std::vector<double> y;       // positive
    double fit_slope = 0.0;      // fitted line in log10-log10 coordinates
    double fit_intercept = 0.0;  // log10(y) = slope*log10(x) + intercept
    bool draw_fit = true;
};

std::string render_svg(const LogLogPlot& plot);

} // namespace slelab

#endif
