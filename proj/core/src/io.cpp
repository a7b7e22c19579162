#include "slelab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slelab {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string fmt_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

} // namespace

std::string render_svg(const LogLogPlot& plot) {
    const double width = 640, height = 480;
    const double ml = 70, mr = 20, mt = 40, mb = 50;

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (std::size_t i = 0; i < plot.x.size(); ++i) {
        if (!(plot.x[i] > 0) || !(plot.y[i] > 0)) continue;
        const double lx = std::log10(plot.x[i]);
        const double ly = std::log10(plot.y[i]);
        if (first) {
            xmin = xmax = lx;
            ymin = ymax = ly;
            first = false;
        } else {
            xmin = std::min(xmin, lx);
            xmax = std::max(xmax, lx);
            ymin = std::min(ymin, ly);
            ymax = std::max(ymax, ly);
        }
    }
    if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
    if (ymax - ymin < 1e-12) { ymin -= 0.5; ymax += 0.5; }
    const double xpad = 0.05 * (xmax - xmin), ypad = 0.08 * (ymax - ymin);
    xmin -= xpad; xmax += xpad; ymin -= ypad; ymax += ypad;

    auto px = [&](double lx) { return ml + (lx - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto py = [&](double ly) { return height - mb - (ly - ymin) / (ymax - ymin) * (height - mt - mb); };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << plot.title << "</text>\n";

    // axes
    s << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << height - mb << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << plot.x_label << " (log10)</text>\n";
    s << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << (mt + height - mb) / 2 << ")\">" << plot.y_label << " (log10)</text>\n";

    // ticks: 5 per axis
    for (int k = 0; k <= 4; ++k) {
        const double lx = xmin + (xmax - xmin) * k / 4.0;
        const double ly = ymin + (ymax - ymin) * k / 4.0;
        s << "<line x1=\"" << fmt_coord(px(lx)) << "\" y1=\"" << height - mb << "\" x2=\""
          << fmt_coord(px(lx)) << "\" y2=\"" << height - mb + 5 << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << fmt_coord(px(lx)) << "\" y=\"" << height - mb + 18
          << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt_label(lx) << "</text>\n";
        s << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt_coord(py(ly)) << "\" x2=\"" << ml
          << "\" y2=\"" << fmt_coord(py(ly)) << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << ml - 8 << "\" y=\"" << fmt_coord(py(ly) + 3)
          << "\" text-anchor=\"end\" font-size=\"10\">" << fmt_label(ly) << "</text>\n";
    }

    if (plot.draw_fit) {
        const double y0 = plot.fit_slope * xmin + plot.fit_intercept;
        const double y1 = plot.fit_slope * xmax + plot.fit_intercept;
        s << "<line x1=\"" << fmt_coord(px(xmin)) << "\" y1=\"" << fmt_coord(py(y0))
          << "\" x2=\"" << fmt_coord(px(xmax)) << "\" y2=\"" << fmt_coord(py(y1))
          << "\" stroke=\"#c03030\" stroke-width=\"1.5\"/>\n";
        s << "<text x=\"" << width - mr - 8 << "\" y=\"" << mt + 14
          << "\" text-anchor=\"end\" font-size=\"12\" fill=\"#c03030\">slope = "
          << fmt_label(plot.fit_slope) << "</text>\n";
    }

    for (std::size_t i = 0; i < plot.x.size(); ++i) {
        if (!(plot.x[i] > 0) || !(plot.y[i] > 0)) continue;
        s << "<circle cx=\"" << fmt_coord(px(std::log10(plot.x[i]))) << "\" cy=\""
          << fmt_coord(py(std::log10(plot.y[i])))
          << "\" r=\"3\" fill=\"#3060c0\"/>\n";
    }
    s << "</svg>\n";
    return s.str();
}

} // namespace slelab
