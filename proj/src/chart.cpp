#include "teamform/chart.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace teamform {

namespace {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;  // sorted by x
};

double to_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("csv field '" + s + "' is not numeric");
    }
}

struct ChartData {
    std::vector<Series> series;
    std::string x_label;
    std::string y_label;
};

ChartData extract(const CsvTable& t) {
    if (t.rows.empty()) throw std::runtime_error("csv has no data rows to chart");
    ChartData data;
    std::map<std::string, std::size_t> index;
    auto series_for = [&](const std::string& name) -> Series& {
        auto it = index.find(name);
        if (it == index.end()) {
            index[name] = data.series.size();
            data.series.push_back({name, {}});
            return data.series.back();
        }
        return data.series[it->second];
    };

    const auto& h = t.header;
    if (h.size() == 4 && h[0] == "n" && h[1] == "metric" && h[2] == "mean_rounds") {
        data.x_label = "n";
        data.y_label = "mean rounds";
        for (const auto& row : t.rows)
            series_for(row[1]).points.push_back({to_double(row[0]), to_double(row[2])});
    } else if (h.size() == 5 && h[0] == "n" && h[1] == "m" && h[2] == "eps" &&
               h[3] == "mean_rounds") {
        data.x_label = "eps";
        data.y_label = "mean rounds";
        for (const auto& row : t.rows)
            series_for("n=" + row[0] + ",m=" + row[1])
                .points.push_back({to_double(row[2]), to_double(row[3])});
    } else if (!h.empty() && h[0] == "round") {
        data.x_label = "round";
        data.y_label = "count";
        for (std::size_t col = 1; col < h.size(); ++col)
            series_for(h[col]);
        for (const auto& row : t.rows)
            for (std::size_t col = 1; col < h.size(); ++col)
                data.series[col - 1].points.push_back({to_double(row[0]), to_double(row[col])});
    } else {
        throw std::runtime_error("unrecognized csv schema for charting");
    }
    for (auto& s : data.series) std::sort(s.points.begin(), s.points.end());
    return data;
}

std::vector<double> linear_ticks(double lo, double hi, int target) {
    if (hi <= lo) return {lo};
    double raw = (hi - lo) / target;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * mult >= raw) {
            step = mag * mult;
            break;
        }
    }
    std::vector<double> ticks;
    for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step)
        ticks.push_back(v);
    return ticks;
}

std::string trim_number(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string emit_chart(const CsvTable& table, ChartKind kind) {
    ChartData data = extract(table);
    const bool logy = (kind == ChartKind::LogLines);

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto& s : data.series)
        for (auto& [x, y] : s.points) {
            double yy = y;
            if (logy) yy = std::max(yy, 0.1);  // keep zero rounds drawable
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, yy);
            ymax = std::max(ymax, yy);
        }
    if (xmax <= xmin) { xmin -= 0.5; xmax += 0.5; }
    double ylo = logy ? std::log10(ymin) : 0.0;
    double yhi = logy ? std::log10(ymax) : ymax;
    if (logy) {
        ylo = std::floor(ylo);
        yhi = std::ceil(yhi + 1e-9);
        if (yhi <= ylo) yhi = ylo + 1;
    } else {
        if (yhi <= ylo) yhi = ylo + 1;
        yhi *= 1.05;
    }

    const double width = 720, height = 480;
    const double left = 70, right = width - 160, top = 30, bottom = height - 50;
    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (right - left); };
    auto sy = [&](double y) {
        double v = logy ? std::log10(std::max(y, 0.1)) : y;
        return bottom - (v - ylo) / (yhi - ylo) * (bottom - top);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axes
    svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";

    for (double xt : linear_ticks(xmin, xmax, 6)) {
        double px = sx(xt);
        svg << "<line x1=\"" << px << "\" y1=\"" << bottom << "\" x2=\"" << px << "\" y2=\""
            << bottom + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << px << "\" y=\"" << bottom + 20
            << "\" font-size=\"12\" text-anchor=\"middle\">" << trim_number(xt) << "</text>\n";
    }
    if (logy) {
        for (int e = static_cast<int>(ylo); e <= static_cast<int>(yhi); ++e) {
            double py = sy(std::pow(10.0, e));
            svg << "<line x1=\"" << left - 5 << "\" y1=\"" << py << "\" x2=\"" << right
                << "\" y2=\"" << py << "\" stroke=\"#dddddd\"/>\n";
            svg << "<text x=\"" << left - 8 << "\" y=\"" << py + 4
                << "\" font-size=\"12\" text-anchor=\"end\">1e" << e << "</text>\n";
        }
    } else {
        for (double yt : linear_ticks(ylo, yhi, 5)) {
            double py = sy(yt);
            svg << "<line x1=\"" << left - 5 << "\" y1=\"" << py << "\" x2=\"" << right
                << "\" y2=\"" << py << "\" stroke=\"#dddddd\"/>\n";
            svg << "<text x=\"" << left - 8 << "\" y=\"" << py + 4
                << "\" font-size=\"12\" text-anchor=\"end\">" << trim_number(yt) << "</text>\n";
        }
    }

    svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">" << data.x_label << "</text>\n";
    svg << "<text x=\"18\" y=\"" << (top + bottom) / 2 << "\" font-size=\"13\" "
        << "text-anchor=\"middle\" transform=\"rotate(-90 18 " << (top + bottom) / 2 << ")\">"
        << data.y_label << (logy ? " (log scale)" : "") << "</text>\n";

    for (std::size_t i = 0; i < data.series.size(); ++i) {
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::ostringstream pts;
        for (auto& [x, y] : data.series[i].points) pts << sx(x) << "," << sy(y) << " ";
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\""
            << pts.str() << "\"/>\n";
        for (auto& [x, y] : data.series[i].points)
            svg << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3\" fill=\""
                << color << "\"/>\n";
        double ly = top + 18 * static_cast<double>(i);
        svg << "<line x1=\"" << right + 10 << "\" y1=\"" << ly << "\" x2=\"" << right + 30
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << right + 35 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
            << data.series[i].name << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace teamform
