// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcl/report.hpp"

#include "qcl/checkpoint.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

namespace qcl {

namespace {

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path);
    if (!os) {
        throw Error("cannot write " + path);
    }
    return os;
}

std::string escape_xml(const std::string& text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_csv(const ResultTable& table, const std::string& path) {
    auto os = open_output(path);
    os << "config_hash,seed,epsilon,t,metric,value\n";
    os << std::setprecision(17);
    for (const auto& row : table.rows) {
        os << hash_hex(table.config_hash) << ',' << table.seed << ',' << row.epsilon << ',' << row.t << ','
           << row.metric << ',' << row.value << '\n';
    }
}

ResultTable read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw Error("cannot open " + path);
    }
    ResultTable table;
    std::string line;
    std::getline(is, line);
    if (line != "config_hash,seed,epsilon,t,metric,value") {
        throw Error("unexpected CSV header in " + path);
    }
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            fields.push_back(field);
        }
        if (fields.size() != 6) {
            throw Error("malformed CSV row in " + path + ": " + line);
        }
        table.config_hash = std::stoull(fields[0], nullptr, 16);
        table.seed = std::stoull(fields[1]);
        table.rows.push_back({std::stod(fields[2]), std::stod(fields[3]), fields[4], std::stod(fields[5])});
    }
    return table;
}

nlohmann::json table_to_json(const ResultTable& table, const nlohmann::json& config, const std::string& command) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        rows.push_back({{"epsilon", row.epsilon}, {"t", row.t}, {"metric", row.metric}, {"value", row.value}});
    }
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : table.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    return {{"provenance",
             {{"tool", "qclab"},
              {"command", command},
              {"config_hash", hash_hex(table.config_hash)},
              {"seed", table.seed},
              {"compiler", __VERSION__},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)}}},
            {"config", config},
            {"rows", rows},
            {"checks", checks},
            {"warnings", table.warnings},
            {"all_passed", table.all_passed()}};
}

void write_json(const nlohmann::json& j, const std::string& path) {
    auto os = open_output(path);
    os << j.dump(2) << '\n';
}

void write_text(const std::string& text, const std::string& path) {
    auto os = open_output(path);
    os << text;
}

std::vector<PlotSeries> metric_series(const ResultTable& table, const std::string& metric) {
    std::map<double, PlotSeries> by_time;
    for (const auto& row : table.rows) {
        if (row.metric != metric) {
            continue;
        }
        auto& s = by_time[row.t];
        std::ostringstream label;
        label << "t = " << row.t;
        s.label = label.str();
        s.x.push_back(row.epsilon);
        s.y.push_back(row.value);
    }
    std::vector<PlotSeries> out;
    for (auto& [t, s] : by_time) {
        out.push_back(std::move(s));
    }
    return out;
}

std::string svg_loglog(const std::vector<PlotSeries>& series, const std::string& title, const std::string& x_label,
                       const std::string& y_label) {
    constexpr double width = 640.0;
    constexpr double height = 440.0;
    constexpr double left = 80.0;
    constexpr double right = 150.0;
    constexpr double top = 40.0;
    constexpr double bottom = 60.0;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (s.x[i] > 0.0 && s.y[i] > 0.0) {
                xmin = std::min(xmin, std::log10(s.x[i]));
                xmax = std::max(xmax, std::log10(s.x[i]));
                ymin = std::min(ymin, std::log10(s.y[i]));
                ymax = std::max(ymax, std::log10(s.y[i]));
            }
        }
    }
    std::ostringstream os;
    os << std::setprecision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape_xml(title)
       << "</text>\n";
    if (!std::isfinite(xmin)) {
        os << "<text x=\"" << width / 2 << "\" y=\"" << height / 2 << "\" text-anchor=\"middle\">no positive data</text>\n";
        os << "</svg>\n";
        return os.str();
    }
    xmin = std::floor(xmin);
    xmax = std::max(std::ceil(xmax), xmin + 1.0);
    ymin = std::floor(ymin);
    ymax = std::max(std::ceil(ymax), ymin + 1.0);
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    const auto px = [&](double v) { return left + (std::log10(v) - xmin) / (xmax - xmin) * pw; };
    const auto py = [&](double v) { return top + ph - (std::log10(v) - ymin) / (ymax - ymin) * ph; };

    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double e = xmin; e <= xmax + 1e-9; e += 1.0) {
        const double x = left + (e - xmin) / (xmax - xmin) * pw;
        os << "<line x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x << "\" y2=\"" << top + ph
           << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << x << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">1e" << e << "</text>\n";
    }
    for (double e = ymin; e <= ymax + 1e-9; e += 1.0) {
        const double y = top + ph - (e - ymin) / (ymax - ymin) * ph;
        os << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + pw << "\" y2=\"" << y
           << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">"
       << escape_xml(x_label) << "</text>\n";
    os << "<text transform=\"translate(20," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape_xml(y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = colors[k % (sizeof(colors) / sizeof(colors[0]))];
        std::ostringstream points;
        points << std::setprecision(6);
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (s.x[i] > 0.0 && s.y[i] > 0.0) {
                points << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
                os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3\" fill=\"" << color
                   << "\"/>\n";
            }
        }
        os << "<polyline points=\"" << points.str() << "\" fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"1.5\"/>\n";
        const double ly = top + 16.0 * static_cast<double>(k + 1);
        os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 32 << "\" y2=\""
           << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly << "\">" << escape_xml(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace qcl
