#include "dptda/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dptda {

std::string format_full(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(cell);
    return cells;
}

bool parse_double(const std::string& text, double& out) {
    const char* begin = text.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    return *end == '\0';
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

}  // namespace

PointCloud read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_number = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // Skip blanks.
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto cells = split_csv_line(line);
        std::vector<double> row;
        row.reserve(cells.size());
        bool numeric = true;
        for (const auto& cell : cells) {
            double value = 0.0;
            if (!parse_double(cell, value)) {
                numeric = false;
                break;
            }
            row.push_back(value);
        }
        if (!numeric) {
            if (first_content_line) {  // header row
                first_content_line = false;
                continue;
            }
            throw std::runtime_error(path + ":" + std::to_string(line_number) +
                                     ": malformed row (non-numeric cell)");
        }
        first_content_line = false;
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error(path + ":" + std::to_string(line_number) +
                                     ": malformed row (expected " +
                                     std::to_string(rows.front().size()) + " columns)");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("no points");
    return PointCloud::from_rows(rows);
}

void write_points_csv(const std::string& path, const PointCloud& cloud) {
    auto out = open_out(path);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto p = cloud.point(i);
        for (std::size_t a = 0; a < p.size(); ++a) {
            if (a) out << ',';
            out << format_full(p[a]);
        }
        out << '\n';
    }
}

void write_diagram_json(const std::string& path, const DiagramTuple& tuple, double cap) {
    nlohmann::ordered_json doc;
    doc["ell"] = tuple.ell();
    doc["cap"] = cap;
    doc["diagrams"] = nlohmann::ordered_json::array();
    for (const auto& diagram : tuple.diagrams) {
        nlohmann::ordered_json entry;
        entry["dim"] = diagram.dim;
        entry["pairs"] = nlohmann::ordered_json::array();
        for (const auto& pair : diagram.pairs) {
            nlohmann::ordered_json p;
            p["birth"] = pair.birth;
            if (pair.essential())
                p["death"] = "inf";
            else
                p["death"] = pair.death;
            entry["pairs"].push_back(std::move(p));
        }
        doc["diagrams"].push_back(std::move(entry));
    }
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

std::pair<DiagramTuple, double> read_diagram_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": invalid JSON (" + e.what() + ")");
    }
    try {
        const int ell = doc.at("ell").get<int>();
        const double cap = doc.at("cap").get<double>();
        DiagramTuple tuple = make_empty_tuple(ell);
        for (const auto& entry : doc.at("diagrams")) {
            const int dim = entry.at("dim").get<int>();
            if (dim < 0 || dim > ell)
                throw std::runtime_error(path + ": diagram dim outside 0..ell");
            auto& diagram = tuple.diagrams[static_cast<std::size_t>(dim)];
            for (const auto& p : entry.at("pairs")) {
                PersistencePair pair;
                pair.birth = p.at("birth").get<double>();
                const auto& death = p.at("death");
                pair.death = death.is_string() ? kInfiniteDeath : death.get<double>();
                diagram.pairs.push_back(pair);
            }
        }
        tuple.validate();
        return {std::move(tuple), cap};
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": invalid diagram document (" + e.what() + ")");
    }
}

void write_trace_csv(const std::string& path, const MechanismTrace& trace) {
    auto out = open_out(path);
    out << "iter,utility,accepted";
    const std::size_t dims = trace.rows.empty() ? 0 : trace.rows.front().db_per_dim.size();
    for (std::size_t q = 0; q < dims; ++q) out << ",db_dim" << q;
    out << '\n';
    for (const auto& row : trace.rows) {
        out << row.iteration << ',' << format_full(row.utility) << ','
            << (row.accepted ? 1 : 0);
        for (const double db : row.db_per_dim) out << ',' << format_full(db);
        out << '\n';
    }
}

void write_sweep_csv(const std::string& path, const SweepResult& result,
                     const std::string& axis_name) {
    auto out = open_out(path);
    const std::size_t dims = result.rows.empty() ? 0 : result.rows.front().db_per_dim.size();
    out << "axis,value,rep";
    for (std::size_t q = 0; q < dims; ++q) out << ",db" << q;
    out << ",total\n";
    for (const auto& row : result.rows) {
        out << axis_name << ',' << format_full(row.axis_value) << ',' << row.replicate;
        for (const double db : row.db_per_dim) out << ',' << format_full(db);
        out << ',' << format_full(row.total) << '\n';
    }
}

void write_sweep_svg(const std::string& path, const SweepResult& result,
                     const std::string& axis_name) {
    if (result.summary.empty()) throw std::invalid_argument("svg: empty sweep");
    const double width = 640, height = 480, margin = 60;

    double min_x = kInfiniteDeath, max_x = -kInfiniteDeath;
    double min_y = kInfiniteDeath, max_y = -kInfiniteDeath;
    for (const auto& s : result.summary) {
        min_x = std::min(min_x, std::log10(s.axis_value));
        max_x = std::max(max_x, std::log10(s.axis_value));
        min_y = std::min(min_y, std::log10(std::max(s.q025, 1e-12)));
        max_y = std::max(max_y, std::log10(std::max(s.q975, 1e-12)));
    }
    if (max_x == min_x) max_x = min_x + 1.0;
    if (max_y == min_y) max_y = min_y + 1.0;

    const auto sx = [&](double lx) {
        return margin + (lx - min_x) / (max_x - min_x) * (width - 2 * margin);
    };
    const auto sy = [&](double ly) {
        return height - margin - (ly - min_y) / (max_y - min_y) * (height - 2 * margin);
    };
    const auto lg = [](double v) { return std::log10(std::max(v, 1e-12)); };

    auto out = open_out(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='"
        << height << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";

    out << "<polygon fill='lightgray' stroke='none' points='";
    for (const auto& s : result.summary)
        out << sx(lg(s.axis_value)) << ',' << sy(lg(s.q975)) << ' ';
    for (auto it = result.summary.rbegin(); it != result.summary.rend(); ++it)
        out << sx(lg(it->axis_value)) << ',' << sy(lg(it->q025)) << ' ';
    out << "'/>\n";

    out << "<polyline fill='none' stroke='black' stroke-width='2' points='";
    for (const auto& s : result.summary)
        out << sx(lg(s.axis_value)) << ',' << sy(lg(s.median)) << ' ';
    out << "'/>\n";

    // Slope -1 reference through the first median.
    const double x0 = lg(result.summary.front().axis_value);
    const double y0 = lg(result.summary.front().median);
    const double x1 = lg(result.summary.back().axis_value);
    out << "<line stroke='red' stroke-dasharray='6,4' x1='" << sx(x0) << "' y1='" << sy(y0)
        << "' x2='" << sx(x1) << "' y2='" << sy(y0 - (x1 - x0)) << "'/>\n";

    out << "<text x='" << width / 2 << "' y='" << height - margin / 3
        << "' text-anchor='middle' font-size='14'>log10 " << axis_name << "</text>\n";
    out << "<text x='" << margin / 3 << "' y='" << height / 2
        << "' text-anchor='middle' font-size='14' transform='rotate(-90 " << margin / 3 << ' '
        << height / 2 << ")'>log10 bottleneck distance</text>\n";
    out << "<text x='" << width / 2 << "' y='" << margin / 2
        << "' text-anchor='middle' font-size='14'>slope "
        << format_full(result.log_log_slope) << "</text>\n";
    out << "</svg>\n";
}

}  // namespace dptda
