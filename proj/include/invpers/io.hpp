#ifndef INVPERS_IO_HPP
#define INVPERS_IO_HPP

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "invpers/bottleneck.hpp"
#include "invpers/generators.hpp"

namespace invpers {

using nlohmann::json;

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Error::Kind::parse, "cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline double parse_double(const std::string& tok, const std::string& path) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw Error(Error::Kind::parse, "'" + path + "': not a number: '" + tok + "'");
    }
}

inline std::vector<std::vector<double>> parse_csv(const std::string& text, const std::string& path) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = line.find_first_not_of(" \t") == std::string::npos;
        if (blank) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) row.push_back(parse_double(tok, path));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(Error::Kind::parse, "'" + path + "': no data rows");
    for (const auto& r : rows)
        if (r.size() != rows[0].size())
            throw Error(Error::Kind::parse, "'" + path + "': ragged rows");
    return rows;
}

inline bool looks_like_distance_matrix(const std::vector<std::vector<double>>& rows, double tol) {
    if (rows.size() != rows[0].size() || rows.size() < 2) return false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (std::abs(rows[i][i]) > tol) return false;
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (rows[i][j] < -tol) return false;
            if (std::abs(rows[i][j] - rows[j][i]) > tol) return false;
        }
    }
    return true;
}

}  // namespace detail

/// Loads a point cloud or distance matrix from CSV / JSON.
/// kind: "points", "matrix", or "auto" (square symmetric zero-diagonal CSV
/// is read as a matrix; JSON is keyed explicitly).
inline FiniteMetricSpace load_space(const std::string& path, const std::string& kind = "auto",
                                    double tol_metric = 1e-9) {
    std::string text = detail::read_file(path);
    bool is_json = path.size() > 5 && path.substr(path.size() - 5) == ".json";
    if (is_json) {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw Error(Error::Kind::parse, "'" + path + "': " + e.what());
        }
        std::vector<std::string> ids;
        if (j.contains("ids")) ids = j["ids"].get<std::vector<std::string>>();
        try {
            if (j.contains("points"))
                return space_from_points(j["points"].get<std::vector<std::vector<double>>>(), ids);
            if (j.contains("distance_matrix"))
                return space_from_matrix(j["distance_matrix"].get<std::vector<std::vector<double>>>(), ids,
                                         tol_metric);
        } catch (const json::exception& e) {
            throw Error(Error::Kind::parse, "'" + path + "': " + e.what());
        }
        throw Error(Error::Kind::parse, "'" + path + "': expected a 'points' or 'distance_matrix' key");
    }
    auto rows = detail::parse_csv(text, path);
    bool as_matrix = kind == "matrix" || (kind == "auto" && detail::looks_like_distance_matrix(rows, tol_metric));
    if (kind == "matrix" || kind == "points" || kind == "auto") {
        return as_matrix ? space_from_matrix(std::move(rows), {}, tol_metric)
                         : space_from_points(std::move(rows));
    }
    throw Error(Error::Kind::argument, "unknown input kind '" + kind + "'");
}

inline json barcode_to_json(const Barcode& bc) {
    json bars = json::array();
    for (const Bar& b : bc.bars)
        bars.push_back({{"birth", b.birth}, {"death", b.death}, {"multiplicity", b.multiplicity}});
    json values = json::object();
    for (std::size_t i = 0; i < bc.labels.size(); ++i)
        values[std::to_string(bc.labels[static_cast<std::size_t>(i)])] = bc.label_values[i];
    return json{{"direction", bc.direction == PersistenceModule::Direction::inverse ? "inverse" : "forward"},
                {"dimension", bc.dimension},
                {"field", bc.field},
                {"bars", bars},
                {"index_values", values}};
}

inline Barcode barcode_from_json(const json& j) {
    Barcode bc;
    try {
        std::string dir = j.at("direction").get<std::string>();
        if (dir != "inverse" && dir != "forward")
            throw Error(Error::Kind::parse, "barcode: bad direction '" + dir + "'");
        bc.direction = dir == "inverse" ? PersistenceModule::Direction::inverse
                                        : PersistenceModule::Direction::forward;
        bc.dimension = j.at("dimension").get<int>();
        bc.field = j.at("field").get<Fp>();
        for (const auto& b : j.at("bars")) {
            Bar bar{b.at("birth").get<int>(), b.at("death").get<int>(), b.at("multiplicity").get<int>()};
            if (bar.multiplicity < 1 || bar.birth > bar.death)
                throw Error(Error::Kind::parse, "barcode: malformed bar");
            bc.bars.push_back(bar);
        }
        if (j.contains("index_values")) {
            std::map<int, double> lv;
            for (auto it = j["index_values"].begin(); it != j["index_values"].end(); ++it)
                lv[std::stoi(it.key())] = it.value().get<double>();
            for (auto& [l, v] : lv) {
                bc.labels.push_back(l);
                bc.label_values.push_back(v);
            }
        }
    } catch (const json::exception& e) {
        throw Error(Error::Kind::parse, std::string("barcode json: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw Error(Error::Kind::parse, "barcode json: non-numeric index_values key");
    }
    return bc;
}

inline Barcode load_barcode(const std::string& path) {
    json j;
    try {
        j = json::parse(detail::read_file(path));
    } catch (const json::exception& e) {
        throw Error(Error::Kind::parse, "'" + path + "': " + e.what());
    }
    return barcode_from_json(j);
}

namespace detail {

inline std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace detail

/// Deterministic SVG rendering: one lane per bar copy over a label axis.
inline std::string barcode_to_svg(const Barcode& bc) {
    struct Lane {
        int birth, death;
    };
    std::vector<Lane> lanes;
    for (const Bar& b : bc.bars)
        for (int c = 0; c < b.multiplicity; ++c) lanes.push_back({b.birth, b.death});
    const int lane_h = 14, margin = 46, top = 26;
    int lo_label = bc.labels.empty() ? 0 : bc.labels.front();
    int hi_label = bc.labels.empty() ? 1 : bc.labels.back();
    for (const auto& l : lanes) {
        lo_label = std::min(lo_label, l.birth);
        hi_label = std::max(hi_label, l.death);
    }
    int span = std::max(1, hi_label - lo_label);
    const double plot_w = 640.0;
    auto x_of = [&](double label) { return margin + (label - lo_label) / span * plot_w; };
    const int height = top + lane_h * std::max<int>(1, static_cast<int>(lanes.size())) + 44;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (2 * margin + static_cast<int>(plot_w))
        << "\" height=\"" << height << "\">\n";
    svg << "<text x=\"" << margin << "\" y=\"16\" font-size=\"12\">"
        << (bc.direction == PersistenceModule::Direction::inverse ? "inverse" : "forward")
        << " barcode, H" << bc.dimension << ", F" << bc.field << "</text>\n";
    for (std::size_t i = 0; i < lanes.size(); ++i) {
        double y = top + lane_h * static_cast<double>(i) + lane_h / 2.0;
        double x1 = x_of(lanes[i].birth), x2 = x_of(lanes[i].death);
        if (lanes[i].birth == lanes[i].death) x2 = x1 + 3;  // visible dot for one-index bars
        svg << "<line x1=\"" << detail::fmt_g(x1) << "\" y1=\"" << detail::fmt_g(y) << "\" x2=\""
            << detail::fmt_g(x2) << "\" y2=\"" << detail::fmt_g(y)
            << "\" stroke=\"#13519c\" stroke-width=\"4\"/>\n";
    }
    double axis_y = top + lane_h * std::max<int>(1, static_cast<int>(lanes.size())) + 12;
    svg << "<line x1=\"" << margin << "\" y1=\"" << detail::fmt_g(axis_y) << "\" x2=\""
        << detail::fmt_g(margin + plot_w) << "\" y2=\"" << detail::fmt_g(axis_y)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (std::size_t i = 0; i < bc.labels.size(); ++i) {
        double x = x_of(bc.labels[i]);
        svg << "<line x1=\"" << detail::fmt_g(x) << "\" y1=\"" << detail::fmt_g(axis_y - 3) << "\" x2=\""
            << detail::fmt_g(x) << "\" y2=\"" << detail::fmt_g(axis_y + 3)
            << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << detail::fmt_g(x - 4) << "\" y=\"" << detail::fmt_g(axis_y + 16)
            << "\" font-size=\"10\">" << bc.labels[i] << "</text>\n";
        svg << "<text x=\"" << detail::fmt_g(x - 12) << "\" y=\"" << detail::fmt_g(axis_y + 28)
            << "\" font-size=\"8\">" << detail::fmt_g(bc.label_values[i]) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Error::Kind::argument, "cannot write '" + path + "'");
    out << content;
}

inline json fas_report_json(const FasSequence& fas) {
    json levels = json::array();
    for (const auto& lv : fas.levels) {
        levels.push_back({{"level", lv.index},
                          {"epsilon", lv.epsilon},
                          {"gamma", lv.gamma},
                          {"gamma_used", lv.gamma_used},
                          {"size", lv.approx.size()},
                          {"adjusted_bound", adjusted_bound(lv.epsilon, lv.gamma_used)},
                          {"eps_upper", lv.eps_upper()},
                          {"eps_lower", lv.eps_lower()}});
    }
    json j{{"points", fas.space.size()},
           {"diameter", fas.space.diameter()},
           {"min_positive_distance", fas.space.min_positive_distance()},
           {"levels", levels}};
    if (fas.stabilized_at)
        j["stabilized_at"] = *fas.stabilized_at;
    else
        j["stabilized_at"] = nullptr;
    return j;
}

}  // namespace invpers

#endif
