#pragma once

// JSON and CSV views of the library's value types. Requires nlohmann/json.

#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mph/complex.hpp"
#include "mph/distance.hpp"
#include "mph/error.hpp"
#include "mph/foliation.hpp"
#include "mph/persistence.hpp"

namespace mph::io {

using nlohmann::json;

/// Rounds to `digits` significant digits so printed output stays stable.
inline double round_sig(double x, int digits = 12) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return std::stod(buf);
}

inline std::string format_number(double x, int digits = 12) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

inline json number_or_inf(double x) {
    if (std::isinf(x)) return x > 0 ? json("inf") : json("-inf");
    return round_sig(x);
}

inline double read_number_or_inf(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return kInfinity;
        throw ParseError("expected a number or \"inf\", got \"" + s + "\"", 0);
    }
    if (!j.is_number()) throw ParseError("expected a number", 0);
    return j.get<double>();
}

inline json rounded_vector(std::span<const double> xs) {
    json out = json::array();
    for (double x : xs) out.push_back(round_sig(x));
    return out;
}

// --- complex ---------------------------------------------------------------

inline json complex_to_json(const SimplicialComplex& K, const MeasuringFunction& f) {
    json values = json::array();
    for (std::size_t v = 0; v < f.vertex_count(); ++v) {
        auto row = f.at(static_cast<Vertex>(v));
        values.push_back(std::vector<double>(row.begin(), row.end()));
    }
    json simplices = json::array();
    for (const auto& s : K.maximal_simplices())
        if (s.size() > 1) simplices.push_back(s);
    return {{"version", 1}, {"n", f.dimension()}, {"vertex_values", values}, {"simplices", simplices}};
}

inline ComplexWithFunction complex_from_json(const json& j) {
    try {
        if (j.at("version").get<int>() != 1) throw ParseError("unsupported complex JSON version", 0);
        const auto n = j.at("n").get<std::size_t>();
        std::vector<double> flat;
        const auto& rows = j.at("vertex_values");
        for (const auto& row : rows) {
            if (row.size() != n) throw ParseError("dimension mismatch in vertex_values", 0);
            for (const auto& x : row) flat.push_back(x.get<double>());
        }
        std::vector<Simplex> simplices;
        for (const auto& s : j.at("simplices")) simplices.push_back(s.get<Simplex>());
        return {SimplicialComplex::from_simplices(rows.size(), simplices), MeasuringFunction(n, std::move(flat))};
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed complex JSON: ") + e.what(), 0);
    }
}

// --- admissible pairs ------------------------------------------------------

inline json pair_to_json(const AdmissiblePair& p) { return {{"l", rounded_vector(p.l())}, {"b", rounded_vector(p.b())}}; }

/// Accepts loose vectors and normalizes them.
inline AdmissiblePair pair_from_json(const json& j) {
    try {
        return make_admissible(j.at("l").get<std::vector<double>>(), j.at("b").get<std::vector<double>>());
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed admissible pair JSON: ") + e.what(), 0);
    }
}

inline json slice_to_json(const SlicePoint& sp) {
    return {{"l", rounded_vector(sp.pair.l())}, {"b", rounded_vector(sp.pair.b())}, {"s", round_sig(sp.s)}, {"t", round_sig(sp.t)}};
}

// --- diagrams --------------------------------------------------------------

inline json diagram_to_json(const PersistenceDiagram& d) {
    json points = json::array();
    for (const auto& p : d.points())
        points.push_back({{"birth", number_or_inf(p.birth)}, {"death", number_or_inf(p.death)}, {"mult", p.multiplicity}});
    return {{"degree", d.degree()}, {"points", points}};
}

inline PersistenceDiagram diagram_from_json(const json& j) {
    try {
        std::vector<DiagramPoint> pts;
        for (const auto& p : j.at("points"))
            pts.push_back({read_number_or_inf(p.at("birth")), read_number_or_inf(p.at("death")),
                           p.contains("mult") ? p.at("mult").get<std::size_t>() : 1});
        return PersistenceDiagram(j.at("degree").get<int>(), std::move(pts));
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed diagram JSON: ") + e.what(), 0);
    }
}

/// Columns degree,birth,death,mult with a header row.
inline std::string diagrams_to_csv(std::span<const PersistenceDiagram> diagrams) {
    std::string out = "degree,birth,death,mult\n";
    for (const auto& d : diagrams)
        for (const auto& p : d.points())
            out += std::to_string(d.degree()) + "," + format_number(p.birth) + "," + format_number(p.death) + "," +
                   std::to_string(p.multiplicity) + "\n";
    return out;
}

// --- critical values -------------------------------------------------------

inline json critical_to_json(std::span<const CriticalValue> values) {
    json out = json::array();
    for (const auto& c : values) out.push_back({{"value", round_sig(c.value)}, {"degrees", c.degrees}});
    return out;
}

// --- distance estimates ----------------------------------------------------

inline json estimate_to_json(const DistanceEstimate& e) {
    json samples = json::array();
    for (const auto& s : e.samples)
        samples.push_back({{"l", rounded_vector(s.pair.l())},
                           {"b", rounded_vector(s.pair.b())},
                           {"d", number_or_inf(s.distance)},
                           {"weight", round_sig(s.weight)},
                           {"weighted", number_or_inf(s.weighted)}});
    return {{"degree", e.degree}, {"samples", samples}, {"lower_bound", number_or_inf(e.lower_bound)}};
}

/// One row per sample: degree,index,l...,b...,d,weight,weighted.
inline std::string estimate_to_csv(const DistanceEstimate& e) {
    const std::size_t n = e.samples.empty() ? 0 : e.samples.front().pair.dimension();
    std::string out = "degree,index";
    for (std::size_t j = 0; j < n; ++j) out += ",l" + std::to_string(j + 1);
    for (std::size_t j = 0; j < n; ++j) out += ",b" + std::to_string(j + 1);
    out += ",d,weight,weighted\n";
    for (std::size_t k = 0; k < e.samples.size(); ++k) {
        const auto& s = e.samples[k];
        out += std::to_string(e.degree) + "," + std::to_string(k);
        for (double x : s.pair.l()) out += "," + format_number(x);
        for (double x : s.pair.b()) out += "," + format_number(x);
        out += "," + format_number(s.distance) + "," + format_number(s.weight) + "," + format_number(s.weighted) + "\n";
    }
    return out;
}

} // namespace mph::io
