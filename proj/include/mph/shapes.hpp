#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mph/complex.hpp"
#include "mph/error.hpp"

namespace mph::shapes {

using Point3 = std::array<double, 3>;

enum class Kind { cube_boundary, sphere, ellipse, torus };

inline std::string_view to_string(Kind k) {
    switch (k) {
    case Kind::cube_boundary: return "cube_boundary";
    case Kind::sphere: return "sphere";
    case Kind::ellipse: return "ellipse";
    case Kind::torus: return "torus";
    }
    return "?";
}

inline Kind parse_kind(std::string_view s) {
    if (s == "cube_boundary" || s == "cube") return Kind::cube_boundary;
    if (s == "sphere") return Kind::sphere;
    if (s == "ellipse") return Kind::ellipse;
    if (s == "torus") return Kind::torus;
    throw ValidationError("unknown shape kind '" + std::string(s) + "'");
}

/// Resolution meaning per kind:
///   cube_boundary  k x k grid per face (k >= 1)
///   sphere         8r longitudes by 4r latitude bands (r >= 1)
///   ellipse        vertex count (>= 8)
///   torus          major segments (multiple of 4, >= 8); minor segments default to half
struct ShapeSpec {
    Kind kind = Kind::sphere;
    int resolution = 0;       // 0 selects the kind's default
    int minor_resolution = 0; // torus only; 0 selects resolution / 2
    double major_radius = 2.5;
    double minor_radius = 0.5;

    static int default_resolution(Kind k) {
        switch (k) {
        case Kind::cube_boundary: return 16;
        case Kind::sphere: return 4;
        case Kind::ellipse: return 128;
        case Kind::torus: return 48;
        }
        return 0;
    }
};

struct Shape {
    SimplicialComplex complex;
    std::vector<Point3> coords;
};

namespace detail {

/// (cos, sin) of 2*pi*k/count. When count is a multiple of 4 the values are built from
/// the first octant by exact swaps and sign flips, so symmetric points get bitwise
/// symmetric coordinates.
inline std::vector<std::pair<double, double>> unit_circle(int count) {
    std::vector<std::pair<double, double>> out(static_cast<std::size_t>(count));
    if (count % 4 != 0) {
        for (int k = 0; k < count; ++k) {
            const double a = 2.0 * std::numbers::pi * k / count;
            out[k] = {std::cos(a), std::sin(a)};
        }
        return out;
    }
    const int q = count / 4;
    auto first_quadrant = [q](int k) -> std::pair<double, double> {
        if (2 * k == q) return {std::sqrt(0.5), std::sqrt(0.5)};
        if (2 * k > q) {
            const double a = std::numbers::pi / 2.0 * (q - k) / q;
            return {std::sin(a), std::cos(a)};
        }
        const double a = std::numbers::pi / 2.0 * k / q;
        return {std::cos(a), std::sin(a)};
    };
    for (int k = 0; k < count; ++k) {
        auto [c, s] = first_quadrant(k % q);
        for (int turn = 0; turn < k / q; ++turn) {
            const double c2 = -s;
            s = c;
            c = c2;
        }
        out[k] = {c + 0.0, s + 0.0}; // normalizes -0.0
    }
    return out;
}

inline void add_quad(std::vector<Simplex>& tris, Vertex a, Vertex b, Vertex c, Vertex d, bool main_diagonal) {
    // quad a-b-c-d in cyclic order; main diagonal joins a and c
    if (main_diagonal) {
        tris.push_back({a, b, c});
        tris.push_back({a, c, d});
    } else {
        tris.push_back({a, b, d});
        tris.push_back({b, c, d});
    }
}

inline Shape cube_boundary(int k) {
    Shape out;
    std::map<std::array<int, 3>, Vertex> index;
    auto vertex = [&](std::array<int, 3> g) {
        auto [it, fresh] = index.try_emplace(g, static_cast<Vertex>(out.coords.size()));
        if (fresh)
            out.coords.push_back({static_cast<double>(2 * g[0] - k) / k, static_cast<double>(2 * g[1] - k) / k,
                                  static_cast<double>(2 * g[2] - k) / k});
        return it->second;
    };
    std::vector<Simplex> tris;
    for (int axis = 0; axis < 3; ++axis) {
        const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
        for (int side : {0, k}) {
            for (int p = 0; p < k; ++p)
                for (int q = 0; q < k; ++q) {
                    auto at = [&](int dp, int dq) {
                        std::array<int, 3> g{};
                        g[axis] = side;
                        g[a1] = p + dp;
                        g[a2] = q + dq;
                        return vertex(g);
                    };
                    // diagonal direction mirrors across the face's center lines
                    const int sp = 2 * p + 1 - k, sq = 2 * q + 1 - k;
                    add_quad(tris, at(0, 0), at(1, 0), at(1, 1), at(0, 1), sp * sq >= 0);
                }
        }
    }
    out.complex = SimplicialComplex::from_simplices(out.coords.size(), tris);
    return out;
}

inline Shape sphere(int r) {
    const int slices = 8 * r, stacks = 4 * r;
    const auto lon = unit_circle(slices);
    const auto half = unit_circle(2 * stacks); // angle pi*i/stacks
    Shape out;
    out.coords.push_back({0.0, 0.0, -1.0});
    for (int i = 1; i < stacks; ++i) {
        // latitude pi*i/stacks - pi/2
        const double cos_lat = half[i].second, sin_lat = -half[i].first + 0.0;
        for (int k = 0; k < slices; ++k) out.coords.push_back({cos_lat * lon[k].first + 0.0, cos_lat * lon[k].second + 0.0, sin_lat});
    }
    out.coords.push_back({0.0, 0.0, 1.0});
    const Vertex south = 0, north = static_cast<Vertex>(out.coords.size() - 1);
    auto ring = [&](int i, int k) { return static_cast<Vertex>(1 + (i - 1) * slices + ((k % slices) + slices) % slices); };

    std::vector<Simplex> tris;
    for (int k = 0; k < slices; ++k) {
        tris.push_back({south, ring(1, k), ring(1, k + 1)});
        tris.push_back({north, ring(stacks - 1, k), ring(stacks - 1, k + 1)});
    }
    for (int i = 1; i + 1 < stacks; ++i)
        for (int k = 0; k < slices; ++k) {
            const int quadrant = k / (slices / 4);
            const int hemisphere = (2 * i + 1 < stacks) ? 0 : 1;
            add_quad(tris, ring(i, k), ring(i, k + 1), ring(i + 1, k + 1), ring(i + 1, k), (quadrant + hemisphere) % 2 == 0);
        }
    out.complex = SimplicialComplex::from_simplices(out.coords.size(), tris);
    return out;
}

inline Shape ellipse(int m) {
    const auto circ = unit_circle(m);
    Shape out;
    std::vector<Simplex> edges;
    for (int k = 0; k < m; ++k) {
        out.coords.push_back({circ[k].first, circ[k].second, circ[k].second});
        edges.push_back({static_cast<Vertex>(k), static_cast<Vertex>((k + 1) % m)});
    }
    out.complex = SimplicialComplex::from_simplices(out.coords.size(), edges);
    return out;
}

inline Shape torus(int major, int minor, double R, double r) {
    const auto big = unit_circle(major);
    const auto small = unit_circle(minor);
    Shape out;
    for (int a = 0; a < major; ++a)
        for (int b = 0; b < minor; ++b) {
            const double rho = R + r * small[b].first;
            out.coords.push_back({r * small[b].second + 0.0, rho * big[a].first + 0.0, rho * big[a].second + 0.0});
        }
    auto at = [&](int a, int b) { return static_cast<Vertex>((a % major) * minor + (b % minor)); };
    std::vector<Simplex> tris;
    for (int a = 0; a < major; ++a)
        for (int b = 0; b < minor; ++b) add_quad(tris, at(a, b), at(a + 1, b), at(a + 1, b + 1), at(a, b + 1), true);
    out.complex = SimplicialComplex::from_simplices(out.coords.size(), tris);
    return out;
}

} // namespace detail

/// Builds the mesh for `spec`: a closed triangulated surface (cube boundary, sphere,
/// torus) or a closed polygon (ellipse u^2 + v^2 = 1, v = w).
///
/// The torus revolves around the x axis with its tube centered on a circle of radius
/// major_radius in the yz plane; defaults give inner radius 2 and outer radius 3.
inline Shape generate(const ShapeSpec& spec) {
    if (spec.resolution < 0 || spec.minor_resolution < 0) throw ValidationError("resolution must be non-negative");
    const int res = spec.resolution > 0 ? spec.resolution : ShapeSpec::default_resolution(spec.kind);
    switch (spec.kind) {
    case Kind::cube_boundary:
        if (res < 1) throw ValidationError("cube resolution must be >= 1");
        return detail::cube_boundary(res);
    case Kind::sphere:
        if (res < 1) throw ValidationError("sphere resolution must be >= 1 (8 longitudes)");
        return detail::sphere(res);
    case Kind::ellipse:
        if (res < 8) throw ValidationError("ellipse resolution must be >= 8");
        return detail::ellipse(res);
    case Kind::torus: {
        const int minor = spec.minor_resolution > 0 ? spec.minor_resolution : res / 2;
        if (res < 8 || minor < 8) throw ValidationError("torus grid must be at least 8 x 8");
        if (res % 4 != 0 || minor % 2 != 0)
            throw ValidationError("torus grid needs a major count divisible by 4 and an even minor count");
        if (!(spec.minor_radius > 0.0) || !(spec.major_radius > spec.minor_radius))
            throw ValidationError("torus radii need 0 < minor < major");
        return detail::torus(res, minor, spec.major_radius, spec.minor_radius);
    }
    }
    throw ValidationError("unknown shape kind");
}

// ---------------------------------------------------------------------------
// Measuring functions
// ---------------------------------------------------------------------------

enum class Measuring { abs_uv, z_negz, ellipse_phi, ellipse_psi };

inline Measuring parse_measuring(std::string_view s) {
    if (s == "abs_uv") return Measuring::abs_uv;
    if (s == "z_negz") return Measuring::z_negz;
    if (s == "ellipse_phi") return Measuring::ellipse_phi;
    if (s == "ellipse_psi") return Measuring::ellipse_psi;
    throw ValidationError("unknown measuring function '" + std::string(s) + "'");
}

/// abs_uv: (|u|, |v|); z_negz: (z, -z); ellipse_phi: (u, w); ellipse_psi: (v, w).
inline MeasuringFunction measuring(Measuring kind, const std::vector<Point3>& coords) {
    std::vector<double> vals;
    vals.reserve(coords.size() * 2);
    for (const auto& [x, y, z] : coords) {
        switch (kind) {
        case Measuring::abs_uv: vals.insert(vals.end(), {std::abs(x), std::abs(y)}); break;
        case Measuring::z_negz: vals.insert(vals.end(), {z, -z + 0.0}); break;
        case Measuring::ellipse_phi: vals.insert(vals.end(), {x, z}); break;
        case Measuring::ellipse_psi: vals.insert(vals.end(), {y, z}); break;
        }
    }
    return MeasuringFunction(2, std::move(vals));
}

/// Custom components, comma separated, each one of x, y, z optionally wrapped as |x|
/// or negated as -x. Example: "x,-z,|y|".
inline MeasuringFunction measuring(std::string_view components, const std::vector<Point3>& coords) {
    struct Term {
        int axis;
        bool absolute;
        bool negate;
    };
    std::vector<Term> terms;
    std::size_t start = 0;
    while (start <= components.size()) {
        std::size_t end = components.find(',', start);
        if (end == std::string_view::npos) end = components.size();
        std::string_view tok = components.substr(start, end - start);
        Term t{-1, false, false};
        if (tok.size() == 3 && tok.front() == '|' && tok.back() == '|') {
            t.absolute = true;
            tok = tok.substr(1, 1);
        } else if (tok.size() == 2 && tok.front() == '-') {
            t.negate = true;
            tok = tok.substr(1);
        }
        if (tok == "x" || tok == "u") t.axis = 0;
        else if (tok == "y" || tok == "v") t.axis = 1;
        else if (tok == "z" || tok == "w") t.axis = 2;
        if (t.axis < 0) throw ValidationError("unknown measuring component '" + std::string(components.substr(start, end - start)) + "'");
        terms.push_back(t);
        start = end + 1;
    }
    std::vector<double> vals;
    vals.reserve(coords.size() * terms.size());
    for (const auto& c : coords)
        for (const auto& t : terms) {
            double x = c[t.axis];
            if (t.absolute) x = std::abs(x);
            if (t.negate) x = -x + 0.0;
            vals.push_back(x);
        }
    return MeasuringFunction(terms.size(), std::move(vals));
}

} // namespace mph::shapes
