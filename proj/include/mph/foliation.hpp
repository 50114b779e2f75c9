#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mph/complex.hpp"
#include "mph/error.hpp"

namespace mph {

inline constexpr double kConstructionTolerance = 1e-12;

/// Leaf parameter of the half-plane foliation: a unit direction l with strictly
/// positive components and an offset b whose components sum to zero.
class AdmissiblePair {
public:
    /// Validates already-normalized vectors.
    static AdmissiblePair checked(std::vector<double> l, std::vector<double> b) {
        if (l.empty() || l.size() != b.size()) throw ValidationError("admissible pair: l and b need equal, positive length");
        double norm2 = 0.0, sum_b = 0.0;
        for (double x : l) {
            if (!(x > 0.0)) throw ValidationError("admissible pair: non-positive direction component");
            norm2 += x * x;
        }
        for (double x : b) {
            if (!std::isfinite(x)) throw ValidationError("admissible pair: non-finite offset");
            sum_b += x;
        }
        if (std::abs(std::sqrt(norm2) - 1.0) > kConstructionTolerance)
            throw ValidationError("admissible pair: direction is not a unit vector");
        if (std::abs(sum_b) > kConstructionTolerance) throw ValidationError("admissible pair: offsets do not sum to zero");
        AdmissiblePair p;
        p.l_ = std::move(l);
        p.b_ = std::move(b);
        return p;
    }

    const std::vector<double>& l() const noexcept { return l_; }
    const std::vector<double>& b() const noexcept { return b_; }
    std::size_t dimension() const noexcept { return l_.size(); }

    /// min_j l_j, the weight applied to slice distances.
    double weight() const noexcept { return *std::min_element(l_.begin(), l_.end()); }

    friend bool operator==(const AdmissiblePair&, const AdmissiblePair&) = default;

private:
    std::vector<double> l_;
    std::vector<double> b_;
};

/// Normalizes l_raw to unit length and projects b_raw onto the sum-zero hyperplane.
inline AdmissiblePair make_admissible(std::span<const double> l_raw, std::span<const double> b_raw) {
    if (l_raw.empty() || l_raw.size() != b_raw.size())
        throw ValidationError("admissible pair: l and b need equal, positive length");
    double norm2 = 0.0;
    for (double x : l_raw) {
        if (!std::isfinite(x)) throw ValidationError("admissible pair: non-finite direction component");
        norm2 += x * x;
    }
    if (norm2 == 0.0) throw ValidationError("admissible pair: zero direction vector");
    for (double x : l_raw)
        if (!(x > 0.0)) throw ValidationError("admissible pair: non-positive direction component");

    const std::size_t n = l_raw.size();
    const double norm = std::sqrt(norm2);
    std::vector<double> l(n), b(n);
    for (std::size_t j = 0; j < n; ++j) l[j] = l_raw[j] / norm;
    const double mean = std::accumulate(b_raw.begin(), b_raw.end(), 0.0) / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) b[j] = b_raw[j] - mean;
    return AdmissiblePair::checked(std::move(l), std::move(b));
}

/// A point (s, t), s < t, on the half-plane of `pair`.
struct SlicePoint {
    AdmissiblePair pair;
    double s;
    double t;
};

/// The unique leaf through (u, v), with its parameters s and t.
inline SlicePoint pair_through(const ParameterPoint& p) {
    const auto& u = p.u();
    const auto& v = p.v();
    const std::size_t n = u.size();
    std::vector<double> diff(n);
    for (std::size_t j = 0; j < n; ++j) diff[j] = v[j] - u[j];
    std::vector<double> zero(n, 0.0);
    const std::vector<double> l = make_admissible(diff, zero).l();

    const double sum_l = std::accumulate(l.begin(), l.end(), 0.0);
    const double s = std::accumulate(u.begin(), u.end(), 0.0) / sum_l;
    const double t = std::accumulate(v.begin(), v.end(), 0.0) / sum_l;
    std::vector<double> b(n);
    for (std::size_t j = 0; j < n; ++j) b[j] = u[j] - s * l[j];
    return {make_admissible(l, b), s, t};
}

/// (s*l + b, t*l + b).
inline ParameterPoint plane_point(const SlicePoint& sp) {
    const auto& l = sp.pair.l();
    const auto& b = sp.pair.b();
    std::vector<double> u(l.size()), v(l.size());
    for (std::size_t j = 0; j < l.size(); ++j) {
        u[j] = sp.s * l[j] + b[j];
        v[j] = sp.t * l[j] + b[j];
    }
    return ParameterPoint(std::move(u), std::move(v));
}

/// Max-reduction g(P) = max_j (f_j(P) - b_j) / l_j.
inline ScalarFiltration reduce(const MeasuringFunction& f, const AdmissiblePair& pair) {
    if (f.dimension() != pair.dimension())
        throw ValidationError("reduce: function dimension " + std::to_string(f.dimension()) + " vs pair dimension " +
                              std::to_string(pair.dimension()));
    const auto& l = pair.l();
    const auto& b = pair.b();
    std::vector<double> g(f.vertex_count());
    for (std::size_t v = 0; v < g.size(); ++v) {
        auto row = f.at(static_cast<Vertex>(v));
        double m = (row[0] - b[0]) / l[0];
        for (std::size_t j = 1; j < row.size(); ++j) m = std::max(m, (row[j] - b[j]) / l[j]);
        g[v] = m;
    }
    return ScalarFiltration(std::move(g));
}

/// Sampling of admissible pairs.
struct GridSpec {
    std::size_t dimension = 2;
    std::size_t directions = 9;
    std::size_t offsets = 5;
    double offset_radius = 0.5;
};

namespace detail {

/// `count` Chebyshev points strictly inside (0, 1), increasing.
inline std::vector<double> chebyshev_interior(std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double c = std::cos((2.0 * static_cast<double>(k) + 1.0) * std::numbers::pi / (2.0 * static_cast<double>(count)));
        out[count - 1 - k] = 0.5 * (1.0 + c);
    }
    // odd counts: pin the middle sample to the exact midpoint
    if (count % 2 == 1) out[count / 2] = 0.5;
    return out;
}

/// `count` equally spaced values on [-radius, radius]; the middle one is exactly 0.
inline std::vector<double> symmetric_offsets(std::size_t count, double radius) {
    std::vector<double> out(count, 0.0);
    if (count == 1) return out;
    const double step = 2.0 * radius / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) {
        const double signed_k = static_cast<double>(k) - static_cast<double>(count - 1) / 2.0;
        out[k] = signed_k * step;
    }
    return out;
}

} // namespace detail

/// Grid of admissible pairs used to approximate the sup over all leaves.
///
/// n = 2: l = (cos theta, sin theta) for Chebyshev-interior theta in (0, pi/2), and
/// b = (a, -a) for a equally spaced in [-R, R]. Odd counts contain theta = pi/4 and a = 0.
/// n > 2: directions are the normalized Cartesian products of Chebyshev-interior
/// coordinates; offsets take the first n-1 coordinates from the symmetric grid and
/// close the sum with the last one. n = 1 always yields the single pair ((1), (0)).
/// Pairs are ordered direction-major.
inline std::vector<AdmissiblePair> slice_grid(const GridSpec& spec) {
    if (spec.dimension == 0) throw ValidationError("slice grid: dimension must be positive");
    if (spec.directions == 0) throw ValidationError("slice grid: need at least one direction");
    if (spec.offsets == 0 || spec.offsets % 2 == 0) throw ValidationError("slice grid: offset count must be odd and positive");
    if (!(spec.offset_radius >= 0.0) || !std::isfinite(spec.offset_radius))
        throw ValidationError("slice grid: offset radius must be finite and non-negative");

    const std::size_t n = spec.dimension;
    if (n == 1) return {AdmissiblePair::checked({1.0}, {0.0})};

    const auto cheb = detail::chebyshev_interior(spec.directions);
    const auto offs = detail::symmetric_offsets(spec.offsets, spec.offset_radius);
    std::vector<AdmissiblePair> out;

    if (n == 2) {
        for (double x : cheb) {
            std::vector<double> l;
            if (x == 0.5) {
                l = {std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0};
            } else {
                const double theta = x * std::numbers::pi / 2.0;
                l = {std::cos(theta), std::sin(theta)};
            }
            for (double a : offs) out.push_back(make_admissible(l, std::vector<double>{a, -a}));
        }
        return out;
    }

    // n > 2: odometer over the direction and offset lattices
    std::vector<std::vector<double>> dirs;
    std::vector<std::size_t> idx(n, 0);
    for (;;) {
        std::vector<double> l(n);
        for (std::size_t j = 0; j < n; ++j) l[j] = cheb[idx[j]];
        std::vector<double> zero(n, 0.0);
        l = make_admissible(l, zero).l();
        bool seen = std::any_of(dirs.begin(), dirs.end(), [&](const std::vector<double>& d) {
            for (std::size_t j = 0; j < n; ++j)
                if (std::abs(d[j] - l[j]) > kConstructionTolerance) return false;
            return true;
        });
        if (!seen) dirs.push_back(std::move(l));
        std::size_t j = 0;
        while (j < n && ++idx[j] == cheb.size()) idx[j++] = 0;
        if (j == n) break;
    }
    std::vector<std::vector<double>> offsets;
    std::vector<std::size_t> oidx(n - 1, 0);
    for (;;) {
        std::vector<double> b(n, 0.0);
        double sum = 0.0;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            b[j] = offs[oidx[j]];
            sum += b[j];
        }
        b[n - 1] = -sum;
        offsets.push_back(std::move(b));
        std::size_t j = 0;
        while (j < n - 1 && ++oidx[j] == offs.size()) oidx[j++] = 0;
        if (j == n - 1) break;
    }
    for (const auto& l : dirs)
        for (const auto& b : offsets) out.push_back(make_admissible(l, b));
    return out;
}

} // namespace mph
