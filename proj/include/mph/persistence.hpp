#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mph/complex.hpp"
#include "mph/error.hpp"
#include "mph/foliation.hpp"

namespace mph {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Warnings
// ---------------------------------------------------------------------------

using WarningHandler = std::function<void(std::string_view)>;

namespace detail {
inline WarningHandler& warning_handler() {
    static WarningHandler handler = [](std::string_view msg) { std::clog << "warning: " << msg << '\n'; };
    return handler;
}
} // namespace detail

/// Replaces the sink for non-fatal diagnostics (default: std::clog). Returns the previous one.
inline WarningHandler set_warning_handler(WarningHandler h) {
    return std::exchange(detail::warning_handler(), std::move(h));
}

inline void warn(std::string_view msg) {
    if (detail::warning_handler()) detail::warning_handler()(msg);
}

// ---------------------------------------------------------------------------
// Diagrams
// ---------------------------------------------------------------------------

struct DiagramPoint {
    double birth;
    double death; // +inf for essential classes
    std::size_t multiplicity = 1;

    bool essential() const noexcept { return std::isinf(death); }
    double persistence() const noexcept { return death - birth; }

    friend bool operator==(const DiagramPoint&, const DiagramPoint&) = default;
};

/// Multiset of cornerpoints (birth < death <= inf) for one homology degree.
/// Points are sorted by (birth, death) and coincident points are merged.
class PersistenceDiagram {
public:
    PersistenceDiagram() = default;

    PersistenceDiagram(int degree, std::vector<DiagramPoint> raw) : degree_(degree) {
        if (degree < 0) throw ValidationError("diagram degree must be non-negative");
        for (const auto& p : raw) {
            if (std::isnan(p.birth) || std::isnan(p.death) || std::isinf(p.birth))
                throw ValidationError("diagram point with invalid coordinates");
            if (p.death < p.birth) throw ValidationError("diagram point dies before it is born");
            if (p.multiplicity == 0) throw ValidationError("diagram point with zero multiplicity");
        }
        std::erase_if(raw, [](const DiagramPoint& p) { return p.birth == p.death; });
        std::sort(raw.begin(), raw.end(), [](const DiagramPoint& a, const DiagramPoint& b) {
            return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
        });
        for (const auto& p : raw) {
            if (!points_.empty() && points_.back().birth == p.birth && points_.back().death == p.death)
                points_.back().multiplicity += p.multiplicity;
            else
                points_.push_back(p);
        }
    }

    int degree() const noexcept { return degree_; }
    const std::vector<DiagramPoint>& points() const noexcept { return points_; }
    bool empty() const noexcept { return points_.empty(); }

    /// Number of points counted with multiplicity.
    std::size_t total_multiplicity() const noexcept {
        std::size_t n = 0;
        for (const auto& p : points_) n += p.multiplicity;
        return n;
    }

    std::size_t essential_count() const noexcept {
        std::size_t n = 0;
        for (const auto& p : points_)
            if (p.essential()) n += p.multiplicity;
        return n;
    }

    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;

private:
    int degree_ = 0;
    std::vector<DiagramPoint> points_;
};

/// Diagram of degree `i` from a list indexed by degree; empty if `i` was not computed.
inline PersistenceDiagram diagram_in_degree(std::span<const PersistenceDiagram> diagrams, int i) {
    for (const auto& d : diagrams)
        if (d.degree() == i) return d;
    return PersistenceDiagram(i, {});
}

/// Rank of the persistent module at (s, t): points with birth <= s and death > t.
inline std::size_t rank_at(const PersistenceDiagram& d, double s, double t) {
    if (!(s < t)) throw ValidationError("rank query needs s < t");
    std::size_t r = 0;
    for (const auto& p : d.points())
        if (p.birth <= s && p.death > t) r += p.multiplicity;
    return r;
}

// ---------------------------------------------------------------------------
// Boundary matrix reduction
// ---------------------------------------------------------------------------

inline bool is_prime(std::uint32_t p) {
    if (p < 2) return false;
    for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// Simplices sorted by (value, dimension, lexicographic tuple); values non-decreasing,
/// faces before cofaces.
struct FiltrationOrder {
    std::vector<std::size_t> order;  // position -> simplex index in the complex
    std::vector<double> values;      // position -> filtration value
};

/// Lower-star filtration order restricted to simplices of dimension <= max_dim.
inline FiltrationOrder filtration_order(const SimplicialComplex& K, const ScalarFiltration& g,
                                        int max_dim = std::numeric_limits<int>::max()) {
    if (g.vertex_count() < K.vertex_count()) throw ValidationError("filtration does not cover every vertex");
    const int top = std::min(max_dim, K.dimension());
    const std::size_t end = top < 0 ? 0 : K.dimension_range(top).second;
    std::vector<double> value(end);
    for (std::size_t i = 0; i < end; ++i) value[i] = g.value(K[i]);
    FiltrationOrder f;
    f.order.resize(end);
    std::iota(f.order.begin(), f.order.end(), std::size_t{0});
    // simplex indices already follow (dimension, lex), so ties fall back to the index
    std::sort(f.order.begin(), f.order.end(), [&](std::size_t a, std::size_t b) {
        return value[a] != value[b] ? value[a] < value[b] : a < b;
    });
    f.values.resize(end);
    for (std::size_t k = 0; k < end; ++k) f.values[k] = value[f.order[k]];
    return f;
}

/// Persistence pairing of a filtration: partner[k] is the position paired with
/// position k, or npos if k creates an essential class.
struct FiltrationPairing {
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> partner;
    std::vector<int> dims;
};

namespace detail {

struct Entry {
    std::size_t row;
    std::uint32_t coeff;
};
using Column = std::vector<Entry>;

inline std::uint32_t mod_pow(std::uint64_t base, std::uint32_t exp, std::uint32_t p) {
    std::uint64_t r = 1;
    base %= p;
    while (exp) {
        if (exp & 1) r = r * base % p;
        base = base * base % p;
        exp >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

inline std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t p) { return mod_pow(a, p - 2, p); }

/// target += factor * src (mod p); both sorted by row.
inline void add_scaled(Column& target, const Column& src, std::uint32_t factor, std::uint32_t p, Column& scratch) {
    scratch.clear();
    auto a = target.begin();
    auto b = src.begin();
    while (a != target.end() || b != src.end()) {
        if (b == src.end() || (a != target.end() && a->row < b->row)) {
            scratch.push_back(*a++);
        } else if (a == target.end() || b->row < a->row) {
            scratch.push_back({b->row, static_cast<std::uint32_t>(static_cast<std::uint64_t>(b->coeff) * factor % p)});
            ++b;
        } else {
            const std::uint32_t c = static_cast<std::uint32_t>((a->coeff + static_cast<std::uint64_t>(b->coeff) * factor) % p);
            if (c) scratch.push_back({a->row, c});
            ++a;
            ++b;
        }
    }
    target.swap(scratch);
}

} // namespace detail

/// Reduces the boundary matrix of the simplices listed in `order` (each list prefix
/// must be a subcomplex). Standard column reduction with a pivot table, plus clearing:
/// dimensions are processed top-down and columns known to be positive are skipped.
inline FiltrationPairing reduce_filtration(const SimplicialComplex& K, std::span<const std::size_t> order,
                                           std::uint32_t prime = 2) {
    if (!is_prime(prime)) throw ValidationError("field characteristic " + std::to_string(prime) + " is not prime");
    const std::size_t N = order.size();
    FiltrationPairing out;
    out.partner.assign(N, FiltrationPairing::npos);
    out.dims.resize(N);

    std::vector<std::size_t> position(K.size(), FiltrationPairing::npos);
    int top = -1;
    for (std::size_t k = 0; k < N; ++k) {
        position[order[k]] = k;
        out.dims[k] = simplex_dimension(K[order[k]]);
        top = std::max(top, out.dims[k]);
    }
    std::vector<std::vector<std::size_t>> by_dim(static_cast<std::size_t>(top + 1));
    for (std::size_t k = 0; k < N; ++k) by_dim[out.dims[k]].push_back(k);

    std::vector<char> cleared(N, 0);
    std::vector<std::size_t> pivot_owner(N, FiltrationPairing::npos);
    std::vector<detail::Column> reduced(N);
    detail::Column column, scratch;
    Simplex face;

    for (int d = top; d >= 1; --d) {
        for (std::size_t j : by_dim[d]) {
            if (cleared[j]) continue;
            const Simplex& s = K[order[j]];
            column.clear();
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                face.clear();
                for (std::size_t i = 0; i < s.size(); ++i)
                    if (i != drop) face.push_back(s[i]);
                auto idx = K.index_of(face);
                if (!idx || position[*idx] == FiltrationPairing::npos || position[*idx] >= j)
                    throw ValidationError("filtration order is not face-respecting");
                const std::uint32_t sign = (drop % 2 == 0 || prime == 2) ? 1u : prime - 1;
                column.push_back({position[*idx], sign});
            }
            std::sort(column.begin(), column.end(), [](const auto& a, const auto& b) { return a.row < b.row; });

            while (!column.empty()) {
                const std::size_t pivot = column.back().row;
                const std::size_t owner = pivot_owner[pivot];
                if (owner == FiltrationPairing::npos) break;
                const auto& other = reduced[owner];
                // eliminate the pivot: column -= (c / c') * other
                const std::uint32_t c = column.back().coeff;
                const std::uint32_t inv = detail::mod_inverse(other.back().coeff, prime);
                const std::uint32_t factor =
                    static_cast<std::uint32_t>((prime - static_cast<std::uint64_t>(c) * inv % prime) % prime);
                detail::add_scaled(column, other, factor, prime, scratch);
            }
            if (!column.empty()) {
                const std::size_t pivot = column.back().row;
                pivot_owner[pivot] = j;
                out.partner[pivot] = j;
                out.partner[j] = pivot;
                cleared[pivot] = 1;
                reduced[j] = column;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Diagrams of a lower-star filtration
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<PersistenceDiagram> diagrams_from_pairing(const FiltrationPairing& pairing,
                                                             std::span<const double> values, int max_degree) {
    std::vector<std::vector<DiagramPoint>> raw(static_cast<std::size_t>(max_degree + 1));
    for (std::size_t k = 0; k < pairing.partner.size(); ++k) {
        const int d = pairing.dims[k];
        if (d > max_degree) continue;
        const std::size_t p = pairing.partner[k];
        if (p == FiltrationPairing::npos)
            raw[d].push_back({values[k], kInfinity, 1});
        else if (p > k)
            raw[d].push_back({values[k], values[p], 1});
    }
    std::vector<PersistenceDiagram> out;
    for (int d = 0; d <= max_degree; ++d) out.emplace_back(d, std::move(raw[d]));
    return out;
}

} // namespace detail

/// Persistence diagrams of the lower-star filtration of g, degrees 0..max_degree.
/// A max_degree above the complex dimension is clamped (with a warning); the empty
/// complex yields no diagrams.
inline std::vector<PersistenceDiagram> diagram(const SimplicialComplex& K, const ScalarFiltration& g, int max_degree,
                                               std::uint32_t prime = 2) {
    if (!is_prime(prime)) throw ValidationError("field characteristic " + std::to_string(prime) + " is not prime");
    if (max_degree < 0) throw ValidationError("max degree must be non-negative");
    if (max_degree > K.dimension()) {
        if (!K.empty())
            warn("max degree " + std::to_string(max_degree) + " exceeds complex dimension " +
                 std::to_string(K.dimension()) + "; clamped");
        max_degree = K.dimension();
    }
    if (max_degree < 0) return {};
    const auto filt = filtration_order(K, g, max_degree + 1);
    const auto pairing = reduce_filtration(K, filt.order, prime);
    return detail::diagrams_from_pairing(pairing, filt.values, max_degree);
}

/// Rank of H_i(X<f <= u>) -> H_i(X<f <= v>), computed on the slice through (u, v).
inline std::size_t multidim_rank(const SimplicialComplex& K, const MeasuringFunction& f, const ParameterPoint& p, int i,
                                 std::uint32_t prime = 2) {
    if (p.dimension() != f.dimension()) throw ValidationError("parameter point and function dimensions differ");
    if (i < 0) throw ValidationError("degree must be non-negative");
    if (i > K.dimension()) return 0;
    const SlicePoint sp = pair_through(p);
    const ScalarFiltration g = reduce(f, sp.pair);
    const auto filt = filtration_order(K, g, i + 1);
    const auto pairing = reduce_filtration(K, filt.order, prime);
    const auto diagrams = detail::diagrams_from_pairing(pairing, filt.values, i);
    return rank_at(diagrams[i], sp.s, sp.t);
}

/// Same rank computed directly from the two sublevel complexes A = X<f <= u> and
/// B = X<f <= v>: one reduction over the two-stage filtration A, then B \ A, counting
/// degree-i classes created in A that are never killed.
inline std::size_t rank_oracle(const SimplicialComplex& K, const MeasuringFunction& f, const ParameterPoint& p, int i,
                               std::uint32_t prime = 2) {
    if (p.dimension() != f.dimension()) throw ValidationError("parameter point and function dimensions differ");
    if (i < 0) throw ValidationError("degree must be non-negative");
    const SimplicialComplex A = sublevel_complex(K, f, p.u());
    const SimplicialComplex B = sublevel_complex(K, f, p.v());
    if (!A.is_subcomplex_of(B)) throw Error("sublevel complexes are not nested");

    std::vector<std::size_t> order;
    std::vector<char> in_a(B.size(), 0);
    for (std::size_t k = 0; k < A.size(); ++k) {
        if (simplex_dimension(A[k]) > i + 1) break;
        const std::size_t idx = *B.index_of(A[k]);
        in_a[idx] = 1;
        order.push_back(idx);
    }
    const std::size_t stage_a = order.size();
    for (std::size_t idx = 0; idx < B.size(); ++idx) {
        if (simplex_dimension(B[idx]) > i + 1) break;
        if (!in_a[idx]) order.push_back(idx);
    }
    const auto pairing = reduce_filtration(B, order, prime);
    std::size_t rank = 0;
    for (std::size_t k = 0; k < stage_a; ++k)
        if (pairing.dims[k] == i && pairing.partner[k] == FiltrationPairing::npos) ++rank;
    return rank;
}

/// A homological critical value with the degrees in which it occurs.
struct CriticalValue {
    double value;
    std::vector<int> degrees;
};

/// All finite births and deaths, merged when closer than `tolerance`, sorted ascending.
inline std::vector<CriticalValue> homological_critical_values(std::span<const PersistenceDiagram> diagrams,
                                                              double tolerance = 1e-9) {
    std::vector<std::pair<double, int>> events;
    for (const auto& d : diagrams)
        for (const auto& p : d.points()) {
            events.emplace_back(p.birth, d.degree());
            if (!p.essential()) events.emplace_back(p.death, d.degree());
        }
    std::sort(events.begin(), events.end());
    std::vector<CriticalValue> out;
    for (const auto& [value, degree] : events) {
        if (out.empty() || value - out.back().value > tolerance) out.push_back({value, {}});
        auto& degs = out.back().degrees;
        if (std::find(degs.begin(), degs.end(), degree) == degs.end()) degs.push_back(degree);
    }
    for (auto& c : out) std::sort(c.degrees.begin(), c.degrees.end());
    return out;
}

/// Diagrams of `primary` on the subcomplex where `auxiliary` <= threshold.
inline std::vector<PersistenceDiagram> restricted_diagram(const SimplicialComplex& K, const ScalarFiltration& primary,
                                                          const ScalarFiltration& auxiliary, double threshold,
                                                          int max_degree, std::uint32_t prime = 2) {
    const SimplicialComplex sub = scalar_sublevel(K, auxiliary, threshold);
    return diagram(sub, primary, std::min(max_degree, std::max(sub.dimension(), 0)), prime);
}

} // namespace mph
