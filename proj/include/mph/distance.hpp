#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "mph/complex.hpp"
#include "mph/error.hpp"
#include "mph/foliation.hpp"
#include "mph/matching.hpp"
#include "mph/persistence.hpp"

namespace mph {

struct Cornerpoint {
    double birth;
    double death; // may be +inf

    Cornerpoint(double b, double d) : birth(b), death(d) {
        if (!(b < d)) throw ValidationError("cornerpoint needs birth < death");
    }
};

/// Cornerpoint metric: min{ max{|a-c|, |b-d|}, max{(b-a)/2, (d-c)/2} }.
/// Two essential points are |a-c| apart; an essential and a finite point are infinitely far.
inline double delta(const Cornerpoint& p, const Cornerpoint& q) {
    const bool pe = std::isinf(p.death), qe = std::isinf(q.death);
    if (pe && qe) return std::abs(p.birth - q.birth);
    if (pe || qe) return kInfinity;
    const double direct = std::max(std::abs(p.birth - q.birth), std::abs(p.death - q.death));
    const double via_diagonal = std::max((p.death - p.birth) / 2.0, (q.death - q.birth) / 2.0);
    return std::min(direct, via_diagonal);
}

namespace detail {

inline std::vector<Cornerpoint> expand(const PersistenceDiagram& d, bool essential) {
    std::vector<Cornerpoint> out;
    for (const auto& p : d.points())
        if (p.essential() == essential)
            for (std::size_t m = 0; m < p.multiplicity; ++m) out.emplace_back(p.birth, p.death);
    return out;
}

/// Is there a diagonal-augmented perfect matching with every cost <= r?
/// Left side: P, then diagonal copies of Q. Right side: Q, then diagonal copies of P.
inline bool matching_feasible(const std::vector<Cornerpoint>& P, const std::vector<Cornerpoint>& Q, double r) {
    const std::size_t m = P.size(), k = Q.size();
    BipartiteMatcher g(m + k, k + m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < k; ++b)
            if (delta(P[a], Q[b]) <= r) g.add_edge(a, b);
        if ((P[a].death - P[a].birth) / 2.0 <= r) g.add_edge(a, k + a);
    }
    for (std::size_t b = 0; b < k; ++b) {
        if ((Q[b].death - Q[b].birth) / 2.0 <= r) g.add_edge(m + b, b);
        for (std::size_t a = 0; a < m; ++a) g.add_edge(m + b, k + a);
    }
    return g.max_matching() == m + k;
}

} // namespace detail

/// Exact matching (bottleneck) distance between two diagrams of the same degree.
/// Essential points pair among themselves (sorted births are optimal on a line); a
/// different number of essential points gives +inf. Finite points use a binary search
/// over the candidate costs with a bipartite feasibility test.
inline double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    if (a.degree() != b.degree())
        throw ValidationError("bottleneck: degree mismatch (" + std::to_string(a.degree()) + " vs " +
                              std::to_string(b.degree()) + ")");
    const auto ea = detail::expand(a, true), eb = detail::expand(b, true);
    if (ea.size() != eb.size()) return kInfinity;
    double essential_cost = 0.0;
    for (std::size_t i = 0; i < ea.size(); ++i) essential_cost = std::max(essential_cost, std::abs(ea[i].birth - eb[i].birth));

    const auto P = detail::expand(a, false), Q = detail::expand(b, false);
    std::vector<double> candidates{0.0};
    candidates.reserve(P.size() * Q.size() + P.size() + Q.size() + 1);
    for (const auto& p : P) {
        candidates.push_back((p.death - p.birth) / 2.0);
        for (const auto& q : Q) candidates.push_back(delta(p, q));
    }
    for (const auto& q : Q) candidates.push_back((q.death - q.birth) / 2.0);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    // matching everything to the diagonal is always feasible at the largest candidate
    std::size_t lo = 0, hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (detail::matching_feasible(P, Q, candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return std::max(essential_cost, candidates[lo]);
}

// ---------------------------------------------------------------------------
// Multidimensional matching distance (sampled)
// ---------------------------------------------------------------------------

struct DistanceSample {
    AdmissiblePair pair;
    double distance; // slice matching distance d
    double weight;   // min_j l_j
    double weighted; // weight * d
};

/// Sampled slice distances; lower_bound = max weighted value, a lower bound for the
/// multidimensional matching distance.
struct DistanceEstimate {
    int degree = 0;
    std::vector<DistanceSample> samples;
    double lower_bound = 0.0;
};

struct DistanceOptions {
    std::uint32_t prime = 2;
    std::size_t jobs = 1;
};

namespace detail {

/// Runs body(k) for k in [0, count) on up to `jobs` threads; rethrows the first failure.
template <class Body>
void parallel_for(std::size_t count, std::size_t jobs, Body&& body) {
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    if (jobs == 1) {
        for (std::size_t k = 0; k < count; ++k) body(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < jobs; ++w)
        workers.emplace_back([&] {
            for (std::size_t k; (k = next.fetch_add(1)) < count;) {
                try {
                    body(k);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    workers.clear();
    if (failure) std::rethrow_exception(failure);
}

} // namespace detail

/// Slice distances for every degree in [min_degree, max_degree], computing each
/// slice's diagrams once. Returns one estimate per degree.
inline std::vector<DistanceEstimate> multidim_distance_degrees(const SimplicialComplex& KX, const MeasuringFunction& fX,
                                                               const SimplicialComplex& KY, const MeasuringFunction& fY,
                                                               int min_degree, int max_degree,
                                                               std::span<const AdmissiblePair> grid,
                                                               const DistanceOptions& opts = {}) {
    if (fX.dimension() != fY.dimension())
        throw ValidationError("measuring functions have different dimensions (" + std::to_string(fX.dimension()) + " vs " +
                              std::to_string(fY.dimension()) + ")");
    if (grid.empty()) throw ValidationError("empty slice grid");
    if (min_degree < 0 || max_degree < min_degree) throw ValidationError("invalid degree range");
    for (const auto& pair : grid)
        if (pair.dimension() != fX.dimension()) throw ValidationError("grid pair dimension differs from function dimension");

    const std::size_t degrees = static_cast<std::size_t>(max_degree - min_degree + 1);
    std::vector<std::vector<double>> dist(grid.size(), std::vector<double>(degrees));
    const int cap_x = std::min(max_degree, KX.dimension()), cap_y = std::min(max_degree, KY.dimension());

    detail::parallel_for(grid.size(), opts.jobs, [&](std::size_t k) {
        std::vector<PersistenceDiagram> dx, dy;
        if (cap_x >= 0) dx = diagram(KX, reduce(fX, grid[k]), cap_x, opts.prime);
        if (cap_y >= 0) dy = diagram(KY, reduce(fY, grid[k]), cap_y, opts.prime);
        for (int i = min_degree; i <= max_degree; ++i)
            dist[k][i - min_degree] = bottleneck(diagram_in_degree(dx, i), diagram_in_degree(dy, i));
    });

    std::vector<DistanceEstimate> out(degrees);
    for (std::size_t di = 0; di < degrees; ++di) {
        out[di].degree = min_degree + static_cast<int>(di);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double w = grid[k].weight();
            const double d = dist[k][di];
            out[di].samples.push_back({grid[k], d, w, w * d});
            out[di].lower_bound = std::max(out[di].lower_bound, w * d);
        }
    }
    return out;
}

inline DistanceEstimate multidim_distance(const SimplicialComplex& KX, const MeasuringFunction& fX,
                                          const SimplicialComplex& KY, const MeasuringFunction& fY, int degree,
                                          std::span<const AdmissiblePair> grid, const DistanceOptions& opts = {}) {
    return multidim_distance_degrees(KX, fX, KY, fY, degree, degree, grid, opts).front();
}

inline DistanceEstimate multidim_distance(const SimplicialComplex& KX, const MeasuringFunction& fX,
                                          const SimplicialComplex& KY, const MeasuringFunction& fY, int degree,
                                          const GridSpec& spec, const DistanceOptions& opts = {}) {
    if (spec.dimension != fX.dimension()) throw ValidationError("grid dimension differs from function dimension");
    const auto grid = slice_grid(spec);
    return multidim_distance(KX, fX, KY, fY, degree, grid, opts);
}

/// Max of the lower bounds over a range of degrees.
inline double max_over_degrees(std::span<const DistanceEstimate> estimates) {
    double m = 0.0;
    for (const auto& e : estimates) m = std::max(m, e.lower_bound);
    return m;
}

/// Half the largest per-component range of the two functions.
inline double default_offset_radius(const MeasuringFunction& fX, const MeasuringFunction& fY) {
    double widest = 0.0;
    for (const MeasuringFunction* f : {&fX, &fY}) {
        auto [lo, hi] = f->bounds();
        for (std::size_t j = 0; j < lo.size(); ++j) widest = std::max(widest, hi[j] - lo[j]);
    }
    return widest / 2.0;
}

/// Matching distance between the degree-i diagrams of the j-th components (0-based).
inline double component_distance(const SimplicialComplex& KX, const MeasuringFunction& fX, const SimplicialComplex& KY,
                                  const MeasuringFunction& fY, int i, std::size_t j, std::uint32_t prime = 2) {
    if (j >= fX.dimension() || j >= fY.dimension())
        throw ValidationError("component index " + std::to_string(j) + " out of range");
    if (i < 0) throw ValidationError("degree must be non-negative");
    auto one_side = [&](const SimplicialComplex& K, const MeasuringFunction& f) {
        if (K.dimension() < i) return PersistenceDiagram(i, {});
        const auto ds = diagram(K, ScalarFiltration::from_function(f.component(j)), i, prime);
        return diagram_in_degree(ds, i);
    };
    return bottleneck(one_side(KX, fX), one_side(KY, fY));
}

struct StabilityReport {
    double epsilon;  // max_P ||f1(P) - f2(P)||_inf
    double bound;    // epsilon / min_j l_j
    double distance; // slice matching distance
    bool ok;
};

/// Checks d <= epsilon / min_j l_j for two functions on the same complex.
inline StabilityReport stability_check(const SimplicialComplex& K, const MeasuringFunction& f1,
                                       const MeasuringFunction& f2, const AdmissiblePair& pair, int i,
                                       std::uint32_t prime = 2) {
    if (f1.dimension() != f2.dimension() || f1.vertex_count() != f2.vertex_count() || f1.vertex_count() < K.vertex_count())
        throw ValidationError("stability check needs two functions on the same complex");
    double eps = 0.0;
    for (std::size_t k = 0; k < f1.values().size(); ++k) eps = std::max(eps, std::abs(f1.values()[k] - f2.values()[k]));
    const double bound = eps / pair.weight();
    double d = 0.0;
    if (K.dimension() >= i) {
        const auto d1 = diagram(K, reduce(f1, pair), i, prime);
        const auto d2 = diagram(K, reduce(f2, pair), i, prime);
        d = bottleneck(diagram_in_degree(d1, i), diagram_in_degree(d2, i));
    }
    return {eps, bound, d, d <= bound + 1e-9};
}

} // namespace mph
