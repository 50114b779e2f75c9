#pragma once

// Test-only reference computations. Nothing here calls the boundary-reduction engine.

#include <cstddef>
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "mph/complex.hpp"

namespace mph::oracle {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<int> rank_;
};

/// Connected components of a (sub)complex, counting only vertices present as 0-simplices.
inline std::size_t component_count(const SimplicialComplex& K) {
    UnionFind uf(K.vertex_count());
    for (const auto& s : K.simplices())
        if (s.size() == 2) uf.unite(s[0], s[1]);
    std::set<std::size_t> roots;
    for (const auto& s : K.simplices())
        if (s.size() == 1) roots.insert(uf.find(s[0]));
    return roots.size();
}

/// Rank of H_0(A) -> H_0(B) for A a subcomplex of B: distinct B-components hit by A.
inline std::size_t h0_map_rank(const SimplicialComplex& A, const SimplicialComplex& B) {
    UnionFind uf(B.vertex_count());
    for (const auto& s : B.simplices())
        if (s.size() == 2) uf.unite(s[0], s[1]);
    std::set<std::size_t> roots;
    for (const auto& s : A.simplices())
        if (s.size() == 1) roots.insert(uf.find(s[0]));
    return roots.size();
}

// --- dense GF(2) linear algebra ------------------------------------------------

using Gf2Row = std::vector<std::uint8_t>;

/// Rank of a GF(2) matrix given as rows (destructive copy).
inline std::size_t gf2_rank(std::vector<Gf2Row> m) {
    std::size_t rank = 0;
    const std::size_t cols = m.empty() ? 0 : m.front().size();
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < m.size() && !m[pivot][c]) ++pivot;
        if (pivot == m.size()) continue;
        std::swap(m[rank], m[pivot]);
        for (std::size_t r = 0; r < m.size(); ++r)
            if (r != rank && m[r][c])
                for (std::size_t k = c; k < cols; ++k) m[r][k] ^= m[rank][k];
        ++rank;
    }
    return rank;
}

/// Null space basis of the linear map whose matrix has the given columns (each column
/// is a vector in the codomain). Returns vectors in the domain.
inline std::vector<Gf2Row> gf2_kernel(const std::vector<Gf2Row>& columns, std::size_t codomain) {
    const std::size_t n = columns.size();
    // rows = codomain coordinates, augmented with identity to track combinations
    std::vector<Gf2Row> work(n, Gf2Row(codomain + n, 0));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t r = 0; r < codomain; ++r) work[j][r] = columns[j][r];
        work[j][codomain + j] = 1;
    }
    std::size_t rank = 0;
    for (std::size_t c = 0; c < codomain && rank < n; ++c) {
        std::size_t pivot = rank;
        while (pivot < n && !work[pivot][c]) ++pivot;
        if (pivot == n) continue;
        std::swap(work[rank], work[pivot]);
        for (std::size_t r = 0; r < n; ++r)
            if (r != rank && work[r][c])
                for (std::size_t k = 0; k < codomain + n; ++k) work[r][k] ^= work[rank][k];
        ++rank;
    }
    std::vector<Gf2Row> kernel;
    for (std::size_t r = rank; r < n; ++r) kernel.emplace_back(work[r].begin() + codomain, work[r].end());
    return kernel;
}

inline std::vector<Simplex> simplices_of_dim(const SimplicialComplex& K, int d) {
    auto [b, e] = K.dimension_range(d);
    return {K.simplices().begin() + b, K.simplices().begin() + e};
}

/// Boundary of each d-simplex of `domain` as a GF(2) vector over `faces`.
inline std::vector<Gf2Row> boundary_columns(const std::vector<Simplex>& domain, const std::vector<Simplex>& faces) {
    std::vector<Gf2Row> out;
    for (const auto& s : domain) {
        Gf2Row col(faces.size(), 0);
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
            Simplex f;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (i != drop) f.push_back(s[i]);
            for (std::size_t k = 0; k < faces.size(); ++k)
                if (faces[k] == f) col[k] = 1;
        }
        out.push_back(std::move(col));
    }
    return out;
}

/// Rank over GF(2) of H_i(A) -> H_i(B), A a subcomplex of B, by direct linear algebra:
/// rank = rank[B_i(B) | Z_i(A)] - rank[B_i(B)], all expressed in C_i(B).
inline std::size_t homology_map_rank_gf2(const SimplicialComplex& A, const SimplicialComplex& B, int i) {
    const auto cb = simplices_of_dim(B, i);
    if (cb.empty()) return 0;
    const auto ca = simplices_of_dim(A, i);

    std::vector<Gf2Row> cycles;
    if (i == 0) {
        for (std::size_t k = 0; k < ca.size(); ++k) {
            Gf2Row e(ca.size(), 0);
            e[k] = 1;
            cycles.push_back(std::move(e));
        }
    } else {
        cycles = gf2_kernel(boundary_columns(ca, simplices_of_dim(A, i - 1)), simplices_of_dim(A, i - 1).size());
    }
    // express cycles of A in the basis of C_i(B)
    std::vector<Gf2Row> zb;
    for (const auto& z : cycles) {
        Gf2Row row(cb.size(), 0);
        for (std::size_t k = 0; k < ca.size(); ++k)
            if (z[k])
                for (std::size_t m = 0; m < cb.size(); ++m)
                    if (cb[m] == ca[k]) row[m] = 1;
        zb.push_back(std::move(row));
    }
    const auto boundaries = boundary_columns(simplices_of_dim(B, i + 1), cb);
    std::vector<Gf2Row> both = boundaries;
    both.insert(both.end(), zb.begin(), zb.end());
    return gf2_rank(both) - gf2_rank(boundaries);
}

inline std::size_t betti_gf2(const SimplicialComplex& K, int i) { return homology_map_rank_gf2(K, K, i); }

// --- random instances ----------------------------------------------------------

/// Random complex on `vertices` vertices with edges, triangles, hollow shells and a few tetrahedra.
inline SimplicialComplex random_complex(std::mt19937_64& rng, std::size_t vertices) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, vertices - 1);
    std::vector<Simplex> top;
    for (Vertex a = 0; a < vertices; ++a)
        for (Vertex b = a + 1; b < vertices; ++b)
            if (coin(rng) < 0.35) top.push_back({a, b});
    const std::size_t tris = vertices + pick(rng);
    for (std::size_t k = 0; k < tris; ++k) {
        std::set<Vertex> s;
        while (s.size() < 3) s.insert(static_cast<Vertex>(pick(rng)));
        top.emplace_back(s.begin(), s.end());
    }
    // hollow tetrahedra and octahedra carry degree-2 classes
    if (vertices >= 4 && coin(rng) < 0.5) {
        std::set<Vertex> s;
        while (s.size() < 4) s.insert(static_cast<Vertex>(pick(rng)));
        const Simplex t(s.begin(), s.end());
        for (std::size_t drop = 0; drop < 4; ++drop) {
            Simplex face;
            for (std::size_t i = 0; i < 4; ++i)
                if (i != drop) face.push_back(t[i]);
            top.push_back(face);
        }
    }
    if (vertices >= 6 && coin(rng) < 0.3) {
        std::vector<Vertex> o(vertices);
        std::iota(o.begin(), o.end(), Vertex{0});
        std::shuffle(o.begin(), o.end(), rng);
        // poles o[0], o[1] over the square o[2..5]
        for (Vertex pole : {o[0], o[1]})
            for (std::size_t k = 0; k < 4; ++k) {
                Simplex face{pole, o[2 + k], o[2 + (k + 1) % 4]};
                std::sort(face.begin(), face.end());
                top.push_back(face);
            }
    }
    const std::size_t tets = pick(rng) % 3;
    for (std::size_t k = 0; k < tets && vertices >= 4; ++k) {
        std::set<Vertex> s;
        while (s.size() < 4) s.insert(static_cast<Vertex>(pick(rng)));
        top.emplace_back(s.begin(), s.end());
    }
    return SimplicialComplex::from_simplices(vertices, top);
}

inline MeasuringFunction random_function(std::mt19937_64& rng, std::size_t vertices, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
    std::uniform_real_distribution<double> val(lo, hi);
    std::vector<double> v(vertices * n);
    for (auto& x : v) x = val(rng);
    return MeasuringFunction(n, std::move(v));
}

} // namespace mph::oracle
