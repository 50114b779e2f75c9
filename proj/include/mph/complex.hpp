#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mph/error.hpp"

namespace mph {

using Vertex = std::uint32_t;

/// Strictly increasing tuple of vertex labels. Dimension is size() - 1.
using Simplex = std::vector<Vertex>;

inline int simplex_dimension(const Simplex& s) { return static_cast<int>(s.size()) - 1; }

/// Canonical order on simplices: dimension first, then lexicographic vertex tuple.
struct SimplexLess {
    bool operator()(const Simplex& a, const Simplex& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

/// Finite abstract simplicial complex, closed under taking faces.
///
/// Simplices are stored once each, in canonical (dimension, lexicographic) order, so
/// a simplex's position in simplices() is a stable index. Vertex labels live in
/// [0, vertex_count()). Complexes built from files or generators contain every label
/// as a 0-simplex; subcomplexes keep the ambient labelling, so some labels may be absent.
class SimplicialComplex {
public:
    static constexpr int kDefaultMaxDimension = 3;

    SimplicialComplex() = default;

    /// Builds the face closure of `simplices` over `vertex_count` vertices. Every vertex
    /// label becomes a 0-simplex. Input tuples may be unsorted but must not repeat a vertex.
    static SimplicialComplex from_simplices(std::size_t vertex_count, std::span<const Simplex> simplices,
                                            int max_dimension = kDefaultMaxDimension) {
        std::vector<Simplex> all;
        all.reserve(vertex_count + simplices.size() * 4);
        for (std::size_t v = 0; v < vertex_count; ++v) all.push_back({static_cast<Vertex>(v)});

        for (const Simplex& raw : simplices) {
            if (raw.empty()) throw ValidationError("empty simplex");
            Simplex s = raw;
            std::sort(s.begin(), s.end());
            if (std::adjacent_find(s.begin(), s.end()) != s.end())
                throw ValidationError("simplex repeats a vertex");
            if (s.back() >= vertex_count)
                throw ValidationError("vertex index " + std::to_string(s.back()) + " out of range (vertex count " +
                                      std::to_string(vertex_count) + ")");
            if (simplex_dimension(s) > max_dimension)
                throw ValidationError("simplex of dimension " + std::to_string(simplex_dimension(s)) +
                                      " exceeds maximum dimension " + std::to_string(max_dimension));
            // every nonempty subset, via bitmasks
            const std::size_t k = s.size();
            for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
                Simplex face;
                face.reserve(k);
                for (std::size_t i = 0; i < k; ++i)
                    if (mask & (1u << i)) face.push_back(s[i]);
                if (face.size() > 1) all.push_back(std::move(face));
            }
        }
        std::sort(all.begin(), all.end(), SimplexLess{});
        all.erase(std::unique(all.begin(), all.end()), all.end());

        SimplicialComplex out;
        out.vertex_count_ = vertex_count;
        out.max_dimension_ = max_dimension;
        out.simplices_ = std::move(all);
        out.index_dimensions();
        return out;
    }

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    int max_dimension() const noexcept { return max_dimension_; }
    std::size_t size() const noexcept { return simplices_.size(); }
    bool empty() const noexcept { return simplices_.empty(); }

    /// Highest dimension present, -1 for the empty complex.
    int dimension() const noexcept { return static_cast<int>(dim_begin_.size()) - 2; }

    const std::vector<Simplex>& simplices() const noexcept { return simplices_; }
    const Simplex& operator[](std::size_t i) const { return simplices_[i]; }

    /// Simplices of dimension `d` occupy the index range [begin, end).
    std::pair<std::size_t, std::size_t> dimension_range(int d) const noexcept {
        if (d < 0 || d > dimension()) return {0, 0};
        return {dim_begin_[d], dim_begin_[d + 1]};
    }

    std::size_t count(int d) const noexcept {
        auto [b, e] = dimension_range(d);
        return e - b;
    }

    std::optional<std::size_t> index_of(const Simplex& s) const {
        if (s.empty()) return std::nullopt;
        auto [b, e] = dimension_range(simplex_dimension(s));
        auto it = std::lower_bound(simplices_.begin() + b, simplices_.begin() + e, s);
        if (it == simplices_.begin() + e || *it != s) return std::nullopt;
        return static_cast<std::size_t>(it - simplices_.begin());
    }

    bool contains(const Simplex& s) const { return index_of(s).has_value(); }

    /// Full subcomplex on the vertices accepted by `keep`: a simplex survives iff all its vertices do.
    template <class VertexPredicate>
    SimplicialComplex induced(VertexPredicate&& keep) const {
        std::vector<char> kept(vertex_count_, 0);
        for (std::size_t v = 0; v < vertex_count_; ++v) kept[v] = keep(static_cast<Vertex>(v)) ? 1 : 0;
        SimplicialComplex out;
        out.vertex_count_ = vertex_count_;
        out.max_dimension_ = max_dimension_;
        for (const Simplex& s : simplices_)
            if (std::all_of(s.begin(), s.end(), [&](Vertex v) { return kept[v] != 0; })) out.simplices_.push_back(s);
        out.index_dimensions();
        return out;
    }

    bool is_subcomplex_of(const SimplicialComplex& other) const {
        return std::all_of(simplices_.begin(), simplices_.end(), [&](const Simplex& s) { return other.contains(s); });
    }

    /// True when every codimension-1 face of every simplex is present.
    bool is_face_closed() const {
        for (const Simplex& s : simplices_) {
            if (s.size() < 2) continue;
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                Simplex face;
                for (std::size_t i = 0; i < s.size(); ++i)
                    if (i != drop) face.push_back(s[i]);
                if (!contains(face)) return false;
            }
        }
        return true;
    }

    /// Simplices that are not a proper face of any other simplex.
    std::vector<Simplex> maximal_simplices() const {
        std::vector<char> is_face(simplices_.size(), 0);
        for (const Simplex& s : simplices_) {
            if (s.size() < 2) continue;
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                Simplex face;
                for (std::size_t i = 0; i < s.size(); ++i)
                    if (i != drop) face.push_back(s[i]);
                if (auto idx = index_of(face)) is_face[*idx] = 1;
            }
        }
        std::vector<Simplex> out;
        for (std::size_t i = 0; i < simplices_.size(); ++i)
            if (!is_face[i]) out.push_back(simplices_[i]);
        return out;
    }

    /// Alternating count of simplices by dimension.
    long long euler_characteristic() const noexcept {
        long long chi = 0;
        for (int d = 0; d <= dimension(); ++d) chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(count(d));
        return chi;
    }

    friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
        return a.vertex_count_ == b.vertex_count_ && a.simplices_ == b.simplices_;
    }

private:
    void index_dimensions() {
        dim_begin_.clear();
        if (simplices_.empty()) return;
        const int top = simplex_dimension(simplices_.back());
        dim_begin_.assign(static_cast<std::size_t>(top) + 2, simplices_.size());
        for (std::size_t i = simplices_.size(); i-- > 0;) dim_begin_[simplex_dimension(simplices_[i])] = i;
        // dimensions with no simplices inherit the start of the next one
        for (int d = top; d-- > 0;) dim_begin_[d] = std::min(dim_begin_[d], dim_begin_[d + 1]);
        dim_begin_[top + 1] = simplices_.size();
    }

    std::size_t vertex_count_ = 0;
    int max_dimension_ = kDefaultMaxDimension;
    std::vector<Simplex> simplices_;
    std::vector<std::size_t> dim_begin_;
};

/// Vector-valued measuring function sampled at the vertices, stored row-major.
class MeasuringFunction {
public:
    MeasuringFunction() = default;

    MeasuringFunction(std::size_t dimension, std::vector<double> values) : dim_(dimension), values_(std::move(values)) {
        if (dim_ == 0) throw ValidationError("measuring function dimension must be positive");
        if (values_.size() % dim_ != 0) throw ValidationError("value count is not a multiple of the dimension");
        for (double x : values_)
            if (!std::isfinite(x)) throw ValidationError("measuring function has a non-finite entry");
    }

    /// Builds from one row per vertex; every row must have the same length.
    static MeasuringFunction from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty()) throw ValidationError("measuring function needs at least one vertex");
        const std::size_t n = rows.front().size();
        std::vector<double> flat;
        flat.reserve(rows.size() * n);
        for (const auto& r : rows) {
            if (r.size() != n) throw ValidationError("dimension mismatch between vertex rows");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        return MeasuringFunction(n, std::move(flat));
    }

    std::size_t dimension() const noexcept { return dim_; }
    std::size_t vertex_count() const noexcept { return dim_ == 0 ? 0 : values_.size() / dim_; }

    std::span<const double> at(Vertex v) const { return {values_.data() + static_cast<std::size_t>(v) * dim_, dim_}; }
    double operator()(Vertex v, std::size_t j) const { return values_[static_cast<std::size_t>(v) * dim_ + j]; }

    const std::vector<double>& values() const noexcept { return values_; }

    /// The j-th component (0-based) as a 1-dimensional measuring function.
    MeasuringFunction component(std::size_t j) const {
        if (j >= dim_) throw ValidationError("component index " + std::to_string(j) + " out of range");
        std::vector<double> out(vertex_count());
        for (std::size_t v = 0; v < out.size(); ++v) out[v] = values_[v * dim_ + j];
        return MeasuringFunction(1, std::move(out));
    }

    /// Componentwise minimum and maximum over all vertices.
    std::pair<std::vector<double>, std::vector<double>> bounds() const {
        std::vector<double> lo(dim_, std::numeric_limits<double>::infinity());
        std::vector<double> hi(dim_, -std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < values_.size(); ++i) {
            lo[i % dim_] = std::min(lo[i % dim_], values_[i]);
            hi[i % dim_] = std::max(hi[i % dim_], values_[i]);
        }
        return {lo, hi};
    }

    friend bool operator==(const MeasuringFunction&, const MeasuringFunction&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> values_;
};

/// Real-valued lower-star filtration: a simplex's value is the max over its vertices.
class ScalarFiltration {
public:
    ScalarFiltration() = default;
    explicit ScalarFiltration(std::vector<double> vertex_values) : values_(std::move(vertex_values)) {}

    /// Reads component 0 of a 1-dimensional measuring function.
    static ScalarFiltration from_function(const MeasuringFunction& f) {
        if (f.dimension() != 1) throw ValidationError("scalar filtration needs a 1-dimensional measuring function");
        return ScalarFiltration(f.values());
    }

    const std::vector<double>& vertex_values() const noexcept { return values_; }
    std::size_t vertex_count() const noexcept { return values_.size(); }
    double operator()(Vertex v) const { return values_[v]; }

    double value(const Simplex& s) const {
        double m = -std::numeric_limits<double>::infinity();
        for (Vertex v : s) m = std::max(m, values_[v]);
        return m;
    }

private:
    std::vector<double> values_;
};

/// Point of the open set u < v (componentwise strict) in R^n x R^n.
class ParameterPoint {
public:
    ParameterPoint(std::vector<double> u, std::vector<double> v) : u_(std::move(u)), v_(std::move(v)) {
        if (u_.empty() || u_.size() != v_.size()) throw ValidationError("parameter point: u and v need equal, positive length");
        for (std::size_t j = 0; j < u_.size(); ++j)
            if (!(u_[j] < v_[j])) throw ValidationError("parameter point: u must be strictly below v in every component");
    }

    const std::vector<double>& u() const noexcept { return u_; }
    const std::vector<double>& v() const noexcept { return v_; }
    std::size_t dimension() const noexcept { return u_.size(); }

private:
    std::vector<double> u_;
    std::vector<double> v_;
};

/// Subcomplex spanned by the vertices P with f_j(P) <= u_j for every j.
inline SimplicialComplex sublevel_complex(const SimplicialComplex& K, const MeasuringFunction& f,
                                          std::span<const double> u) {
    if (u.size() != f.dimension())
        throw ValidationError("threshold has length " + std::to_string(u.size()) + ", function dimension is " +
                              std::to_string(f.dimension()));
    if (f.vertex_count() < K.vertex_count()) throw ValidationError("measuring function does not cover every vertex");
    return K.induced([&](Vertex v) {
        auto row = f.at(v);
        for (std::size_t j = 0; j < u.size(); ++j)
            if (!(row[j] <= u[j])) return false;
        return true;
    });
}

/// Simplices whose lower-star value is at most s.
inline SimplicialComplex scalar_sublevel(const SimplicialComplex& K, const ScalarFiltration& g, double s) {
    if (g.vertex_count() < K.vertex_count()) throw ValidationError("filtration does not cover every vertex");
    return K.induced([&](Vertex v) { return g(v) <= s; });
}

// ---------------------------------------------------------------------------
// Text format
//
//   mph-complex 1
//   vertices <V> dim <n>
//   <V rows of n values>
//   simplices <S>
//   <S rows of vertex indices>
//
// Blank lines and lines starting with '#' are ignored.
// ---------------------------------------------------------------------------

struct ComplexWithFunction {
    SimplicialComplex complex;
    MeasuringFunction function;
};

namespace detail {

struct LineReader {
    std::istringstream in;
    std::size_t line_no = 0;

    explicit LineReader(std::string_view text) : in(std::string(text)) {}

    /// Next non-blank, non-comment line; nullopt at end of input.
    std::optional<std::string> next() {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos || line[first] == '#') continue;
            return line;
        }
        return std::nullopt;
    }
};

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

template <class T>
std::optional<T> parse_number(std::string_view tok) {
    T value{};
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
    return value;
}

inline std::string format_shortest(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

} // namespace detail

/// Parses the complex text format; missing faces are added.
inline ComplexWithFunction load_pair(std::string_view text, int max_dimension = SimplicialComplex::kDefaultMaxDimension) {
    detail::LineReader reader(text);
    auto require = [&](const char* what) {
        auto line = reader.next();
        if (!line) throw ParseError(std::string("unexpected end of input, expected ") + what, reader.line_no);
        return *line;
    };

    {
        const std::string text_line = require("header");
        auto toks = detail::split_ws(text_line);
        if (toks.size() != 2 || toks[0] != "mph-complex") throw ParseError("expected header 'mph-complex 1'", reader.line_no);
        if (toks[1] != "1") throw ParseError("unsupported format version '" + std::string(toks[1]) + "'", reader.line_no);
    }

    std::size_t vertex_count = 0, n = 0;
    {
        const std::string text_line = require("'vertices <V> dim <n>'");
        auto toks = detail::split_ws(text_line);
        std::optional<std::size_t> v, d;
        if (toks.size() == 4 && toks[0] == "vertices" && toks[2] == "dim") {
            v = detail::parse_number<std::size_t>(toks[1]);
            d = detail::parse_number<std::size_t>(toks[3]);
        }
        if (!v || !d) throw ParseError("expected 'vertices <V> dim <n>'", reader.line_no);
        if (*d == 0) throw ParseError("dimension must be positive", reader.line_no);
        vertex_count = *v;
        n = *d;
    }

    std::vector<double> values;
    values.reserve(vertex_count * n);
    for (std::size_t row = 0; row < vertex_count; ++row) {
        auto line = reader.next();
        if (!line) throw ParseError("value row count mismatch: expected " + std::to_string(vertex_count) + " rows, got " +
                                        std::to_string(row), reader.line_no);
        auto toks = detail::split_ws(*line);
        if (!toks.empty() && toks[0] == "simplices")
            throw ParseError("value row count mismatch: expected " + std::to_string(vertex_count) + " rows, got " +
                                 std::to_string(row), reader.line_no);
        if (toks.size() != n)
            throw ParseError("dimension mismatch: expected " + std::to_string(n) + " values, got " +
                                 std::to_string(toks.size()), reader.line_no);
        for (auto tok : toks) {
            auto x = detail::parse_number<double>(tok);
            if (!x) throw ParseError("bad number '" + std::string(tok) + "'", reader.line_no);
            if (!std::isfinite(*x)) throw ValidationError("line " + std::to_string(reader.line_no) + ": non-finite value");
            values.push_back(*x);
        }
    }

    std::size_t simplex_count = 0;
    {
        const std::string text_line = require("'simplices <S>'");
        auto toks = detail::split_ws(text_line);
        if (toks.size() != 2 || toks[0] != "simplices") {
            if (toks.size() == n) throw ParseError("value row count mismatch: more rows than declared", reader.line_no);
            throw ParseError("expected 'simplices <S>'", reader.line_no);
        }
        auto s = detail::parse_number<std::size_t>(toks[1]);
        if (!s) throw ParseError("bad simplex count", reader.line_no);
        simplex_count = *s;
    }

    std::vector<Simplex> simplices;
    simplices.reserve(simplex_count);
    for (std::size_t k = 0; k < simplex_count; ++k) {
        auto line = reader.next();
        if (!line) throw ParseError("simplex row count mismatch: expected " + std::to_string(simplex_count), reader.line_no);
        Simplex s;
        for (auto tok : detail::split_ws(*line)) {
            auto idx = detail::parse_number<std::uint64_t>(tok);
            if (!idx) throw ParseError("bad vertex index '" + std::string(tok) + "'", reader.line_no);
            if (*idx >= vertex_count)
                throw ValidationError("line " + std::to_string(reader.line_no) + ": vertex index " + std::to_string(*idx) +
                                      " out of range (vertex count " + std::to_string(vertex_count) + ")");
            s.push_back(static_cast<Vertex>(*idx));
        }
        simplices.push_back(std::move(s));
    }
    if (reader.next()) throw ParseError("trailing content after simplex list", reader.line_no);

    try {
        return {SimplicialComplex::from_simplices(vertex_count, simplices, max_dimension),
                MeasuringFunction(n, std::move(values))};
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("invalid complex: ") + e.what());
    }
}

/// Writes the text format. Only maximal simplices are listed; values use the
/// shortest representation that parses back to the same double.
inline std::string save_pair(const SimplicialComplex& K, const MeasuringFunction& f) {
    if (f.vertex_count() != K.vertex_count()) throw ValidationError("function and complex disagree on vertex count");
    std::string out = "mph-complex 1\n";
    out += "vertices " + std::to_string(K.vertex_count()) + " dim " + std::to_string(f.dimension()) + "\n";
    for (std::size_t v = 0; v < K.vertex_count(); ++v) {
        auto row = f.at(static_cast<Vertex>(v));
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ' ';
            out += detail::format_shortest(row[j]);
        }
        out += '\n';
    }
    auto top = K.maximal_simplices();
    // isolated vertices are implied by the vertex rows
    std::erase_if(top, [](const Simplex& s) { return s.size() == 1; });
    out += "simplices " + std::to_string(top.size()) + "\n";
    for (const Simplex& s : top) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (i) out += ' ';
            out += std::to_string(s[i]);
        }
        out += '\n';
    }
    return out;
}

} // namespace mph
