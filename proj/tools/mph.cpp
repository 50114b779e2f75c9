#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "mph/json_io.hpp"
#include "mph/mph.hpp"

using json = nlohmann::json;
using namespace mph;

namespace {

struct IoError : Error {
    using Error::Error;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

// stdout when path is empty
void emit(const std::string& path, const std::string& text) {
    if (path.empty()) std::cout << text;
    else write_text(path, text);
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// .json files use the JSON export, everything else the text format.
ComplexWithFunction load_complex(const std::string& path) {
    const auto text = read_text(path);
    if (ends_with(path, ".json")) {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(e.what(), 0);
        }
        return io::complex_from_json(j);
    }
    return load_pair(text);
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(',', start), text.size());
        const auto tok = text.substr(start, end - start);
        double x = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
        if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
            throw ValidationError(flag + ": bad number '" + tok + "'");
        out.push_back(x);
        start = end + 1;
    }
    return out;
}

struct DegreeRange {
    int lo = 0, hi = 2;
};

DegreeRange parse_degrees(const std::string& text) {
    auto as_int = [&](std::string_view s) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v < 0)
            throw ValidationError("--degrees: expected a..b, got '" + text + "'");
        return v;
    };
    const auto dots = text.find("..");
    DegreeRange r;
    if (dots == std::string::npos) {
        r.lo = r.hi = as_int(text);
    } else {
        r.lo = as_int(std::string_view(text).substr(0, dots));
        r.hi = as_int(std::string_view(text).substr(dots + 2));
    }
    if (r.hi < r.lo) throw ValidationError("--degrees: empty range '" + text + "'");
    return r;
}

/// Filtration from --l/--b, --component (1-based) or the function itself when n = 1.
ScalarFiltration pick_filtration(const MeasuringFunction& f, const std::string& l, const std::string& b, int component) {
    if (component > 0) {
        if (!l.empty() || !b.empty()) throw ValidationError("--component excludes --l/--b");
        if (static_cast<std::size_t>(component) > f.dimension())
            throw ValidationError("--component " + std::to_string(component) + " exceeds function dimension " +
                                  std::to_string(f.dimension()));
        return ScalarFiltration::from_function(f.component(static_cast<std::size_t>(component - 1)));
    }
    if (l.empty()) {
        if (f.dimension() != 1) throw ValidationError("function has dimension " + std::to_string(f.dimension()) +
                                                      "; pass --l/--b or --component");
        return ScalarFiltration::from_function(f);
    }
    const auto lv = parse_list(l, "--l");
    const auto bv = b.empty() ? std::vector<double>(lv.size(), 0.0) : parse_list(b, "--b");
    return reduce(f, make_admissible(lv, bv));
}

std::vector<PersistenceDiagram> diagrams_for(const SimplicialComplex& K, const ScalarFiltration& g, DegreeRange r,
                                             std::uint32_t prime) {
    std::vector<PersistenceDiagram> all;
    if (K.dimension() >= 0 && r.lo <= K.dimension()) all = diagram(K, g, r.hi, prime);
    else if (r.hi > K.dimension()) warn("requested degrees exceed complex dimension " + std::to_string(K.dimension()));
    std::vector<PersistenceDiagram> out;
    for (int i = r.lo; i <= r.hi; ++i) out.push_back(diagram_in_degree(all, i));
    return out;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void check_format(const std::string& format) {
    if (format != "json" && format != "csv") throw ValidationError("--format must be json or csv");
}

// ---------------------------------------------------------------------------

struct DiagramArgs {
    std::string input, l, b, degrees = "0..2", format = "json", output;
    int component = 0;
    std::uint32_t prime = 2;
};

int cmd_diagram(const DiagramArgs& a) {
    check_format(a.format);
    const auto range = parse_degrees(a.degrees);
    auto [K, f] = load_complex(a.input);
    const auto g = pick_filtration(f, a.l, a.b, a.component);
    const auto ds = diagrams_for(K, g, range, a.prime);
    if (a.format == "csv") {
        emit(a.output.empty() ? "" : a.output + ".csv", io::diagrams_to_csv(ds));
        return 0;
    }
    if (a.output.empty()) {
        for (const auto& d : ds) std::cout << io::diagram_to_json(d).dump() << "\n";
    } else {
        for (const auto& d : ds) write_text(a.output + "_H" + std::to_string(d.degree()) + ".json", dump_json(io::diagram_to_json(d)));
    }
    return 0;
}

int cmd_slice(const std::string& u, const std::string& v) {
    const auto sp = pair_through(ParameterPoint(parse_list(u, "--u"), parse_list(v, "--v")));
    std::cout << dump_json(io::slice_to_json(sp));
    return 0;
}

PersistenceDiagram read_diagram(const std::string& path, int degree) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what(), 0);
    }
    if (j.is_array()) {
        for (const auto& item : j)
            if (item.value("degree", -1) == degree) return io::diagram_from_json(item);
        if (degree < 0) throw ValidationError(path + ": holds several diagrams; pass --degree");
        return PersistenceDiagram(degree, {});
    }
    return io::diagram_from_json(j);
}

int cmd_bottleneck(const std::string& a, const std::string& b, int degree) {
    const auto da = read_diagram(a, degree), db = read_diagram(b, degree);
    std::cout << io::format_number(bottleneck(da, db)) << "\n";
    return 0;
}

struct MultidistArgs {
    std::string x, y, degrees = "0..2", format = "json", output;
    int degree = -1;
    std::size_t directions = 9, offsets = 5, jobs = 1;
    double radius = -1.0;
    std::uint32_t prime = 2;
};

int cmd_multidist(const MultidistArgs& a) {
    check_format(a.format);
    const auto range = a.degree >= 0 ? DegreeRange{a.degree, a.degree} : parse_degrees(a.degrees);
    auto [KX, fX] = load_complex(a.x);
    auto [KY, fY] = load_complex(a.y);
    if (fX.dimension() != fY.dimension()) throw ValidationError("input functions have different dimensions");
    GridSpec spec{fX.dimension(), a.directions, a.offsets, a.radius >= 0 ? a.radius : default_offset_radius(fX, fY)};
    const auto grid = slice_grid(spec);
    const auto est = multidim_distance_degrees(KX, fX, KY, fY, range.lo, range.hi, grid, {a.prime, a.jobs});

    std::string body;
    if (a.format == "csv") {
        for (std::size_t k = 0; k < est.size(); ++k) {
            auto part = io::estimate_to_csv(est[k]);
            if (k > 0) part = part.substr(part.find('\n') + 1);
            body += part;
        }
    } else if (est.size() == 1) {
        body = dump_json(io::estimate_to_json(est.front()));
    } else {
        json arr = json::array();
        for (const auto& e : est) arr.push_back(io::estimate_to_json(e));
        body = dump_json(arr);
    }
    emit(a.output, body);
    // keep stdout machine-readable when it carries the report
    std::ostream& note = a.output.empty() ? std::cerr : std::cout;
    for (const auto& e : est)
        note << "degree " << e.degree << ": lower bound of D (sampled) = " << io::format_number(e.lower_bound) << " over "
             << e.samples.size() << " slices\n";
    return 0;
}

int cmd_critical(const DiagramArgs& a) {
    const auto range = parse_degrees(a.degrees);
    auto [K, f] = load_complex(a.input);
    const auto g = pick_filtration(f, a.l, a.b, a.component);
    const auto ds = diagrams_for(K, g, range, a.prime);
    emit(a.output, dump_json(io::critical_to_json(homological_critical_values(ds))));
    return 0;
}

struct DumpArgs {
    std::string kind = "sphere", measuring, format = "mph", output;
    int resolution = 0, minor = 0;
};

int cmd_shapes_dump(const DumpArgs& a) {
    const auto kind = shapes::parse_kind(a.kind);
    const auto sh = shapes::generate({kind, a.resolution, a.minor});
    std::string m = a.measuring;
    if (m.empty()) m = kind == shapes::Kind::torus ? "z_negz" : kind == shapes::Kind::ellipse ? "ellipse_phi" : "abs_uv";
    MeasuringFunction f = [&] {
        for (auto name : {"abs_uv", "z_negz", "ellipse_phi", "ellipse_psi"})
            if (m == name) return shapes::measuring(shapes::parse_measuring(m), sh.coords);
        return shapes::measuring(m, sh.coords);
    }();
    if (a.format == "json") emit(a.output, dump_json(io::complex_to_json(sh.complex, f)));
    else if (a.format == "mph") emit(a.output, save_pair(sh.complex, f));
    else throw ValidationError("--format must be mph or json");
    return 0;
}

// --- demos -----------------------------------------------------------------

struct Check {
    std::string name;
    double computed, expected, tolerance;
    bool pass;
    std::string relation = "near"; // near, <, >
};

struct Report {
    std::string example;
    std::vector<Check> checks;

    void near(std::string name, double computed, double expected, double tol) {
        checks.push_back({std::move(name), computed, expected, tol, std::abs(computed - expected) <= tol});
    }
    // computed < bound
    void below(std::string name, double computed, double bound) {
        checks.push_back({std::move(name), computed, bound, 0.0, computed < bound, "<"});
    }
    void above(std::string name, double computed, double bound) {
        checks.push_back({std::move(name), computed, bound, 0.0, computed > bound, ">"});
    }
    bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
};

constexpr double kSqrt2 = std::numbers::sqrt2;

const DiagramPoint* closest(const PersistenceDiagram& d, double birth, double death) {
    const DiagramPoint* best = nullptr;
    double err = kInfinity;
    for (const auto& p : d.points()) {
        const double e = std::max(std::abs(p.birth - birth), std::isinf(death) ? (p.essential() ? 0.0 : kInfinity)
                                                                                : std::abs(p.death - death));
        if (e < err) {
            err = e;
            best = &p;
        }
    }
    return best;
}

Report demo_cube_sphere(std::size_t jobs) {
    Report r{"cube_sphere", {}};
    const auto cube = shapes::generate({shapes::Kind::cube_boundary});
    const auto sphere = shapes::generate({shapes::Kind::sphere});
    const auto fc = shapes::measuring(shapes::Measuring::abs_uv, cube.coords);
    const auto fs = shapes::measuring(shapes::Measuring::abs_uv, sphere.coords);

    const auto central = slice_grid({2, 1, 1, 0.0});
    const auto est = multidim_distance_degrees(cube.complex, fc, sphere.complex, fs, 0, 2, central, {2, jobs});
    const double w = std::numbers::sqrt2 / 2;
    r.near("H0 slice distance", est[0].samples[0].distance, kSqrt2 - 1, 0.02);
    r.near("H0 weighted", est[0].samples[0].weighted, w * (kSqrt2 - 1), 0.02);
    r.near("H1 slice distance", est[1].samples[0].distance, (kSqrt2 - 1) / 2, 0.02);
    r.near("H1 weighted", est[1].samples[0].weighted, w * (kSqrt2 - 1) / 2, 0.02);
    r.near("H2 slice distance", est[2].samples[0].distance, 0.0, 1e-9);

    const auto ds = diagram(sphere.complex, reduce(fs, central[0]), 1);
    const auto* p = closest(ds[1], 1.0, kSqrt2);
    r.near("sphere H1 (1, sqrt2) multiplicity", p ? static_cast<double>(p->multiplicity) : 0.0, 3.0, 0.0);

    double worst = 0.0;
    for (int i = 0; i <= 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            worst = std::max(worst, component_distance(cube.complex, fc, sphere.complex, fs, i, j));
    r.below("max component distance", worst, 0.02);

    GridSpec spec;
    spec.offset_radius = default_offset_radius(fc, fs);
    const auto lb = multidim_distance(cube.complex, fc, sphere.complex, fs, 0, spec, {2, jobs});
    r.above("H0 lower bound (default grid)", lb.lower_bound, 0.27);
    return r;
}

Report demo_ellipse(std::size_t jobs) {
    Report r{"ellipse", {}};
    const auto el = shapes::generate({shapes::Kind::ellipse});
    const auto phi = shapes::measuring(shapes::Measuring::ellipse_phi, el.coords);
    const auto psi = shapes::measuring(shapes::Measuring::ellipse_psi, el.coords);
    for (std::size_t j = 0; j < 2; ++j)
        r.near("H0 component " + std::to_string(j + 1) + " distance", component_distance(el.complex, phi, el.complex, psi, 0, j),
               0.0, 0.02);
    const ParameterPoint p({0.6, 0.9}, {0.65, 0.95});
    r.near("phi rank at (0.6,0.9)-(0.65,0.95)", static_cast<double>(multidim_rank(el.complex, phi, p, 0)), 2.0, 0.0);
    r.below("psi rank at (0.6,0.9)-(0.65,0.95)", static_cast<double>(multidim_rank(el.complex, psi, p, 0)), 2.0);
    GridSpec spec;
    spec.offset_radius = default_offset_radius(phi, psi);
    r.above("H0 lower bound (default grid)", multidim_distance(el.complex, phi, el.complex, psi, 0, spec, {2, jobs}).lower_bound,
            0.0);
    return r;
}

Report demo_torus() {
    Report r{"torus", {}};
    const auto tor = shapes::generate({shapes::Kind::torus});
    const auto f = shapes::measuring(shapes::Measuring::z_negz, tor.coords);
    const auto z = ScalarFiltration::from_function(f.component(0));
    const auto negz = ScalarFiltration::from_function(f.component(1));

    const auto plain = diagram(tor.complex, z, 1);
    const auto* p = closest(plain[1], 2.0, kInfinity);
    r.near("H1 birth near 2", p ? p->birth : kInfinity, 2.0, 0.05);

    const auto restricted = restricted_diagram(tor.complex, z, negz, 1.0, 0);
    const auto* q = closest(restricted[0], -1.0, 2.0);
    r.near("restricted H0 birth", q ? q->birth : kInfinity, -1.0, 0.05);
    r.near("restricted H0 death", q ? q->death : kInfinity, 2.0, 0.05);
    return r;
}

json report_to_json(const Report& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"computed", io::number_or_inf(c.computed)},
                          {"expected", io::number_or_inf(c.expected)},
                          {"relation", c.relation},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    return {{"example", r.example}, {"checks", checks}, {"pass", r.ok()}};
}

void print_table(const Report& r) {
    std::cout << "demo " << r.example << "\n";
    std::cout << std::left << std::setw(38) << "check" << std::setw(16) << "computed" << std::setw(16) << "expected"
              << std::setw(10) << "tol" << "result\n";
    for (const auto& c : r.checks) {
        const bool near = c.relation == "near";
        const auto expected = near ? io::format_number(c.expected) : c.relation + " " + io::format_number(c.expected);
        std::cout << std::left << std::setw(38) << c.name << std::setw(16) << io::format_number(c.computed) << std::setw(16)
                  << expected << std::setw(10) << (near ? io::format_number(c.tolerance) : "-") << (c.pass ? "pass" : "FAIL")
                  << "\n";
    }
    std::cout << (r.ok() ? "all checks passed" : "some checks FAILED") << "\n";
}

int cmd_demo(const std::string& example, const std::string& json_path, std::size_t jobs) {
    Report r;
    if (example == "cube_sphere") r = demo_cube_sphere(jobs);
    else if (example == "ellipse") r = demo_ellipse(jobs);
    else if (example == "torus") r = demo_torus();
    else throw ValidationError("unknown demo '" + example + "' (cube_sphere, ellipse, torus)");
    print_table(r);
    if (!json_path.empty()) write_text(json_path, dump_json(report_to_json(r)));
    return r.ok() ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multidimensional persistent homology via half-plane slicing"};
    app.require_subcommand(1);
    set_warning_handler([](std::string_view msg) { std::cerr << "warning: " << msg << "\n"; });

    DiagramArgs da;
    auto* diag = app.add_subcommand("diagram", "persistence diagrams of one slice");
    diag->add_option("--input", da.input, "complex file (.mph text or .json)")->required();
    diag->add_option("--l", da.l, "direction, comma separated");
    diag->add_option("--b", da.b, "offset, comma separated (default 0)");
    diag->add_option("--component", da.component, "use component j (1-based) instead of a slice");
    diag->add_option("--degrees", da.degrees, "degree range a..b")->capture_default_str();
    diag->add_option("--prime", da.prime, "coefficient field Z/p")->capture_default_str();
    diag->add_option("--format", da.format, "json or csv")->capture_default_str();
    diag->add_option("--output", da.output, "output prefix; writes PREFIX_H<i>.json or PREFIX.csv");

    std::string su, sv;
    auto* slice = app.add_subcommand("slice", "admissible pair and parameters through (u, v)");
    slice->add_option("--u", su)->required();
    slice->add_option("--v", sv)->required();

    std::string ba, bb;
    int bdeg = -1;
    auto* bott = app.add_subcommand("bottleneck", "bottleneck distance between two diagram files");
    bott->add_option("a", ba, "diagram JSON")->required();
    bott->add_option("b", bb, "diagram JSON")->required();
    bott->add_option("--degree", bdeg, "degree to pick from multi-diagram files");

    MultidistArgs ma;
    auto* md = app.add_subcommand("multidist", "sampled lower bound of the multidimensional matching distance");
    md->add_option("--x", ma.x)->required();
    md->add_option("--y", ma.y)->required();
    md->add_option("--degree", ma.degree, "single degree");
    md->add_option("--degrees", ma.degrees, "degree range a..b")->capture_default_str();
    md->add_option("--directions", ma.directions)->capture_default_str();
    md->add_option("--offsets", ma.offsets)->capture_default_str();
    md->add_option("--offset-radius", ma.radius, "default: half the largest component range");
    md->add_option("--jobs", ma.jobs, "slice workers")->capture_default_str();
    md->add_option("--prime", ma.prime)->capture_default_str();
    md->add_option("--format", ma.format, "json or csv")->capture_default_str();
    md->add_option("--output", ma.output);

    DiagramArgs ca;
    auto* crit = app.add_subcommand("critical", "homological critical values of one slice");
    crit->add_option("--input", ca.input)->required();
    crit->add_option("--l", ca.l);
    crit->add_option("--b", ca.b);
    crit->add_option("--component", ca.component);
    crit->add_option("--degrees", ca.degrees)->capture_default_str();
    crit->add_option("--prime", ca.prime)->capture_default_str();
    crit->add_option("--output", ca.output);

    std::string example, demo_json;
    std::size_t demo_jobs = 1;
    auto* demo = app.add_subcommand("demo", "reproduce a worked example");
    demo->add_option("example", example, "cube_sphere | ellipse | torus")->required();
    demo->add_option("--json", demo_json, "write the JSON report here");
    demo->add_option("--jobs", demo_jobs)->capture_default_str();

    DumpArgs dump;
    auto* sh = app.add_subcommand("shapes", "mesh generators");
    sh->require_subcommand(1);
    auto* sdump = sh->add_subcommand("dump", "write a generated shape as a complex file");
    sdump->add_option("--kind", dump.kind, "cube_boundary | sphere | ellipse | torus")->capture_default_str();
    sdump->add_option("--resolution", dump.resolution, "0 = default");
    sdump->add_option("--minor-resolution", dump.minor, "torus only");
    sdump->add_option("--measuring", dump.measuring, "abs_uv | z_negz | ellipse_phi | ellipse_psi | e.g. x,-z,|y|");
    sdump->add_option("--format", dump.format, "mph or json")->capture_default_str();
    sdump->add_option("--output", dump.output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*diag) return cmd_diagram(da);
        if (*slice) return cmd_slice(su, sv);
        if (*bott) return cmd_bottleneck(ba, bb, bdeg);
        if (*md) return cmd_multidist(ma);
        if (*crit) return cmd_critical(ca);
        if (*demo) return cmd_demo(example, demo_json, demo_jobs);
        if (*sdump) return cmd_shapes_dump(dump);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
