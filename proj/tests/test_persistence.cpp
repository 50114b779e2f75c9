#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mph/distance.hpp"
#include "mph/persistence.hpp"
#include "mph/shapes.hpp"
#include "oracles.hpp"

using namespace mph;

namespace {

constexpr double kMesh = 0.02;

struct SliceDiagrams {
    std::vector<PersistenceDiagram> cube, sphere;
};

const SliceDiagrams& central_slice() {
    static const SliceDiagrams d = [] {
        const auto pair = make_admissible(std::vector<double>{1, 1}, std::vector<double>{0, 0});
        auto cube = shapes::generate({shapes::Kind::cube_boundary});
        auto sphere = shapes::generate({shapes::Kind::sphere});
        return SliceDiagrams{
            diagram(cube.complex, reduce(shapes::measuring(shapes::Measuring::abs_uv, cube.coords), pair), 2),
            diagram(sphere.complex, reduce(shapes::measuring(shapes::Measuring::abs_uv, sphere.coords), pair), 2)};
    }();
    return d;
}

SimplicialComplex hollow_triangle() {
    return SimplicialComplex::from_simplices(3, std::vector<Simplex>{{0, 1}, {1, 2}, {0, 2}});
}

} // namespace

TEST(Diagram, SingleVertex) {
    auto K = SimplicialComplex::from_simplices(1, std::vector<Simplex>{});
    auto ds = diagram(K, ScalarFiltration({0.0}), 0);
    ASSERT_EQ(ds.size(), 1u);
    ASSERT_EQ(ds[0].points().size(), 1u);
    EXPECT_EQ(ds[0].points()[0], (DiagramPoint{0.0, kInfinity, 1}));
}

TEST(Diagram, ClampsDegreeAboveDimension) {
    std::string captured;
    auto previous = set_warning_handler([&](std::string_view m) { captured = m; });
    auto K = SimplicialComplex::from_simplices(1, std::vector<Simplex>{});
    auto ds = diagram(K, ScalarFiltration({0.0}), 3);
    set_warning_handler(previous);
    EXPECT_EQ(ds.size(), 1u);
    EXPECT_NE(captured.find("clamped"), std::string::npos);
    EXPECT_TRUE(diagram_in_degree(ds, 2).empty());
}

TEST(Diagram, HollowTriangleIsACircle) {
    auto ds = diagram(hollow_triangle(), ScalarFiltration({0.0, 0.0, 0.0}), 1);
    ASSERT_EQ(ds.size(), 2u);
    EXPECT_EQ(ds[0].points(), (std::vector<DiagramPoint>{{0.0, kInfinity, 1}}));
    EXPECT_EQ(ds[1].points(), (std::vector<DiagramPoint>{{0.0, kInfinity, 1}}));
}

TEST(Diagram, RejectsNonPrimeField) {
    EXPECT_THROW(diagram(hollow_triangle(), ScalarFiltration({0, 0, 0}), 1, 4), ValidationError);
    EXPECT_THROW(diagram(hollow_triangle(), ScalarFiltration({0, 0, 0}), 1, 1), ValidationError);
}

TEST(Diagram, CubeCentralSlice) {
    const auto& d = central_slice().cube;
    ASSERT_EQ(d.size(), 3u);
    ASSERT_EQ(d[0].total_multiplicity(), 2u);
    EXPECT_NEAR(d[0].points()[0].birth, 0.0, kMesh);
    EXPECT_NEAR(d[0].points()[0].death, std::numbers::sqrt2, kMesh);
    EXPECT_TRUE(d[0].points()[1].essential());
    EXPECT_TRUE(d[1].empty());
    ASSERT_EQ(d[2].points().size(), 1u);
    EXPECT_NEAR(d[2].points()[0].birth, std::numbers::sqrt2, kMesh);
    EXPECT_TRUE(d[2].points()[0].essential());
}

TEST(Diagram, SphereCentralSlice) {
    const auto& d = central_slice().sphere;
    ASSERT_EQ(d[0].points().size(), 2u);
    EXPECT_NEAR(d[0].points()[0].death, 1.0, kMesh);
    ASSERT_EQ(d[1].points().size(), 1u);
    EXPECT_EQ(d[1].points()[0].multiplicity, 3u);
    EXPECT_NEAR(d[1].points()[0].birth, 1.0, kMesh);
    EXPECT_NEAR(d[1].points()[0].death, std::numbers::sqrt2, kMesh);
}

TEST(RankAt, CubeTable) {
    const auto& d0 = central_slice().cube[0];
    EXPECT_EQ(rank_at(d0, 0.5, 1.0), 2u);
    EXPECT_EQ(rank_at(d0, 0.5, 1.5), 1u);
    EXPECT_EQ(rank_at(d0, -1.0, 0.5), 0u);
    EXPECT_THROW(rank_at(d0, 1.0, 1.0), ValidationError);
}

TEST(RankAt, MonotoneInBothArguments) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        auto K = oracle::random_complex(rng, 10);
        auto g = ScalarFiltration::from_function(oracle::random_function(rng, 10, 1));
        for (const auto& d : diagram(K, g, 2)) {
            for (int q = 0; q < 20; ++q) {
                double s = val(rng), t = val(rng);
                if (s > t) std::swap(s, t);
                if (s == t) continue;
                const double t2 = t + 0.3, s2 = s + (t - s) / 2;
                EXPECT_GE(rank_at(d, s, t), rank_at(d, s, t2));
                EXPECT_LE(rank_at(d, s, t), rank_at(d, s2, t));
            }
        }
    }
}

TEST(Reduction, PairingAccountsForEverySimplex) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        auto K = oracle::random_complex(rng, 11);
        auto g = ScalarFiltration::from_function(oracle::random_function(rng, 11, 1));
        auto filt = filtration_order(K, g);
        auto pairing = reduce_filtration(K, filt.order);
        std::size_t paired = 0, essential = 0;
        for (std::size_t k = 0; k < pairing.partner.size(); ++k) {
            const auto p = pairing.partner[k];
            if (p == FiltrationPairing::npos) {
                ++essential;
            } else {
                ++paired;
                EXPECT_EQ(pairing.partner[p], k);
                EXPECT_EQ(pairing.dims[p], pairing.dims[k] + (p > k ? 1 : -1));
            }
        }
        EXPECT_EQ(paired + essential, K.size());
        // essential classes are the Betti numbers
        auto ds = diagram(K, g, K.dimension());
        long long chi = 0;
        for (const auto& d : ds) {
            EXPECT_EQ(d.essential_count(), oracle::betti_gf2(K, d.degree())) << "degree " << d.degree();
            chi += (d.degree() % 2 ? -1 : 1) * static_cast<long long>(d.essential_count());
        }
        EXPECT_EQ(chi, K.euler_characteristic());
    }
}

TEST(Reduction, FiltrationOrderIsFaceRespecting) {
    std::mt19937_64 rng(4);
    auto K = oracle::random_complex(rng, 12);
    auto g = ScalarFiltration::from_function(oracle::random_function(rng, 12, 1));
    auto filt = filtration_order(K, g);
    std::vector<std::size_t> pos(K.size());
    for (std::size_t k = 0; k < filt.order.size(); ++k) pos[filt.order[k]] = k;
    for (std::size_t k = 1; k < filt.values.size(); ++k) EXPECT_LE(filt.values[k - 1], filt.values[k]);
    for (std::size_t i = 0; i < K.size(); ++i) {
        const auto& s = K[i];
        if (s.size() < 2) continue;
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
            Simplex f;
            for (std::size_t j = 0; j < s.size(); ++j)
                if (j != drop) f.push_back(s[j]);
            EXPECT_LT(pos[*K.index_of(f)], pos[i]);
        }
    }
}

TEST(Reduction, EulerCharacteristicOfShapes) {
    auto euler_from_classes = [](const shapes::Shape& sh) {
        auto ds = diagram(sh.complex, ScalarFiltration(std::vector<double>(sh.coords.size(), 0.0)), sh.complex.dimension());
        long long chi = 0;
        for (const auto& d : ds) chi += (d.degree() % 2 ? -1 : 1) * static_cast<long long>(d.essential_count());
        return chi;
    };
    EXPECT_EQ(euler_from_classes(shapes::generate({shapes::Kind::cube_boundary, 4})), 2);
    EXPECT_EQ(euler_from_classes(shapes::generate({shapes::Kind::torus, 16})), 0);
    EXPECT_EQ(euler_from_classes(shapes::generate({shapes::Kind::ellipse, 16})), 0);
}

TEST(Reduction, OddPrimeAgreesOnTorsionFreeComplexes) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        auto K = oracle::random_complex(rng, 9);
        auto g = ScalarFiltration::from_function(oracle::random_function(rng, 9, 1));
        // degree 0 has no torsion, so the field cannot matter
        EXPECT_EQ(diagram(K, g, 0, 2), diagram(K, g, 0, 3));
        EXPECT_EQ(diagram(K, g, 0, 2), diagram(K, g, 0, 7));
    }
    auto torus = shapes::generate({shapes::Kind::torus, 16});
    auto z = ScalarFiltration::from_function(shapes::measuring("z", torus.coords));
    EXPECT_EQ(diagram(torus.complex, z, 2, 2), diagram(torus.complex, z, 2, 5));
}

TEST(MultidimRank, SphereTwoCaps) {
    auto sphere = shapes::generate({shapes::Kind::sphere});
    auto f = shapes::measuring(shapes::Measuring::abs_uv, sphere.coords);
    EXPECT_EQ(multidim_rank(sphere.complex, f, ParameterPoint({0.3, 0.3}, {0.6, 0.6}), 0), 2u);
    EXPECT_EQ(multidim_rank(sphere.complex, f, ParameterPoint({-0.5, -0.5}, {0.6, 0.6}), 0), 0u);
}

TEST(MultidimRank, MatchesOracleOnRandomComplexes) {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> val(-1.0, 1.0), gap(0.01, 1.2);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t vertices = 3 + trial % 8;
        auto K = oracle::random_complex(rng, vertices);
        auto f = oracle::random_function(rng, vertices, 2);
        std::vector<double> u{val(rng), val(rng)};
        std::vector<double> v{u[0] + gap(rng), u[1] + gap(rng)};
        ParameterPoint p(u, v);
        for (int i = 0; i <= 2; ++i) {
            const auto rank = multidim_rank(K, f, p, i);
            ASSERT_EQ(rank, rank_oracle(K, f, p, i)) << "trial " << trial << " degree " << i;
            if (i == 0) {
                ASSERT_EQ(rank, oracle::h0_map_rank(sublevel_complex(K, f, u), sublevel_complex(K, f, v)));
            }
        }
    }
}

TEST(RankOracle, SmallCases) {
    // two vertices joined by an edge present only in B
    auto K = SimplicialComplex::from_simplices(3, std::vector<Simplex>{{0, 1}});
    MeasuringFunction f(2, {0.0, 0.0, 0.0, 0.0, 5.0, 5.0});
    // vertex 2 sits at (5, 5), outside both sublevel sets
    EXPECT_EQ(rank_oracle(K, f, ParameterPoint({0.5, 0.5}, {1.0, 1.0}), 0), 1u);

    // A empty
    EXPECT_EQ(rank_oracle(K, f, ParameterPoint({-2.0, -2.0}, {1.0, 1.0}), 0), 0u);

    // A = B: rank is the Betti number of A
    auto circle = hollow_triangle();
    MeasuringFunction g(1, {0.0, 0.0, 0.0});
    EXPECT_EQ(rank_oracle(circle, g, ParameterPoint({0.5}, {0.6}), 1), 1u);
    EXPECT_EQ(rank_oracle(circle, g, ParameterPoint({0.5}, {0.6}), 0), 1u);
}

TEST(RankOracle, MergingComponents) {
    // vertices 0 and 1 are disjoint in A and merge in B through vertex 2 at (0, 1)
    auto K3 = SimplicialComplex::from_simplices(3, std::vector<Simplex>{{0, 2}, {1, 2}});
    MeasuringFunction f3(2, {0.0, 0.0, 0.0, 0.0, 0.0, 1.0});
    EXPECT_EQ(rank_oracle(K3, f3, ParameterPoint({0.5, 0.5}, {1.0, 1.5}), 0), 1u);
    EXPECT_EQ(multidim_rank(K3, f3, ParameterPoint({0.5, 0.5}, {1.0, 1.5}), 0), 1u);
    // before the merge both components survive
    EXPECT_EQ(rank_oracle(K3, f3, ParameterPoint({0.5, 0.5}, {0.6, 0.6}), 0), 2u);
}

TEST(CriticalValues, CubeAndSphere) {
    const auto cube = homological_critical_values(central_slice().cube);
    ASSERT_EQ(cube.size(), 2u);
    EXPECT_NEAR(cube[0].value, 0.0, kMesh);
    EXPECT_EQ(cube[0].degrees, std::vector<int>{0});
    EXPECT_NEAR(cube[1].value, std::numbers::sqrt2, kMesh);
    EXPECT_EQ(cube[1].degrees, (std::vector<int>{0, 2}));

    const auto sphere = homological_critical_values(central_slice().sphere);
    ASSERT_EQ(sphere.size(), 3u);
    EXPECT_NEAR(sphere[0].value, 0.0, kMesh);
    EXPECT_EQ(sphere[0].degrees, std::vector<int>{0});
    EXPECT_NEAR(sphere[1].value, 1.0, kMesh);
    EXPECT_EQ(sphere[1].degrees, (std::vector<int>{0, 1}));
    EXPECT_NEAR(sphere[2].value, std::numbers::sqrt2, kMesh);
    EXPECT_EQ(sphere[2].degrees, (std::vector<int>{1, 2}));

    EXPECT_TRUE(homological_critical_values(std::vector<PersistenceDiagram>{}).empty());
}

TEST(Restricted, NoRestrictionIsPlainDiagram) {
    auto torus = shapes::generate({shapes::Kind::torus});
    auto f = shapes::measuring(shapes::Measuring::z_negz, torus.coords);
    auto z = ScalarFiltration::from_function(f.component(0));
    auto negz = ScalarFiltration::from_function(f.component(1));
    EXPECT_EQ(restricted_diagram(torus.complex, z, negz, 10.0, 2), diagram(torus.complex, z, 2));
}

TEST(Restricted, TorusEssentiality) {
    auto torus = shapes::generate({shapes::Kind::torus});
    auto f = shapes::measuring(shapes::Measuring::z_negz, torus.coords);
    auto z = ScalarFiltration::from_function(f.component(0));
    auto negz = ScalarFiltration::from_function(f.component(1));

    const auto full = diagram(torus.complex, z, 2);
    bool birth_at_two = false;
    for (const auto& p : full[1].points()) birth_at_two |= std::abs(p.birth - 2.0) < 0.05;
    EXPECT_TRUE(birth_at_two);

    const auto restricted = restricted_diagram(torus.complex, z, negz, 1.0, 2);
    bool cornerpoint = false;
    for (const auto& p : restricted[0].points())
        cornerpoint |= !p.essential() && std::abs(p.birth + 1.0) < 0.05 && std::abs(p.death - 2.0) < 0.05;
    EXPECT_TRUE(cornerpoint);
}

TEST(DiagramType, MergesAndDropsDiagonal) {
    PersistenceDiagram d(1, {{0.0, 1.0, 1}, {0.5, 0.5, 2}, {0.0, 1.0, 2}, {2.0, kInfinity, 1}});
    ASSERT_EQ(d.points().size(), 2u);
    EXPECT_EQ(d.points()[0].multiplicity, 3u);
    EXPECT_THROW(PersistenceDiagram(0, {{1.0, 0.0, 1}}), ValidationError);
    EXPECT_THROW(PersistenceDiagram(0, {{0.0, 1.0, 0}}), ValidationError);
}

TEST(Stability, DiagramMovesByAtMostPerturbation) {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> noise(-1.0, 1.0), mag(0.0, 0.3);
    for (int trial = 0; trial < 60; ++trial) {
        auto K = oracle::random_complex(rng, 10);
        auto base = oracle::random_function(rng, 10, 1);
        const double eps = mag(rng);
        auto values = base.values();
        for (auto& x : values) x += eps * noise(rng);
        auto g1 = ScalarFiltration::from_function(base);
        auto g2 = ScalarFiltration(values);
        auto d1 = diagram(K, g1, 2), d2 = diagram(K, g2, 2);
        for (std::size_t i = 0; i < d1.size(); ++i) EXPECT_LE(bottleneck(d1[i], d2[i]), eps + 1e-12);
    }
}
