// Rank of the two-parameter sublevel inclusion on a small sphere, computed on
// the slice through (u, v), plus the slice's degree-1 diagram.
#include <iostream>

#include "mph/mph.hpp"

int main() {
    using namespace mph;
    const auto sphere = shapes::generate({shapes::Kind::sphere, 2});
    const auto f = shapes::measuring(shapes::Measuring::abs_uv, sphere.coords);

    const ParameterPoint p({0.75, 0.75}, {0.95, 0.95});
    const auto sp = pair_through(p);
    std::cout << "slice l = (" << sp.pair.l()[0] << ", " << sp.pair.l()[1] << "), s = " << sp.s << ", t = " << sp.t << "\n";
    for (int i = 0; i <= 2; ++i) std::cout << "rank H" << i << " = " << multidim_rank(sphere.complex, f, p, i) << "\n";

    const auto ds = diagram(sphere.complex, reduce(f, sp.pair), 2);
    for (const auto& pt : ds[1].points())
        std::cout << "H1 point (" << pt.birth << ", " << pt.death << ") x" << pt.multiplicity << "\n";
}
