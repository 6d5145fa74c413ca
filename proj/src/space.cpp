#include "catk/space.hpp"

#include <cmath>

namespace catk {

HPoint HyperbolicSpace::sample(Rng& rng) const {
    // Direction uniform on S^{n-1}, radius uniform in [0, sample_radius].
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> dir(static_cast<std::size_t>(dim), 0.0);
    double norm = 0.0;
    while (norm == 0.0) {
        for (double& d : dir) d = gauss(rng);
        norm = 0.0;
        for (double d : dir) norm += d * d;
        norm = std::sqrt(norm);
    }
    const double r = uniform(rng, 0.0, sample_radius);
    MinkowskiVec v(std::vector<double>(static_cast<std::size_t>(dim) + 1, 0.0));
    for (int i = 0; i < dim; ++i) v[static_cast<std::size_t>(i)] = std::sinh(r) * dir[static_cast<std::size_t>(i)] / norm;
    v[static_cast<std::size_t>(dim)] = std::cosh(r);
    return reproject(v);
}

ConvexSet<HyperbolicSpace> halfplane_set(const HyperbolicSpace& space, double phi) {
    if (space.dim != 2) throw DimMismatch("halfplane_set: H^2 only");
    // Rotate so the boundary geodesic is the first-axis line; the half-plane
    // is then {x_2 >= 0}, and the nearest boundary point drops the x_2
    // coordinate and rescales onto the sheet.
    const HIsometry to_frame = HIsometry::rotation(2, 0, 1, -phi);
    const HIsometry from_frame = HIsometry::rotation(2, 0, 1, phi);
    return {[to_frame](const HPoint& x) { return to_frame.apply(x)[1] >= -Tol::geo; },
            [to_frame, from_frame](const HPoint& x) {
                const HPoint y = to_frame.apply(x);
                if (y[1] >= 0.0) return x;
                return from_frame.apply(HPoint(rescale_to_sheet(MinkowskiVec{y[0], 0.0, y[2]})));
            },
            "halfplane"};
}

}  // namespace catk
