#include "catk/fixpoint.hpp"

#include <algorithm>
#include <cmath>

namespace catk {

namespace {

template <typename S, typename P>
double window_radius(const S& space, const std::vector<P>& window, const P& y) {
    double m = 0.0;
    for (const P& w : window) m = std::max(m, space.distance(y, w));
    return m;
}

template <typename S, typename P>
double window_diameter(const S& space, const std::vector<P>& window) {
    double d = 0.0;
    for (std::size_t i = 0; i < window.size(); ++i)
        for (std::size_t j = i + 1; j < window.size(); ++j)
            d = std::max(d, space.distance(window[i], window[j]));
    return d;
}

}  // namespace

namespace {

// Point equidistant from three hyperboloid points: the Minkowski-orthogonal
// complement of span(a-b, b-c), when it is timelike.
std::optional<HPoint> circumcenter_h2(const HPoint& a, const HPoint& b, const HPoint& c) {
    const MinkowskiVec u = a.vec() - b.vec();
    const MinkowskiVec v = b.vec() - c.vec();
    // J (u x v) is form-orthogonal to both u and v
    MinkowskiVec w{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], -(u[0] * v[1] - u[1] * v[0])};
    const double q = -mink_form(w, w);
    if (!(q > 1e-24)) return std::nullopt;  // equidistant locus misses the sheet
    if (w[2] < 0.0) w.scale(-1.0);
    w.scale(1.0 / std::sqrt(q));
    return HPoint(std::move(w));
}

// Direct search with shrinking steps: tangent-axis pattern moves plus a
// subgradient move toward the farthest point. Fallback for n > 2, where the
// support enumeration below is not implemented.
AsymCenterResult<HPoint> center_direct_search(const HyperbolicSpace& space,
                                              const std::vector<HPoint>& window, double tol, double diam) {
    HPoint y = window[0];
    double fy = window_radius(space, window, y);
    for (const HPoint& w : window) {
        const double fw = window_radius(space, window, w);
        if (fw < fy) {
            y = w;
            fy = fw;
        }
    }
    double h = std::max(0.5 * diam, 4.0 * tol);
    while (h >= tol) {
        bool moved = false;
        HPoint best = y;
        double fbest = fy;
        auto consider = [&](const HPoint& cand) {
            const double fc = window_radius(space, window, cand);
            if (fc < fbest) {
                fbest = fc;
                best = cand;
                moved = true;
            }
        };
        std::size_t far = 0;
        double dfar = -1.0;
        for (std::size_t i = 0; i < window.size(); ++i) {
            const double d = hdist(y, window[i]);
            if (d > dfar) {
                dfar = d;
                far = i;
            }
        }
        if (dfar > 0.0) consider(geodesic_point(y, window[far], std::min(h, dfar)));
        for (const MinkowskiVec& dir : tangent_basis(y)) {
            for (double sign : {1.0, -1.0}) {
                MinkowskiVec d = dir;
                d.scale(sign);
                consider(HTangent(y, std::move(d)).at(h));
            }
        }
        if (moved) {
            y = best;
            fy = fbest;
        } else {
            h *= 0.5;
        }
    }
    return {y, fy, static_cast<int>(window.size())};
}

}  // namespace

AsymCenterResult<HPoint> asymptotic_center(const HyperbolicSpace& space, const std::vector<HPoint>& window,
                                           double tol, double diameter_budget) {
    if (window.empty()) throw DomainError("asymptotic_center: empty window");
    const double diam = window_diameter(space, window);
    if (diam > diameter_budget) throw DomainError("asymptotic_center: window diameter exceeds budget");
    if (diam == 0.0) return {window[0], 0.0, static_cast<int>(window.size())};
    if (space.dim != 2) return center_direct_search(space, window, tol, diam);

    // In two dimensions the minimax center is supported by at most three
    // window points, so pair midpoints and triple circumcenters enumerate
    // every candidate exactly. Gradient-free searches stall on the kinks of
    // the max-distance function; this does not.
    HPoint best = window[0];
    double fbest = window_radius(space, window, best);
    auto consider = [&](const HPoint& cand) {
        const double fc = window_radius(space, window, cand);
        if (fc < fbest) {
            fbest = fc;
            best = cand;
        }
    };
    for (std::size_t i = 0; i < window.size(); ++i)
        for (std::size_t j = i + 1; j < window.size(); ++j) {
            const double d = hdist(window[i], window[j]);
            if (d > 0.0) consider(geodesic_point(window[i], window[j], 0.5 * d));
            for (std::size_t k = j + 1; k < window.size(); ++k)
                if (const auto cc = circumcenter_h2(window[i], window[j], window[k])) consider(*cc);
        }
    return {best, fbest, static_cast<int>(window.size())};
}

AsymCenterResult<TreePoint> asymptotic_center(const TreeSpace& space, const std::vector<TreePoint>& window,
                                              double tol, double diameter_budget) {
    if (window.empty()) throw DomainError("asymptotic_center: empty window");
    std::size_t bi = 0, bj = 0;
    double diam = 0.0;
    for (std::size_t i = 0; i < window.size(); ++i)
        for (std::size_t j = i + 1; j < window.size(); ++j) {
            const double d = space.distance(window[i], window[j]);
            if (d > diam) {
                diam = d;
                bi = i;
                bj = j;
            }
        }
    if (diam > diameter_budget) throw DomainError("asymptotic_center: window diameter exceeds budget");
    if (diam == 0.0) return {window[0], 0.0, static_cast<int>(window.size())};

    // In a tree the minimax center is the midpoint of a diametral pair.
    const TreePoint center = space.point_at(window[bi], window[bj], 0.5 * diam);
    const double radius = window_radius(space, window, center);
    if (radius > 0.5 * diam + std::max(tol, 1e-9))
        throw DriftError("asymptotic_center: tree center radius exceeds half the diameter");
    return {center, radius, static_cast<int>(window.size())};
}

AsymCenterResult<PlanePoint> asymptotic_center(const PlaneSpace& space, const std::vector<PlanePoint>& window,
                                               double tol, double diameter_budget) {
    if (window.empty()) throw DomainError("asymptotic_center: empty window");
    const double diam = window_diameter(space, window);
    if (diam > diameter_budget) throw DomainError("asymptotic_center: window diameter exceeds budget");
    if (diam == 0.0) return {window[0], 0.0, static_cast<int>(window.size())};
    (void)tol;

    // same support enumeration as on H^2: pair midpoints, triple circumcenters
    PlanePoint best = window[0];
    double fbest = window_radius(space, window, best);
    auto consider = [&](const PlanePoint& cand) {
        const double fc = window_radius(space, window, cand);
        if (fc < fbest) {
            fbest = fc;
            best = cand;
        }
    };
    for (std::size_t i = 0; i < window.size(); ++i)
        for (std::size_t j = i + 1; j < window.size(); ++j) {
            const PlanePoint &a = window[i], &b = window[j];
            consider({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
            for (std::size_t k = j + 1; k < window.size(); ++k) {
                const PlanePoint& c = window[k];
                const double den =
                    2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
                if (std::abs(den) < 1e-14) continue;  // collinear
                const double a2 = a.x * a.x + a.y * a.y, b2 = b.x * b.x + b.y * b.y,
                             c2 = c.x * c.x + c.y * c.y;
                consider({(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / den,
                          (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / den});
            }
        }
    return {best, fbest, static_cast<int>(window.size())};
}

AsymCenterResult<HPoint> asymptotic_center(const ScaledHyperbolicSpace& space,
                                           const std::vector<HPoint>& window, double tol,
                                           double diameter_budget) {
    // Same minimizer as in the underlying hyperbolic metric; only the radius
    // rescales.
    auto res = asymptotic_center(space.h, window, tol * space.unit(), diameter_budget * space.unit());
    res.radius /= space.unit();
    return res;
}

}  // namespace catk
