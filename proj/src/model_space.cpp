#include "catk/model_space.hpp"

#include <cmath>

namespace catk {

double mk_dist(Kappa kappa, const HPoint& x, const HPoint& y) {
    if (kappa.flat()) throw DomainError("mk_dist: kappa = 0 has no hyperboloid carrier, use planar distance");
    return hdist(x, y) / std::sqrt(-kappa.value);
}

TriangleSpec::TriangleSpec(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {
    if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0)) throw DomainError("TriangleSpec: sides must be positive");
    const double slack = 1e-12 * std::max({1.0, a, b, c});
    if (a > b + c + slack || b > a + c + slack || c > a + b + slack)
        throw DomainError("TriangleSpec: triangle inequality violated");
}

double TriangleSpec::side(Side s) const {
    switch (s) {
        case Side::YZ: return a;
        case Side::ZX: return b;
        default: return c;
    }
}

namespace {

double law_of_cosines_angle(double adj1, double adj2, double opp) {
    if (adj1 < Tol::geo || adj2 < Tol::geo) throw DomainError("comparison_angle: degenerate vertex");
    return std::acos(clamp_cos((adj1 * adj1 + adj2 * adj2 - opp * opp) / (2.0 * adj1 * adj2)));
}

double hyperbolic_angle(double adj1, double adj2, double opp) {
    if (adj1 < Tol::geo || adj2 < Tol::geo) throw DomainError("vertex_angle: degenerate vertex");
    const double cosa =
        (std::cosh(adj1) * std::cosh(adj2) - std::cosh(opp)) / (std::sinh(adj1) * std::sinh(adj2));
    return std::acos(clamp_cos(cosa));
}

// Sides adjacent to a vertex and the side opposite it.
void vertex_sides(const TriangleSpec& spec, Vertex v, double& adj1, double& adj2, double& opp) {
    switch (v) {
        case Vertex::X: adj1 = spec.b; adj2 = spec.c; opp = spec.a; break;
        case Vertex::Y: adj1 = spec.a; adj2 = spec.c; opp = spec.b; break;
        default: adj1 = spec.a; adj2 = spec.b; opp = spec.c; break;
    }
}

}  // namespace

double comparison_angle(const TriangleSpec& spec, Vertex at) {
    double adj1, adj2, opp;
    vertex_sides(spec, at, adj1, adj2, opp);
    return law_of_cosines_angle(adj1, adj2, opp);
}

ComparisonTriangle::ComparisonTriangle(Kappa kappa, TriangleSpec spec)
    : kappa_(kappa),
      spec_(spec),
      curved_{HPoint::base(2), HPoint::base(2), HPoint::base(2)} {
    // Canonical pose: x at the base point, y at arc c along the first axis,
    // z at arc b in direction of the vertex angle at x.
    const double alpha_x = kappa.flat()
                               ? law_of_cosines_angle(spec_.b, spec_.c, spec_.a)
                               : hyperbolic_angle(spec_.b * std::sqrt(-kappa.value),
                                                  spec_.c * std::sqrt(-kappa.value),
                                                  spec_.a * std::sqrt(-kappa.value));
    if (kappa.flat()) {
        flat_[0] = {0.0, 0.0};
        flat_[1] = {spec_.c, 0.0};
        flat_[2] = {spec_.b * std::cos(alpha_x), spec_.b * std::sin(alpha_x)};
    } else {
        unit_ = std::sqrt(-kappa.value);
        curved_[0] = HPoint::base(2);
        curved_[1] = HPoint::polar(spec_.c * unit_, 0.0);
        curved_[2] = HPoint::polar(spec_.b * unit_, alpha_x);
    }
    // The realization must reproduce the requested side lengths.
    const double ra = dist(vertex(Vertex::Y), vertex(Vertex::Z));
    const double rb = dist(vertex(Vertex::Z), vertex(Vertex::X));
    const double rc = dist(vertex(Vertex::X), vertex(Vertex::Y));
    const double scale = std::max({1.0, spec_.a, spec_.b, spec_.c});
    if (std::abs(ra - spec_.a) > 1e-9 * scale || std::abs(rb - spec_.b) > 1e-9 * scale ||
        std::abs(rc - spec_.c) > 1e-9 * scale)
        throw DriftError("ComparisonTriangle: realization failed to reproduce side lengths");
}

ComparisonTriangle::ModelPoint ComparisonTriangle::vertex(Vertex v) const {
    const int i = static_cast<int>(v);
    if (kappa_.flat()) return flat_[static_cast<std::size_t>(i)];
    return curved_[static_cast<std::size_t>(i)];
}

double ComparisonTriangle::vertex_angle(Vertex v) const {
    double adj1, adj2, opp;
    vertex_sides(spec_, v, adj1, adj2, opp);
    if (kappa_.flat()) return law_of_cosines_angle(adj1, adj2, opp);
    return hyperbolic_angle(adj1 * unit_, adj2 * unit_, opp * unit_);
}

std::pair<int, int> ComparisonTriangle::side_ends(Side s) const {
    switch (s) {
        case Side::YZ: return {1, 2};
        case Side::ZX: return {2, 0};
        default: return {0, 1};
    }
}

ComparisonTriangle::ModelPoint ComparisonTriangle::point_on_side(Side s, double arc) const {
    const double len = spec_.side(s);
    if (arc < -Tol::geo || arc > len + Tol::geo) throw DomainError("point_on_side: arc outside side");
    const auto [i, j] = side_ends(s);
    if (kappa_.flat()) {
        const PlanePoint& p = flat_[static_cast<std::size_t>(i)];
        const PlanePoint& q = flat_[static_cast<std::size_t>(j)];
        const double t = (len == 0.0) ? 0.0 : std::clamp(arc / len, 0.0, 1.0);
        return PlanePoint{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
    }
    const double s_h = std::clamp(arc, 0.0, len) * unit_;
    return geodesic_point(curved_[static_cast<std::size_t>(i)], curved_[static_cast<std::size_t>(j)], s_h);
}

double ComparisonTriangle::dist(const ModelPoint& p, const ModelPoint& q) const {
    if (kappa_.flat()) {
        const auto& a = std::get<PlanePoint>(p);
        const auto& b = std::get<PlanePoint>(q);
        return std::hypot(a.x - b.x, a.y - b.y);
    }
    return hdist(std::get<HPoint>(p), std::get<HPoint>(q)) / unit_;
}

}  // namespace catk
