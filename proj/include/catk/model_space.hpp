#pragma once

#include <array>
#include <variant>

#include "catk/space.hpp"

namespace catk {

/// Curvature bound; only kappa <= 0 is admitted.
struct Kappa {
    double value = 0.0;

    explicit Kappa(double v) : value(v) {
        if (!(v <= 0.0)) throw DomainError("Kappa: positive curvature bound rejected");
    }
    bool flat() const { return value == 0.0; }
};

/// Distance in M^2_kappa between hyperboloid points, kappa < 0: the
/// hyperbolic distance multiplied by 1/sqrt(-kappa).
double mk_dist(Kappa kappa, const HPoint& x, const HPoint& y);

enum class Vertex { X, Y, Z };
enum class Side { YZ, ZX, XY };  // side a is YZ (opposite x), b is ZX, c is XY

/// Side lengths a, b, c labeled opposite to the vertices x, y, z.
struct TriangleSpec {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    TriangleSpec(double a_, double b_, double c_);
    double side(Side s) const;
};

/// Euclidean comparison angle at a vertex, from the planar law of cosines.
double comparison_angle(const TriangleSpec& spec, Vertex at);

/// Location on a triangle side: arc distance from the side's first vertex
/// (YZ runs y->z, ZX runs z->x, XY runs x->y).
struct ComparisonPoint {
    Side side = Side::XY;
    double arc = 0.0;
};

/// Triangle with the given side lengths realized in M^2_kappa, in canonical
/// pose: x at the model base point, y on the first axis, z in the upper half.
class ComparisonTriangle {
public:
    using ModelPoint = std::variant<PlanePoint, HPoint>;

    ComparisonTriangle(Kappa kappa, TriangleSpec spec);

    Kappa kappa() const { return kappa_; }
    const TriangleSpec& spec() const { return spec_; }

    ModelPoint vertex(Vertex v) const;
    double vertex_angle(Vertex v) const;  // by the kappa-appropriate cosine law

    /// Comparison point: the point of the given side at arc `arc` from the
    /// side's first vertex (YZ runs y->z, ZX runs z->x, XY runs x->y).
    ModelPoint point_on_side(Side s, double arc) const;
    ModelPoint realize(const ComparisonPoint& p) const { return point_on_side(p.side, p.arc); }

    /// Model-space distance between two realized points.
    double dist(const ModelPoint& p, const ModelPoint& q) const;

private:
    Kappa kappa_;
    TriangleSpec spec_;
    std::array<PlanePoint, 3> flat_{};
    std::array<HPoint, 3> curved_;
    double unit_ = 1.0;  // hyperbolic arc per model arc, sqrt(-kappa)

    std::pair<int, int> side_ends(Side s) const;
};

/// Realize a comparison triangle in M^2_kappa (canonical pose).
inline ComparisonTriangle place_comparison(Kappa kappa, const TriangleSpec& spec) {
    return ComparisonTriangle(kappa, spec);
}

struct CatCheckReport {
    std::string triangle_id;
    long samples = 0;
    double max_violation = -1.0;
    bool pass = true;
};

/// Sample pairs on the edges of a space triangle and compare against the
/// comparison triangle in M^2_kappa: rho(p,q) <= d(p_bar,q_bar) + tol.
/// Positions are stratified over each edge pair and both endpoints are
/// always included.
template <GeodesicSpaceLike S>
CatCheckReport cat_check(const S& space, const std::array<typename S::Point, 3>& tri, Kappa kappa,
                         long samples, uint64_t seed, double tol = Tol::cat,
                         const std::string& id = "triangle") {
    const double lxy = space.distance(tri[0], tri[1]);
    const double lyz = space.distance(tri[1], tri[2]);
    const double lzx = space.distance(tri[2], tri[0]);
    TriangleSpec spec(lyz, lzx, lxy);
    ComparisonTriangle cmp(kappa, spec);

    const std::array<std::pair<int, int>, 3> ends = {{{1, 2}, {2, 0}, {0, 1}}};
    const std::array<Side, 3> sides = {Side::YZ, Side::ZX, Side::XY};
    const std::array<double, 3> lens = {lyz, lzx, lxy};

    CatCheckReport rep;
    rep.triangle_id = id;
    Rng rng(seed);

    // Stratified arc positions per edge, endpoints always present.
    const long strata = std::max<long>(1, (samples - 36) / 9);
    std::array<std::vector<double>, 3> pos;
    for (int e = 0; e < 3; ++e) {
        auto& v = pos[static_cast<std::size_t>(e)];
        const double len = lens[static_cast<std::size_t>(e)];
        v.push_back(0.0);
        v.push_back(len);
        for (long b = 0; b < strata; ++b)
            v.push_back(len * ((static_cast<double>(b) + uniform(rng, 0.0, 1.0)) / static_cast<double>(strata)));
    }

    auto check_pair = [&](int e1, double s1, int e2, double s2) {
        const auto p = space.point_at(tri[static_cast<std::size_t>(ends[static_cast<std::size_t>(e1)].first)],
                                      tri[static_cast<std::size_t>(ends[static_cast<std::size_t>(e1)].second)], s1);
        const auto q = space.point_at(tri[static_cast<std::size_t>(ends[static_cast<std::size_t>(e2)].first)],
                                      tri[static_cast<std::size_t>(ends[static_cast<std::size_t>(e2)].second)], s2);
        const double rho = space.distance(p, q);
        const double dbar = cmp.dist(cmp.point_on_side(sides[static_cast<std::size_t>(e1)], s1),
                                     cmp.point_on_side(sides[static_cast<std::size_t>(e2)], s2));
        const double viol = rho - dbar;
        rep.max_violation = std::max(rep.max_violation, viol);
        if (viol > tol) rep.pass = false;
        ++rep.samples;
    };

    for (int e1 = 0; e1 < 3 && rep.samples < samples; ++e1)
        for (int e2 = 0; e2 < 3 && rep.samples < samples; ++e2)
            for (int i = 0; i < 2 && rep.samples < samples; ++i)
                for (int j = 0; j < 2 && rep.samples < samples; ++j)
                    check_pair(e1, pos[static_cast<std::size_t>(e1)][static_cast<std::size_t>(i)], e2,
                               pos[static_cast<std::size_t>(e2)][static_cast<std::size_t>(j)]);

    std::uniform_int_distribution<int> edge_pick(0, 2);
    while (rep.samples < samples) {
        const int e1 = edge_pick(rng);
        const int e2 = edge_pick(rng);
        const auto& p1 = pos[static_cast<std::size_t>(e1)];
        const auto& p2 = pos[static_cast<std::size_t>(e2)];
        std::uniform_int_distribution<std::size_t> i1(0, p1.size() - 1), i2(0, p2.size() - 1);
        check_pair(e1, p1[i1(rng)], e2, p2[i2(rng)]);
    }
    return rep;
}

struct AngleCheckReport {
    std::array<double, 3> space_angle{};
    std::array<double, 3> model_angle{};
    double max_excess = 0.0;  // space angle minus comparison angle, largest vertex
    bool pass = true;
};

/// Numeric Alexandrov angle: Euclidean comparison angles of shrinking
/// sub-triangles at the vertex, Richardson-extrapolated.
template <GeodesicSpaceLike S>
double alexandrov_angle_numeric(const S& space, const typename S::Point& v, const typename S::Point& p,
                                const typename S::Point& q, double h0 = 0.0) {
    const double b = space.distance(v, p), c = space.distance(v, q);
    if (b < Tol::geo || c < Tol::geo) throw DomainError("alexandrov_angle_numeric: degenerate vertex");
    if (h0 <= 0.0) h0 = 1e-2 * std::min(b, c);
    auto cmp_angle = [&](double h) {
        const auto ph = space.point_at(v, p, h);
        const auto qh = space.point_at(v, q, h);
        const double a = space.distance(ph, qh);
        return std::acos(clamp_cos((2.0 * h * h - a * a) / (2.0 * h * h)));
    };
    const double t1 = cmp_angle(h0);
    const double t2 = cmp_angle(0.5 * h0);
    return (4.0 * t2 - t1) / 3.0;
}

/// Alexandrov angles of a space triangle against the comparison angles on
/// M^2_kappa (space angle must not exceed the comparison angle).
template <GeodesicSpaceLike S>
AngleCheckReport angle_comparison_check(const S& space, const std::array<typename S::Point, 3>& tri,
                                        Kappa kappa, double tol = 1e-6) {
    const double lxy = space.distance(tri[0], tri[1]);
    const double lyz = space.distance(tri[1], tri[2]);
    const double lzx = space.distance(tri[2], tri[0]);
    ComparisonTriangle cmp(kappa, TriangleSpec(lyz, lzx, lxy));
    AngleCheckReport rep;
    const std::array<Vertex, 3> verts = {Vertex::X, Vertex::Y, Vertex::Z};
    for (int i = 0; i < 3; ++i) {
        const auto& v = tri[static_cast<std::size_t>(i)];
        const auto& p = tri[static_cast<std::size_t>((i + 1) % 3)];
        const auto& q = tri[static_cast<std::size_t>((i + 2) % 3)];
        double ang;
        if constexpr (requires { space.angle(v, p, q); }) {
            ang = space.angle(v, p, q);
        } else {
            ang = alexandrov_angle_numeric(space, v, p, q);
        }
        rep.space_angle[static_cast<std::size_t>(i)] = ang;
        rep.model_angle[static_cast<std::size_t>(i)] = cmp.vertex_angle(verts[static_cast<std::size_t>(i)]);
        const double excess = ang - rep.model_angle[static_cast<std::size_t>(i)];
        rep.max_excess = std::max(rep.max_excess, excess);
        if (excess > tol) rep.pass = false;
    }
    return rep;
}

}  // namespace catk
