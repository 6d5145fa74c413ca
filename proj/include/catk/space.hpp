#pragma once

#include <array>
#include <concepts>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "catk/minkowski.hpp"
#include "catk/rtree.hpp"

namespace catk {

/// Oracle pair every geodesic space exposes: distances and arc-length
/// parametrized points on the unique segment [p,q].
template <typename S>
concept GeodesicSpaceLike = requires(const S& s, const typename S::Point& p, const typename S::Point& q,
                                     double a, Rng& rng) {
    typename S::Point;
    { s.distance(p, q) } -> std::convertible_to<double>;
    { s.point_at(p, q, a) } -> std::convertible_to<typename S::Point>;
    { s.sample(rng) } -> std::convertible_to<typename S::Point>;
};

/// Spaces whose geodesics extend uniquely past their endpoints.
template <typename S>
concept ExtensibleSpace = GeodesicSpaceLike<S> &&
    requires(const S& s, const typename S::Point& p, const typename S::Point& q, double a) {
        { s.extend(p, q, a) } -> std::convertible_to<typename S::Point>;
    };

/// Spaces embedded in a linear ambient space, so affine combinations of
/// nearby points can be formed and projected back (extrapolation hook).
template <typename S>
concept AmbientLinear = GeodesicSpaceLike<S> &&
    requires(const S& s, const typename S::Point& p, const std::vector<double>& v) {
        { s.to_ambient(p) } -> std::convertible_to<std::vector<double>>;
        { s.from_ambient(v) } -> std::convertible_to<typename S::Point>;
    };

/// H^n with the arccosh(-<x,y>) metric. Sampling draws from the ball of
/// radius `sample_radius` around the base point.
struct HyperbolicSpace {
    using Point = HPoint;
    int dim = 2;
    double sample_radius = 3.0;

    double distance(const HPoint& x, const HPoint& y) const { return hdist(x, y); }
    HPoint point_at(const HPoint& x, const HPoint& y, double s) const { return geodesic_point(x, y, s); }
    HPoint extend(const HPoint& x, const HPoint& y, double s) const {
        if (s < -Tol::geo) throw DomainError("extend: negative arc");
        const double d = hdist(x, y);
        if (s <= d) return geodesic_point(x, y, std::max(s, 0.0));
        // Past y, step from the near endpoint; superposing from a distant x
        // cancels catastrophically when the result lands close to the origin.
        HTangent away = unit_tangent_toward(y, x);
        away.dir.scale(-1.0);
        return away.at(s - d);
    }
    double angle(const HPoint& x, const HPoint& y, const HPoint& z) const { return alexandrov_angle(x, y, z); }
    HPoint base() const { return HPoint::base(dim); }
    HPoint sample(Rng& rng) const;
    std::vector<double> to_ambient(const HPoint& p) const { return p.vec().c; }
    HPoint from_ambient(const std::vector<double>& v) const {
        return HPoint(rescale_to_sheet(MinkowskiVec(v)));
    }
};

/// Model space M^2_kappa for kappa < 0: H^2 carried over with distances
/// multiplied by 1/sqrt(-kappa).
struct ScaledHyperbolicSpace {
    using Point = HPoint;
    double kappa = -1.0;
    HyperbolicSpace h{};

    double unit() const { return std::sqrt(-kappa); }  // hyperbolic arc per model arc
    double distance(const HPoint& x, const HPoint& y) const { return hdist(x, y) / unit(); }
    HPoint point_at(const HPoint& x, const HPoint& y, double s) const {
        return geodesic_point(x, y, s * unit());
    }
    HPoint extend(const HPoint& x, const HPoint& y, double s) const { return h.extend(x, y, s * unit()); }
    double angle(const HPoint& x, const HPoint& y, const HPoint& z) const { return alexandrov_angle(x, y, z); }
    HPoint sample(Rng& rng) const { return h.sample(rng); }
    std::vector<double> to_ambient(const HPoint& p) const { return h.to_ambient(p); }
    HPoint from_ambient(const std::vector<double>& v) const { return h.from_ambient(v); }
};

struct PlanePoint {
    double x = 0.0;
    double y = 0.0;
};

/// The Euclidean plane; sampling draws from a centered square.
struct PlaneSpace {
    using Point = PlanePoint;
    double sample_half_width = 3.0;

    double distance(const PlanePoint& a, const PlanePoint& b) const {
        return std::hypot(a.x - b.x, a.y - b.y);
    }
    PlanePoint point_at(const PlanePoint& a, const PlanePoint& b, double s) const {
        const double d = distance(a, b);
        if (s < -Tol::geo || s > d + Tol::geo) throw DomainError("PlaneSpace::point_at: arc outside segment");
        if (d == 0.0) return a;
        const double t = std::clamp(s / d, 0.0, 1.0);
        return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    }
    PlanePoint extend(const PlanePoint& a, const PlanePoint& b, double s) const {
        const double d = distance(a, b);
        if (d == 0.0) throw DomainError("PlaneSpace::extend: coincident points");
        const double t = s / d;
        return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    }
    double angle(const PlanePoint& v, const PlanePoint& p, const PlanePoint& q) const {
        const double b = distance(v, p), c = distance(v, q);
        if (b < Tol::geo || c < Tol::geo) throw DomainError("PlaneSpace::angle: degenerate vertex");
        const double a = distance(p, q);
        return std::acos(clamp_cos((b * b + c * c - a * a) / (2.0 * b * c)));
    }
    PlanePoint sample(Rng& rng) const {
        return {uniform(rng, -sample_half_width, sample_half_width),
                uniform(rng, -sample_half_width, sample_half_width)};
    }
    std::vector<double> to_ambient(const PlanePoint& p) const { return {p.x, p.y}; }
    PlanePoint from_ambient(const std::vector<double>& v) const { return {v[0], v[1]}; }
};

/// A finite weighted tree as a geodesic space.
struct TreeSpace {
    using Point = TreePoint;
    const MetricTree* tree = nullptr;

    double distance(const TreePoint& p, const TreePoint& q) const { return tree_dist(*tree, p, q); }
    TreePoint point_at(const TreePoint& p, const TreePoint& q, double s) const {
        return tree_segment(*tree, p, q, s);
    }
    double angle(const TreePoint& v, const TreePoint& p, const TreePoint& q) const {
        const double g = 0.5 * (distance(v, p) + distance(v, q) - distance(p, q));
        if (distance(v, p) < Tol::tree || distance(v, q) < Tol::tree)
            throw DomainError("TreeSpace::angle: degenerate vertex");
        // Segments from v either share an initial arc or branch immediately.
        return g > Tol::tree ? 0.0 : std::acos(-1.0);
    }
    TreePoint sample(Rng& rng) const {
        const auto& edges = tree->edges();
        if (edges.empty()) return TreePoint::at_node(0);
        const std::size_t e = static_cast<std::size_t>(
            std::uniform_int_distribution<int>(0, static_cast<int>(edges.size()) - 1)(rng));
        return tree->canonical(static_cast<int>(e), uniform(rng, 0.0, edges[e].length));
    }
};

/// Convex combination: the point at arc t*d(x,y) from x, so t=0 gives x and
/// t=1 gives y.
template <GeodesicSpaceLike S>
typename S::Point combine(const S& space, const typename S::Point& x, const typename S::Point& y, double t) {
    if (t < 0.0 || t > 1.0) throw DomainError("combine: t outside [0,1]");
    if (t == 0.0) return x;
    if (t == 1.0) return y;
    return space.point_at(x, y, t * space.distance(x, y));
}

/// Unit-speed ray (or finite unit-speed path when t_max is finite).
template <typename S>
struct Ray {
    std::function<typename S::Point(double)> at;
    double t_max = std::numeric_limits<double>::infinity();
};

inline Ray<HyperbolicSpace> make_ray(const HTangent& tan) {
    return {[tan](double t) { return tan.at(t); }, std::numeric_limits<double>::infinity()};
}

inline Ray<TreeSpace> make_ray(const TreeSpace& space, const TreePoint& from, const TreePoint& to) {
    const double len = space.distance(from, to);
    const MetricTree* tree = space.tree;
    return {[tree, from, to, len](double t) { return tree_segment(*tree, from, to, std::clamp(t, 0.0, len)); },
            len};
}

inline Ray<PlaneSpace> make_ray(const PlanePoint& origin, double dir_angle) {
    return {[origin, dir_angle](double t) {
                return PlanePoint{origin.x + t * std::cos(dir_angle), origin.y + t * std::sin(dir_angle)};
            },
            std::numeric_limits<double>::infinity()};
}

/// Metric projection onto the closed ball B(center, radius): identity inside,
/// otherwise the point of [center, x] at arc radius.
template <GeodesicSpaceLike S>
typename S::Point project_ball(const S& space, const typename S::Point& center, double radius,
                               const typename S::Point& x) {
    if (radius < 0.0) throw DomainError("project_ball: negative radius");
    const double d = space.distance(center, x);
    if (d <= radius) return x;
    return space.point_at(center, x, radius);
}

template <typename P>
struct RayProjection {
    double param = 0.0;
    P point;
    int evals = 0;
};

namespace detail {

// Golden-section minimum of a unimodal f on [lo, hi] to parameter tolerance.
template <typename F>
double golden_min(F&& f, double lo, double hi, double param_tol, int* evals = nullptr) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    int n = 2;
    while (b - a > param_tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        ++n;
    }
    if (evals) *evals += n;
    return 0.5 * (a + b);
}

}  // namespace detail

/// Nearest-point parameter on a ray by bracketed unimodal search; valid
/// because t -> d(x, c(t)) is convex along geodesics here.
template <GeodesicSpaceLike S>
RayProjection<typename S::Point> project_ray(const S& space, const Ray<S>& ray, const typename S::Point& x,
                                             double param_tol = Tol::ray_param, int max_doublings = 64) {
    RayProjection<typename S::Point> out{0.0, ray.at(0.0), 0};
    auto f = [&](double t) {
        ++out.evals;
        return space.distance(x, ray.at(t));
    };
    double hi = std::min(1.0, ray.t_max);
    double f_hi = f(hi);
    double f_half = f(0.5 * hi);
    int rounds = 0;
    while (f_hi < f_half && hi < ray.t_max) {
        if (++rounds > max_doublings)
            throw BudgetError("project_ray: bracket did not close after " + std::to_string(max_doublings) +
                              " doublings (last t=" + std::to_string(hi) + ", d=" + std::to_string(f_hi) + ")");
        hi = std::min(2.0 * hi, ray.t_max);
        f_half = f(0.5 * hi);
        f_hi = f(hi);
    }
    const double t_star = detail::golden_min(f, 0.0, hi, param_tol, &out.evals);
    out.param = t_star;
    out.point = ray.at(t_star);
    return out;
}

/// Nearest point on the segment [a,b], same bracketed-search route.
template <GeodesicSpaceLike S>
typename S::Point project_segment(const S& space, const typename S::Point& a, const typename S::Point& b,
                                  const typename S::Point& x, double param_tol = Tol::ray_param) {
    const double len = space.distance(a, b);
    if (len == 0.0) return a;
    auto f = [&](double s) { return space.distance(x, space.point_at(a, b, s)); };
    const double s_star = detail::golden_min(f, 0.0, len, param_tol);
    return space.point_at(a, b, s_star);
}

/// Exact H^n segment projection: the foot of x on the line through a and b
/// is the form-orthogonal projection onto span(a, b), rescaled to the sheet;
/// clamped to the segment. Distance-oracle searches can only locate the foot
/// to about sqrt(eps), this is exact.
inline HPoint project_segment_exact(const HPoint& a, const HPoint& b, const HPoint& x) {
    const double gab = mink_form(a.vec(), b.vec());
    const double pa = mink_form(x.vec(), a.vec());
    const double pb = mink_form(x.vec(), b.vec());
    // solve [<a,a> <a,b>; <a,b> <b,b>] [alpha; beta] = [pa; pb] with <a,a> = <b,b> = -1
    const double det = 1.0 - gab * gab;  // negative for distinct points
    if (std::abs(det) < 1e-30) return a;
    const double alpha = -(pa + gab * pb) / det;
    const double beta = -(gab * pa + pb) / det;
    MinkowskiVec v = alpha * a.vec();
    v.axpy(beta, b.vec());
    if (-mink_form(v, v) <= 0.0) return a;  // degenerate; caller's geometry is off
    if (v[v.size() - 1] < 0.0) v.scale(-1.0);  // keep the upper-sheet representative
    const HPoint foot(rescale_to_sheet(v));
    const double d = hdist(a, b);
    const double sa = hdist(a, foot), sb = hdist(b, foot);
    if (sa + sb > d + Tol::geo) return (sa < sb) ? a : b;  // foot beyond an endpoint
    return foot;
}

/// Exact nearest-point parameter on an H^n ray c(t) = base cosh t + dir sinh t:
/// minimizing arccosh(A cosh t + B sinh t) gives tanh t = -B/A, evaluated in
/// the log-ratio form t = ln((A-B)/(A+B))/2 which stays accurate far out.
inline RayProjection<HPoint> project_ray_exact(const HTangent& tan, const HPoint& x) {
    const MinkowskiVec fwd = tan.base.vec() + tan.dir;   // base + dir
    const MinkowskiVec bwd = tan.base.vec() - tan.dir;   // base - dir
    const double num = -mink_form(x.vec(), bwd);         // A - B
    const double den = -mink_form(x.vec(), fwd);         // A + B
    if (!(num > 0.0) || !(den > 0.0))
        throw DomainError("project_ray_exact: projection escapes to infinity");
    const double t = std::max(0.5 * std::log(num / den), 0.0);
    return {t, tan.at(t), 1};
}

/// Membership predicate plus projection oracle for a closed convex set.
template <typename S>
struct ConvexSet {
    std::function<bool(const typename S::Point&)> contains;
    std::function<typename S::Point(const typename S::Point&)> project;
    std::string desc;
};

template <GeodesicSpaceLike S>
ConvexSet<S> ball_set(S space, typename S::Point center, double radius) {
    return {[space, center, radius](const typename S::Point& x) {
                return space.distance(center, x) <= radius + Tol::geo;
            },
            [space, center, radius](const typename S::Point& x) {
                return project_ball(space, center, radius, x);
            },
            "ball r=" + std::to_string(radius)};
}

template <GeodesicSpaceLike S>
ConvexSet<S> whole_space_set(const S&) {
    return {[](const typename S::Point&) { return true; },
            [](const typename S::Point& x) { return x; },
            "whole space"};
}

/// Closed tube {x : d(x, ray) <= width}. The projection walks x toward its
/// ray projection until the tube boundary; exact because ray projections are
/// constant along that segment.
template <GeodesicSpaceLike S>
ConvexSet<S> tube_set(S space, Ray<S> ray, double width,
                      std::function<RayProjection<typename S::Point>(const typename S::Point&)> projector = nullptr) {
    if (!(width > 0.0)) throw DomainError("tube_set: width must be positive");
    std::function<RayProjection<typename S::Point>(const typename S::Point&)> proj =
        projector ? std::move(projector)
                  : [space, ray](const typename S::Point& x) { return project_ray(space, ray, x); };
    return {[space, proj, width](const typename S::Point& x) {
                return space.distance(x, proj(x).point) <= width + Tol::geo;
            },
            [space, proj, width](const typename S::Point& x) {
                const auto p = proj(x);
                const double d = space.distance(x, p.point);
                if (d <= width) return x;
                return space.point_at(x, p.point, d - width);
            },
            "tube w=" + std::to_string(width)};
}

/// H^2 half-plane bounded by the geodesic through the base point with
/// direction phi; membership and exact projection via the axis-aligned frame.
ConvexSet<HyperbolicSpace> halfplane_set(const HyperbolicSpace& space, double phi);

/// Approximate projection onto an intersection by cyclic projections.
template <GeodesicSpaceLike S>
ConvexSet<S> intersection_set(const S& space, std::vector<ConvexSet<S>> parts, int sweeps = 64) {
    return {[parts](const typename S::Point& x) {
                for (const auto& p : parts)
                    if (!p.contains(x)) return false;
                return true;
            },
            [parts, sweeps](const typename S::Point& x) {
                typename S::Point y = x;
                for (int k = 0; k < sweeps; ++k) {
                    bool inside = true;
                    for (const auto& p : parts) {
                        if (!p.contains(y)) inside = false;
                        y = p.project(y);
                    }
                    if (inside) break;
                }
                return y;
            },
            "intersection (cyclic projections, approximate)"};
}

struct AuditReport {
    long pairs = 0;
    long checked = 0;
    double max_excess = -std::numeric_limits<double>::infinity();
    bool pass = true;
};

/// Nonexpansiveness audit of an arbitrary point map: d(Fx,Fy) <= d(x,y) + slack.
template <GeodesicSpaceLike S, typename F>
AuditReport nonexpansiveness_audit(const S& space, F&& op, long pairs, uint64_t seed,
                                   double slack = 1e-9, double min_sep = 0.0) {
    Rng rng(seed);
    AuditReport rep;
    rep.pairs = pairs;
    for (long i = 0; i < pairs; ++i) {
        const auto x = space.sample(rng);
        const auto y = space.sample(rng);
        const double d = space.distance(x, y);
        if (d < min_sep) continue;
        ++rep.checked;
        const double dp = space.distance(op(x), op(y));
        rep.max_excess = std::max(rep.max_excess, dp - d);
        if (dp > d + slack) rep.pass = false;
    }
    return rep;
}

struct BusemannReport {
    long trials = 0;
    double max_violation = -std::numeric_limits<double>::infinity();
    bool pass = true;
};

/// Convexity of the metric along proportionally parametrized geodesic pairs:
/// d(sigma(t l1), tau(t l2)) <= (1-t) d(sigma(0), tau(0)) + t d(sigma(l1), tau(l2)).
template <GeodesicSpaceLike S>
BusemannReport busemann_audit(const S& space, long trials, uint64_t seed, double tol = 1e-8,
                              int t_grid = 9) {
    Rng rng(seed);
    BusemannReport rep;
    rep.trials = trials;
    for (long i = 0; i < trials; ++i) {
        const auto p0 = space.sample(rng), p1 = space.sample(rng);
        const auto q0 = space.sample(rng), q1 = space.sample(rng);
        const double l1 = space.distance(p0, p1), l2 = space.distance(q0, q1);
        const double d0 = space.distance(p0, q0), d1 = space.distance(p1, q1);
        for (int k = 1; k < t_grid; ++k) {
            const double t = static_cast<double>(k) / t_grid;
            const double lhs = space.distance(space.point_at(p0, p1, t * l1), space.point_at(q0, q1, t * l2));
            const double rhs = (1.0 - t) * d0 + t * d1;
            rep.max_violation = std::max(rep.max_violation, lhs - rhs);
            if (lhs > rhs + tol) rep.pass = false;
        }
    }
    return rep;
}

enum class ProbeVerdict { Bounded, RayWitness, Unknown };

template <typename P>
struct ProbeResult {
    ProbeVerdict verdict = ProbeVerdict::Unknown;
    std::optional<std::pair<P, P>> witness_chord;
    double witness_length = 0.0;
    double max_stall = 0.0;
    double min_stall = std::numeric_limits<double>::infinity();
    double diameter_estimate = 0.0;
    int attempts = 0;
};

/// Semi-decision probe for geodesic boundedness of K: grow chords inside K
/// by doubling extrapolation. A chord reaching length_budget is a ray
/// witness. "Bounded" needs agreement between stall lengths and the sampled
/// diameter; anything else stays Unknown.
template <ExtensibleSpace S>
ProbeResult<typename S::Point> geodesic_bounded_probe(
    const S& space, const ConvexSet<S>& K, double length_budget, uint64_t seed, int attempts = 8,
    std::vector<std::pair<typename S::Point, typename S::Point>> seed_chords = {}, double stall_tol = 1e-6) {
    using P = typename S::Point;
    Rng rng(seed);
    ProbeResult<P> out;

    // Membership that cannot be evaluated counts as "outside": the probe is
    // a semi-decision procedure and only certifies what it can check.
    auto inside = [&K](const P& p) {
        try {
            return K.contains(p);
        } catch (const Error&) {
            return false;
        }
    };

    std::vector<P> pool;
    long tries = 0;
    while (static_cast<int>(pool.size()) < 2 * attempts && tries++ < 10000) {
        P c = space.sample(rng);
        if (inside(c)) pool.push_back(std::move(c));
    }
    for (std::size_t i = 0; i + 1 < pool.size() && static_cast<int>(seed_chords.size()) < attempts; i += 2)
        seed_chords.emplace_back(pool[i], pool[i + 1]);
    for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t j = i + 1; j < pool.size(); ++j)
            out.diameter_estimate = std::max(out.diameter_estimate, space.distance(pool[i], pool[j]));

    int stalls = 0;
    for (auto& [a, b] : seed_chords) {
        ++out.attempts;
        double len = space.distance(a, b);
        if (len < stall_tol) continue;
        bool stalled = false;
        int no_growth = 0;  // consecutive directions without progress
        for (int round = 0; round < 200 && !stalled; ++round) {
            if (len >= length_budget) {
                out.verdict = ProbeVerdict::RayWitness;
                out.witness_chord = {a, b};
                out.witness_length = len;
                return out;
            }
            const double target = std::min(2.0 * len, length_budget);
            if (inside(space.extend(a, b, target))) {
                b = space.extend(a, b, target);
                len = target;
                no_growth = 0;
            } else {
                double lo = len, hi = target;
                for (int it = 0; it < 60 && hi - lo > 0.25 * stall_tol; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (inside(space.extend(a, b, mid)) ? lo : hi) = mid;
                }
                if (lo - len < stall_tol) {
                    // blocked this way; stall only once both directions block
                    stalled = ++no_growth >= 2;
                } else {
                    b = space.extend(a, b, lo);
                    len = lo;
                    no_growth = 0;
                }
            }
            std::swap(a, b);  // alternate growth direction
            out.diameter_estimate = std::max(out.diameter_estimate, len);
        }
        if (stalled) {
            ++stalls;
            out.max_stall = std::max(out.max_stall, len);
            out.min_stall = std::min(out.min_stall, len);
        }
    }

    // Bounded only under a tight certificate: every chord stalled, the stall
    // lengths agree with each other and with the sampled diameter, and all of
    // it sits far below the witness budget.
    const bool tight = stalls >= 2 && stalls == out.attempts && out.max_stall <= 0.25 * length_budget &&
                       out.diameter_estimate <= 1.5 * out.max_stall &&
                       out.max_stall <= 1.25 * std::max(out.diameter_estimate, stall_tol) &&
                       out.max_stall <= 1.5 * std::max(out.min_stall, stall_tol);
    out.verdict = tight ? ProbeVerdict::Bounded : ProbeVerdict::Unknown;
    return out;
}

}  // namespace catk
