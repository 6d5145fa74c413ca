#include <cmath>

#include "catk/fixpoint.hpp"
#include "doctest.h"

using namespace catk;

namespace {

const double pi = std::acos(-1.0);

MetricTree star112() {
    return MetricTree(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 2.0}});
}

NonexpansiveMap<HyperbolicSpace> isometry_map(const HIsometry& iso, const std::string& desc) {
    return {[iso](const HPoint& x) { return iso.apply(x); }, desc};
}

}  // namespace

TEST_CASE("schedules validate and decay") {
    const Schedule h = Schedule::harmonic();
    CHECK(h.at(1) == 0.5);
    CHECK(h.at(999) < h.at(998));
    const Schedule g = Schedule::geometric(0.5, 0.97);
    CHECK(g.at(1) == 0.5);
    CHECK(g.at(2) == doctest::Approx(0.485));
    CHECK_THROWS_AS(Schedule::geometric(1.5, 0.9), DomainError);
    CHECK_THROWS_AS(Schedule::geometric(0.5, 1.0), DomainError);
    CHECK_THROWS_AS(h.at(0), DomainError);
}

TEST_CASE("t_contraction geometry") {
    HyperbolicSpace h2;
    const HPoint theta = HPoint::base(2);

    // identity map: the anchored contraction fixes only the anchor
    NonexpansiveMap<HyperbolicSpace> ident{[](const HPoint& x) { return x; }, "identity"};
    const auto f = t_contraction(h2, ident, theta, 0.25);
    CHECK(f.factor == 0.75);
    const HPoint x = HPoint::polar(1.0, 0.3);
    // image lies on [anchor, Tx] at distance (1-t) d(anchor, Tx)
    const HPoint fx = f.eval(x);
    CHECK(hdist(theta, fx) == doctest::Approx(0.75 * hdist(theta, x)).epsilon(1e-12));
    const auto sol = picard(h2, f, x, 1e-12, 100000);
    CHECK(hdist(sol.point, theta) < 1e-11);

    // t near 1 pulls everything onto the anchor
    const auto tight = t_contraction(h2, ident, theta, 1.0 - 1e-6);
    CHECK(hdist(tight.eval(HPoint::polar(2.0, 1.0)), theta) < 3e-6);

    CHECK_THROWS_AS(t_contraction(h2, ident, theta, 0.0), DomainError);
    CHECK_THROWS_AS(t_contraction(h2, ident, theta, 1.0), DomainError);

    // rotation about p anchored at p: p is the fixed point of every T_t
    const HPoint p = HPoint::polar(0.6, 1.1);
    const auto rot = isometry_map(HIsometry::rotation_about(p, pi / 2.0), "rotation");
    for (double t : {0.1, 0.5, 0.9}) {
        const auto ft = t_contraction(h2, rot, p, t);
        const auto z = picard(h2, ft, HPoint::polar(1.5, 0.0), 1e-12, 200000);
        CHECK(hdist(z.point, p) < 1e-10);
    }
}

TEST_CASE("picard stop rule and audits") {
    HyperbolicSpace h2;
    const HPoint theta = HPoint::base(2);

    // halves the distance to the anchor each step
    Contraction<HyperbolicSpace> half{
        [&h2, theta](const HPoint& x) { return combine(h2, theta, x, 0.5); }, 0.5};
    const auto sol = picard(h2, half, HPoint::polar(2.5, 0.4), 1e-10, 10000);
    CHECK(hdist(sol.point, theta) < 1e-10);

    // claimed factor >= 1 is rejected before iterating
    Contraction<HyperbolicSpace> bogus{[](const HPoint& x) { return x; }, 1.0};
    CHECK_THROWS_AS(picard(h2, bogus, theta, 1e-10, 100), AuditError);

    // an expanding map trips the runtime contraction audit
    const auto boost = HIsometry::translation(0.0, 0.4);
    Contraction<HyperbolicSpace> lying{[boost](const HPoint& x) { return boost.apply(x); }, 0.5};
    CHECK_THROWS_AS(picard(h2, lying, HPoint::polar(1.0, 0.2), 1e-10, 1000), AuditError);

    // budget exhaustion reports rather than spinning
    Contraction<HyperbolicSpace> slow{
        [&h2, theta](const HPoint& x) { return combine(h2, theta, x, 1.0 - 1e-9); }, 1.0 - 1e-9};
    CHECK_THROWS_AS(picard(h2, slow, HPoint::polar(2.0, 0.0), 1e-12, 50), BudgetError);
}

TEST_CASE("residual identity of the anchored scheme") {
    HyperbolicSpace h2;
    const HPoint theta = HPoint::base(2);

    // translation along a line through the anchor; iterates reach arc ~0.3n,
    // kept inside the chart-accurate region
    const auto trans = isometry_map(HIsometry::translation(0.0, 0.3), "translation");
    const auto run = approx_sequence(h2, trans, theta, Schedule::harmonic(), 1e-12, 10);
    for (const auto& row : run.rows) {
        const double predicted = row.t / (1.0 - row.t) * row.anchor_dist;
        CHECK(std::abs(row.residual - predicted) < 1e-7);
        // the iterate sits on the segment [anchor, T z]: distances telescope
    }
    for (std::size_t i = 0; i < run.iterates.size(); ++i) {
        const double lhs = hdist(theta, run.iterates[i]) + hdist(run.iterates[i], run.images[i]);
        CHECK(std::abs(lhs - hdist(theta, run.images[i])) < 1e-8);
    }

    // identity map: every z_n is the anchor itself
    NonexpansiveMap<HyperbolicSpace> ident{[](const HPoint& x) { return x; }, "identity"};
    const auto run2 = approx_sequence(h2, ident, theta, Schedule::harmonic(), 1e-12, 10);
    for (const auto& z : run2.iterates) CHECK(hdist(z, theta) < 1e-11);
}

TEST_CASE("approx_sequence on the escape map grows linearly") {
    HyperbolicSpace h2;
    const HTangent axis = unit_tangent_toward(HPoint::base(2), HPoint::polar(1.0, 0.0));
    auto exact = [axis](const HPoint& x) { return project_ray_exact(axis, x); };
    const auto tube = tube_set(h2, make_ray(axis), 1.0, exact);
    const auto T = ray_shift_map(h2, make_ray(axis), tube, exact);

    const auto run = approx_sequence(h2, T, HPoint::base(2), Schedule::harmonic(), 1e-10, 12);
    for (const auto& row : run.rows) {
        // the t_n-fixed point on the ray sits at parameter (1-t)/t = n;
        // location accuracy degrades with distance in the fixed chart
        CHECK(row.anchor_dist == doctest::Approx(static_cast<double>(row.n)).epsilon(1e-3));
        CHECK(row.residual == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("escape map passes a large nonexpansiveness audit") {
    HyperbolicSpace h2;
    const HTangent axis = unit_tangent_toward(HPoint::base(2), HPoint::polar(1.0, 0.0));
    auto exact = [axis](const HPoint& x) { return project_ray_exact(axis, x); };
    const auto tube = tube_set(h2, make_ray(axis), 1.0, exact);
    const auto T = ray_shift_map(h2, make_ray(axis), tube, exact);
    auto sampler = [&h2](Rng& rng) { return h2.sample(rng); };
    const auto rep = audit_nonexpansive(h2, T, sampler, 10000, 55);
    CHECK(rep.pass);
    CHECK(rep.checked > 9000);
}

TEST_CASE("nonexpansiveness audit catches an expanding map") {
    HyperbolicSpace h2;
    // doubling the distance from the base point expands
    NonexpansiveMap<HyperbolicSpace> doubler{
        [&h2](const HPoint& x) {
            const double d = hdist(HPoint::base(2), x);
            if (d < 1e-12) return x;
            return h2.extend(HPoint::base(2), x, 2.0 * d);
        },
        "doubler"};
    auto sampler = [&h2](Rng& rng) { return h2.sample(rng); };
    const auto rep = audit_nonexpansive(h2, doubler, sampler, 200, 5);
    CHECK_FALSE(rep.pass);

    const auto rot = isometry_map(HIsometry::rotation_about(HPoint::base(2), 1.0), "rotation");
    CHECK(audit_nonexpansive(h2, rot, sampler, 500, 6).pass);
}

TEST_CASE("asymptotic center: constant, alternating, tree star") {
    HyperbolicSpace h2;
    const HPoint p = HPoint::polar(0.9, 0.4);
    const auto constant = asymptotic_center(h2, std::vector<HPoint>(5, p));
    CHECK(hdist(constant.center, p) < 1e-12);
    CHECK(constant.radius == 0.0);

    // two alternating points: center at the midpoint, radius d/2.
    // Oracle: dense sweep along [x,y] plus the betweenness argument.
    const HPoint x = HPoint::polar(1.2, 0.1), y = HPoint::polar(0.8, 2.2);
    const double d = hdist(x, y);
    std::vector<HPoint> window{x, y, x, y};
    const auto two = asymptotic_center(h2, window);
    double grid_best = 1e9;
    for (int k = 0; k <= 1000; ++k) {
        const HPoint g = geodesic_point(x, y, d * k / 1000.0);
        grid_best = std::min(grid_best, std::max(hdist(g, x), hdist(g, y)));
    }
    CHECK(two.radius == doctest::Approx(d / 2.0).epsilon(1e-9));
    CHECK(two.radius <= grid_best + 1e-9);
    CHECK(hdist(two.center, geodesic_point(x, y, d / 2.0)) < 1e-5);

    // three tips of an equal-leg star: the hub, radius = leg length
    const MetricTree star(4, {{0, 1, 1.5}, {0, 2, 1.5}, {0, 3, 1.5}});
    TreeSpace ts{&star};
    const std::vector<TreePoint> tips{TreePoint::at_node(1), TreePoint::at_node(2), TreePoint::at_node(3)};
    const auto tc = asymptotic_center(ts, tips);
    CHECK(tc.center.is_node());
    CHECK(tc.center.node() == 0);
    CHECK(tc.radius == doctest::Approx(1.5).epsilon(1e-12));

    // unbounded window rejected
    std::vector<HPoint> wild{HPoint::base(2), HPoint::polar(9.0, 0.0)};
    CHECK_THROWS_AS(asymptotic_center(h2, wild, 1e-10, 5.0), DomainError);
}

TEST_CASE("solve: rotation on a ball converges") {
    HyperbolicSpace h2;
    const HPoint c = HPoint::polar(0.5, 0.9);
    const auto K = ball_set(h2, c, 2.0);
    const auto T = isometry_map(HIsometry::rotation_about(c, pi / 2.0), "rotation about c");

    SolveConfig cfg;
    cfg.schedule = Schedule::geometric(0.5, 0.97);
    cfg.max_outer = 1000;
    const HPoint theta = geodesic_point(c, HPoint::polar(2.2, 0.9), 1.0);  // anchor inside K
    const auto out = solve(h2, K, T, theta, cfg);
    REQUIRE(out.verdict == SolveVerdict::Converged);
    CHECK(out.residual <= cfg.accept_tol);
    CHECK(hdist(*out.fixed_point, c) < 1e-7);
    CHECK(static_cast<int>(out.run.rows.size()) <= 1000);

    // residual identity holds along the run
    for (const auto& row : out.run.rows) {
        const double predicted = row.t / (1.0 - row.t) * row.anchor_dist;
        CHECK(std::abs(row.residual - predicted) < 1e-6);
    }
}

TEST_CASE("solve: escape map on a thickened ray diverges with a witness") {
    HyperbolicSpace h2;
    const HTangent axis = unit_tangent_toward(HPoint::base(2), HPoint::polar(1.0, 0.0));
    auto exact = [axis](const HPoint& x) { return project_ray_exact(axis, x); };
    const auto tube = tube_set(h2, make_ray(axis), 1.0, exact);
    const auto T = ray_shift_map(h2, make_ray(axis), tube, exact);

    SolveConfig cfg;
    cfg.window = 4;
    cfg.divergence_budget = 12.0;  // the chart loses transverse resolution near arc 18
    cfg.max_outer = 64;
    const auto out = solve(h2, tube, T, HPoint::base(2), cfg);
    REQUIRE(out.verdict == SolveVerdict::Divergent);
    REQUIRE(out.witness.has_value());
    CHECK(out.witness->length > cfg.divergence_budget);
    CHECK(out.witness->samples_in_set);
}

TEST_CASE("solve: tree branch-shift converges to the hub") {
    const MetricTree tree = star112();
    TreeSpace ts{&tree};
    const auto K = whole_space_set(ts);

    // swap the two unit legs, then walk 0.3 toward the hub
    auto swap_legs = [](const TreePoint& p) {
        if (p.is_node()) {
            if (p.node() == 1) return TreePoint::at_node(2);
            if (p.node() == 2) return TreePoint::at_node(1);
            return p;
        }
        if (p.edge() == 0) return TreePoint::on_edge(1, p.offset());
        if (p.edge() == 1) return TreePoint::on_edge(0, p.offset());
        return p;
    };
    NonexpansiveMap<TreeSpace> T{
        [&ts, swap_legs](const TreePoint& p) {
            const TreePoint q = swap_legs(p);
            const TreePoint hub = TreePoint::at_node(0);
            const double d = ts.distance(hub, q);
            if (d <= 0.3) return hub;
            return ts.point_at(hub, q, d - 0.3);
        },
        "leg swap + shift toward hub"};

    SolveConfig cfg;
    cfg.schedule = Schedule::geometric(0.5, 0.9);
    cfg.max_outer = 400;
    const auto out = solve(ts, K, T, TreePoint::at_node(3), cfg);
    REQUIRE(out.verdict == SolveVerdict::Converged);
    CHECK(out.residual <= cfg.accept_tol);
    CHECK(ts.distance(*out.fixed_point, TreePoint::at_node(0)) < 1e-7);
}

TEST_CASE("solve: budget exhaustion is reported as such") {
    HyperbolicSpace h2;
    const HPoint c = HPoint::base(2);
    const auto K = ball_set(h2, c, 2.0);
    const auto T = isometry_map(HIsometry::rotation_about(c, pi / 2.0), "rotation");
    SolveConfig cfg;
    cfg.schedule = Schedule::harmonic();
    cfg.max_outer = 50;  // harmonic decay cannot reach the acceptance residual this fast
    const auto out = solve(h2, K, T, HPoint::polar(1.0, 0.0), cfg);
    CHECK(out.verdict == SolveVerdict::BudgetExhausted);
    CHECK(out.residual > 0.0);
}

TEST_CASE("solve: composite retraction onto a convex core") {
    HyperbolicSpace h2;
    // membership is a union of three thickened spokes (not convex); the map
    // retracts onto a small ball around the hub after swapping two spokes
    const HPoint hub = HPoint::base(2);
    const std::array<double, 3> dirs = {0.0, 2.0 * pi / 3.0, 4.0 * pi / 3.0};
    auto in_spoke = [&](const HPoint& x, double phi) {
        const HTangent sp = unit_tangent_toward(hub, HPoint::polar(1.0, phi));
        const auto pr = project_ray_exact(sp, x);
        return pr.param <= 2.0 && hdist(x, pr.point) <= 0.45;
    };
    ConvexSet<HyperbolicSpace> K{
        [&](const HPoint& x) { return in_spoke(x, dirs[0]) || in_spoke(x, dirs[1]) || in_spoke(x, dirs[2]); },
        [](const HPoint& x) { return x; },
        "thickened tripod (union, membership only)"};

    const HIsometry swap12 = HIsometry::reflection(dirs[0]);  // swaps the other two spokes
    NonexpansiveMap<HyperbolicSpace> T{
        [&h2, swap12, hub](const HPoint& x) { return project_ball(h2, hub, 0.3, swap12.apply(x)); },
        "swap + retract to core"};

    SolveConfig cfg;
    cfg.schedule = Schedule::geometric(0.5, 0.9);
    cfg.max_outer = 400;
    cfg.audit_pairs = 0;  // sampling K is inefficient here; audited online instead
    const auto out = solve(h2, K, T, HPoint::polar(1.5, dirs[1]), cfg);
    REQUIRE(out.verdict == SolveVerdict::Converged);
    CHECK(out.residual <= cfg.accept_tol);
    CHECK(K.contains(*out.fixed_point));
}
