#include "catk/campaigns.hpp"

#include <algorithm>
#include <cmath>

namespace catk {

namespace {

const double pi = std::acos(-1.0);

double law_of_cosines(double p, double q, double alpha) {
    return std::sqrt(std::max(p * p + q * q - 2.0 * p * q * std::cos(alpha), 0.0));
}

}  // namespace

ChordGapResult chord_gap(const ChordGapInstance& inst) {
    if (!(inst.alpha0 > 0.0) || !(inst.alpha0 < 2.0 * pi))
        throw DomainError("chord_gap: angle floor must lie in (0, 2pi)");
    if (inst.alpha < inst.alpha0) throw DomainError("chord_gap: alpha below the floor");
    if (inst.alpha < 1e-9 || inst.alpha > 2.0 * pi - 1e-9)
        throw DomainError("chord_gap: degenerate apex angle");
    if (!(inst.a > 0.0) || !(inst.b > 0.0) || !(inst.d > 0.0))
        throw DomainError("chord_gap: lengths must be positive");
    ChordGapResult out;
    out.outer = law_of_cosines(inst.a + inst.d, inst.b + inst.d, inst.alpha);
    out.inner = law_of_cosines(inst.a, inst.b, inst.alpha);
    out.gap = out.outer - out.inner;
    out.bound = inst.d * sq(std::sin(inst.alpha0 / 2.0));
    out.pass = out.gap > out.bound;
    return out;
}

ChordGapSweep chord_gap_threshold_sweep(double alpha0, double alpha, double d,
                                        const std::vector<double>& legs) {
    ChordGapSweep sweep;
    for (double leg : legs) {
        const auto res = chord_gap({alpha0, alpha, leg, leg, d});
        sweep.rows.push_back({leg, res.gap, res.bound, res.pass});
        if (res.pass && sweep.threshold < 0.0) sweep.threshold = leg;
    }
    return sweep;
}

ChordGapTrials chord_gap_trials(double alpha0, double d, double leg_min, double leg_max, long trials,
                                uint64_t seed) {
    Rng rng(seed);
    ChordGapTrials out;
    out.trials = trials;
    for (long i = 0; i < trials; ++i) {
        const double alpha = uniform(rng, alpha0, pi);
        const double leg = uniform(rng, leg_min, leg_max);
        const auto res = chord_gap({alpha0, alpha, leg, leg, d});
        out.worst_margin = std::min(out.worst_margin, res.gap - res.bound);
        if (!res.pass) ++out.failures;
    }
    return out;
}

std::vector<ChordGrowthRow> chord_growth(double alpha, double d, const std::vector<double>& legs,
                                         bool sweep_both, double fixed_a) {
    std::vector<ChordGrowthRow> rows;
    for (double leg : legs) {
        const double a = sweep_both ? leg : fixed_a;
        rows.push_back({a, leg, law_of_cosines(a + d, leg + d, alpha)});
    }
    return rows;
}

double collapse_exact(double h, double eps) {
    if (!(h > 0.0)) throw DomainError("collapse_exact: h must be positive");
    if (eps < 0.0) throw DomainError("collapse_exact: eps must be nonnegative");
    // cosh(h+eps)/cosh(h) - 1 in exponential-dominant form; never overflows.
    const double t = 2.0 * std::sinh(0.5 * eps) * std::exp(0.5 * eps) *
                     (1.0 - std::exp(-2.0 * h - eps)) / (1.0 + std::exp(-2.0 * h));
    return acosh1p(t);
}

double collapse_bound(double h, double eps) {
    if (!(h > 0.0)) throw DomainError("collapse_bound: h must be positive");
    if (eps < 0.0) throw DomainError("collapse_bound: eps must be nonnegative");
    return acosh1p(std::expm1(eps) + std::exp(-eps - 2.0 * h));
}

CollapseScan collapse_scan(const std::vector<double>& hs, const std::vector<double>& epss) {
    if (hs.size() != epss.size()) throw DimMismatch("collapse_scan: parameter lists differ in length");
    CollapseScan scan;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        CollapseRow row;
        row.n = static_cast<int>(i) + 1;
        row.h = hs[i];
        row.eps = epss[i];
        row.exact = collapse_exact(row.h, row.eps);
        row.bound = collapse_bound(row.h, row.eps);
        row.residual = row.bound - row.exact;
        // the margin shrinks like e^{-2h}; below double resolution the two
        // closed forms agree to the last ulp
        if (row.exact > row.bound + 4e-16 * (1.0 + row.bound)) scan.exact_below_bound = false;
        scan.rows.push_back(row);
    }
    for (std::size_t i = 1; i < scan.rows.size(); ++i)
        if (scan.rows[i].exact > scan.rows[i - 1].exact && i > scan.rows.size() / 5)
            scan.exact_decays = false;
    const std::size_t tail = scan.rows.size() - scan.rows.size() / 4;
    for (std::size_t i = tail; i < scan.rows.size(); ++i)
        scan.max_exact_tail = std::max(scan.max_exact_tail, scan.rows[i].exact);
    return scan;
}

FlatWitnessReport flat_witness(const std::vector<double>& hs) {
    FlatWitnessReport rep;
    rep.hyperbolic_limit = std::log(std::cosh(1.0));
    for (double h : hs) {
        if (!(h > 0.0)) throw DomainError("flat_witness: h must be positive");
        FlatWitnessRow row;
        row.h = h;
        row.eps_planar = 1.0 / (std::sqrt(h * h + 1.0) + h);
        row.leg_planar = 1.0;
        if (h <= 20.0) {
            row.eps_hyperbolic = std::acosh(std::cosh(h) * std::cosh(1.0)) - h;
        } else {
            // implicit form, one refinement pass; residual error O(e^{-4h})
            const double lc = rep.hyperbolic_limit;
            row.eps_hyperbolic =
                lc + std::log1p(std::exp(-2.0 * h)) - std::log1p(std::exp(-2.0 * (h + lc)));
        }
        rep.rows.push_back(row);
    }
    if (!rep.rows.empty())
        rep.hyperbolic_limit_gap = std::abs(rep.rows.back().eps_hyperbolic - rep.hyperbolic_limit);
    return rep;
}

namespace {

double dist_to_chord(const HyperbolicSpace& h2, const HPoint& base, const HPoint& x, const HPoint& y) {
    const double len = h2.distance(x, y);
    if (len < 1e-12) return h2.distance(base, x);
    auto f = [&](double s) { return h2.distance(base, h2.point_at(x, y, s)); };
    const double s_star = detail::golden_min(f, 0.0, len, Tol::ray_param);
    return f(s_star);
}

}  // namespace

CaptureCalibration capture_radius_calibrate(double r, double eps, long trials, uint64_t seed,
                                            double sample_radius) {
    if (!(r > 0.0)) throw DomainError("capture_radius_calibrate: radius must be positive");
    if (!(eps > 0.0) || eps > 2.0 * r)
        throw DomainError("capture_radius_calibrate: need 0 < eps <= 2r (projections onto the ball "
                          "are at most 2r apart)");
    HyperbolicSpace h2;
    h2.sample_radius = sample_radius;
    const HPoint base = HPoint::base(2);

    auto run_batch = [&](uint64_t s, double* max_dist, long* violations, double cutoff) {
        Rng rng(s);
        long accepted = 0;
        long attempts = 0;
        while (accepted < trials) {
            if (++attempts > 200 * trials)
                throw BudgetError("capture_radius_calibrate: rejection sampling starved");
            const HPoint x = h2.sample(rng);
            const HPoint y = h2.sample(rng);
            const HPoint u = project_ball(h2, base, r, x);
            const HPoint v = project_ball(h2, base, r, y);
            if (h2.distance(u, v) < eps) continue;
            ++accepted;
            const double dist = dist_to_chord(h2, base, x, y);
            if (max_dist) *max_dist = std::max(*max_dist, dist);
            if (violations && dist > cutoff) ++(*violations);
        }
    };

    CaptureCalibration cal;
    cal.r = r;
    cal.eps = eps;
    cal.trials = trials;
    run_batch(seed, &cal.max_chord_dist, nullptr, 0.0);
    cal.radius_hat = 1.05 * cal.max_chord_dist + 0.1;
    double audit_max = 0.0;
    run_batch(seed + 1, &audit_max, &cal.audit_violations, cal.radius_hat);
    cal.audit_max = audit_max;
    return cal;
}

ChainResult chain_check(const ChainConfig& cfg) {
    if (!(cfg.r_over_2R > 0.0) || cfg.r_over_2R > 1.0)
        throw DomainError("chain_check: shadow ratio must lie in (0, 1]");
    HyperbolicSpace h2;
    const HPoint theta = HPoint::base(2);
    const HPoint z_p = HPoint::polar(cfg.span, cfg.phi_p);
    const HPoint z_q = HPoint::polar(cfg.span, cfg.phi_q);
    const HPoint tz_p = h2.extend(theta, z_p, cfg.span + cfg.eps_p);
    const HPoint tz_q = h2.extend(theta, z_q, cfg.span + cfg.eps_q);

    ChainResult out;
    out.angle_floor = 2.0 * std::asin(cfg.r_over_2R / 1.0);

    // planar comparison triangle of (theta, Tz_p, Tz_q)
    const double sp = h2.distance(theta, tz_p);
    const double sq_ = h2.distance(theta, tz_q);
    const double pq = h2.distance(tz_p, tz_q);
    out.comparison_angle = comparison_angle(TriangleSpec(pq, sq_, sp), Vertex::X);

    // comparison-chord gap with the angle floor
    const auto gap = chord_gap({out.angle_floor, std::max(out.comparison_angle, out.angle_floor),
                                sp - cfg.d, sq_ - cfg.d, cfg.d});
    out.gap = gap.gap;
    out.gap_bound = gap.bound;

    // chord point nearest the anchor (exact foot), and the proportional
    // join point on the image chord
    const HPoint z_pq = project_segment_exact(z_p, z_q, theta);
    const double tau = h2.distance(z_p, z_pq) / h2.distance(z_p, z_q);
    const HPoint u_pq = h2.point_at(tz_p, tz_q, tau * pq);

    // The split point stands in for the image of the chord point; it sits a
    // fixed arc toward the anchor so the angle directions are well resolved
    // (the join point and the foot nearly coincide by construction).
    const double back = std::min(0.3, 0.5 * h2.distance(z_pq, theta));
    const HPoint w = h2.point_at(z_pq, theta, back);
    out.angle_at_join_p = alexandrov_angle(u_pq, tz_p, w);
    out.angle_at_join_q = alexandrov_angle(u_pq, tz_q, w);

    out.busemann_lhs = h2.distance(z_pq, u_pq);
    out.busemann_rhs = std::max(cfg.eps_p, cfg.eps_q);

    const double split = out.angle_at_join_p + out.angle_at_join_q;
    out.pass = std::abs(split - pi) < 1e-6 &&
               std::max(out.angle_at_join_p, out.angle_at_join_q) >= pi / 2.0 - 1e-6 &&
               out.busemann_lhs <= out.busemann_rhs + 1e-9 &&
               out.comparison_angle >= out.angle_floor && gap.pass;
    return out;
}

}  // namespace catk
