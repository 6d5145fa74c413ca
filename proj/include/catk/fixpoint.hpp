#pragma once

#include <optional>

#include "catk/model_space.hpp"
#include "catk/space.hpp"

namespace catk {

/// Interpolation weights t_n in (0,1), strictly positive, nonincreasing,
/// tending to 0.
class Schedule {
public:
    static Schedule harmonic() { return Schedule{Kind::Harmonic, 0.0, 0.0}; }
    static Schedule geometric(double t0, double q) {
        if (!(t0 > 0.0) || !(t0 < 1.0) || !(q > 0.0) || !(q < 1.0))
            throw DomainError("Schedule::geometric: need t0, q in (0,1)");
        return Schedule{Kind::Geometric, t0, q};
    }

    double at(int n) const {  // n >= 1
        if (n < 1) throw DomainError("Schedule::at: n starts at 1");
        if (kind_ == Kind::Harmonic) return 1.0 / (static_cast<double>(n) + 1.0);
        return t0_ * std::pow(q_, static_cast<double>(n - 1));
    }

    std::string describe() const {
        if (kind_ == Kind::Harmonic) return "harmonic";
        return "geometric t0=" + std::to_string(t0_) + " q=" + std::to_string(q_);
    }

private:
    enum class Kind { Harmonic, Geometric };
    Schedule(Kind k, double t0, double q) : kind_(k), t0_(t0), q_(q) {}
    Kind kind_;
    double t0_, q_;
};

/// Self-map of K presented as an evaluation oracle. Nonexpansiveness is a
/// claim to be audited, never assumed.
template <typename S>
struct NonexpansiveMap {
    std::function<typename S::Point(const typename S::Point&)> eval;
    std::string desc;
};

/// Audit d(Tx,Ty) <= d(x,y)(1 + slack) on sampled pairs. Pairs closer than
/// min_sep carry no reliable ratio and are skipped.
template <GeodesicSpaceLike S>
AuditReport audit_nonexpansive(const S& space, const NonexpansiveMap<S>& T,
                               const std::function<typename S::Point(Rng&)>& sampler, long pairs,
                               uint64_t seed, double slack = 1e-9, double min_sep = 1e-6) {
    Rng rng(seed);
    AuditReport rep;
    rep.pairs = pairs;
    for (long i = 0; i < pairs; ++i) {
        const auto x = sampler(rng);
        const auto y = sampler(rng);
        const double d = space.distance(x, y);
        if (d < min_sep) continue;
        ++rep.checked;
        const double dt = space.distance(T.eval(x), T.eval(y));
        rep.max_excess = std::max(rep.max_excess, dt / d - 1.0);
        if (dt > d * (1.0 + slack)) rep.pass = false;
    }
    return rep;
}

template <typename S>
struct Contraction {
    std::function<typename S::Point(const typename S::Point&)> eval;
    double factor = 0.0;  // audited Lipschitz bound, < 1
};

/// The anchored contraction x -> (t) anchor (+) (1-t) Tx, i.e. the point at
/// distance (1-t) d(anchor, Tx) from the anchor. Lipschitz factor 1-t.
template <GeodesicSpaceLike S>
Contraction<S> t_contraction(const S& space, const NonexpansiveMap<S>& T, typename S::Point anchor,
                             double t) {
    if (!(t > 0.0) || !(t < 1.0)) throw DomainError("t_contraction: t must lie in (0,1)");
    auto eval = T.eval;
    return {[space, eval, anchor, t](const typename S::Point& x) {
                return combine(space, anchor, eval(x), 1.0 - t);
            },
            1.0 - t};
}

template <typename P>
struct PicardResult {
    P point;
    long iters = 0;
    double last_step = 0.0;
    bool stalled = false;  // steps hit the floating-point floor before step_tol
};

/// Banach iteration with the a-priori stopping rule: stop once the step is
/// below tol (1-k)/k, which bounds the distance to the fixed point by tol.
/// The observed step contraction is audited along the way; steps that stop
/// shrinking at the coordinate-noise floor end the iteration with `stalled`
/// set, leaving correctness to the caller's a-posteriori residual checks.
template <GeodesicSpaceLike S>
PicardResult<typename S::Point> picard(const S& space, const Contraction<S>& f,
                                       const typename S::Point& start, double tol, long budget) {
    if (!(f.factor >= 0.0) || !(f.factor < 1.0))
        throw AuditError("picard: claimed contraction factor " + std::to_string(f.factor) + " is not < 1");
    const double step_tol =
        std::max(f.factor > 0.0 ? tol * (1.0 - f.factor) / f.factor : tol, 1e-13);
    PicardResult<typename S::Point> out{start, 0, 0.0, false};
    double prev_step = -1.0;
    double first_step = -1.0;
    double best_step = -1.0;
    long since_best = 0;
    int violation_streak = 0;
    typename S::Point x = start;
    while (out.iters < budget) {
        typename S::Point next = f.eval(x);
        const double step = space.distance(next, x);
        ++out.iters;
        if (first_step < 0.0) first_step = step;
        // Outright expansion at macroscopic scale cannot be noise.
        if (step > 10.0 * first_step + 1.0)
            throw AuditError("picard: iteration is expanding (step " + std::to_string(step) +
                             " from initial " + std::to_string(first_step) + ")");
        // Step ratios at far coordinates carry percent-level quantization
        // noise, so demand a persistent, clearly excessive ratio.
        if (prev_step >= 0.0 && step > 1e-6 && step > f.factor * prev_step * 1.10) {
            if (++violation_streak >= 8)
                throw AuditError("picard: contraction audit tripped (step " + std::to_string(step) +
                                 " after " + std::to_string(prev_step) + ", factor " +
                                 std::to_string(f.factor) + ")");
        } else {
            violation_streak = 0;
        }
        prev_step = step;
        x = next;
        if (step <= step_tol) {
            out.point = x;
            out.last_step = step;
            return out;
        }
        if (best_step < 0.0 || step < 0.999 * best_step) {
            best_step = step;
            since_best = 0;
        } else if (++since_best >= 2048) {
            out.point = x;
            out.last_step = step;
            out.stalled = true;
            return out;
        }
    }
    throw BudgetError("picard: no convergence within " + std::to_string(budget) + " iterations");
}

template <typename P>
struct RunRow {
    int n = 0;
    double t = 0.0;
    double anchor_dist = 0.0;
    double residual = 0.0;
    long inner_iters = 0;
};

template <typename S>
struct FixpointRun {
    std::vector<RunRow<typename S::Point>> rows;
    std::vector<typename S::Point> iterates;   // z_n
    std::vector<typename S::Point> images;     // T z_n
    std::string schedule;
};

/// z_n = fixed point of the t_n-contraction, warm-started from the previous
/// iterate (with geodesic extrapolation in t when the space allows it).
/// Records anchor distances and residuals d(z_n, T z_n).
template <GeodesicSpaceLike S>
FixpointRun<S> approx_sequence(const S& space, const NonexpansiveMap<S>& T,
                               const typename S::Point& anchor, const Schedule& schedule,
                               double inner_tol, int count, long inner_budget = 2000000) {
    FixpointRun<S> run;
    run.schedule = schedule.describe();
    typename S::Point guess = anchor;
    for (int n = 1; n <= count; ++n) {
        const double t = schedule.at(n);
        const Contraction<S> f = t_contraction(space, T, anchor, t);
        if (run.iterates.size() >= 2) {
            // secant warm start in t along the iterate curve
            const auto& z2 = run.iterates[run.iterates.size() - 2];
            const auto& z1 = run.iterates[run.iterates.size() - 1];
            const double dprev = space.distance(z2, z1);
            const double dt_prev = schedule.at(n - 2) - schedule.at(n - 1);
            const double dt_now = schedule.at(n - 1) - t;
            if constexpr (ExtensibleSpace<S>) {
                if (dprev > 1e-9 && dt_prev > 0.0) {
                    try {
                        guess = space.extend(z2, z1, dprev * (1.0 + dt_now / dt_prev));
                    } catch (const Error&) {
                        // tangent not resolvable this close; plain warm start
                    }
                }
            }
        }
        const auto sol = picard(space, f, guess, inner_tol, inner_budget);
        const auto image = T.eval(sol.point);
        RunRow<typename S::Point> row;
        row.n = n;
        row.t = t;
        row.anchor_dist = space.distance(anchor, sol.point);
        row.residual = space.distance(sol.point, image);
        row.inner_iters = sol.iters;
        run.rows.push_back(row);
        run.iterates.push_back(sol.point);
        run.images.push_back(image);
        guess = sol.point;
    }
    return run;
}

template <typename P>
struct AsymCenterResult {
    P center;
    double radius = 0.0;  // windowed max distance at the center
    int window = 0;
};

/// Windowed asymptotic center on H^n: minimize y -> max_i d(y, w_i) by
/// pattern search over tangent directions with shrinking steps.
AsymCenterResult<HPoint> asymptotic_center(const HyperbolicSpace& space, const std::vector<HPoint>& window,
                                           double tol = 1e-10, double diameter_budget = 1e3);

/// Windowed asymptotic center on a tree: midpoint of a diametral pair.
AsymCenterResult<TreePoint> asymptotic_center(const TreeSpace& space, const std::vector<TreePoint>& window,
                                              double tol = 1e-10, double diameter_budget = 1e3);

/// Plane version of the pattern search (testing convenience).
AsymCenterResult<PlanePoint> asymptotic_center(const PlaneSpace& space, const std::vector<PlanePoint>& window,
                                               double tol = 1e-10, double diameter_budget = 1e3);

/// Rescaled-model version: same minimizer, radius in model units.
AsymCenterResult<HPoint> asymptotic_center(const ScaledHyperbolicSpace& space,
                                           const std::vector<HPoint>& window, double tol = 1e-10,
                                           double diameter_budget = 1e3);

/// The escape map along a geodesic ray: x -> c(t+1) where c(t) is the ray
/// projection of x. Nonexpansive because the projection is and the unit
/// shift is isometric along the ray.
template <GeodesicSpaceLike S>
NonexpansiveMap<S> ray_shift_map(const S& space, Ray<S> ray, const ConvexSet<S>& K,
                                 std::function<RayProjection<typename S::Point>(const typename S::Point&)>
                                     projector = nullptr) {
    for (double t : {0.0, 1.0, 2.0, 3.5})
        if (!K.contains(ray.at(t)))
            throw DomainError("ray_shift_map: the set does not contain the ray (probe failed at t=" +
                              std::to_string(t) + ")");
    std::function<RayProjection<typename S::Point>(const typename S::Point&)> proj =
        projector ? std::move(projector)
                  : [space, ray](const typename S::Point& x) { return project_ray(space, ray, x); };
    return {[ray, proj](const typename S::Point& x) { return ray.at(proj(x).param + 1.0); },
            "ray shift"};
}

enum class SolveVerdict { Converged, Divergent, BudgetExhausted };

template <typename P>
struct RayWitnessInfo {
    P from;
    P toward;
    double length = 0.0;
    bool samples_in_set = true;
};

struct SolveConfig {
    Schedule schedule = Schedule::harmonic();
    double inner_tol = 1e-9;
    long inner_budget = 4000000;
    int max_outer = 2000;
    double accept_tol = 1e-8;
    double stop_residual_factor = 0.125;  // attempt extraction below accept_tol * factor
    double divergence_budget = 1e3;       // anchor distance threshold
    int window = 32;
    double center_tol = 1e-10;
    long audit_pairs = 256;
    uint64_t seed = 1;
};

template <typename S>
struct SolveOutcome {
    SolveVerdict verdict = SolveVerdict::BudgetExhausted;
    std::optional<typename S::Point> fixed_point;
    double residual = -1.0;
    FixpointRun<S> run;
    std::optional<RayWitnessInfo<typename S::Point>> witness;
    AuditReport map_audit;
};

namespace detail {

// Escape test: above the budget, window-monotone, and at least doubled
// since the first window of the run.
inline bool diverging(const std::vector<double>& anchors, int window, double budget) {
    const int n = static_cast<int>(anchors.size());
    if (n < 2 * window) return false;
    if (anchors.back() <= budget) return false;
    double first_max = 0.0, prev_max = 0.0, last_max = 0.0;
    for (int i = 0; i < window; ++i) {
        first_max = std::max(first_max, anchors[static_cast<std::size_t>(i)]);
        prev_max = std::max(prev_max, anchors[static_cast<std::size_t>(n - 2 * window + i)]);
        last_max = std::max(last_max, anchors[static_cast<std::size_t>(n - window + i)]);
    }
    return last_max > prev_max && last_max >= 2.0 * first_max;
}

// Richardson extrapolation of the iterate curve z(t) to t = 0 in ambient
// coordinates, using recorded iterates near a fixed node ladder. The raw
// iterates bottom out at location error ~eps/t, while nodes at moderate t
// extrapolate well below that floor; the result is only ever used after an
// explicit residual check.
template <AmbientLinear S>
std::optional<typename S::Point> extrapolate_to_zero(const S& space, const FixpointRun<S>& run,
                                                     double tau = 1e-3) {
    const std::size_t m = run.rows.size();
    if (m < 4) return std::nullopt;
    std::array<std::size_t, 4> idx{};
    std::array<double, 4> ts{};
    for (int k = 0; k < 4; ++k) {
        const double target = tau * static_cast<double>(8 >> k);
        std::size_t best = m;
        double best_gap = 1e300;
        for (std::size_t i = 0; i < m; ++i) {
            const double t = run.rows[i].t;
            if (t < 1e-5 || t > 0.1) continue;
            const double gap = std::abs(std::log(t / target));
            if (gap < best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best == m) return std::nullopt;
        idx[static_cast<std::size_t>(k)] = best;
        ts[static_cast<std::size_t>(k)] = run.rows[best].t;
    }
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (idx[static_cast<std::size_t>(i)] == idx[static_cast<std::size_t>(j)]) return std::nullopt;

    std::array<double, 4> lambda{};
    double abssum = 0.0;
    for (int i = 0; i < 4; ++i) {
        double w = 1.0;
        for (int j = 0; j < 4; ++j)
            if (j != i) w *= ts[static_cast<std::size_t>(j)] /
                             (ts[static_cast<std::size_t>(j)] - ts[static_cast<std::size_t>(i)]);
        lambda[static_cast<std::size_t>(i)] = w;
        abssum += std::abs(w);
    }
    if (!(abssum < 50.0)) return std::nullopt;  // ill-conditioned node layout

    std::vector<double> acc;
    for (int i = 0; i < 4; ++i) {
        const auto coords = space.to_ambient(run.iterates[idx[static_cast<std::size_t>(i)]]);
        if (acc.empty()) acc.assign(coords.size(), 0.0);
        for (std::size_t c = 0; c < coords.size(); ++c)
            acc[c] += lambda[static_cast<std::size_t>(i)] * coords[c];
    }
    try {
        return space.from_ambient(acc);
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace detail

/// Run the anchored-contraction scheme and decide the dichotomy: extract and
/// verify an approximate fixed point when the iterates stay bounded, declare
/// divergence (with a chord witness) when the anchor distances escape.
template <GeodesicSpaceLike S>
SolveOutcome<S> solve(const S& space, const ConvexSet<S>& K, const NonexpansiveMap<S>& T,
                      const typename S::Point& anchor, const SolveConfig& cfg = {}) {
    SolveOutcome<S> out;
    out.run.schedule = cfg.schedule.describe();

    // Upfront nonexpansiveness audit on pairs sampled from K.
    if (cfg.audit_pairs > 0) {
        auto sampler = [&space, &K, &anchor](Rng& rng) {
            for (int i = 0; i < 1000; ++i) {
                auto p = space.sample(rng);
                if (K.contains(p)) return p;
            }
            return anchor;
        };
        out.map_audit = audit_nonexpansive(space, T, sampler, cfg.audit_pairs, cfg.seed);
        if (!out.map_audit.pass)
            throw AuditError("solve: nonexpansiveness audit failed (max excess " +
                             std::to_string(out.map_audit.max_excess) + ")");
    }

    std::vector<double> anchors;
    typename S::Point guess = anchor;
    for (int n = 1; n <= cfg.max_outer; ++n) {
        const double t = cfg.schedule.at(n);
        const Contraction<S> f = t_contraction(space, T, anchor, t);
        if (out.run.iterates.size() >= 2) {
            const auto& z2 = out.run.iterates[out.run.iterates.size() - 2];
            const auto& z1 = out.run.iterates[out.run.iterates.size() - 1];
            const double dprev = space.distance(z2, z1);
            const double dt_prev = cfg.schedule.at(n - 2) - cfg.schedule.at(n - 1);
            const double dt_now = cfg.schedule.at(n - 1) - t;
            if constexpr (ExtensibleSpace<S>) {
                if (dprev > 1e-9 && dt_prev > 0.0) {
                    try {
                        guess = space.extend(z2, z1, dprev * (1.0 + dt_now / dt_prev));
                    } catch (const Error&) {
                        // tangent not resolvable this close; plain warm start
                    }
                }
            }
        }
        const auto sol = picard(space, f, guess, cfg.inner_tol, cfg.inner_budget);
        const auto image = T.eval(sol.point);
        RunRow<typename S::Point> row;
        row.n = n;
        row.t = t;
        row.anchor_dist = space.distance(anchor, sol.point);
        row.residual = space.distance(sol.point, image);
        row.inner_iters = sol.iters;
        out.run.rows.push_back(row);
        out.run.iterates.push_back(sol.point);
        out.run.images.push_back(image);
        anchors.push_back(row.anchor_dist);
        guess = sol.point;

        // Online nonexpansiveness audit against the previous iterate, active
        // only in the chart-accurate regime; distance quantization grows like
        // cosh^2 of the anchor distance and drowns tight margins farther out.
        if (n >= 2 && row.anchor_dist <= 8.0 && anchors[anchors.size() - 2] <= 8.0) {
            const auto& zp = out.run.iterates[out.run.iterates.size() - 2];
            const auto& ip = out.run.images[out.run.images.size() - 2];
            const double dz = space.distance(zp, sol.point);
            const double di = space.distance(ip, image);
            if (dz > 1e-6 && di > dz * (1.0 + 1e-6))
                throw AuditError("solve: iterate nonexpansiveness audit tripped at n=" + std::to_string(n));
        }

        // Candidate extraction: the windowed asymptotic center of the late
        // iterates, plus (when the space allows it) the iterate curve
        // extrapolated to t = 0. Every candidate is verified by its actual
        // residual before being believed.
        const bool residual_trigger = row.residual <= cfg.accept_tol * cfg.stop_residual_factor;
        if (residual_trigger || n % 16 == 0) {
            typename S::Point cand = sol.point;
            double cand_res = row.residual;
            const int w = std::min<int>(cfg.window, static_cast<int>(out.run.iterates.size()));
            std::vector<typename S::Point> tail(out.run.iterates.end() - w, out.run.iterates.end());
            try {
                const auto center = asymptotic_center(space, tail, cfg.center_tol);
                const double res = space.distance(center.center, T.eval(center.center));
                if (res < cand_res) {
                    cand = center.center;
                    cand_res = res;
                }
            } catch (const DomainError&) {
                // unbounded window: leave it to the divergence test
            }
            if constexpr (AmbientLinear<S>) {
                if (const auto ex = detail::extrapolate_to_zero(space, out.run)) {
                    const double res = space.distance(*ex, T.eval(*ex));
                    if (res < cand_res) {
                        cand = *ex;
                        cand_res = res;
                    }
                }
            }
            if (cand_res <= cfg.accept_tol) {
                out.verdict = SolveVerdict::Converged;
                out.fixed_point = cand;
                out.residual = cand_res;
                return out;
            }
        }

        if (detail::diverging(anchors, cfg.window, cfg.divergence_budget)) {
            RayWitnessInfo<typename S::Point> wit{anchor, sol.point, row.anchor_dist, true};
            for (int k = 1; k <= 8; ++k) {
                const double arc = row.anchor_dist * static_cast<double>(k) / 8.0;
                bool ok = false;
                try {
                    ok = K.contains(space.point_at(anchor, sol.point, arc));
                } catch (const Error&) {
                    ok = false;
                }
                if (!ok) wit.samples_in_set = false;
            }
            out.verdict = SolveVerdict::Divergent;
            out.witness = wit;
            return out;
        }
    }
    // budget exhausted: report the best residual seen
    double best = -1.0;
    for (const auto& row : out.run.rows)
        if (best < 0.0 || row.residual < best) {
            best = row.residual;
            out.fixed_point = out.run.iterates[static_cast<std::size_t>(row.n - 1)];
        }
    out.residual = best;
    out.verdict = SolveVerdict::BudgetExhausted;
    return out;
}

}  // namespace catk
