#pragma once

#include <vector>

#include "catk/fixpoint.hpp"
#include "catk/model_space.hpp"

namespace catk {

// Numerical verification campaigns for the comparison-geometry estimates the
// fixed-point argument rests on. Each campaign produces a table for the CSV
// reports plus a verdict.

/// Planar triangle with legs a+d and b+d from the apex and apex angle
/// alpha >= alpha0; u and v sit on the legs at distances a and b. The outer
/// chord C = d(y,z) exceeds the inner chord c = d(u,v) by the gap h, which
/// for long legs beats d sin^2(alpha0/2).
struct ChordGapInstance {
    double alpha0 = 0.0;  // angle floor, in (0, pi]
    double alpha = 0.0;   // actual apex angle, alpha >= alpha0
    double a = 0.0;
    double b = 0.0;
    double d = 0.0;
};

struct ChordGapResult {
    double outer = 0.0;  // C
    double inner = 0.0;  // c
    double gap = 0.0;    // h = C - c
    double bound = 0.0;  // d sin^2(alpha0 / 2)
    bool pass = false;   // gap > bound
};

ChordGapResult chord_gap(const ChordGapInstance& inst);

struct ChordGapSweepRow {
    double leg = 0.0;  // a = b value
    double gap = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct ChordGapSweep {
    std::vector<ChordGapSweepRow> rows;
    double threshold = -1.0;  // first leg value where the verdict holds, -1 if never
};

/// Sweep a = b over a grid and report where the gap verdict first holds.
ChordGapSweep chord_gap_threshold_sweep(double alpha0, double alpha, double d,
                                        const std::vector<double>& legs);

struct ChordGapTrials {
    long trials = 0;
    long failures = 0;
    double worst_margin = 1e300;  // min of gap - bound over trials
};

/// Randomized audit above the threshold: alpha in [alpha0, pi], a = b in
/// [leg_min, leg_max]; counts verdict failures.
ChordGapTrials chord_gap_trials(double alpha0, double d, double leg_min, double leg_max, long trials,
                                uint64_t seed);

struct ChordGrowthRow {
    double a = 0.0;
    double b = 0.0;
    double outer = 0.0;
};

/// Outer-chord growth table along a leg sweep (the legs-to-infinity limit).
std::vector<ChordGrowthRow> chord_growth(double alpha, double d, const std::vector<double>& legs,
                                         bool sweep_both = true, double fixed_a = 1.0);

/// Right-angle hyperbolic triangle with legs h and hypotenuse h + eps:
/// closed forms for the short side and its curvature bound
/// arccosh(e^eps + e^{-eps-2h}). Exponential-dominant forms throughout, so
/// no overflow for any h.
double collapse_exact(double h, double eps);
double collapse_bound(double h, double eps);

struct CollapseRow {
    int n = 0;
    double h = 0.0;
    double eps = 0.0;
    double exact = 0.0;
    double bound = 0.0;
    double residual = 0.0;  // bound - exact
};

struct CollapseScan {
    std::vector<CollapseRow> rows;
    bool exact_below_bound = true;    // exact <= bound (up to 1 ulp) everywhere
    bool exact_decays = true;         // exact eventually monotone decreasing
    double max_exact_tail = 0.0;      // max exact over the last quarter of rows
};

/// Scan h_n -> infinity, eps_n -> 0 and tabulate both closed forms.
CollapseScan collapse_scan(const std::vector<double>& hs, const std::vector<double>& epss);

struct FlatWitnessRow {
    double h = 0.0;
    double eps_planar = 0.0;  // sqrt(h^2+1) - h, stable form
    double leg_planar = 1.0;  // held at exactly 1 by construction
    double eps_hyperbolic = 0.0;
};

struct FlatWitnessReport {
    std::vector<FlatWitnessRow> rows;
    double hyperbolic_limit = 0.0;     // log(cosh 1)
    double hyperbolic_limit_gap = 0.0; // |eps_hyp(h_max) - log cosh 1|
};

/// The planar family keeping the short side exactly 1 while eps -> 0, and
/// its hyperbolic counterpart where eps tends to log(cosh 1) instead.
FlatWitnessReport flat_witness(const std::vector<double>& hs);

struct CaptureCalibration {
    double r = 0.0;
    double eps = 0.0;
    long trials = 0;
    double max_chord_dist = 0.0;  // max over trials of dist(base, [x,y])
    double radius_hat = 0.0;      // calibrated capture radius
    long audit_violations = 0;    // fresh-batch rechecks beyond radius_hat
    double audit_max = 0.0;
};

/// Monte-Carlo calibration of the capture radius R(r, eps): for pairs whose
/// ball projections are at least eps apart, the chord [x,y] meets the ball
/// B(base, R). Audited on a fresh seeded batch of equal size.
CaptureCalibration capture_radius_calibrate(double r, double eps, long trials, uint64_t seed,
                                            double sample_radius = 6.0);

struct ChainConfig {
    double span = 6.0;      // distance of the far iterates from the anchor
    double phi_p = 0.5;     // direction of the first iterate
    double phi_q = -0.5;    // direction of the second
    double eps_p = 0.05;    // residual stand-ins
    double eps_q = 0.05;
    double d = 0.5;         // limiting residual in the comparison bound
    double r_over_2R = 0.1; // shadow separation ratio, sets the angle floor
};

struct ChainResult {
    double angle_floor = 0.0;       // 2 arcsin(r/2R)
    double comparison_angle = 0.0;  // planar angle at the anchor
    double gap = 0.0;               // comparison-chord gap
    double gap_bound = 0.0;         // d sin^2(angle_floor/2)
    double angle_at_join_p = 0.0;   // angles at the proportional point
    double angle_at_join_q = 0.0;
    double busemann_lhs = 0.0;      // d(chord point, proportional image point)
    double busemann_rhs = 0.0;      // max(eps_p, eps_q)
    bool pass = false;
};

/// One synthetic far-iterate configuration in H^2: checks the comparison
/// chord gap, the angle split at the proportional join point (the two angles
/// are supplementary, so one is at least pi/2), and the convexity bound on
/// the chord-to-image distance.
ChainResult chain_check(const ChainConfig& cfg);

}  // namespace catk
