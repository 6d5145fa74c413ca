#include "catk/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "catk/rtree.hpp"

namespace catk {

namespace {

const double pi = std::acos(-1.0);

struct KeyedValue {
    std::string value;
    int line = 0;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_double(const KeyedValue& kv, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(kv.value, &pos);
        if (pos != kv.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ParseError(kv.line, "bad number for " + what + ": '" + kv.value + "'");
    }
}

std::vector<std::string> tokens(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

double num_at(const std::vector<std::string>& ts, std::size_t i, const std::string& what) {
    if (i >= ts.size()) throw DomainError(what + ": missing token");
    try {
        return std::stod(ts[i]);
    } catch (...) {
        throw DomainError(what + ": bad number '" + ts[i] + "'");
    }
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
    static const std::set<std::string> known = {
        "schema", "seed",  "space",      "dim",        "kappa",           "tree",
        "anchor", "set",   "ray",        "map",        "schedule",        "inner_tol",
        "accept_tol",      "divergence_budget",        "window",          "max_outer",
        "expect", "audit_pairs"};
    std::map<std::string, KeyedValue> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (!known.count(key)) throw ParseError(lineno, "unknown key '" + key + "'");
        if (kv.count(key)) throw ParseError(lineno, "duplicate key '" + key + "'");
        if (value.empty()) throw ParseError(lineno, "empty value for '" + key + "'");
        kv[key] = {value, lineno};
    }
    if (!kv.count("schema")) throw ParseError(lineno == 0 ? 1 : lineno, "missing 'schema' key");
    if (kv["schema"].value != "catk/1")
        throw ParseError(kv["schema"].line, "unsupported schema '" + kv["schema"].value + "'");
    for (const char* req : {"space", "anchor", "set", "map"})
        if (!kv.count(req)) throw ParseError(lineno, std::string("missing required key '") + req + "'");

    Scenario sc;
    sc.space = kv["space"].value;
    if (sc.space != "h2" && sc.space != "hn" && sc.space != "mkappa" && sc.space != "tree" &&
        sc.space != "plane")
        throw ParseError(kv["space"].line, "unknown space '" + sc.space + "'");
    if (kv.count("dim")) {
        sc.dim = static_cast<int>(parse_double(kv["dim"], "dim"));
        if (sc.dim < 2) throw ParseError(kv["dim"].line, "dim must be at least 2");
        if (sc.space != "hn") throw ParseError(kv["dim"].line, "dim applies to space 'hn' only");
    }
    if (kv.count("kappa")) {
        sc.kappa = parse_double(kv["kappa"], "kappa");
        if (!(sc.kappa < 0.0)) throw ParseError(kv["kappa"].line, "kappa must be negative");
        if (sc.space != "mkappa") throw ParseError(kv["kappa"].line, "kappa applies to space 'mkappa' only");
    }
    if (sc.space == "tree") {
        if (!kv.count("tree")) throw ParseError(lineno, "tree space needs a 'tree' file");
        sc.tree_file = kv["tree"].value;
    }
    sc.anchor_spec = kv["anchor"].value;
    sc.set_spec = kv["set"].value;
    sc.map_spec = kv["map"].value;
    if (kv.count("ray")) sc.ray_spec = kv["ray"].value;
    if (kv.count("seed")) sc.seed = static_cast<uint64_t>(parse_double(kv["seed"], "seed"));
    sc.solver.seed = sc.seed;
    if (kv.count("schedule")) {
        const auto ts = tokens(kv["schedule"].value);
        if (ts.size() == 1 && ts[0] == "harmonic") {
            sc.solver.schedule = Schedule::harmonic();
        } else if (ts.size() == 3 && ts[0] == "geometric") {
            try {
                sc.solver.schedule = Schedule::geometric(std::stod(ts[1]), std::stod(ts[2]));
            } catch (const std::exception&) {
                throw ParseError(kv["schedule"].line, "bad geometric schedule parameters");
            }
        } else {
            throw ParseError(kv["schedule"].line, "schedule is 'harmonic' or 'geometric <t0> <q>'");
        }
    }
    if (kv.count("inner_tol")) sc.solver.inner_tol = parse_double(kv["inner_tol"], "inner_tol");
    if (kv.count("accept_tol")) sc.solver.accept_tol = parse_double(kv["accept_tol"], "accept_tol");
    if (kv.count("divergence_budget"))
        sc.solver.divergence_budget = parse_double(kv["divergence_budget"], "divergence_budget");
    if (kv.count("window")) sc.solver.window = static_cast<int>(parse_double(kv["window"], "window"));
    if (kv.count("max_outer"))
        sc.solver.max_outer = static_cast<int>(parse_double(kv["max_outer"], "max_outer"));
    if (kv.count("audit_pairs"))
        sc.solver.audit_pairs = static_cast<long>(parse_double(kv["audit_pairs"], "audit_pairs"));
    if (kv.count("expect")) {
        const std::string e = kv["expect"].value;
        if (e != "converged" && e != "divergent" && e != "unknown")
            throw ParseError(kv["expect"].line, "expect is converged, divergent or unknown");
        sc.expect = e;
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario: " + path);
    return parse_scenario(in);
}

namespace {

HPoint parse_hpoint(const std::vector<std::string>& ts, std::size_t at, const std::string& what,
                    double unit = 1.0) {
    if (at + 2 >= ts.size() || ts[at] != "polar") throw DomainError(what + ": expected 'polar <r> <phi>'");
    // polar radii are given in the space's own (model) units
    return HPoint::polar(num_at(ts, at + 1, what) * unit, num_at(ts, at + 2, what));
}

TreePoint parse_treepoint(const MetricTree& tree, const std::vector<std::string>& ts, std::size_t at,
                          const std::string& what) {
    if (at < ts.size() && ts[at] == "node" && at + 1 < ts.size())
        return TreePoint::at_node(static_cast<int>(num_at(ts, at + 1, what)));
    if (at < ts.size() && ts[at] == "edge" && at + 2 < ts.size())
        return tree.canonical(static_cast<int>(num_at(ts, at + 1, what)), num_at(ts, at + 2, what));
    throw DomainError(what + ": expected 'node <id>' or 'edge <id> <offset>'");
}

std::string describe_hpoint(const HPoint& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.ambient_dim(); ++i) s += (i ? ", " : "") + fmt(p[i]);
    return s + ")";
}

template <typename S>
ScenarioResult finish(const SolveOutcome<S>& out, const Scenario& sc,
                      const std::function<std::vector<std::string>(const typename S::Point&)>& coords,
                      const std::vector<std::string>& coord_names,
                      const std::function<std::string(const typename S::Point&)>& describe) {
    ScenarioResult res;
    std::vector<std::string> header = {"n", "t_n", "anchor_dist", "residual", "inner_iters"};
    header.insert(header.end(), coord_names.begin(), coord_names.end());
    CsvWriter csv(header);
    for (std::size_t i = 0; i < out.run.rows.size(); ++i) {
        const auto& row = out.run.rows[i];
        std::vector<std::string> cells = {fmt(row.n), fmt(row.t), fmt(row.anchor_dist),
                                          fmt(row.residual), fmt(row.inner_iters)};
        const auto extra = coords(out.run.iterates[i]);
        cells.insert(cells.end(), extra.begin(), extra.end());
        csv.row_raw(std::move(cells));
    }
    res.trace_csv = csv.str();

    switch (out.verdict) {
        case SolveVerdict::Converged:
            res.verdict = "converged";
            res.residual = out.residual;
            res.point_desc = describe(*out.fixed_point);
            break;
        case SolveVerdict::Divergent: {
            res.verdict = "divergent";
            const auto& w = *out.witness;
            res.witness_desc = "chord from " + describe(w.from) + " toward " + describe(w.toward) +
                               ", length " + fmt(w.length) +
                               (w.samples_in_set ? ", samples inside the set" : ", sample left the set");
            break;
        }
        case SolveVerdict::BudgetExhausted:
            res.verdict = "unknown";
            res.residual = out.residual;
            break;
    }
    if (sc.expect)
        res.exit_code = (*sc.expect == res.verdict) ? 0 : 1;
    else
        res.exit_code = (res.verdict == "unknown") ? 3 : 0;
    return res;
}

/// Ray for any hyperboloid-carried space; `unit` converts the space's arc
/// parameter into hyperbolic arc.
template <typename S>
Ray<S> make_h_ray(const HTangent& tan, double unit) {
    return {[tan, unit](double t) { return tan.at(t * unit); },
            std::numeric_limits<double>::infinity()};
}

template <typename S>
ScenarioResult run_hyperboloid(const S& space, double unit, const Scenario& sc) {
    const auto set_ts = tokens(sc.set_spec);
    const auto map_ts = tokens(sc.map_spec);
    const auto anchor_ts = tokens(sc.anchor_spec);
    const HPoint anchor = parse_hpoint(anchor_ts, 0, "anchor", unit);
    const bool planar = space.to_ambient(anchor).size() == 3;

    std::optional<HTangent> ray_tan;
    if (!sc.ray_spec.empty()) {
        const auto rts = tokens(sc.ray_spec);
        if (rts.size() != 5 || rts[0] != "polar" || rts[3] != "dir")
            throw DomainError("ray spec is 'polar <r> <phi> dir <angle>'");
        const double r0 = num_at(rts, 1, "ray") * unit, phi0 = num_at(rts, 2, "ray"),
                     a = num_at(rts, 4, "ray");
        // the direction angle is carried to the origin by the canonical
        // translation taking the base point there
        const HIsometry to_origin = HIsometry::translation(phi0, r0);
        const HPoint origin = to_origin.apply(HPoint::base(2));
        const HPoint second =
            to_origin.apply(HTangent(HPoint::base(2), MinkowskiVec{std::cos(a), std::sin(a), 0.0}).at(1.0));
        ray_tan = unit_tangent_toward(origin, second);
    }
    auto exact_proj = [ray_tan, unit](const HPoint& x) {
        auto pr = project_ray_exact(*ray_tan, x);
        pr.param /= unit;  // hyperbolic arc -> space arc
        return pr;
    };

    ConvexSet<S> K = whole_space_set(space);
    if (set_ts.at(0) == "ball") {
        const HPoint c = parse_hpoint(set_ts, 1, "set ball", unit);
        K = ball_set(space, c, num_at(set_ts, 4, "set ball radius"));
    } else if (set_ts[0] == "tube") {
        if (!ray_tan) throw DomainError("tube set needs a 'ray' key");
        K = tube_set(space, make_h_ray<S>(*ray_tan, unit), num_at(set_ts, 1, "tube width"), exact_proj);
    } else if (set_ts[0] == "halfplane") {
        if constexpr (std::is_same_v<S, HyperbolicSpace>) {
            if (!planar) throw DomainError("halfplane needs dimension 2");
            K = halfplane_set(space, num_at(set_ts, 1, "halfplane angle"));
        } else {
            throw DomainError("halfplane set is supported on 'h2' only");
        }
    } else if (set_ts[0] != "all") {
        throw DomainError("unknown set '" + set_ts[0] + "'");
    }

    NonexpansiveMap<S> T;
    if (map_ts.at(0) == "rotation") {
        if (!planar) throw DomainError("rotation map needs dimension 2");
        const HPoint c = parse_hpoint(map_ts, 1, "map rotation", unit);
        if (map_ts.size() < 6 || map_ts[4] != "angle")
            throw DomainError("rotation spec is 'rotation polar <r> <phi> angle <a>'");
        const HIsometry iso = HIsometry::rotation_about(c, num_at(map_ts, 5, "rotation angle"));
        T = {[iso](const HPoint& x) { return iso.apply(x); }, "rotation"};
    } else if (map_ts[0] == "translation") {
        if (!planar) throw DomainError("translation map needs dimension 2");
        const HIsometry iso = HIsometry::translation(num_at(map_ts, 1, "translation axis"),
                                                     num_at(map_ts, 2, "translation step") * unit);
        T = {[iso](const HPoint& x) { return iso.apply(x); }, "translation"};
    } else if (map_ts[0] == "rayshift") {
        if (!ray_tan) throw DomainError("rayshift needs a 'ray' key");
        T = ray_shift_map(space, make_h_ray<S>(*ray_tan, unit), K, exact_proj);
    } else if (map_ts[0] == "identity") {
        T = {[](const HPoint& x) { return x; }, "identity"};
    } else {
        throw DomainError("unknown map '" + map_ts[0] + "'");
    }

    const auto out = solve(space, K, T, anchor, sc.solver);
    std::function<std::vector<std::string>(const HPoint&)> coords = [](const HPoint& p) {
        std::vector<std::string> v;
        for (std::size_t i = 0; i < p.ambient_dim(); ++i) v.push_back(fmt(p[i]));
        return v;
    };
    std::vector<std::string> names;
    for (std::size_t i = 0; i < anchor.ambient_dim(); ++i) names.push_back("x" + std::to_string(i));
    std::function<std::string(const HPoint&)> desc = describe_hpoint;
    return finish(out, sc, coords, names, desc);
}

}  // namespace

ScenarioResult run_scenario(const Scenario& sc) {
    if (sc.space == "h2" || sc.space == "hn") {
        HyperbolicSpace h;
        h.dim = (sc.space == "hn") ? sc.dim : 2;
        return run_hyperboloid(h, 1.0, sc);
    }
    if (sc.space == "mkappa") {
        ScaledHyperbolicSpace mk;
        mk.kappa = sc.kappa;
        return run_hyperboloid(mk, mk.unit(), sc);
    }

    const auto set_ts = tokens(sc.set_spec);
    const auto map_ts = tokens(sc.map_spec);
    const auto anchor_ts = tokens(sc.anchor_spec);

    if (sc.space == "tree") {
        const MetricTree tree = load_tree_file(sc.tree_file);
        TreeSpace ts{&tree};
        const TreePoint anchor = parse_treepoint(tree, anchor_ts, 0, "anchor");

        ConvexSet<TreeSpace> K = whole_space_set(ts);
        if (set_ts.at(0) == "ball") {
            const TreePoint c = parse_treepoint(tree, set_ts, 1, "set ball");
            K = ball_set(ts, c, num_at(set_ts, set_ts.size() - 1, "set ball radius"));
        } else if (set_ts[0] != "all") {
            throw DomainError("tree sets are 'all' or 'ball node <id> <r>'");
        }

        NonexpansiveMap<TreeSpace> T;
        if (map_ts.at(0) == "treeshift") {
            const double step = num_at(map_ts, 1, "treeshift step");
            const TreePoint target = parse_treepoint(tree, map_ts, 2, "treeshift target");
            T = {[ts, step, target](const TreePoint& p) {
                     const double d = ts.distance(target, p);
                     if (d <= step) return target;
                     return ts.point_at(target, p, d - step);
                 },
                 "shift toward target"};
        } else if (map_ts[0] == "identity") {
            T = {[](const TreePoint& p) { return p; }, "identity"};
        } else {
            throw DomainError("tree maps are 'treeshift <step> node <id>' or 'identity'");
        }

        const auto out = solve(ts, K, T, anchor, sc.solver);
        std::function<std::vector<std::string>(const TreePoint&)> coords = [](const TreePoint& p) {
            if (p.is_node()) return std::vector<std::string>{"node", fmt(p.node())};
            return std::vector<std::string>{fmt(p.edge()), fmt(p.offset())};
        };
        std::function<std::string(const TreePoint&)> desc = [](const TreePoint& p) {
            if (p.is_node()) return "node " + fmt(p.node());
            return "edge " + fmt(p.edge()) + " offset " + fmt(p.offset());
        };
        return finish(out, sc, coords, {"loc0", "loc1"}, desc);
    }

    if (sc.space == "plane") {
        PlaneSpace pl;
        if (anchor_ts.at(0) != "xy" || anchor_ts.size() < 3)
            throw DomainError("plane anchor is 'xy <x> <y>'");
        const PlanePoint anchor{num_at(anchor_ts, 1, "anchor"), num_at(anchor_ts, 2, "anchor")};

        ConvexSet<PlaneSpace> K = whole_space_set(pl);
        if (set_ts.at(0) == "ball") {
            const PlanePoint c{num_at(set_ts, 1, "set ball"), num_at(set_ts, 2, "set ball")};
            K = ball_set(pl, c, num_at(set_ts, 3, "set ball radius"));
        } else if (set_ts[0] != "all") {
            throw DomainError("plane sets are 'all' or 'ball <x> <y> <r>'");
        }

        NonexpansiveMap<PlaneSpace> T;
        if (map_ts.at(0) == "rotation") {
            const PlanePoint c{num_at(map_ts, 1, "rotation"), num_at(map_ts, 2, "rotation")};
            const double a = num_at(map_ts, 3, "rotation angle");
            T = {[c, a](const PlanePoint& p) {
                     const double dx = p.x - c.x, dy = p.y - c.y;
                     return PlanePoint{c.x + dx * std::cos(a) - dy * std::sin(a),
                                       c.y + dx * std::sin(a) + dy * std::cos(a)};
                 },
                 "plane rotation"};
        } else if (map_ts[0] == "identity") {
            T = {[](const PlanePoint& p) { return p; }, "identity"};
        } else {
            throw DomainError("plane maps are 'rotation <x> <y> <angle>' or 'identity'");
        }

        const auto out = solve(pl, K, T, anchor, sc.solver);
        std::function<std::vector<std::string>(const PlanePoint&)> coords = [](const PlanePoint& p) {
            return std::vector<std::string>{fmt(p.x), fmt(p.y)};
        };
        std::function<std::string(const PlanePoint&)> desc = [](const PlanePoint& p) {
            return "(" + fmt(p.x) + ", " + fmt(p.y) + ")";
        };
        return finish(out, sc, coords, {"x", "y"}, desc);
    }

    throw DomainError("run_scenario: unsupported space '" + sc.space + "'");
}

const std::vector<std::string>& all_campaigns() {
    static const std::vector<std::string> names = {"gap-growth",     "collapse", "flat-witness",
                                                   "capture-radius", "cat",      "busemann",
                                                   "chains"};
    return names;
}

namespace {

CampaignOutput campaign_gap_growth(const VerifyOptions& opts) {
    CampaignOutput out;
    out.name = "gap-growth";

    std::vector<double> legs;
    for (int a = 1; a <= 100; ++a) legs.push_back(static_cast<double>(a));
    const auto sweep = chord_gap_threshold_sweep(pi / 2, pi / 2, 1.0, legs);
    CsvWriter sweep_csv({"leg", "gap", "bound", "pass"});
    for (const auto& row : sweep.rows) sweep_csv.row(row.leg, row.gap, row.bound, row.pass ? 1 : 0);
    out.files.emplace_back("gap_sweep.csv", sweep_csv.str());

    const double threshold = sweep.threshold > 0.0 ? sweep.threshold : 1.0;
    const auto trials =
        chord_gap_trials(pi / 2, 1.0, threshold, 100.0 * threshold, opts.samples, opts.seed);

    const auto growth = chord_growth(pi / 2, 1.0, {10.0, 100.0, 1000.0});
    const auto growth_single = chord_growth(0.3, 1.0, {10.0, 100.0, 1000.0}, false, 2.0);
    CsvWriter growth_csv({"mode", "a", "b", "outer"});
    for (const auto& row : growth) growth_csv.row("both", row.a, row.b, row.outer);
    for (const auto& row : growth_single) growth_csv.row("single", row.a, row.b, row.outer);
    out.files.emplace_back("gap_growth.csv", growth_csv.str());

    const auto ref = chord_gap({pi / 2, pi / 2, 100.0, 100.0, 1.0});
    const bool growth_monotone = growth[2].outer > growth[1].outer && growth[1].outer > growth[0].outer &&
                                 growth_single[2].outer > growth_single[1].outer;
    out.pass = ref.pass && ref.gap > 0.5 && trials.failures == 0 && sweep.threshold > 0.0 && growth_monotone;
    out.summary = "threshold=" + fmt(sweep.threshold) + " trials=" + fmt(trials.trials) +
                  " failures=" + fmt(trials.failures) + " worst_margin=" + fmt(trials.worst_margin);
    CsvWriter summary({"threshold", "trials", "failures", "worst_margin", "ref_gap", "ref_bound"});
    summary.row(sweep.threshold, trials.trials, trials.failures, trials.worst_margin, ref.gap, ref.bound);
    out.files.emplace_back("gap_trials.csv", summary.str());
    return out;
}

CampaignOutput campaign_collapse(const VerifyOptions& opts) {
    CampaignOutput out;
    out.name = "collapse";
    std::vector<double> hs, epss;
    const int n_max = std::max(10, static_cast<int>(opts.h_max));
    for (int n = 1; n <= n_max; ++n) {
        hs.push_back(static_cast<double>(n));
        epss.push_back(1.0 / static_cast<double>(n));
    }
    const auto scan = collapse_scan(hs, epss);
    CsvWriter csv({"n", "h", "eps", "exact", "bound", "residual"});
    bool tail_ok = true;
    for (const auto& row : scan.rows) {
        csv.row(row.n, row.h, row.eps, row.exact, row.bound, row.residual);
        if (row.n >= 10 && !(row.residual < 1e-6)) tail_ok = false;
    }
    out.files.emplace_back("collapse.csv", csv.str());
    out.pass = scan.exact_below_bound && scan.exact_decays && tail_ok;
    out.summary = std::string("exact<=bound=") + (scan.exact_below_bound ? "yes" : "no") +
                  " decays=" + (scan.exact_decays ? "yes" : "no") +
                  " residual<1e-6 from n=10: " + (tail_ok ? "yes" : "no");
    return out;
}

CampaignOutput campaign_flat_witness(const VerifyOptions&) {
    CampaignOutput out;
    out.name = "flat-witness";
    const auto rep = flat_witness({1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 18.0});
    CsvWriter csv({"h", "eps_planar", "leg_planar", "eps_hyperbolic"});
    bool legs_ok = true;
    for (const auto& row : rep.rows) {
        csv.row(row.h, row.eps_planar, row.leg_planar, row.eps_hyperbolic);
        if (row.leg_planar != 1.0) legs_ok = false;
    }
    out.files.emplace_back("flat_witness.csv", csv.str());
    const double eps100 = rep.rows[6].eps_planar;
    const bool planar_ok = std::abs(eps100 - (std::sqrt(10001.0) - 100.0)) <= 1e-12;
    const bool hyper_ok = rep.hyperbolic_limit_gap <= 1e-9;
    out.pass = legs_ok && planar_ok && hyper_ok;
    out.summary =
        "eps_planar(100)=" + fmt(eps100) + " hyperbolic_limit_gap=" + fmt(rep.hyperbolic_limit_gap);
    return out;
}

CampaignOutput campaign_capture(const VerifyOptions& opts) {
    CampaignOutput out;
    out.name = "capture-radius";
    const long trials = std::min<long>(opts.samples, 20000);
    CsvWriter csv({"r", "eps", "trials", "max_chord_dist", "radius_hat", "audit_violations", "audit_max"});
    bool ok = true;
    double base_radius = 0.0;
    for (double eps : {1.0, 0.5, 0.25}) {
        const auto cal = capture_radius_calibrate(1.0, eps, trials, opts.seed);
        csv.row(cal.r, cal.eps, cal.trials, cal.max_chord_dist, cal.radius_hat, cal.audit_violations,
                cal.audit_max);
        if (cal.audit_violations != 0) ok = false;
        if (eps == 1.0) base_radius = cal.radius_hat;
    }
    out.files.emplace_back("capture_radius.csv", csv.str());
    out.pass = ok;
    out.summary = "radius_hat(r=1,eps=1)=" + fmt(base_radius) + (ok ? ", audits clean" : ", audit violations");
    return out;
}

CampaignOutput campaign_cat(const VerifyOptions& opts) {
    CampaignOutput out;
    out.name = "cat";
    HyperbolicSpace h2;
    Rng rng(opts.seed);
    CsvWriter csv({"space", "triangle", "kappa", "samples", "max_violation", "verdict"});
    bool ok = true;
    // per-triangle pair budget: scaled from the sample count, capped by --budget
    const long per_triangle =
        std::clamp<long>(opts.samples / 100, 100, std::max<long>(100, opts.budget));
    for (int i = 0; i < 24; ++i) {
        const std::array<HPoint, 3> tri = {
            HPoint::polar(uniform(rng, 0.2, 2.5), uniform(rng, 0.0, 2.0 * pi)),
            HPoint::polar(uniform(rng, 0.2, 2.5), uniform(rng, 0.0, 2.0 * pi)),
            HPoint::polar(uniform(rng, 0.2, 2.5), uniform(rng, 0.0, 2.0 * pi))};
        for (double kv : {-1.0, -0.5, 0.0}) {
            const auto rep =
                cat_check(h2, tri, Kappa(kv), per_triangle, opts.seed + 100 + static_cast<uint64_t>(i));
            csv.row("h2", i, kv, rep.samples, rep.max_violation, rep.pass ? "pass" : "fail");
            if (!rep.pass) ok = false;
        }
    }
    const MetricTree star(4, {{0, 1, 1.0}, {0, 2, 2.0}, {0, 3, 3.0}});
    TreeSpace ts{&star};
    std::uniform_int_distribution<int> edge(0, 2);
    for (int i = 0; i < 12; ++i) {
        std::array<TreePoint, 3> tri = {TreePoint::at_node(0), TreePoint::at_node(0),
                                        TreePoint::at_node(0)};
        for (auto& p : tri) {
            const int e = edge(rng);
            p = star.canonical(e, uniform(rng, 0.0, star.edge_length(e)));
        }
        const auto rep =
            cat_check(ts, tri, Kappa(-1.0), per_triangle, opts.seed + 200 + static_cast<uint64_t>(i));
        csv.row("tree", i, -1.0, rep.samples, rep.max_violation, rep.pass ? "pass" : "fail");
        if (!rep.pass) ok = false;
    }
    out.files.emplace_back("cat_check.csv", csv.str());
    out.pass = ok;
    out.summary = ok ? "no comparison violations" : "comparison violations found";
    return out;
}

CampaignOutput campaign_busemann(const VerifyOptions& opts) {
    CampaignOutput out;
    out.name = "busemann";
    HyperbolicSpace h2;
    const long trials = std::max<long>(200, opts.samples / 100);
    const auto hrep = busemann_audit(h2, trials, opts.seed);
    const MetricTree star(4, {{0, 1, 1.0}, {0, 2, 2.0}, {0, 3, 3.0}});
    TreeSpace ts{&star};
    const auto trep = busemann_audit(ts, trials, opts.seed + 1);
    CsvWriter csv({"space", "trials", "max_violation", "verdict"});
    csv.row("h2", hrep.trials, hrep.max_violation, hrep.pass ? "pass" : "fail");
    csv.row("tree", trep.trials, trep.max_violation, trep.pass ? "pass" : "fail");
    out.files.emplace_back("busemann.csv", csv.str());
    out.pass = hrep.pass && trep.pass;
    out.summary = "max_violation h2=" + fmt(hrep.max_violation) + " tree=" + fmt(trep.max_violation);
    return out;
}

CampaignOutput campaign_chains(const VerifyOptions&) {
    CampaignOutput out;
    out.name = "chains";
    std::vector<ChainConfig> configs;
    ChainConfig sym;
    configs.push_back(sym);
    ChainConfig asym;
    asym.phi_p = 0.8;
    asym.phi_q = -0.35;
    asym.eps_p = 0.08;
    asym.eps_q = 0.02;
    configs.push_back(asym);
    ChainConfig gap;
    gap.r_over_2R = 0.1;
    gap.d = 0.5;
    configs.push_back(gap);
    ChainConfig wide;
    wide.span = 8.0;
    wide.phi_p = 1.1;
    wide.phi_q = -0.9;
    configs.push_back(wide);

    CsvWriter csv({"span", "phi_p", "phi_q", "angle_floor", "comparison_angle", "gap", "gap_bound",
                   "angle_p", "angle_q", "busemann_lhs", "busemann_rhs", "verdict"});
    bool ok = true;
    for (const auto& cfg : configs) {
        const auto res = chain_check(cfg);
        csv.row(cfg.span, cfg.phi_p, cfg.phi_q, res.angle_floor, res.comparison_angle, res.gap,
                res.gap_bound, res.angle_at_join_p, res.angle_at_join_q, res.busemann_lhs,
                res.busemann_rhs, res.pass ? "pass" : "fail");
        if (!res.pass) ok = false;
    }
    out.files.emplace_back("chains.csv", csv.str());
    out.pass = ok;
    out.summary = ok ? "all inequality chains hold" : "chain violation found";
    return out;
}

}  // namespace

CampaignOutput run_campaign(const std::string& name, const VerifyOptions& opts) {
    if (name == "gap-growth") return campaign_gap_growth(opts);
    if (name == "collapse") return campaign_collapse(opts);
    if (name == "flat-witness") return campaign_flat_witness(opts);
    if (name == "capture-radius") return campaign_capture(opts);
    if (name == "cat") return campaign_cat(opts);
    if (name == "busemann") return campaign_busemann(opts);
    if (name == "chains") return campaign_chains(opts);
    throw DomainError("unknown campaign '" + name + "'");
}

}  // namespace catk
