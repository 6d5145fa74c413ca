#include "catk/rtree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <sstream>

namespace catk {

TreePoint TreePoint::at_node(int node) {
    if (node < 0) throw DomainError("TreePoint: negative node id");
    TreePoint p;
    p.node_ = node;
    return p;
}

TreePoint TreePoint::on_edge(int edge, double offset) {
    TreePoint p;
    p.edge_ = edge;
    p.offset_ = offset;
    return p;
}

MetricTree::MetricTree(int node_count, std::vector<TreeEdge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
    if (node_count_ < 1) throw DomainError("MetricTree: needs at least one node");
    if (static_cast<int>(edges_.size()) != node_count_ - 1)
        throw DomainError("MetricTree: a tree on n nodes has exactly n-1 edges");
    adj_.assign(static_cast<std::size_t>(node_count_), {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const TreeEdge& ed = edges_[e];
        if (ed.u < 0 || ed.v < 0 || ed.u >= node_count_ || ed.v >= node_count_)
            throw DomainError("MetricTree: edge endpoint out of range");
        if (ed.u == ed.v) throw DomainError("MetricTree: self-loop");
        if (!(ed.length > 0.0) || !std::isfinite(ed.length))
            throw DomainError("MetricTree: edge lengths must be positive");
        adj_[static_cast<std::size_t>(ed.u)].emplace_back(static_cast<int>(e), ed.v);
        adj_[static_cast<std::size_t>(ed.v)].emplace_back(static_cast<int>(e), ed.u);
    }
    // Edge count is n-1, so connectivity implies acyclicity.
    std::vector<char> seen(static_cast<std::size_t>(node_count_), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int reached = 1;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (auto [e, w] : adj_[static_cast<std::size_t>(u)]) {
            (void)e;
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++reached;
                queue.push_back(w);
            }
        }
    }
    if (reached != node_count_) throw DomainError("MetricTree: not connected");
}

const std::vector<std::pair<int, int>>& MetricTree::incident(int node) const {
    if (node < 0 || node >= node_count_) throw DomainError("incident: node out of range");
    return adj_[static_cast<std::size_t>(node)];
}

TreePoint MetricTree::canonical(int edge, double offset) const {
    if (edge < 0 || edge >= static_cast<int>(edges_.size())) throw DomainError("canonical: edge out of range");
    const double len = edge_length(edge);
    if (offset < -Tol::tree || offset > len + Tol::tree)
        throw DomainError("canonical: offset outside edge");
    offset = std::clamp(offset, 0.0, len);
    if (offset <= Tol::tree) return TreePoint::at_node(edges_[static_cast<std::size_t>(edge)].u);
    if (offset >= len - Tol::tree) return TreePoint::at_node(edges_[static_cast<std::size_t>(edge)].v);
    return TreePoint::on_edge(edge, offset);
}

void MetricTree::node_distances(int from, std::vector<double>& dist, std::vector<int>& parent_edge) const {
    dist.assign(static_cast<std::size_t>(node_count_), -1.0);
    parent_edge.assign(static_cast<std::size_t>(node_count_), -1);
    dist[static_cast<std::size_t>(from)] = 0.0;
    std::deque<int> queue{from};
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (auto [e, w] : adj_[static_cast<std::size_t>(u)]) {
            if (dist[static_cast<std::size_t>(w)] < 0.0) {
                dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + edge_length(e);
                parent_edge[static_cast<std::size_t>(w)] = e;
                queue.push_back(w);
            }
        }
    }
}

namespace {

struct Exit {
    int node;
    double cost;
};

// Ways of leaving a point toward the node graph. Rejects locations that
// cannot belong to this tree.
std::vector<Exit> exits(const MetricTree& t, const TreePoint& p) {
    if (p.is_node()) {
        if (p.node() >= t.node_count()) throw DomainError("tree point does not belong to this tree");
        return {{p.node(), 0.0}};
    }
    if (p.edge() < 0 || p.edge() >= static_cast<int>(t.edges().size()))
        throw DomainError("tree point does not belong to this tree");
    const TreeEdge& e = t.edges()[static_cast<std::size_t>(p.edge())];
    if (p.offset() < 0.0 || p.offset() > e.length)
        throw DomainError("tree point does not belong to this tree");
    return {{e.u, p.offset()}, {e.v, e.length - p.offset()}};
}

bool same_edge_interior(const TreePoint& p, const TreePoint& q) {
    return !p.is_node() && !q.is_node() && p.edge() == q.edge();
}

}  // namespace

double tree_dist(const MetricTree& t, const TreePoint& p, const TreePoint& q) {
    if (same_edge_interior(p, q)) return std::abs(p.offset() - q.offset());
    std::vector<double> dist;
    std::vector<int> parent;
    const auto pe = exits(t, p);
    const auto qe = exits(t, q);
    t.node_distances(pe[0].node, dist, parent);
    // Distances from a second source are only needed when p is edge-interior.
    std::vector<double> dist2;
    if (pe.size() == 2) {
        std::vector<int> parent2;
        t.node_distances(pe[1].node, dist2, parent2);
    }
    double best = -1.0;
    for (std::size_t i = 0; i < pe.size(); ++i) {
        const std::vector<double>& d = (i == 0) ? dist : dist2;
        for (const Exit& qx : qe) {
            const double cand = pe[i].cost + d[static_cast<std::size_t>(qx.node)] + qx.cost;
            if (best < 0.0 || cand < best) best = cand;
        }
    }
    return best;
}

TreePoint tree_segment(const MetricTree& t, const TreePoint& p, const TreePoint& q, double s) {
    const double total = tree_dist(t, p, q);
    if (s < -Tol::tree || s > total + Tol::tree)
        throw DomainError("tree_segment: arc outside [0, d(p,q)]");
    s = std::clamp(s, 0.0, total);
    if (same_edge_interior(p, q)) {
        const double off = p.offset() + (q.offset() >= p.offset() ? s : -s);
        return t.canonical(p.edge(), off);
    }
    if (total <= Tol::tree) return p;

    // Pick the exit pair realizing the path, then walk it.
    const auto pe = exits(t, p);
    const auto qe = exits(t, q);
    int best_pi = 0, best_qn = qe[0].node;
    double best = -1.0, best_qcost = qe[0].cost;
    std::vector<double> dist;
    std::vector<int> parent;
    for (std::size_t i = 0; i < pe.size(); ++i) {
        std::vector<double> d;
        std::vector<int> par;
        t.node_distances(pe[i].node, d, par);
        for (const Exit& qx : qe) {
            const double cand = pe[i].cost + d[static_cast<std::size_t>(qx.node)] + qx.cost;
            if (best < 0.0 || cand < best - Tol::tree) {
                best = cand;
                best_pi = static_cast<int>(i);
                best_qn = qx.node;
                best_qcost = qx.cost;
                dist = d;
                parent = par;
            }
        }
    }
    const Exit px = pe[static_cast<std::size_t>(best_pi)];

    // Leg 1: inside p's edge, toward exit node px.node.
    if (!p.is_node() && s <= px.cost + Tol::tree) {
        const TreeEdge& e = t.edges()[static_cast<std::size_t>(p.edge())];
        const double off = (px.node == e.u) ? p.offset() - s : p.offset() + s;
        return t.canonical(p.edge(), off);
    }
    double rem = s - px.cost;

    // Leg 2: node path from px.node to best_qn (recovered via parent edges from px.node).
    std::vector<int> path_edges;
    {
        int cur = best_qn;
        while (cur != px.node) {
            const int e = parent[static_cast<std::size_t>(cur)];
            path_edges.push_back(e);
            const TreeEdge& ed = t.edges()[static_cast<std::size_t>(e)];
            cur = (ed.u == cur) ? ed.v : ed.u;
        }
        std::reverse(path_edges.begin(), path_edges.end());
    }
    int at = px.node;
    for (int e : path_edges) {
        const TreeEdge& ed = t.edges()[static_cast<std::size_t>(e)];
        const int next = (ed.u == at) ? ed.v : ed.u;
        if (rem <= ed.length + Tol::tree) {
            const double off = (at == ed.u) ? rem : ed.length - rem;
            return t.canonical(e, off);
        }
        rem -= ed.length;
        at = next;
    }

    // Leg 3: into q's edge from best_qn.
    if (q.is_node()) return TreePoint::at_node(q.node());
    const TreeEdge& eq = t.edges()[static_cast<std::size_t>(q.edge())];
    (void)best_qcost;
    const double off = (best_qn == eq.u) ? rem : eq.length - rem;
    return t.canonical(q.edge(), off);
}

bool gluing_check(const MetricTree& t, const TreePoint& x, const TreePoint& y, const TreePoint& z) {
    const double dyx = tree_dist(t, y, x);
    const double dxz = tree_dist(t, x, z);
    const double dyz = tree_dist(t, y, z);
    const double scale = std::max({1.0, dyx, dxz, dyz});
    // (y,z)_x > 0 means [y,x] and [x,z] share a segment beyond x, so the
    // hypothesis of the gluing axiom is not met.
    const double gromov = 0.5 * (dyx + dxz - dyz);
    if (gromov > Tol::tree * scale) return true;
    return std::abs(dyx + dxz - dyz) <= Tol::tree * scale;
}

double four_point_gap(const MetricTree& t, const TreePoint& a, const TreePoint& b, const TreePoint& c,
                      const TreePoint& d) {
    double s1 = tree_dist(t, a, b) + tree_dist(t, c, d);
    double s2 = tree_dist(t, a, c) + tree_dist(t, b, d);
    double s3 = tree_dist(t, a, d) + tree_dist(t, b, c);
    double lo = std::min({s1, s2, s3});
    double hi = std::max({s1, s2, s3});
    const double mid = s1 + s2 + s3 - lo - hi;
    return hi - mid;
}

RayVerdict tree_ray_detect(const TreeGenerator& gen, double length_budget, long node_budget,
                           const std::function<bool(const std::vector<int>&)>& admit) {
    if (!gen.children) throw DomainError("tree_ray_detect: generator has no children function");
    RayVerdict out;
    bool abandoned = false;

    struct Frame {
        std::vector<int> path;
        double acc = 0.0;
    };
    std::vector<Frame> stack{{{}, 0.0}};
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (out.nodes_expanded++ >= node_budget) {
            abandoned = true;
            break;
        }
        if (f.acc >= length_budget) {
            out.kind = RayVerdictKind::RayWitness;
            out.witness_path = f.path;
            out.witness_length = f.acc;
            return out;
        }
        if (gen.tail_bound) {
            const auto tail = gen.tail_bound(static_cast<int>(f.path.size()));
            if (tail && f.acc + *tail < length_budget) continue;  // branch can never reach the budget
        }
        const std::vector<double> kids = gen.children(f.path);
        for (std::size_t i = 0; i < kids.size(); ++i) {
            Frame child;
            child.path = f.path;
            child.path.push_back(static_cast<int>(i));
            if (admit && !admit(child.path)) continue;
            child.acc = f.acc + kids[i];
            stack.push_back(std::move(child));
        }
    }
    out.kind = abandoned ? RayVerdictKind::Unknown : RayVerdictKind::Bounded;
    return out;
}

RayVerdict tree_ray_detect(const MetricTree&) {
    // A finite tree never contains an infinite geodesic.
    RayVerdict out;
    out.kind = RayVerdictKind::Bounded;
    return out;
}

MetricTree parse_tree_file(std::istream& in) {
    std::string line;
    int lineno = 0;
    bool have_header = false, have_nodes = false;
    int nodes = 0;
    std::vector<TreeEdge> edges;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (!have_header) {
            std::string ver;
            if (tok != "rtree" || !(ls >> ver) || ver != "v1")
                throw ParseError(lineno, "expected header 'rtree v1'");
            have_header = true;
            continue;
        }
        if (tok == "nodes") {
            if (have_nodes) throw ParseError(lineno, "duplicate 'nodes' line");
            if (!(ls >> nodes) || nodes < 1) throw ParseError(lineno, "bad node count");
            have_nodes = true;
        } else if (tok == "edge") {
            if (!have_nodes) throw ParseError(lineno, "'edge' before 'nodes'");
            TreeEdge e;
            if (!(ls >> e.u >> e.v >> e.length)) throw ParseError(lineno, "expected 'edge <u> <v> <length>'");
            if (e.u < 0 || e.v < 0 || e.u >= nodes || e.v >= nodes)
                throw ParseError(lineno, "edge endpoint out of range");
            if (!(e.length > 0.0)) throw ParseError(lineno, "edge length must be positive");
            edges.push_back(e);
        } else {
            throw ParseError(lineno, "unknown directive '" + tok + "'");
        }
        std::string extra;
        if (ls >> extra) throw ParseError(lineno, "trailing tokens after directive");
    }
    if (!have_header) throw ParseError(lineno == 0 ? 1 : lineno, "missing 'rtree v1' header");
    if (!have_nodes) throw ParseError(lineno, "missing 'nodes' line");
    try {
        return MetricTree(nodes, std::move(edges));
    } catch (const DomainError& e) {
        throw ParseError(lineno, std::string("invalid tree: ") + e.what());
    }
}

MetricTree load_tree_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open tree file: " + path);
    return parse_tree_file(in);
}

}  // namespace catk
