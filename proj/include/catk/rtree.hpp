#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "catk/common.hpp"

namespace catk {

struct TreeEdge {
    int u = 0;
    int v = 0;
    double length = 0.0;
};

/// Location on a weighted simplicial tree: either a node, or an interior
/// offset on an edge measured from the edge's `u` endpoint. Offsets landing
/// on an endpoint are canonicalized to node form.
class TreePoint {
public:
    static TreePoint at_node(int node);
    static TreePoint on_edge(int edge, double offset);  // canonicalized by MetricTree

    bool is_node() const { return node_ >= 0; }
    int node() const { return node_; }
    int edge() const { return edge_; }
    double offset() const { return offset_; }

private:
    int node_ = -1;
    int edge_ = -1;
    double offset_ = 0.0;
};

/// Connected acyclic graph with positive edge lengths; immutable once built.
class MetricTree {
public:
    MetricTree(int node_count, std::vector<TreeEdge> edges);

    int node_count() const { return node_count_; }
    const std::vector<TreeEdge>& edges() const { return edges_; }
    const std::vector<std::pair<int, int>>& incident(int node) const;  // (edge id, other node)

    double edge_length(int e) const { return edges_[static_cast<std::size_t>(e)].length; }

    /// Canonicalize an (edge, offset) location; offsets within arc tolerance
    /// of an endpoint collapse to that node.
    TreePoint canonical(int edge, double offset) const;

    /// Distances from every node to `from`, with parent pointers of the
    /// search tree (parent edge id, or -1 at the root).
    void node_distances(int from, std::vector<double>& dist, std::vector<int>& parent_edge) const;

private:
    int node_count_ = 0;
    std::vector<TreeEdge> edges_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
};

double tree_dist(const MetricTree& t, const TreePoint& p, const TreePoint& q);

/// Point at arc s along the unique path from p to q, s in [0, d(p,q)].
TreePoint tree_segment(const MetricTree& t, const TreePoint& p, const TreePoint& q, double s);

/// Arc-length audit of the segment-gluing axiom at x: whenever [y,x] and
/// [x,z] meet only in x, their concatenation must be the segment [y,z].
/// Vacuously true when the segments overlap beyond x.
bool gluing_check(const MetricTree& t, const TreePoint& x, const TreePoint& y, const TreePoint& z);

/// Gap of the four-point condition: difference of the two largest among the
/// three pairwise distance sums. Zero (up to roundoff) in any tree.
double four_point_gap(const MetricTree& t, const TreePoint& a, const TreePoint& b, const TreePoint& c,
                      const TreePoint& d);

enum class RayVerdictKind { Bounded, RayWitness, Unknown };

struct RayVerdict {
    RayVerdictKind kind = RayVerdictKind::Unknown;
    std::vector<int> witness_path;  // child indices from the root
    double witness_length = 0.0;
    long nodes_expanded = 0;
};

/// Procedurally generated rooted tree. `children(path)` returns the edge
/// lengths below the node addressed by a child-index path. `tail_bound`,
/// when provided, bounds the supremum of remaining path length below any
/// node at the given depth, which lets the search certify boundedness.
struct TreeGenerator {
    std::function<std::vector<double>(const std::vector<int>&)> children;
    std::function<std::optional<double>(int depth)> tail_bound;
};

/// Search for a root path of length >= budget. Finite trees always come back
/// bounded; generators come back Unknown when the node budget runs out with
/// undecided branches.
RayVerdict tree_ray_detect(const TreeGenerator& gen, double length_budget, long node_budget,
                           const std::function<bool(const std::vector<int>&)>& admit = nullptr);
RayVerdict tree_ray_detect(const MetricTree& t);

/// Tree description file:
///   rtree v1
///   nodes <count>
///   edge <u> <v> <length>
/// Blank lines and '#' comments allowed. Errors carry 1-based line numbers.
MetricTree parse_tree_file(std::istream& in);
MetricTree load_tree_file(const std::string& path);

}  // namespace catk
