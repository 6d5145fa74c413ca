#include <cmath>
#include <sstream>

#include "catk/rtree.hpp"
#include "doctest.h"

using namespace catk;

namespace {

// three legs of lengths 1, 2, 3 hanging off node 0; tips are nodes 1..3
MetricTree star123() {
    return MetricTree(4, {{0, 1, 1.0}, {0, 2, 2.0}, {0, 3, 3.0}});
}

}  // namespace

TEST_CASE("tree_dist on a star") {
    const MetricTree t = star123();
    const TreePoint tip1 = TreePoint::at_node(1);
    const TreePoint tip3 = TreePoint::at_node(3);
    CHECK(tree_dist(t, tip1, tip1) == 0.0);
    CHECK(tree_dist(t, tip1, tip3) == 4.0);
    CHECK(tree_dist(t, TreePoint::at_node(0), tip3) == 3.0);

    // endpoints of one edge of length 3
    CHECK(tree_dist(t, TreePoint::at_node(0), TreePoint::at_node(3)) == 3.0);

    // interior points
    const TreePoint a = t.canonical(0, 0.25);  // on leg 1
    const TreePoint b = t.canonical(2, 1.5);   // on leg 3
    CHECK(tree_dist(t, a, b) == doctest::Approx(0.25 + 1.5).epsilon(1e-15));
    const TreePoint c = t.canonical(2, 0.5);
    CHECK(tree_dist(t, b, c) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tree_segment walks the unique path") {
    const MetricTree t = star123();
    const TreePoint tip1 = TreePoint::at_node(1);
    const TreePoint tip2 = TreePoint::at_node(2);

    CHECK(tree_dist(t, tree_segment(t, tip1, tip2, 0.0), tip1) == 0.0);
    CHECK(tree_dist(t, tree_segment(t, tip1, tip2, 3.0), tip2) == 0.0);

    // arc 1 from tip1 toward tip2 is the center node
    const TreePoint mid = tree_segment(t, tip1, tip2, 1.0);
    CHECK(mid.is_node());
    CHECK(mid.node() == 0);

    // concatenation identity at every returned point
    for (double s = 0.0; s <= 3.0; s += 0.125) {
        const TreePoint m = tree_segment(t, tip1, tip2, s);
        CHECK(std::abs(tree_dist(t, tip1, m) + tree_dist(t, m, tip2) - 3.0) < 1e-12);
        CHECK(std::abs(tree_dist(t, tip1, m) - s) < 1e-12);
    }
    CHECK_THROWS_AS(tree_segment(t, tip1, tip2, 3.5), DomainError);
}

TEST_CASE("gluing axiom bookkeeping") {
    const MetricTree t = star123();
    const TreePoint center = TreePoint::at_node(0);
    const TreePoint y = TreePoint::at_node(1), z = TreePoint::at_node(2);
    CHECK(gluing_check(t, center, y, z));                      // segments meet only at the center
    CHECK(gluing_check(t, t.canonical(1, 1.0), y, z));         // x interior to [y,z]
    CHECK(gluing_check(t, center, y, y));                      // y = z: vacuous
    CHECK(gluing_check(t, y, z, TreePoint::at_node(3)));       // x off the segment: vacuous
}

TEST_CASE("four-point condition holds exactly") {
    const MetricTree t(7, {{0, 1, 0.7}, {0, 2, 1.3}, {1, 3, 2.1}, {1, 4, 0.4}, {2, 5, 1.9}, {2, 6, 0.25}});
    Rng rng(51);
    std::uniform_int_distribution<int> edge(0, 5);
    for (int i = 0; i < 2000; ++i) {
        auto pt = [&]() {
            const int e = edge(rng);
            return t.canonical(e, uniform(rng, 0.0, t.edge_length(e)));
        };
        CHECK(four_point_gap(t, pt(), pt(), pt(), pt()) <= 1e-12);
    }
}

TEST_CASE("ray detection on generators") {
    // binary tree with unit edges: a ray exists, found depth-first
    TreeGenerator binary;
    binary.children = [](const std::vector<int>&) { return std::vector<double>{1.0, 1.0}; };
    const auto unbounded = tree_ray_detect(binary, 20.0, 100000);
    CHECK(unbounded.kind == RayVerdictKind::RayWitness);
    CHECK(unbounded.witness_length >= 20.0);

    // edge lengths 2^{-k}: total length below 2, certified bounded for L > 2
    // edge lengths 2^{-k} from the root: every branch has total length < 2
    TreeGenerator geometric;
    geometric.children = [](const std::vector<int>& path) {
        const double len = std::pow(2.0, -static_cast<double>(path.size()));
        return std::vector<double>{len, len};
    };
    geometric.tail_bound = [](int depth) {
        return std::optional<double>(std::pow(2.0, -(static_cast<double>(depth) - 1.0)));
    };
    CHECK(tree_ray_detect(geometric, 3.0, 100000).kind == RayVerdictKind::Bounded);
    CHECK(tree_ray_detect(geometric, 2.001, 100000).kind == RayVerdictKind::Bounded);
    // at a budget below the total length the same generator has a witness
    CHECK(tree_ray_detect(geometric, 1.5, 100000).kind == RayVerdictKind::RayWitness);

    // no tail bound and too small a node budget: inconclusive
    TreeGenerator blind = binary;
    CHECK(tree_ray_detect(blind, 1e9, 500).kind == RayVerdictKind::Unknown);

    // finite trees are always geodesically bounded
    CHECK(tree_ray_detect(star123()).kind == RayVerdictKind::Bounded);
}

TEST_CASE("tree file parsing") {
    std::istringstream good("rtree v1\nnodes 4\nedge 0 1 1.0\nedge 0 2 2.0\nedge 0 3 3.0\n");
    const MetricTree t = parse_tree_file(good);
    CHECK(t.node_count() == 4);
    CHECK(tree_dist(t, TreePoint::at_node(1), TreePoint::at_node(3)) == 4.0);

    std::istringstream comments("# star\nrtree v1\nnodes 2\n\nedge 0 1 5.0  # one edge\n");
    CHECK(parse_tree_file(comments).node_count() == 2);

    auto line_of = [](auto&& fn) {
        try {
            fn();
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of([] { std::istringstream s("nodes 3\n"); parse_tree_file(s); }) == 1);
    CHECK(line_of([] { std::istringstream s("rtree v1\nnodes 2\nedge 0 5 1.0\n"); parse_tree_file(s); }) == 3);
    CHECK(line_of([] { std::istringstream s("rtree v1\nnodes 2\nedge 0 1 -1.0\n"); parse_tree_file(s); }) == 3);
    CHECK(line_of([] { std::istringstream s("rtree v1\nnodes 2\nedg 0 1 1.0\n"); parse_tree_file(s); }) == 3);
    CHECK(line_of([] { std::istringstream s("rtree v1\nnodes 3\nedge 0 1 1.0\n"); parse_tree_file(s); }) > 0);
}

TEST_CASE("points from another tree are rejected") {
    const MetricTree t = star123();
    CHECK_THROWS_AS(tree_dist(t, TreePoint::at_node(0), TreePoint::at_node(9)), DomainError);
    CHECK_THROWS_AS(tree_dist(t, TreePoint::on_edge(7, 0.5), TreePoint::at_node(0)), DomainError);
    // offset beyond this tree's edge length: a different tree's location
    CHECK_THROWS_AS(tree_dist(t, TreePoint::on_edge(0, 5.0), TreePoint::at_node(0)), DomainError);
}

TEST_CASE("tree validation") {
    CHECK_THROWS_AS(MetricTree(3, {{0, 1, 1.0}}), DomainError);                          // wrong edge count
    CHECK_THROWS_AS(MetricTree(4, {{0, 1, 1.0}, {0, 1, 1.0}, {2, 3, 1.0}}), DomainError);  // disconnected
    CHECK_THROWS_AS(MetricTree(2, {{0, 0, 1.0}}), DomainError);                          // self loop
    CHECK_THROWS_AS(MetricTree(2, {{0, 1, 0.0}}), DomainError);                          // zero length
}
