#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "teamform/network.hpp"
#include "teamform/rng.hpp"

using namespace teamform;

TEST_CASE("build_network validates and exposes structure") {
    BipartiteNetwork one = build_network(1, 1, {{1, 1}}, {{1, 1}});
    CHECK(one.num_leaders() == 1);
    CHECK(one.num_followers() == 1);
    CHECK(one.max_leader_degree() == 1);

    BipartiteNetwork shared = build_network(2, 1, {{1, 1}, {2, 1}}, {{1, 1}, {2, 1}});
    CHECK(shared.max_leader_degree() == 1);
    CHECK(shared.num_edges() == 2);
    CHECK(shared.follower_neighbors(1) == std::vector<LeaderId>{1, 2});

    CHECK_THROWS_AS(build_network(1, 1, {{1, 1}, {1, 1}}, {{1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(build_network(2, 1, {{1, 1}}, {{1, 1}}), std::invalid_argument);  // missing c
    CHECK_THROWS_AS(build_network(1, 1, {{1, 1}}, {{1, 0}}), std::invalid_argument);  // zero c
    CHECK_THROWS_AS(build_network(1, 1, {{2, 1}}, {{1, 1}}), std::invalid_argument);  // bad id
}

TEST_CASE("triangular family has staircase adjacency") {
    BipartiteNetwork g6 = gen_counterexample(6);
    CHECK(g6.num_leaders() == 6);
    CHECK(g6.num_followers() == 6);
    CHECK(g6.num_edges() == 21);
    CHECK(g6.leader_neighbors(1) == std::vector<FollowerId>{1});
    CHECK(g6.leader_neighbors(6) == std::vector<FollowerId>{1, 2, 3, 4, 5, 6});
    for (LeaderId i = 1; i <= 6; ++i) {
        CHECK(g6.leader_degree(i) == i);
        CHECK(g6.constraint(i) == 1);
    }
    CHECK(g6.max_leader_degree() == 6);

    BipartiteNetwork g1 = gen_counterexample(1);
    CHECK(g1.num_edges() == 1);
    CHECK(g1.has_edge(1, 1));

    CHECK(gen_counterexample(3).max_leader_degree() == 3);
    CHECK_THROWS_AS(gen_counterexample(0), std::invalid_argument);

    for (int n : {2, 4, 7}) {
        BipartiteNetwork g = gen_counterexample(n);
        CHECK(g.num_edges() == n * (n + 1) / 2);
    }
}

TEST_CASE("random generator honors rho limits and determinism") {
    BipartiteNetwork empty = gen_random(4, 5, 0.0, 7, ConstraintRule::fixed(1));
    CHECK(empty.num_edges() == 0);

    BipartiteNetwork full = gen_random(4, 5, 1.0, 7, ConstraintRule::fixed(2));
    CHECK(full.num_edges() == 20);
    for (LeaderId l = 1; l <= 4; ++l) CHECK(full.leader_degree(l) == 5);

    BipartiteNetwork a = gen_random(100, 300, 0.04, 42, ConstraintRule::capped_ratio());
    BipartiteNetwork b = gen_random(100, 300, 0.04, 42, ConstraintRule::capped_ratio());
    CHECK(a == b);
    for (LeaderId l = 1; l <= 100; ++l) {
        CHECK(a.leader_degree(l) >= 1);
        CHECK(a.constraint(l) == std::min(3, a.leader_degree(l)));
    }

    CHECK_THROWS_AS(gen_random(2, 2, 1.5, 1, ConstraintRule::fixed(1)), std::invalid_argument);
    CHECK_THROWS_AS(gen_random(4, 3, 0.5, 1, ConstraintRule::capped_ratio()),
                    std::invalid_argument);
}

TEST_CASE("random generator mean edge count tracks n*m*rho") {
    const int n = 30, m = 40, s = 200;
    const double rho = 0.3;
    double total = 0;
    for (int i = 0; i < s; ++i)
        total += static_cast<double>(
            gen_random(n, m, rho, mix_seed(900, i), ConstraintRule::fixed(1)).num_edges());
    double mean = total / s;
    double tolerance = 4.0 * std::sqrt(n * m * rho * (1 - rho) / s);
    CHECK(std::abs(mean - n * m * rho) <= tolerance);
}

TEST_CASE("network text round trip") {
    BipartiteNetwork g6 = gen_counterexample(6);
    std::istringstream in(format_network(g6));
    BipartiteNetwork reloaded = parse_network(in, "g6");
    CHECK(reloaded == g6);

    BipartiteNetwork r = gen_random(5, 7, 0.5, 3, ConstraintRule::fixed(2));
    std::istringstream rin(format_network(r));
    CHECK(parse_network(rin, "r") == r);
}

TEST_CASE("network parser reports precise errors") {
    {
        std::istringstream in("leaders 2\nfollowers 1\nconstraint 1 1\nedge 1 1\n");
        CHECK_THROWS_WITH_AS(parse_network(in, "f"), "f: missing constraint for leader 2",
                             std::runtime_error);
    }
    {
        std::istringstream in("leaders 6\nfollowers 6\nconstraint 1 1\nconstraint 2 1\n"
                              "constraint 3 1\nconstraint 4 1\nconstraint 5 1\nconstraint 6 1\n"
                              "edge 7 1\n");
        CHECK_THROWS_WITH_AS(parse_network(in, "f"),
                             "f:9: edge references out-of-range leader 7", std::runtime_error);
    }
    {
        std::istringstream in("leaders 1\nfollowers 1\nconstraint 1 1\nedge 1 1\nedge 1 1\n");
        CHECK_THROWS_AS(parse_network(in, "f"), std::runtime_error);
    }
    {
        std::istringstream in("# comment only\nleaders 1\nfollowers 1\nconstraint 1 1 # ok\n");
        CHECK(parse_network(in, "f").num_edges() == 0);
    }
    {
        std::istringstream in("followers 1\nleaders 1\nconstraint 1 1\n");
        CHECK_THROWS_AS(parse_network(in, "f"), std::runtime_error);
    }
    {
        // constraint and edge lines in any relative order
        std::istringstream in("leaders 2\nfollowers 2\nedge 1 1\nconstraint 2 1\n"
                              "edge 2 2\nconstraint 1 1\n");
        BipartiteNetwork net = parse_network(in, "f");
        CHECK(net.num_edges() == 2);
        CHECK(net.constraint(2) == 1);
    }
}

TEST_CASE("fixed constraints tolerate isolated leaders") {
    // rho = 0 leaves every leader isolated; fixed constraints keep them
    BipartiteNetwork net = gen_random(3, 3, 0.0, 1, ConstraintRule::fixed(1));
    CHECK(net.num_edges() == 0);
    for (LeaderId l = 1; l <= 3; ++l) CHECK(net.constraint(l) == 1);
}
