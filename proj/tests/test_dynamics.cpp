#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "teamform/counterexample.hpp"
#include "teamform/dynamics.hpp"
#include "teamform/matching.hpp"
#include "teamform/network.hpp"
#include "teamform/oracle.hpp"
#include "teamform/rng.hpp"

using namespace teamform;

namespace {

int total_requests(const RoundRequests& r) {
    int total = 0;
    for (const auto& v : r) total += static_cast<int>(v.size());
    return total;
}

}  // namespace

TEST_CASE("stable matchings generate no traffic") {
    BipartiteNetwork g6 = gen_counterexample(6);
    Matching diag = diagonal_matching(g6);
    Rng rng(5);
    for (int round = 0; round < 20; ++round) {
        RoundRequests req = leader_stage(g6, diag, 0.9, rng);
        CHECK(total_requests(req) == 0);
        diag = follower_stage(g6, diag, req, 0.9, rng);
    }
    CHECK(diag == diagonal_matching(g6));
}

TEST_CASE("the lone poor leader of the shifted matching always asks its neighbor") {
    BipartiteNetwork g6 = gen_counterexample(6);
    Matching shifted = shifted_matching(g6);
    for (int trial = 0; trial < 50; ++trial) {
        Rng rng(mix_seed(10, trial));
        RoundRequests req = leader_stage(g6, shifted, 1.0, rng);
        CHECK(total_requests(req) == 1);
        CHECK(req[1] == std::vector<LeaderId>{1});  // leader 1 targets follower 1
    }
}

TEST_CASE("leaders prefer unmatched followers") {
    // leader 1 sees f1 (matched to leader 2) and f2 (unmatched)
    BipartiteNetwork net =
        build_network(2, 2, {{1, 1}, {1, 2}, {2, 1}}, {{1, 1}, {2, 1}});
    Matching m = empty_matching(net);
    m.assign(1, 2);
    for (int trial = 0; trial < 50; ++trial) {
        Rng rng(mix_seed(11, trial));
        RoundRequests req = leader_stage(net, m, 1.0, rng);
        CHECK(req[2] == std::vector<LeaderId>{1});
        CHECK(req[1].empty());
    }
}

TEST_CASE("leaders at their degree limit stay silent") {
    // leader 1 has a single neighbor already on its team but constraint 2
    BipartiteNetwork net = build_network(1, 2, {{1, 1}}, {{1, 2}});
    Matching m = empty_matching(net);
    m.assign(1, 1);
    Rng rng(3);
    CHECK(total_requests(leader_stage(net, m, 1.0, rng)) == 0);
}

TEST_CASE("follower stage applies requests") {
    BipartiteNetwork g6 = gen_counterexample(6);
    Matching m = empty_matching(g6);
    Rng rng(17);
    RoundRequests none(static_cast<std::size_t>(g6.num_followers()) + 1);
    CHECK(follower_stage(g6, m, none, 1.0, rng) == m);

    RoundRequests one = none;
    one[3] = {4};
    Matching next = follower_stage(g6, m, one, 1.0, rng);
    CHECK(next.leader_of(3) == 4);
    CHECK(next.num_matched() == 1);
}

TEST_CASE("contested follower picks uniformly") {
    BipartiteNetwork net = build_network(2, 1, {{1, 1}, {2, 1}}, {{1, 1}, {2, 1}});
    Matching m = empty_matching(net);
    const int trials = 10'000;
    int to_first = 0;
    for (int t = 0; t < trials; ++t) {
        Rng rng(mix_seed(12, t));
        RoundRequests req = leader_stage(net, m, 1.0, rng);
        REQUIRE(req[1].size() == 2);
        Matching next = follower_stage(net, m, req, 1.0, rng);
        if (next.leader_of(1) == 1) ++to_first;
    }
    double freq = static_cast<double>(to_first) / trials;
    double sigma = std::sqrt(0.25 / trials);
    CHECK(std::abs(freq - 0.5) <= 3 * sigma);
}

TEST_CASE("matched followers can use a separate acceptance probability") {
    // follower 1 sits with leader 1; leader 2 keeps requesting it
    BipartiteNetwork net = build_network(2, 1, {{1, 1}, {2, 1}}, {{1, 1}, {2, 1}});
    Matching m = empty_matching(net);
    m.assign(1, 1);
    int switches = 0;
    for (int t = 0; t < 400; ++t) {
        Rng rng(mix_seed(13, t));
        RoundRequests req = leader_stage(net, m, 1.0, rng);
        Matching next = follower_stage(net, m, req, 1.0, rng, 1e-9);
        if (next.leader_of(1) == 2) ++switches;
    }
    CHECK(switches == 0);
}

TEST_CASE("isolated leaders never act and stay poor") {
    // leader 2 has no neighbors; leader 1 can satisfy itself
    BipartiteNetwork net = build_network(2, 2, {{1, 1}, {1, 2}}, {{1, 1}, {2, 1}});
    SimConfig cfg;
    cfg.seed = 2;
    cfg.stop_rule = StopRule::FixedRounds;
    cfg.max_rounds = 50;
    Trajectory t = run(net, empty_matching(net), cfg);
    CHECK(t.final_matching.total_deficit() == 1);
    CHECK(t.final_matching.leader_deficit(2) == 1);
    Rng rng(3);
    RoundRequests req = leader_stage(net, t.final_matching, 1.0, rng);
    CHECK(req[1].empty());
    CHECK(req[2].empty());
}

TEST_CASE("the deficit never falls below the best achievable") {
    BipartiteNetwork contested =
        build_network(3, 2, {{1, 1}, {2, 1}, {2, 2}, {3, 2}}, {{1, 1}, {2, 1}, {3, 1}});
    OracleResult oracle = best_matching(contested);
    CHECK(oracle.d_star == 1);
    for (int s = 0; s < 10; ++s) {
        SimConfig cfg;
        cfg.seed = mix_seed(40, s);
        cfg.stop_rule = StopRule::FixedRounds;
        cfg.max_rounds = 300;
        Trajectory t = run(contested, empty_matching(contested), cfg);
        CHECK(t.final_matching.total_deficit() >= oracle.d_star);
        CHECK(approx_status(t.final_matching, 0.9, oracle.d_star) != ApproxStatus::Stable);
    }
}

TEST_CASE("q_matched wired through the run config") {
    // follower 1 starts with leader 1; leader 2 keeps poaching with q=1,
    // but the matched-follower override makes acceptance vanishingly rare
    BipartiteNetwork net = build_network(2, 1, {{1, 1}, {2, 1}}, {{1, 1}, {2, 1}});
    Matching start = empty_matching(net);
    start.assign(1, 1);
    SimConfig cfg;
    cfg.seed = 44;
    cfg.q_matched = 1e-12;
    cfg.stop_rule = StopRule::FixedRounds;
    cfg.max_rounds = 500;
    Trajectory t = run(net, start, cfg);
    CHECK(t.final_matching.leader_of(1) == 1);
}

TEST_CASE("a single poor leader walks the staircase until stability") {
    BipartiteNetwork g8 = gen_counterexample(8);
    Matching cur = shifted_matching(g8);
    Rng rng(55);
    int rounds = 0;
    while (cur.total_deficit() > 0 && rounds < 100'000) {
        DeficitReport rep = deficit(cur);
        CHECK(rep.poor_leaders.size() == 1);
        CHECK(rep.unmatched_followers == std::vector<FollowerId>{8});
        cur = follower_stage(g8, cur, leader_stage(g8, cur, 1.0, rng), 1.0, rng);
        ++rounds;
    }
    CHECK(cur == diagonal_matching(g8));
}

TEST_CASE("run stops immediately on a stable start") {
    BipartiteNetwork g6 = gen_counterexample(6);
    SimConfig cfg;
    cfg.seed = 9;
    Trajectory t = run(g6, diagonal_matching(g6), cfg);
    CHECK(t.rounds_elapsed == 0);
    CHECK(t.stop_reason == StopReason::Stable);
    CHECK(t.rows.size() == 1);
}

TEST_CASE("height-zero starts stabilize in exactly one round") {
    for (int n : {3, 5, 8}) {
        BipartiteNetwork net = gen_counterexample(n);
        for (int k = 1; k <= n; ++k) {
            Matching m = matching_from_index_set(net, IndexSet{n, {k}});
            SimConfig cfg;
            cfg.seed = mix_seed(14, n, k);
            Trajectory t = run(net, m, cfg);
            CHECK(t.rounds_elapsed == 1);
            CHECK(t.stop_reason == StopReason::Stable);
        }
    }
}

TEST_CASE("the shifted matching drains to the diagonal") {
    BipartiteNetwork g6 = gen_counterexample(6);
    for (int s = 0; s < 5; ++s) {
        SimConfig cfg;
        cfg.seed = mix_seed(15, s);
        Trajectory t = run(g6, shifted_matching(g6), cfg);
        CHECK(t.stop_reason == StopReason::Stable);
        CHECK(t.final_matching == diagonal_matching(g6));
        // a single poor leader all the way down
        for (const auto& row : t.rows)
            if (row.deficit == 1) CHECK(row.poor_leaders == 1);
    }
}

TEST_CASE("runs are reproducible bit for bit") {
    BipartiteNetwork net = gen_random(10, 14, 0.3, 77, ConstraintRule::fixed(2));
    SimConfig cfg;
    cfg.p = 0.7;
    cfg.q = 0.6;
    cfg.seed = 123;
    cfg.stop_rule = StopRule::FixedRounds;
    cfg.max_rounds = 200;
    Trajectory a = run(net, empty_matching(net), cfg);
    Trajectory b = run(net, empty_matching(net), cfg);
    CHECK(a.final_matching == b.final_matching);
    CHECK(a.rounds_elapsed == b.rounds_elapsed);
    CHECK(trajectory_csv(a) == trajectory_csv(b));

    cfg.seed = 124;
    Trajectory c = run(net, empty_matching(net), cfg);
    CHECK(trajectory_csv(a) != trajectory_csv(c));
}

TEST_CASE("every round respects capacity and the one-request rule") {
    Rng rng(31);
    for (int i = 0; i < 10; ++i) {
        BipartiteNetwork net = gen_random(8, 10, 0.4, rng.next(), ConstraintRule::fixed(2));
        Matching m = empty_matching(net);
        Rng run_rng(rng.next());
        for (int round = 0; round < 60; ++round) {
            RoundRequests req = leader_stage(net, m, 0.8, run_rng);
            std::set<LeaderId> senders;
            for (const auto& leaders : req)
                for (LeaderId l : leaders) CHECK(senders.insert(l).second);
            m = follower_stage(net, m, req, 0.8, run_rng);
            for (LeaderId l = 1; l <= net.num_leaders(); ++l)
                CHECK(m.team_size(l) <= net.constraint(l));
        }
    }
}

TEST_CASE("a unit of deficit drains within the predicted window often enough") {
    // shifted matching on the size-4 triangular network: deficit 1 = m/4
    BipartiteNetwork g4 = gen_counterexample(4);
    Matching start = shifted_matching(g4);
    const int window = 4;  // floor(1 / (1/4))
    const struct { double p, q; } params[] = {{1.0, 1.0}, {0.6, 0.8}};
    for (const auto& [p, q] : params) {
        const double bound = std::pow(p * q / g4.max_leader_degree(), window);
        const int trials = 10'000;
        int drained = 0;
        for (int t = 0; t < trials; ++t) {
            SimConfig cfg;
            cfg.p = p;
            cfg.q = q;
            cfg.seed = mix_seed(16, t);
            cfg.stop_rule = StopRule::FixedRounds;
            cfg.max_rounds = window;
            if (run(g4, start, cfg).final_matching.total_deficit() == 0) ++drained;
        }
        double freq = static_cast<double>(drained) / trials;
        double sigma = std::sqrt(bound * (1 - bound) / trials);
        CHECK(freq >= bound - 3 * sigma);
    }
}

TEST_CASE("tau finds the first crossing") {
    BipartiteNetwork g6 = gen_counterexample(6);
    SimConfig cfg;
    cfg.seed = 18;
    Trajectory t = run(g6, empty_matching(g6), cfg);
    // d(0) = 6 equals m, so tau(1) is the first deficit-dropping round
    CHECK(t.rows[0].deficit == 6);
    REQUIRE(t.rows.size() > 1);
    CHECK(tau(t, 1.0) == t.rows[1].round);

    // with spare followers the empty start is already below m
    BipartiteNetwork spare = build_network(1, 2, {{1, 1}, {1, 2}}, {{1, 1}});
    SimConfig scfg;
    scfg.seed = 20;
    scfg.stop_rule = StopRule::FixedRounds;
    scfg.max_rounds = 0;
    CHECK(tau(run(spare, empty_matching(spare), scfg), 1.0) == 0);

    Trajectory stable_start = run(g6, diagonal_matching(g6), cfg);
    CHECK(tau(stable_start, 0.5) == 0);

    SimConfig frozen;
    frozen.seed = 19;
    frozen.stop_rule = StopRule::FixedRounds;
    frozen.max_rounds = 0;
    Trajectory none = run(g6, empty_matching(g6), frozen);
    CHECK_FALSE(tau(none, 0.5).has_value());

    CHECK_THROWS_AS(tau(t, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(tau(t, 1.5), std::invalid_argument);
}

TEST_CASE("analytic round bound evaluates the closed form") {
    RoundBound b = approx_bound(10, 2, 1.0, 1.0, 0.5);
    CHECK(b.rounds == doctest::Approx(96.0));
    CHECK(b.probability == doctest::Approx(1.0 - std::exp(-1.5)));

    // floor(1/eps) = 1 instantiation
    RoundBound near_one = approx_bound(10, 3, 0.5, 0.8, 0.9);
    double c = 1.0 + 1.0 / (10 * 0.1);
    CHECK(near_one.rounds == doctest::Approx(c * 1 * (3.0 / 0.4) * 10));

    // p and q enter only through their product
    RoundBound pq = approx_bound(20, 4, 0.3, 0.9, 0.4);
    RoundBound qp = approx_bound(20, 4, 0.9, 0.3, 0.4);
    CHECK(pq.rounds == doctest::Approx(qp.rounds));
    CHECK(pq.probability == doctest::Approx(qp.probability));

    CHECK_THROWS_AS(approx_bound(10, 2, 1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(approx_bound(10, 2, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("trajectory csv carries the run metadata") {
    BipartiteNetwork g3 = gen_counterexample(3);
    SimConfig cfg;
    cfg.seed = 21;
    Trajectory t = run(g3, empty_matching(g3), cfg);
    std::string csv = trajectory_csv(t);
    CHECK(csv.find("round,deficit,poor_leaders,matched_followers\n") == 0);
    CHECK(csv.find("# stop_reason=stable") != std::string::npos);
    CHECK(csv.find("seed=21") != std::string::npos);
    CHECK(csv.find("rng=mt19937_64") != std::string::npos);
}

TEST_CASE("deficit-below and fixed-round stop rules") {
    BipartiteNetwork g6 = gen_counterexample(6);
    SimConfig cfg;
    cfg.seed = 22;
    cfg.stop_rule = StopRule::DeficitBelow;
    cfg.deficit_below_x = 0.5;
    Trajectory t = run(g6, empty_matching(g6), cfg);
    CHECK(t.stop_reason == StopReason::DeficitBelow);
    CHECK(t.final_matching.total_deficit() < 3);
    CHECK(tau(t, 0.5).has_value());
    CHECK(*tau(t, 0.5) == t.rounds_elapsed);

    SimConfig fixed;
    fixed.seed = 23;
    fixed.stop_rule = StopRule::FixedRounds;
    fixed.max_rounds = 7;
    Trajectory ft = run(g6, empty_matching(g6), fixed);
    CHECK(ft.rounds_elapsed == 7);
    CHECK(ft.stop_reason == StopReason::FixedRounds);

    SimConfig capped;
    capped.seed = 24;
    capped.stop_rule = StopRule::Stable;
    capped.max_rounds = 1;
    BipartiteNetwork contested = build_network(2, 1, {{1, 1}, {2, 1}}, {{1, 1}, {2, 1}});
    Trajectory ct = run(contested, empty_matching(contested), capped);
    CHECK(ct.stop_reason == StopReason::MaxRounds);  // no stable matching exists
}
