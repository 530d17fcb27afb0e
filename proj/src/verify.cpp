#include "teamform/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>

#include "teamform/counterexample.hpp"
#include "teamform/csv.hpp"
#include "teamform/dynamics.hpp"
#include "teamform/experiments.hpp"
#include "teamform/matching.hpp"
#include "teamform/network.hpp"
#include "teamform/oracle.hpp"
#include "teamform/rng.hpp"

namespace teamform {

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
    bool pass = true;
    std::ostringstream detail;

    void fail(const std::string& msg) {
        pass = false;
        if (!detail.str().empty()) detail << "; ";
        detail << msg;
    }
    void note(const std::string& msg) {
        if (!detail.str().empty()) detail << "; ";
        detail << msg;
    }
};

// A seeded random small network with mixed edge density and constraints.
BipartiteNetwork random_small_network(Rng& rng, int max_n, int max_m) {
    const double rhos[] = {0.2, 0.4, 0.6, 0.8, 1.0};
    for (;;) {
        int n = 1 + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(max_n)));
        int m = 1 + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(max_m)));
        double rho = rhos[rng.uniform_index(5)];
        std::uint64_t seed = rng.next();
        std::size_t scheme = rng.uniform_index(3);
        try {
            if (scheme == 2 && m >= n)
                return gen_random(n, m, rho, seed, ConstraintRule::capped_ratio());
            int c = 1 + static_cast<int>(rng.uniform_index(2));
            return gen_random(n, m, rho, seed, ConstraintRule::fixed(c));
        } catch (const std::exception&) {
            continue;  // capped_ratio resampling exhausted; draw again
        }
    }
}

BipartiteNetwork complete_network(int n, int m, const std::vector<int>& cs) {
    std::vector<Edge> edges;
    std::vector<std::pair<LeaderId, int>> constraints;
    for (LeaderId l = 1; l <= n; ++l) {
        constraints.push_back({l, cs[static_cast<std::size_t>(l - 1)]});
        for (FollowerId f = 1; f <= m; ++f) edges.push_back({l, f});
    }
    return build_network(n, m, edges, constraints);
}

// Stable-admitting catalog with n, m <= 5 for the exhaustive path checks.
std::vector<BipartiteNetwork> small_stable_catalog(Rng& rng) {
    std::vector<BipartiteNetwork> nets;
    for (int n = 1; n <= 5; ++n) nets.push_back(gen_counterexample(n));
    nets.push_back(complete_network(2, 2, {1, 1}));
    nets.push_back(complete_network(2, 3, {1, 2}));
    nets.push_back(complete_network(3, 3, {1, 1, 1}));
    nets.push_back(complete_network(2, 4, {2, 2}));
    nets.push_back(build_network(3, 3, {{1, 1}, {2, 1}, {2, 2}, {3, 2}, {3, 3}},
                                 {{1, 1}, {2, 1}, {3, 1}}));
    int attempts = 0;
    while (nets.size() < 45 && attempts < 2000) {
        ++attempts;
        BipartiteNetwork net = random_small_network(rng, 5, 5);
        if (net.num_edges() > 0 && stable_exists(net)) nets.push_back(std::move(net));
    }
    return nets;
}

double median(std::vector<long long> v) {
    std::sort(v.begin(), v.end());
    std::size_t k = v.size();
    if (k % 2 == 1) return static_cast<double>(v[k / 2]);
    return (static_cast<double>(v[k / 2 - 1]) + static_cast<double>(v[k / 2])) / 2.0;
}

double ks_statistic(std::vector<long long> a, std::vector<long long> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double stat = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        long long v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        double fa = static_cast<double>(i) / static_cast<double>(a.size());
        double fb = static_cast<double>(j) / static_cast<double>(b.size());
        stat = std::max(stat, std::abs(fa - fb));
    }
    return stat;
}

// --- criterion bodies -------------------------------------------------------

Check oracle_exactness(const VerifyOptions& opt) {
    Check c;
    Rng rng(mix_seed(opt.seed, 101));
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        BipartiteNetwork net = random_small_network(rng, 6, 6);
        OracleResult oracle = best_matching(net);
        long long brute = brute_force_min_deficit(net);
        if (oracle.d_star != brute) ++mismatches;
        if (oracle.witness.total_deficit() != oracle.d_star) ++mismatches;
    }
    if (mismatches > 0) c.fail(std::to_string(mismatches) + " mismatches");
    else c.note("200 networks, flow d* == enumeration minimum");
    return c;
}

Check triangular_unique_stable(const VerifyOptions&) {
    Check c;
    for (int n = 1; n <= 8; ++n) {
        BipartiteNetwork net = gen_counterexample(n);
        OracleResult oracle = best_matching(net);
        Matching diag = diagonal_matching(net);
        if (oracle.d_star != 0) c.fail("d* != 0 at n=" + std::to_string(n));
        if (!(oracle.witness == diag)) c.fail("witness not diagonal at n=" + std::to_string(n));
        auto stables = enumerate_matchings(
            net, [](const Matching& m) { return m.total_deficit() == 0; }, 20'000'000, 0);
        if (stables.size() != 1 || !(stables[0] == diag))
            c.fail("stable matching not unique at n=" + std::to_string(n));
    }
    if (c.pass) c.note("n<=8: d*=0 and the diagonal matching is the only stable one");
    return c;
}

Check deficit_monotonicity(const VerifyOptions& opt) {
    Check c;
    Rng rng(mix_seed(opt.seed, 103));
    const double params[] = {0.3, 0.7, 1.0};
    long long total_rounds = 0;
    for (int i = 0; i < 40 && c.pass; ++i) {
        BipartiteNetwork net = random_small_network(rng, 12, 16);
        SimConfig cfg;
        cfg.p = params[rng.uniform_index(3)];
        cfg.q = params[rng.uniform_index(3)];
        cfg.seed = rng.next();
        cfg.stop_rule = StopRule::FixedRounds;
        cfg.max_rounds = 300;
        try {
            Trajectory t = run(net, empty_matching(net), cfg);  // throws on any increase
            total_rounds += t.rounds_elapsed;
            for (std::size_t r = 1; r < t.rows.size(); ++r)
                if (t.rows[r].deficit > t.rows[r - 1].deficit) c.fail("recorded deficit increased");
            for (LeaderId l = 1; l <= net.num_leaders(); ++l)
                if (t.final_matching.team_size(l) > net.constraint(l)) c.fail("team over constraint");
        } catch (const std::logic_error& e) {
            c.fail(e.what());
        }
    }
    if (total_rounds < 10'000) c.fail("only " + std::to_string(total_rounds) + " rounds simulated");
    if (c.pass) c.note(std::to_string(total_rounds) + " rounds, zero deficit increases");
    return c;
}

Check short_path_guarantee(const VerifyOptions& opt) {
    Check c;
    Rng rng(mix_seed(opt.seed, 104));
    const double eps_values[] = {0.2, 0.4, 0.6, 0.8, 1.0};
    long long checked = 0;
    for (const BipartiteNetwork& net : small_stable_catalog(rng)) {
        const int m = net.num_followers();
        for_each_matching(net, [&](const Matching& mat) {
            long long d = mat.total_deficit();
            if (d == 0) return;
            std::optional<DdPath> path;
            bool searched = false;
            for (double eps : eps_values) {
                if (strictly_below(static_cast<double>(d), eps * m)) continue;  // d < eps*m
                if (!searched) {
                    path = shortest_dd_path(mat);
                    searched = true;
                }
                ++checked;
                int bound = 2 * static_cast<int>(std::floor(1.0 / eps)) - 1;
                if (!path.has_value())
                    c.fail("no path though deficit >= eps*m");
                else if (path->length() > bound)
                    c.fail("path length " + std::to_string(path->length()) + " exceeds " +
                           std::to_string(bound));
            }
        });
        if (!c.pass) break;
    }
    if (c.pass) c.note(std::to_string(checked) + " (matching, eps) pairs within the length bound");
    return c;
}

Check disjoint_path_count(const VerifyOptions& opt) {
    Check c;
    Rng rng(mix_seed(opt.seed, 104));  // same catalog as the path-length check
    long long checked = 0;
    for (const BipartiteNetwork& net : small_stable_catalog(rng)) {
        Matching stable = best_matching(net).witness;
        for_each_matching(net, [&](const Matching& mat) {
            if (!c.pass) return;
            long long d = mat.total_deficit();
            if (d == 0) return;
            DisjointDdPaths res = max_follower_disjoint_dd_paths(mat, stable);
            ++checked;
            if (res.count < d) {
                c.fail("count " + std::to_string(res.count) + " below deficit " + std::to_string(d));
                return;
            }
            std::map<LeaderId, int> starts;
            for (const DdPath& p : res.paths) ++starts[p.leaders[0]];
            for (LeaderId l = 1; l <= net.num_leaders(); ++l) {
                int want = static_cast<int>(mat.leader_deficit(l));
                if (want > 0 && starts[l] != want)
                    c.fail("leader " + std::to_string(l) + " starts " +
                           std::to_string(starts[l]) + " paths, deficit " + std::to_string(want));
            }
        });
        if (!c.pass) break;
    }
    if (c.pass) c.note(std::to_string(checked) + " matchings, family size == deficit with per-leader starts");
    return c;
}

Check analytic_round_bound(const VerifyOptions& opt) {
    Check c;
    const int runs = 100;
    std::vector<int> ok(static_cast<std::size_t>(runs), 0);
    std::vector<double> ratio(static_cast<std::size_t>(runs), 0.0);
    parallel_for(runs, opt.threads, [&](int i) {
        Rng rng(mix_seed(opt.seed, 106, static_cast<std::uint64_t>(i)));
        const int n = 20, m = 40;
        std::vector<Edge> edges;
        std::vector<std::pair<LeaderId, int>> constraints;
        for (LeaderId l = 1; l <= n; ++l) {
            int degree = 1 + static_cast<int>(rng.uniform_index(4));  // 1..4
            std::set<FollowerId> nbrs;
            while (static_cast<int>(nbrs.size()) < degree)
                nbrs.insert(1 + static_cast<int>(rng.uniform_index(m)));
            for (FollowerId f : nbrs) edges.push_back({l, f});
            constraints.push_back({l, std::min(2, degree)});
        }
        BipartiteNetwork net = build_network(n, m, edges, constraints);
        const long long d_star = best_matching(net).d_star;
        const double eps = 0.5;
        RoundBound bound = approx_bound(m, net.max_leader_degree(), 1.0, 1.0, eps);

        SimConfig cfg;
        cfg.seed = rng.next();
        cfg.stop_rule = StopRule::DeficitBelow;
        cfg.deficit_below_x = eps + static_cast<double>(d_star) / m;
        cfg.max_rounds = static_cast<long long>(bound.rounds) + 1;
        Trajectory t = run(net, empty_matching(net), cfg);
        bool reached = t.stop_reason == StopReason::DeficitBelow &&
                       static_cast<double>(t.rounds_elapsed) <= bound.rounds;
        ok[static_cast<std::size_t>(i)] = reached ? 1 : 0;
        ratio[static_cast<std::size_t>(i)] = static_cast<double>(t.rounds_elapsed) / bound.rounds;
    });
    int successes = 0;
    double worst = 0.0;
    for (int i = 0; i < runs; ++i) {
        successes += ok[static_cast<std::size_t>(i)];
        worst = std::max(worst, ratio[static_cast<std::size_t>(i)]);
    }
    if (successes < 99)
        c.fail("only " + std::to_string(successes) + "/100 runs within the bound");
    else {
        std::ostringstream note;
        note << successes << "/100 within bound, worst rounds/bound = " << std::setprecision(3)
             << worst;
        c.note(note.str());
    }
    return c;
}

Check exponential_slowdown_trend(const VerifyOptions& opt) {
    Check c;
    const std::vector<int> sizes = {8, 10, 12, 14};
    const int seeds = 50;
    std::vector<std::vector<long long>> rounds(sizes.size(),
                                               std::vector<long long>(seeds, 0));
    parallel_for(static_cast<int>(sizes.size()) * seeds, opt.threads, [&](int job) {
        int si = job / seeds;
        int r = job % seeds;
        const int n = sizes[static_cast<std::size_t>(si)];
        BipartiteNetwork net = gen_counterexample(n);
        SimConfig cfg;
        cfg.seed = mix_seed(opt.seed, 107, static_cast<std::uint64_t>(job));
        cfg.stop_rule = StopRule::Stable;
        cfg.max_rounds = 100'000'000;
        Trajectory t = run(net, shifted_matching(net), cfg);
        if (t.stop_reason != StopReason::Stable)
            throw std::runtime_error("run truncated at n=" + std::to_string(n));
        rounds[static_cast<std::size_t>(si)][static_cast<std::size_t>(r)] = t.rounds_elapsed;
    });
    std::vector<double> medians;
    for (const auto& v : rounds) medians.push_back(median(v));
    std::ostringstream note;
    note << "medians";
    for (std::size_t i = 0; i < medians.size(); ++i) {
        note << (i ? "," : " ") << medians[i];
        if (i > 0 && medians[i] < 1.5 * medians[i - 1])
            c.fail("median at n=" + std::to_string(sizes[i]) + " below 1.5x previous");
    }
    c.note(note.str());
    return c;
}

Check chain_transition_law(const VerifyOptions& opt) {
    Check c;
    BipartiteNetwork net = gen_counterexample(6);
    const std::vector<std::vector<int>> states = {{2, 4, 6}, {3, 5}, {4, 6}, {5, 6}, {2, 3}};
    const int trials = 10'000;
    for (std::size_t si = 0; si < states.size(); ++si) {
        IndexSet state{6, states[si]};
        Matching start = matching_from_index_set(net, state);
        std::map<std::vector<int>, int> tally;
        for (int t = 0; t < trials; ++t) {
            Rng rng(mix_seed(opt.seed, 108 + si, static_cast<std::uint64_t>(t)));
            RoundRequests req = leader_stage(net, start, 1.0, rng);
            Matching next = follower_stage(net, start, req, 1.0, rng);
            tally[index_set(next).values] += 1;
        }
        std::map<std::vector<int>, double> expected;
        for (const auto& [succ, prob] : transition_distribution(state))
            expected[succ.values] = prob;
        for (const auto& [values, count] : tally)
            if (!expected.count(values)) c.fail("unexpected successor observed");
        for (const auto& [values, prob] : expected) {
            double freq = static_cast<double>(tally[values]) / trials;
            double sigma = std::sqrt(prob * (1.0 - prob) / trials);
            if (std::abs(freq - prob) > 3.0 * sigma)
                c.fail("frequency " + std::to_string(freq) + " vs " + std::to_string(prob) +
                       " beyond 3 sigma");
        }
    }
    if (c.pass) c.note("5 states x 10^4 rounds match the 1/min-index law within 3 sigma");
    return c;
}

Check height_counting_forms(const VerifyOptions&) {
    Check c;
    for (int n = 1; n <= 12 && c.pass; ++n) {
        BipartiteNetwork net = gen_counterexample(n);
        std::vector<unsigned long long> by_height(static_cast<std::size_t>(n), 0);
        unsigned long long total = 0;
        for_each_matching(
            net,
            [&](const Matching& m) {
                if (m.total_deficit() != 1) return;
                ++total;
                ++by_height[static_cast<std::size_t>(height(m))];
            },
            20'000'000, 1);
        if (total != count_all(n)) c.fail("total at n=" + std::to_string(n));
        for (int j = 0; j <= n - 1; ++j)
            if (by_height[static_cast<std::size_t>(j)] != count_by_height(n, j))
                c.fail("height " + std::to_string(j) + " at n=" + std::to_string(n));
    }
    if (c.pass) c.note("closed forms equal enumeration for n<=12, all heights");
    return c;
}

Check tree_walk_equivalence(const VerifyOptions& opt) {
    Check c;
    BipartiteNetwork net = gen_counterexample(8);
    Matching start = shifted_matching(net);
    const int samples = 10'000;
    if (height(start) != 7) c.fail("start height is not 7");

    std::vector<long long> protocol_times(samples, 0);
    parallel_for(samples, opt.threads, [&](int i) {
        SimConfig cfg;
        cfg.seed = mix_seed(opt.seed, 110, static_cast<std::uint64_t>(i));
        cfg.stop_rule = StopRule::Stable;
        Trajectory t = run(net, start, cfg);
        // last unit of deficit resolves exactly one round after the walk
        // reaches its target state
        protocol_times[static_cast<std::size_t>(i)] = t.rounds_elapsed - 1;
    });

    LabeledTree tree = build_tree(7);
    int start_node = tree_node_for(tree, index_set(start));
    std::vector<long long> walk_times(samples, 0);
    parallel_for(samples, opt.threads, [&](int i) {
        walk_times[static_cast<std::size_t>(i)] = walk_hitting_time(
            tree, start_node, mix_seed(opt.seed, 111, static_cast<std::uint64_t>(i)));
    });

    double stat = ks_statistic(protocol_times, walk_times);
    std::ostringstream note;
    note << "two-sample KS statistic " << std::setprecision(4) << stat << " over 10^4 + 10^4 samples";
    if (stat >= 0.03) c.fail(note.str());
    else c.note(note.str());
    return c;
}

Check random_sweep_shape(const VerifyOptions& opt) {
    Check c;
    ExperimentSpec spec;
    spec.nm_pairs = {{100, 200}, {100, 300}, {150, 450}, {200, 600}};
    spec.rho = 0.04;
    spec.eps_list = {0.9, 0.7, 0.5};
    spec.networks_per_point = 5;
    spec.runs_per_network = 5;
    spec.p = 1.0;
    spec.q = 1.0;
    spec.seed_base = mix_seed(opt.seed, 112);
    spec.threads = opt.threads;
    CsvTable table = parse_csv_text(run_fig5(spec));

    std::map<std::pair<int, int>, std::map<double, double>> means;
    for (const auto& row : table.rows) {
        means[{std::stoi(row[0]), std::stoi(row[1])}][std::stod(row[2])] = std::stod(row[3]);
    }
    for (const auto& [nm, curve] : means) {
        double prev = -1.0;
        // iterate eps ascending: means must be non-increasing in eps
        for (const auto& [eps, mean] : curve) {
            (void)eps;
            if (prev >= 0.0 && mean > prev + 1e-9)
                c.fail("mean increased with eps at n=" + std::to_string(nm.first) +
                       ",m=" + std::to_string(nm.second));
            prev = mean;
        }
    }
    for (double eps : spec.eps_list) {
        double prev = -1.0;
        for (const auto& nm : spec.nm_pairs) {
            double mean = means[nm][eps];
            if (prev >= 0.0 && mean < prev - 1e-9)
                c.fail("mean decreased with m at eps=" + std::to_string(eps));
            prev = mean;
        }
    }
    if (c.pass)
        c.note("mean rounds non-increasing in eps per curve, non-decreasing in m across curves");
    return c;
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(const VerifyOptions& options) {
    struct Entry {
        int id;
        const char* name;
        Check (*fn)(const VerifyOptions&);
    };
    const Entry entries[] = {
        {1, "oracle-exactness", oracle_exactness},
        {2, "triangular-unique-stable", triangular_unique_stable},
        {3, "deficit-monotonicity", deficit_monotonicity},
        {4, "short-path-guarantee", short_path_guarantee},
        {5, "disjoint-path-count", disjoint_path_count},
        {6, "analytic-round-bound", analytic_round_bound},
        {7, "exponential-slowdown-trend", exponential_slowdown_trend},
        {8, "chain-transition-law", chain_transition_law},
        {9, "height-counting-forms", height_counting_forms},
        {10, "tree-walk-equivalence", tree_walk_equivalence},
        {11, "random-sweep-shape", random_sweep_shape},
    };
    std::vector<CriterionResult> results;
    for (const Entry& e : entries) {
        if (!options.only.empty() &&
            std::find(options.only.begin(), options.only.end(), e.id) == options.only.end())
            continue;
        CriterionResult r;
        r.id = e.id;
        r.name = e.name;
        r.seed = options.seed;
        auto t0 = Clock::now();
        try {
            Check c = e.fn(options);
            r.pass = c.pass;
            r.detail = c.detail.str();
        } catch (const std::exception& ex) {
            r.pass = false;
            r.detail = std::string("exception: ") + ex.what();
        }
        r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        results.push_back(std::move(r));
    }
    return results;
}

int report_results(const std::vector<CriterionResult>& results, std::ostream& out) {
    int failures = 0;
    for (const CriterionResult& r : results) {
        if (!r.pass) ++failures;
        out << "[" << std::setw(2) << r.id << "] " << (r.pass ? "PASS" : "FAIL") << " "
            << std::left << std::setw(28) << r.name << std::right << " " << r.detail
            << " (seed=" << r.seed << ", " << std::fixed << std::setprecision(1) << r.seconds
            << "s)\n";
        out.unsetf(std::ios::floatfield);
        out << std::setprecision(6);
    }
    out << (failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(failures) + " CRITERIA FAILED")
        << "\n";
    return failures;
}

}  // namespace teamform
