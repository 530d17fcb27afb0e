#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <fstream>
#include <map>
#include <string>

#include "teamform/chart.hpp"
#include "teamform/csv.hpp"
#include "teamform/dynamics.hpp"
#include "teamform/experiments.hpp"

using namespace teamform;

namespace {

std::map<std::pair<int, std::string>, double> fig4_means(const CsvTable& t) {
    std::map<std::pair<int, std::string>, double> out;
    for (const auto& row : t.rows) out[{std::stoi(row[0]), row[1]}] = std::stod(row[2]);
    return out;
}

}  // namespace

TEST_CASE("spec text round trips through the config reader") {
    ExperimentSpec spec;
    spec.n_list = {4, 8};
    spec.nm_pairs = {{10, 30}};
    spec.eps_list = {0.9, 0.5};
    spec.rho = 0.2;
    spec.p = 0.7;
    spec.networks_per_point = 3;
    spec.seed_base = 99;

    const char* path = "spec_roundtrip.cfg";
    {
        std::ofstream out(path);
        out << "# comment line\n" << spec.canonical_text() << "threads = 2\n";
    }
    ExperimentSpec loaded = ExperimentSpec::from_file(path);
    CHECK(loaded.n_list == spec.n_list);
    CHECK(loaded.nm_pairs == spec.nm_pairs);
    CHECK(loaded.eps_list == spec.eps_list);
    CHECK(loaded.rho == spec.rho);
    CHECK(loaded.p == spec.p);
    CHECK(loaded.networks_per_point == spec.networks_per_point);
    CHECK(loaded.seed_base == spec.seed_base);
    CHECK(loaded.threads == 2);
    CHECK(spec_hash(loaded) == spec_hash(spec));

    {
        std::ofstream out(path);
        out << "not_a_key = 3\n";
    }
    CHECK_THROWS_AS(ExperimentSpec::from_file(path), std::runtime_error);
}

TEST_CASE("parallel_for covers every job and propagates failures") {
    std::vector<std::atomic<int>> hits(64);
    parallel_for(64, 4, [&](int i) { hits[static_cast<std::size_t>(i)] += 1; });
    for (const auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(8, 3,
                                 [](int i) {
                                     if (i == 5) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("triangular study emits three reproducible curves") {
    ExperimentSpec spec;
    spec.n_list = {4, 8};
    spec.runs_per_network = 10;
    spec.seed_base = 7;
    spec.threads = 2;
    std::string csv = run_fig4(spec);
    CHECK(csv == run_fig4(spec));
    CHECK(csv.find("# spec_hash=") != std::string::npos);

    CsvTable t = parse_csv_text(csv);
    CHECK(t.header == std::vector<std::string>{"n", "metric", "mean_rounds", "replications"});
    CHECK(t.rows.size() == 6);  // 2 sizes x 3 metrics
    auto means = fig4_means(t);

    // reaching the approximation target never takes longer than the analytic bound
    for (int n : spec.n_list)
        CHECK(means[{n, "approx0.9"}] <= approx_bound(n, n, spec.p, spec.q, 0.1).rounds);
    // stabilization slows sharply as the staircase grows
    CHECK(means[{8, "stable"}] > means[{4, "stable"}]);
    // all three metrics are ordered: matched <= approx <= stable
    for (int n : spec.n_list) {
        CHECK(means[{n, "followers_matched"}] <= means[{n, "stable"}]);
        CHECK(means[{n, "approx0.9"}] <= means[{n, "stable"}]);
    }
}

TEST_CASE("random sweep emits one row per point and eps") {
    ExperimentSpec spec;
    spec.nm_pairs = {{6, 12}, {6, 18}};
    spec.rho = 0.5;
    spec.eps_list = {0.9, 0.5};
    spec.networks_per_point = 2;
    spec.runs_per_network = 2;
    spec.seed_base = 11;
    spec.threads = 2;
    std::string csv = run_fig5(spec);
    CHECK(csv == run_fig5(spec));

    CsvTable t = parse_csv_text(csv);
    CHECK(t.header ==
          std::vector<std::string>{"n", "m", "eps", "mean_rounds", "replications"});
    CHECK(t.rows.size() == 4);
    for (const auto& row : t.rows) CHECK(row[4] == "4");

    // coarser targets are hit no later than finer ones
    std::map<std::pair<int, int>, std::map<double, double>> curves;
    for (const auto& row : t.rows)
        curves[{std::stoi(row[0]), std::stoi(row[1])}][std::stod(row[2])] = std::stod(row[3]);
    for (const auto& [nm, curve] : curves) {
        (void)nm;
        CHECK(curve.at(0.9) <= curve.at(0.5));
    }
}

TEST_CASE("truncated runs are flagged in the study output") {
    ExperimentSpec spec;
    spec.n_list = {10};
    spec.runs_per_network = 3;
    spec.seed_base = 5;
    spec.max_rounds = 3;  // nowhere near stabilization
    spec.threads = 1;
    std::string csv = run_fig4(spec);
    CHECK(csv.find("# truncated: n=10") != std::string::npos);
}

TEST_CASE("csv parser understands headers, rows and comments") {
    CsvTable t = parse_csv_text("a,b\n1,2\n# note\n3,4\n");
    CHECK(t.header.size() == 2);
    CHECK(t.rows.size() == 2);
    CHECK(t.comments.size() == 1);
    CHECK(t.column("b") == 1);
    CHECK(t.column("zz") == -1);
    CHECK_THROWS_AS(parse_csv_text(""), std::runtime_error);
    CHECK_THROWS_AS(parse_csv_text("a,b\n1\n"), std::runtime_error);
}

TEST_CASE("charts render every series as a polyline") {
    ExperimentSpec spec;
    spec.n_list = {3, 4};
    spec.runs_per_network = 2;
    spec.seed_base = 3;
    spec.threads = 1;
    CsvTable fig4_table = parse_csv_text(run_fig4(spec));
    std::string svg = emit_chart(fig4_table, ChartKind::LogLines);
    CHECK(svg.rfind("<svg", 0) == 0);
    std::size_t polylines = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        pos += 1;
    }
    CHECK(polylines == 3);
    CHECK(svg.find("log scale") != std::string::npos);

    spec.nm_pairs = {{5, 10}, {5, 15}};
    spec.rho = 0.6;
    spec.eps_list = {0.9, 0.6};
    spec.networks_per_point = 1;
    CsvTable fig5_table = parse_csv_text(run_fig5(spec));
    std::string svg5 = emit_chart(fig5_table, ChartKind::Lines);
    polylines = 0;
    pos = 0;
    while ((pos = svg5.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        pos += 1;
    }
    CHECK(polylines == 2);

    CHECK_THROWS_AS(emit_chart(parse_csv_text("n,metric,mean_rounds,replications\n"),
                               ChartKind::Lines),
                    std::runtime_error);
    CHECK_THROWS_AS(emit_chart(parse_csv_text("x,y\n1,2\n"), ChartKind::Lines),
                    std::runtime_error);
}
