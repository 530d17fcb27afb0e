// Command-line front end: network generation, the exact oracle, protocol
// runs, the two study harnesses, the counting/tree utilities, verification,
// and chart rendering.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "teamform/chart.hpp"
#include "teamform/counterexample.hpp"
#include "teamform/csv.hpp"
#include "teamform/dynamics.hpp"
#include "teamform/experiments.hpp"
#include "teamform/matching.hpp"
#include "teamform/network.hpp"
#include "teamform/oracle.hpp"
#include "teamform/verify.hpp"

namespace {

using namespace teamform;

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
}

ConstraintRule parse_constraint_rule(const std::string& text) {
    if (text == "capped") return ConstraintRule::capped_ratio();
    if (text.rfind("fixed:", 0) == 0) return ConstraintRule::fixed(std::stoi(text.substr(6)));
    throw CLI::ValidationError("--constraint", "expected 'capped' or 'fixed:<c>'");
}

struct RunOptions {
    std::string network_path;
    std::string init_path;
    std::string out_path;
    std::string stop = "stable";
    double p = 1.0, q = 1.0;
    double q_matched = -1.0;
    std::uint64_t seed = 1;
    long long max_rounds = 100'000'000;
};

int do_run(const RunOptions& o) {
    BipartiteNetwork net = load_network(o.network_path);
    Matching initial =
        o.init_path.empty() ? empty_matching(net) : load_matching(net, o.init_path);
    SimConfig cfg;
    cfg.p = o.p;
    cfg.q = o.q;
    if (o.q_matched >= 0.0) cfg.q_matched = o.q_matched;
    cfg.seed = o.seed;
    cfg.max_rounds = o.max_rounds;
    if (o.stop == "stable") {
        cfg.stop_rule = StopRule::Stable;
    } else if (o.stop == "fixed") {
        cfg.stop_rule = StopRule::FixedRounds;
    } else if (o.stop.rfind("deficit:", 0) == 0) {
        cfg.stop_rule = StopRule::DeficitBelow;
        cfg.deficit_below_x = std::stod(o.stop.substr(8));
    } else {
        throw CLI::ValidationError("--stop", "expected stable, fixed, or deficit:<x>");
    }
    Trajectory t = run(net, initial, cfg);
    write_output(trajectory_csv(t), o.out_path);
    return 0;
}

// Applies CLI overrides on top of config-file values: only flags the user
// actually passed replace the file's settings.
void apply_spec_overrides(CLI::App* cmd, ExperimentSpec& spec,
                          const std::vector<int>& n_list,
                          const std::vector<std::string>& pairs,
                          const std::vector<double>& eps, double rho, double p, double q,
                          int networks, int runs, std::uint64_t seed, long long max_rounds,
                          int threads, double approx_level) {
    if (cmd->count("--approx-level") > 0) spec.approx_level = approx_level;
    if (cmd->count("--n") > 0) spec.n_list = n_list;
    if (cmd->count("--pair") > 0) {
        spec.nm_pairs.clear();
        for (const auto& s : pairs) {
            auto x = s.find('x');
            if (x == std::string::npos)
                throw CLI::ValidationError("--pair", "expected <n>x<m>");
            spec.nm_pairs.push_back({std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))});
        }
    }
    if (cmd->count("--eps") > 0) spec.eps_list = eps;
    if (cmd->count("--rho") > 0) spec.rho = rho;
    if (cmd->count("--p") > 0) spec.p = p;
    if (cmd->count("--q") > 0) spec.q = q;
    if (cmd->count("--networks") > 0) spec.networks_per_point = networks;
    if (cmd->count("--runs") > 0) spec.runs_per_network = runs;
    if (cmd->count("--seed") > 0) spec.seed_base = seed;
    if (cmd->count("--max-rounds") > 0) spec.max_rounds = max_rounds;
    if (cmd->count("--threads") > 0) spec.threads = threads;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributed team formation on bipartite networks"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a network file");
    std::string gen_kind = "triangular";
    int gen_n = 6, gen_m = 6;
    double gen_rho = 0.04;
    std::uint64_t gen_seed = 1;
    std::string gen_constraint = "fixed:1";
    std::string gen_out;
    gen->add_option("--kind", gen_kind, "triangular | random")->capture_default_str();
    gen->add_option("--n", gen_n, "number of leaders")->capture_default_str();
    gen->add_option("--m", gen_m, "number of followers (random only)")->capture_default_str();
    gen->add_option("--rho", gen_rho, "edge probability (random only)")->capture_default_str();
    gen->add_option("--seed", gen_seed, "seed (random only)")->capture_default_str();
    gen->add_option("--constraint", gen_constraint, "fixed:<c> | capped (random only)")
        ->capture_default_str();
    gen->add_option("--out", gen_out, "output path (default stdout)");

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "Exact best matching of a network");
    std::string oracle_net;
    oracle_cmd->add_option("network", oracle_net, "network file")->required();

    // run
    auto* run_cmd = app.add_subcommand("run", "Run the protocol, emit a trajectory CSV");
    RunOptions run_opts;
    run_cmd->add_option("network", run_opts.network_path, "network file")->required();
    run_cmd->add_option("--init", run_opts.init_path, "initial matching file (default empty)");
    run_cmd->add_option("--p", run_opts.p, "leader activation probability")->capture_default_str();
    run_cmd->add_option("--q", run_opts.q, "follower acceptance probability")->capture_default_str();
    run_cmd->add_option("--q-matched", run_opts.q_matched,
                        "acceptance probability for matched followers (default q)");
    run_cmd->add_option("--seed", run_opts.seed, "run seed")->capture_default_str();
    run_cmd->add_option("--max-rounds", run_opts.max_rounds, "round cap")->capture_default_str();
    run_cmd->add_option("--stop", run_opts.stop, "stable | fixed | deficit:<x>")
        ->capture_default_str();
    run_cmd->add_option("--out", run_opts.out_path, "output path (default stdout)");

    // fig4 / fig5 share the spec options
    ExperimentSpec spec4, spec5;
    std::string cfg4_path, cfg5_path;
    std::vector<int> opt_n;
    std::vector<std::string> opt_pairs;
    std::vector<double> opt_eps;
    double opt_rho = 0.04, opt_p = 1.0, opt_q = 1.0, opt_approx_level = 0.9;
    int opt_networks = 5, opt_runs = 5, opt_threads = 0;
    std::uint64_t opt_seed = 1;
    long long opt_max_rounds = 100'000'000;
    std::string fig4_out, fig5_out;

    auto add_spec_options = [&](CLI::App* cmd, std::string& cfg_path, std::string& out_path) {
        cmd->add_option("--config", cfg_path, "key = value config file");
        cmd->add_option("--approx-level", opt_approx_level, "approximation curve level");
        cmd->add_option("--n", opt_n, "triangular sizes");
        cmd->add_option("--pair", opt_pairs, "random points as <n>x<m>");
        cmd->add_option("--eps", opt_eps, "approximation levels");
        cmd->add_option("--rho", opt_rho, "edge probability");
        cmd->add_option("--p", opt_p, "leader activation probability");
        cmd->add_option("--q", opt_q, "follower acceptance probability");
        cmd->add_option("--networks", opt_networks, "networks per point");
        cmd->add_option("--runs", opt_runs, "runs per network");
        cmd->add_option("--seed", opt_seed, "seed base");
        cmd->add_option("--max-rounds", opt_max_rounds, "per-run round cap");
        cmd->add_option("--threads", opt_threads, "worker threads (0 = auto)");
        cmd->add_option("--out", out_path, "output path (default stdout)");
    };
    auto* fig4 = app.add_subcommand("fig4", "Convergence-time study on the triangular family");
    add_spec_options(fig4, cfg4_path, fig4_out);
    auto* fig5 = app.add_subcommand("fig5", "Approximation sweep on random networks");
    add_spec_options(fig5, cfg5_path, fig5_out);

    // count
    auto* count_cmd = app.add_subcommand("count", "Deficit-1 matching counts by height");
    int count_n = 6;
    double count_gamma = -1.0;
    count_cmd->add_option("--n", count_n, "network size")->required();
    count_cmd->add_option("--gamma", count_gamma, "also report the low-height fraction");

    // tree
    auto* tree_cmd = app.add_subcommand("tree", "Hitting-time samples for the walk tree");
    int tree_m = 7, tree_walks = 100;
    std::uint64_t tree_seed = 1;
    std::string tree_start = "top", tree_out;
    tree_cmd->add_option("--m", tree_m, "tree parameter")->required();
    tree_cmd->add_option("--walks", tree_walks, "number of samples")->capture_default_str();
    tree_cmd->add_option("--seed", tree_seed, "seed base")->capture_default_str();
    tree_cmd->add_option("--start", tree_start, "top (root's child) | deep (deepest node)")
        ->capture_default_str();
    tree_cmd->add_option("--out", tree_out, "output path (default stdout)");

    // verify
    auto* verify_cmd = app.add_subcommand(
        "verify", "Run the verification suite, or check a matching file against a network");
    std::vector<std::string> verify_files;
    std::uint64_t verify_seed = 1;
    int verify_threads = 0;
    std::vector<int> verify_only;
    std::vector<double> verify_eps = {0.5, 0.1};
    verify_cmd->add_option("files", verify_files, "optional: <network> <matching>")->expected(0, 2);
    verify_cmd->add_option("--seed", verify_seed, "suite seed")->capture_default_str();
    verify_cmd->add_option("--threads", verify_threads, "worker threads (0 = auto)");
    verify_cmd->add_option("--only", verify_only, "run only these criterion ids");
    verify_cmd->add_option("--eps", verify_eps, "approximation levels to report in file mode");

    // chart
    auto* chart_cmd = app.add_subcommand("chart", "Render a CSV as an SVG line chart");
    std::string chart_csv, chart_kind = "lines", chart_out;
    chart_cmd->add_option("csv", chart_csv, "input CSV file")->required();
    chart_cmd->add_option("--kind", chart_kind, "lines | log_lines")->capture_default_str();
    chart_cmd->add_option("--out", chart_out, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            if (gen_kind != "triangular" && gen_kind != "random")
                throw std::runtime_error("unknown --kind " + gen_kind);
            BipartiteNetwork net =
                gen_kind == "triangular"
                    ? gen_counterexample(gen_n)
                    : gen_random(gen_n, gen_m, gen_rho, gen_seed,
                                 parse_constraint_rule(gen_constraint));
            write_output(format_network(net), gen_out);
        } else if (oracle_cmd->parsed()) {
            BipartiteNetwork net = load_network(oracle_net);
            OracleResult r = best_matching(net);
            std::cout << "d_star " << r.d_star << "\n";
            std::cout << "stable_exists " << (r.stable_exists ? "true" : "false") << "\n";
            std::cout << format_matching(r.witness);
        } else if (run_cmd->parsed()) {
            return do_run(run_opts);
        } else if (fig4->parsed()) {
            if (!cfg4_path.empty()) spec4 = ExperimentSpec::from_file(cfg4_path);
            apply_spec_overrides(fig4, spec4, opt_n, opt_pairs, opt_eps, opt_rho, opt_p, opt_q,
                                 opt_networks, opt_runs, opt_seed, opt_max_rounds, opt_threads,
                                 opt_approx_level);
            write_output(run_fig4(spec4), fig4_out);
        } else if (fig5->parsed()) {
            if (!cfg5_path.empty()) spec5 = ExperimentSpec::from_file(cfg5_path);
            apply_spec_overrides(fig5, spec5, opt_n, opt_pairs, opt_eps, opt_rho, opt_p, opt_q,
                                 opt_networks, opt_runs, opt_seed, opt_max_rounds, opt_threads,
                                 opt_approx_level);
            write_output(run_fig5(spec5), fig5_out);
        } else if (count_cmd->parsed()) {
            std::cout << "height,count\n";
            for (int j = 0; j <= count_n - 1; ++j)
                std::cout << j << "," << count_by_height(count_n, j) << "\n";
            std::cout << "# total=" << count_all(count_n) << "\n";
            if (count_gamma > 0.0)
                std::cout << "# low_height_fraction(gamma=" << count_gamma
                          << ")=" << low_height_fraction(count_n, count_gamma) << "\n";
        } else if (tree_cmd->parsed()) {
            LabeledTree tree = build_tree(tree_m);
            int start;
            if (tree_start == "top") {
                start = tree.nodes[0].children[0];
            } else if (tree_start == "deep") {
                start = 0;
                for (int node = 0; node < tree.size(); ++node)
                    if (tree.depth(node) > tree.depth(start)) start = node;
            } else {
                throw std::runtime_error("unknown --start " + tree_start);
            }
            std::ostringstream out;
            out << "sample,steps\n";
            for (int i = 0; i < tree_walks; ++i)
                out << i << ","
                    << walk_hitting_time(tree, start,
                                         mix_seed(tree_seed, static_cast<std::uint64_t>(i)))
                    << "\n";
            out << "# tree_m=" << tree_m << " start=" << tree_start << " seed=" << tree_seed
                << " rng=" << Rng::kAlgorithm << "\n";
            write_output(out.str(), tree_out);
        } else if (verify_cmd->parsed()) {
            if (verify_files.size() == 1)
                throw std::runtime_error("verify needs either no files or <network> <matching>");
            if (verify_files.size() == 2) {
                BipartiteNetwork net = load_network(verify_files[0]);
                Matching m = load_matching(net, verify_files[1]);
                DeficitReport rep = deficit(m);
                OracleResult oracle = best_matching(net);
                std::cout << "valid true\n";
                std::cout << "deficit " << rep.total << "\n";
                std::cout << "poor_leaders " << rep.poor_leaders.size() << "\n";
                std::cout << "d_star " << oracle.d_star << "\n";
                for (double eps : verify_eps)
                    std::cout << "status(eps=" << eps << ") "
                              << to_string(approx_status(m, eps, oracle.d_star)) << "\n";
                return 0;
            }
            VerifyOptions options;
            options.seed = verify_seed;
            options.threads = verify_threads;
            options.only = verify_only;
            auto results = run_acceptance_suite(options);
            return report_results(results, std::cout) == 0 ? 0 : 1;
        } else if (chart_cmd->parsed()) {
            ChartKind kind;
            if (chart_kind == "lines") kind = ChartKind::Lines;
            else if (chart_kind == "log_lines") kind = ChartKind::LogLines;
            else throw std::runtime_error("unknown --kind " + chart_kind);
            write_output(emit_chart(load_csv(chart_csv), kind), chart_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
