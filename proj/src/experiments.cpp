#include "teamform/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "teamform/counterexample.hpp"
#include "teamform/dynamics.hpp"
#include "teamform/matching.hpp"
#include "teamform/network.hpp"
#include "teamform/oracle.hpp"
#include "teamform/rng.hpp"

namespace teamform {

namespace {

std::string join_ints(const std::vector<int>& v) {
    std::ostringstream out;
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
    return out.str();
}

std::string join_doubles(const std::vector<double>& v) {
    std::ostringstream out;
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
    return out.str();
}

std::string join_pairs(const std::vector<std::pair<int, int>>& v) {
    std::ostringstream out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out << (i ? "," : "") << v[i].first << "x" << v[i].second;
    return out.str();
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream stream(s);
    while (std::getline(stream, item, ',')) {
        // trim
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

}  // namespace

std::string ExperimentSpec::canonical_text() const {
    std::ostringstream out;
    out << "n_list = " << join_ints(n_list) << "\n";
    out << "approx_level = " << approx_level << "\n";
    out << "nm_pairs = " << join_pairs(nm_pairs) << "\n";
    out << "rho = " << rho << "\n";
    out << "eps_list = " << join_doubles(eps_list) << "\n";
    out << "p = " << p << "\n";
    out << "q = " << q << "\n";
    out << "networks_per_point = " << networks_per_point << "\n";
    out << "runs_per_network = " << runs_per_network << "\n";
    out << "seed_base = " << seed_base << "\n";
    out << "max_rounds = " << max_rounds << "\n";
    return out.str();
}

void ExperimentSpec::apply_key_value(const std::string& key, const std::string& value) {
    try {
        if (key == "n_list") {
            n_list.clear();
            for (const auto& tok : split_list(value)) n_list.push_back(std::stoi(tok));
        } else if (key == "approx_level") {
            approx_level = std::stod(value);
        } else if (key == "nm_pairs") {
            nm_pairs.clear();
            for (const auto& tok : split_list(value)) {
                auto x = tok.find('x');
                if (x == std::string::npos)
                    throw std::runtime_error("nm pair needs the form <n>x<m>");
                nm_pairs.push_back({std::stoi(tok.substr(0, x)), std::stoi(tok.substr(x + 1))});
            }
        } else if (key == "rho") {
            rho = std::stod(value);
        } else if (key == "eps_list") {
            eps_list.clear();
            for (const auto& tok : split_list(value)) eps_list.push_back(std::stod(tok));
        } else if (key == "p") {
            p = std::stod(value);
        } else if (key == "q") {
            q = std::stod(value);
        } else if (key == "networks_per_point") {
            networks_per_point = std::stoi(value);
        } else if (key == "runs_per_network") {
            runs_per_network = std::stoi(value);
        } else if (key == "seed_base") {
            seed_base = std::stoull(value);
        } else if (key == "max_rounds") {
            max_rounds = std::stoll(value);
        } else if (key == "threads") {
            threads = std::stoi(value);
        } else {
            throw std::runtime_error("unknown config key '" + key + "'");
        }
    } catch (const std::invalid_argument&) {
        throw std::runtime_error("bad value '" + value + "' for config key '" + key + "'");
    }
}

ExperimentSpec ExperimentSpec::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    ExperimentSpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t") != std::string::npos)
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": expected key = value");
            continue;
        }
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        spec.apply_key_value(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return spec;
}

std::uint64_t spec_hash(const ExperimentSpec& spec) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : spec.canonical_text()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void parallel_for(int jobs, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = std::min(threads, jobs);
    if (threads <= 1) {
        for (int i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= jobs) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

namespace {

std::string metadata_trailer(const ExperimentSpec& spec) {
    std::ostringstream out;
    out << "# spec_hash=" << spec_hash(spec) << " seed_base=" << spec.seed_base
        << " rng=" << Rng::kAlgorithm << "\n";
    return out.str();
}

// First recorded round with deficit strictly below the threshold, or the
// cap when the run never got there.
long long first_round_below(const Trajectory& t, double threshold, bool* truncated) {
    for (const auto& row : t.rows)
        if (strictly_below(static_cast<double>(row.deficit), threshold)) return row.round;
    *truncated = true;
    return t.rounds_elapsed;
}

long long first_round_all_matched(const Trajectory& t, bool* truncated) {
    for (const auto& row : t.rows)
        if (row.matched_followers == t.num_followers) return row.round;
    *truncated = true;
    return t.rounds_elapsed;
}

}  // namespace

std::string run_fig4(const ExperimentSpec& spec) {
    if (spec.networks_per_point < 1 || spec.runs_per_network < 1)
        throw std::invalid_argument("replication counts must be at least 1");
    if (!(spec.approx_level > 0.0 && spec.approx_level < 1.0))
        throw std::invalid_argument("approx_level must be in (0, 1)");
    const double eps = 1.0 - spec.approx_level;
    const int runs = spec.runs_per_network;

    struct PointResult {
        double approx_sum = 0, stable_sum = 0, matched_sum = 0;
        int truncated = 0;
    };
    std::vector<PointResult> results(spec.n_list.size());
    std::vector<std::string> errors(spec.n_list.size());

    parallel_for(static_cast<int>(spec.n_list.size()), spec.threads, [&](int idx) {
        const int n = spec.n_list[static_cast<std::size_t>(idx)];
        BipartiteNetwork net = gen_counterexample(n);
        PointResult& pr = results[static_cast<std::size_t>(idx)];
        for (int r = 0; r < runs; ++r) {
            SimConfig cfg;
            cfg.p = spec.p;
            cfg.q = spec.q;
            cfg.seed = mix_seed(spec.seed_base, static_cast<std::uint64_t>(n),
                                static_cast<std::uint64_t>(r));
            cfg.max_rounds = spec.max_rounds;
            cfg.stop_rule = StopRule::Stable;
            Trajectory t = run(net, empty_matching(net), cfg);
            bool truncated = false;
            pr.approx_sum += static_cast<double>(
                first_round_below(t, eps * n, &truncated));
            pr.matched_sum += static_cast<double>(first_round_all_matched(t, &truncated));
            if (t.stop_reason == StopReason::Stable) {
                pr.stable_sum += static_cast<double>(t.rounds_elapsed);
            } else {
                pr.stable_sum += static_cast<double>(t.rounds_elapsed);
                truncated = true;
            }
            if (truncated) ++pr.truncated;
        }
    });

    std::ostringstream out;
    out << "n,metric,mean_rounds,replications\n";
    std::ostringstream notes;
    for (std::size_t i = 0; i < spec.n_list.size(); ++i) {
        const int n = spec.n_list[i];
        const PointResult& pr = results[i];
        std::ostringstream level;
        level << "approx" << spec.approx_level;
        out << n << "," << level.str() << "," << pr.approx_sum / runs << "," << runs << "\n";
        out << n << ",stable," << pr.stable_sum / runs << "," << runs << "\n";
        out << n << ",followers_matched," << pr.matched_sum / runs << "," << runs << "\n";
        if (pr.truncated > 0)
            notes << "# truncated: n=" << n << " runs=" << pr.truncated << "/" << runs
                  << " capped_at=" << spec.max_rounds << "\n";
    }
    out << notes.str() << metadata_trailer(spec);
    return out.str();
}

std::string run_fig5(const ExperimentSpec& spec) {
    if (spec.networks_per_point < 1 || spec.runs_per_network < 1)
        throw std::invalid_argument("replication counts must be at least 1");
    if (spec.eps_list.empty()) throw std::invalid_argument("eps list must not be empty");
    for (double e : spec.eps_list)
        if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("eps values must be in (0, 1)");

    double eps_min = *std::min_element(spec.eps_list.begin(), spec.eps_list.end());
    const int points = static_cast<int>(spec.nm_pairs.size());
    const int nets = spec.networks_per_point;
    const int runs = spec.runs_per_network;

    // One job per (point, network); runs within a job stay sequential.
    struct JobResult {
        std::vector<double> tau_sums;  // per eps
        int truncated = 0;
    };
    std::vector<JobResult> job_results(static_cast<std::size_t>(points * nets));

    parallel_for(points * nets, spec.threads, [&](int job) {
        const int point = job / nets;
        const int net_idx = job % nets;
        const auto [n, m] = spec.nm_pairs[static_cast<std::size_t>(point)];
        std::uint64_t net_seed = mix_seed(spec.seed_base, 1000 + static_cast<std::uint64_t>(point),
                                          static_cast<std::uint64_t>(net_idx));
        BipartiteNetwork net =
            gen_random(n, m, spec.rho, net_seed, ConstraintRule::capped_ratio());
        const long long d_star = best_matching(net).d_star;

        JobResult& jr = job_results[static_cast<std::size_t>(job)];
        jr.tau_sums.assign(spec.eps_list.size(), 0.0);
        for (int r = 0; r < runs; ++r) {
            SimConfig cfg;
            cfg.p = spec.p;
            cfg.q = spec.q;
            cfg.seed = mix_seed(net_seed, 2000, static_cast<std::uint64_t>(r));
            cfg.max_rounds = spec.max_rounds;
            cfg.stop_rule = StopRule::DeficitBelow;
            cfg.deficit_below_x = eps_min + static_cast<double>(d_star) / m;
            Trajectory t = run(net, empty_matching(net), cfg);
            for (std::size_t e = 0; e < spec.eps_list.size(); ++e) {
                bool truncated = false;
                jr.tau_sums[e] += static_cast<double>(first_round_below(
                    t, spec.eps_list[e] * m + static_cast<double>(d_star), &truncated));
                if (truncated) ++jr.truncated;
            }
        }
    });

    std::ostringstream out;
    out << "n,m,eps,mean_rounds,replications\n";
    std::ostringstream notes;
    for (int point = 0; point < points; ++point) {
        const auto [n, m] = spec.nm_pairs[static_cast<std::size_t>(point)];
        int truncated = 0;
        for (std::size_t e = 0; e < spec.eps_list.size(); ++e) {
            double sum = 0;
            for (int net_idx = 0; net_idx < nets; ++net_idx) {
                const JobResult& jr = job_results[static_cast<std::size_t>(point * nets + net_idx)];
                sum += jr.tau_sums[e];
                if (e == 0) truncated += jr.truncated;
            }
            out << n << "," << m << "," << spec.eps_list[e] << "," << sum / (nets * runs) << ","
                << nets * runs << "\n";
        }
        if (truncated > 0)
            notes << "# truncated: n=" << n << " m=" << m << " measurements=" << truncated
                  << " capped_at=" << spec.max_rounds << "\n";
    }
    out << notes.str() << metadata_trailer(spec);
    return out.str();
}

}  // namespace teamform
