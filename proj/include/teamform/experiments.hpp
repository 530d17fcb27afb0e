#ifndef TEAMFORM_EXPERIMENTS_HPP
#define TEAMFORM_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace teamform {

// Parameters of the two study harnesses. Serializable as line-oriented
// `key = value` text; unknown keys are errors.
struct ExperimentSpec {
    // convergence study on the triangular family
    std::vector<int> n_list = {4, 6, 8, 10, 12, 14};
    double approx_level = 0.9;  // the "(1-eps) = level" curve; eps = 1 - level

    // approximation sweep on random networks
    std::vector<std::pair<int, int>> nm_pairs = {{100, 200}, {100, 300}, {150, 450}, {200, 600}};
    double rho = 0.04;
    std::vector<double> eps_list = {0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.05};

    double p = 1.0;
    double q = 1.0;
    int networks_per_point = 5;
    int runs_per_network = 5;
    std::uint64_t seed_base = 1;
    long long max_rounds = 100'000'000;
    int threads = 0;  // 0 = hardware concurrency

    std::string canonical_text() const;
    static ExperimentSpec from_file(const std::string& path);
    void apply_key_value(const std::string& key, const std::string& value);
};

// FNV-1a over the canonical spec text; recorded in CSV trailers so outputs
// are traceable to their parameters.
std::uint64_t spec_hash(const ExperimentSpec& spec);

// Convergence-time study on the triangular networks: for each n, seeded runs
// from the empty matching report the first round at which (i) the deficit
// falls below (1-approx_level)*m, (ii) the matching is stable, (iii) every
// follower is matched. CSV columns n,metric,mean_rounds,replications.
// Truncated runs are reported in trailing comments.
std::string run_fig4(const ExperimentSpec& spec);

// Approximation sweep on seeded random networks: for each (n, m) pair and
// eps, the mean first round at which deficit - d_star < eps*m, measured
// against the exact best-matching oracle. CSV columns
// n,m,eps,mean_rounds,replications.
std::string run_fig5(const ExperimentSpec& spec);

// Runs fn(0..jobs-1) on a fixed-size pool. Rethrows the first exception.
void parallel_for(int jobs, int threads, const std::function<void(int)>& fn);

}  // namespace teamform

#endif
