#ifndef TEAMFORM_DYNAMICS_HPP
#define TEAMFORM_DYNAMICS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "teamform/matching.hpp"
#include "teamform/network.hpp"
#include "teamform/rng.hpp"

namespace teamform {

enum class StopRule { Stable, DeficitBelow, FixedRounds };
enum class StopReason { Stable, DeficitBelow, FixedRounds, MaxRounds };

std::string to_string(StopReason r);

struct SimConfig {
    double p = 1.0;  // leader activation probability, (0, 1]
    double q = 1.0;  // follower acceptance probability, (0, 1]
    // Acceptance probability used by followers that are currently matched;
    // defaults to q when unset.
    std::optional<double> q_matched;
    std::uint64_t seed = 0;
    long long max_rounds = 100'000'000;
    StopRule stop_rule = StopRule::Stable;
    // Stop once the round-start deficit is strictly below deficit_below_x * m.
    // Values above 1 are allowed so callers can fold a best-matching offset
    // into the threshold.
    double deficit_below_x = 0.0;
};

// Requests raised during one leader stage: for each follower, the leaders
// requesting it, in ascending id order. A leader appears at most once in the
// whole structure.
using RoundRequests = std::vector<std::vector<LeaderId>>;

// One protocol round reads the matching as a snapshot: every leader below
// both its constraint and its degree activates with probability p and
// requests one follower, picked uniformly among unmatched neighbors when any
// exist, otherwise uniformly among neighbors outside its team.
RoundRequests leader_stage(const BipartiteNetwork& net, const Matching& m, double p, Rng& rng);

// Each request survives independently with probability q (q_matched for
// followers currently matched); a follower with surviving requests joins one
// of them uniformly at random. All moves commit simultaneously.
Matching follower_stage(const BipartiteNetwork& net, const Matching& m,
                        const RoundRequests& requests, double q, Rng& rng,
                        std::optional<double> q_matched = std::nullopt);

struct TrajectoryRow {
    long long round = 0;
    long long deficit = 0;
    int poor_leaders = 0;
    int matched_followers = 0;
};

// Recorded run. Rows are change-points: round 0 plus every round whose
// beginning-of-round (deficit, poor, matched) differs from the previous
// recorded row. Deficit and matched counts are monotone under the protocol,
// so every first-crossing statistic is exact on change-points.
struct Trajectory {
    std::vector<TrajectoryRow> rows;
    Matching final_matching;
    long long rounds_elapsed = 0;
    StopReason stop_reason = StopReason::Stable;
    int num_leaders = 0;
    int num_followers = 0;
    std::uint64_t seed = 0;
    double p = 1.0;
    double q = 1.0;
};

// Runs rounds (leader stage then follower stage) until the stop rule fires
// or max_rounds elapse. Fully determined by (net, initial, config). Throws
// std::logic_error if a round ever increases the total deficit.
Trajectory run(const BipartiteNetwork& net, const Matching& initial, const SimConfig& config);

// First recorded round whose beginning-of-round deficit is strictly below
// x * m, or nullopt. Requires 0 < x <= 1.
std::optional<long long> tau(const Trajectory& t, double x);

struct RoundBound {
    double rounds = 0.0;
    double probability = 0.0;
};

// High-probability bound on the rounds needed to reach a matching whose
// deficit is below eps*m: c * floor(1/eps) * (max_degree/(p*q))^floor(1/eps) * m
// rounds with probability at least 1 - exp(-c*m*eps^2/2), where
// c = 1 + 1/(m*(1-eps)).
RoundBound approx_bound(int m, int max_degree, double p, double q, double eps);

// CSV: header round,deficit,poor_leaders,matched_followers; one row per
// recorded round; trailing comment with stop_reason, rounds, seed, rng.
void write_trajectory_csv(const Trajectory& t, std::ostream& out);
std::string trajectory_csv(const Trajectory& t);

}  // namespace teamform

#endif
