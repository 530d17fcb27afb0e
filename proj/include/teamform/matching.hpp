#ifndef TEAMFORM_MATCHING_HPP
#define TEAMFORM_MATCHING_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "teamform/network.hpp"

namespace teamform {

// Strict a < b with a small guard band, so thresholds like eps*m that are
// mathematically integral compare as that integer despite float error.
inline bool strictly_below(double a, double b) {
    return a < b - 1e-9;
}

// A many-to-one assignment of followers to leaders: each follower belongs to
// at most one team, every matched pair is a network edge, and no team exceeds
// its leader's constraint. Value-semantic; the owning network must outlive
// every matching built on it.
class Matching {
public:
    explicit Matching(const BipartiteNetwork& net);

    const BipartiteNetwork& network() const { return *net_; }

    LeaderId leader_of(FollowerId f) const { return leader_of_[static_cast<std::size_t>(f)]; }
    bool is_matched(FollowerId f) const { return leader_of(f) != 0; }
    int team_size(LeaderId l) const { return team_size_[static_cast<std::size_t>(l)]; }
    std::vector<FollowerId> team(LeaderId l) const;

    int num_matched() const { return num_matched_; }
    int leader_deficit(LeaderId l) const { return net_->constraint(l) - team_size(l); }
    long long total_deficit() const { return net_->total_constraint() - num_matched_; }

    // Moves f into l's team (detaching it from any current team). Throws if
    // (l, f) is not an edge or l's team is already full.
    void assign(FollowerId f, LeaderId l);
    void unassign(FollowerId f);

    std::vector<Edge> edges() const;  // sorted (leader, follower)

    bool operator==(const Matching& o) const;

private:
    const BipartiteNetwork* net_;
    std::vector<LeaderId> leader_of_;  // [1..m], 0 = unmatched
    std::vector<int> team_size_;       // [1..n]
    int num_matched_ = 0;
};

Matching empty_matching(const BipartiteNetwork& net);

struct DeficitReport {
    std::vector<int> per_leader;                 // [1..n]; index 0 unused
    long long total = 0;
    std::vector<LeaderId> poor_leaders;          // ascending
    std::vector<FollowerId> unmatched_followers; // ascending
};

// Recomputed from the raw assignment, independent of the cached team sizes.
DeficitReport deficit(const Matching& m);

// Alternating path l_0, f_1, l_1, ..., f_k: starts at a poor leader with a
// non-matching edge, each interior follower f_i is matched to the next
// leader l_i, and f_k is unmatched. Solving it flips every edge, lowering
// the total deficit by one.
struct DdPath {
    std::vector<LeaderId> leaders;      // l_0 .. l_{k-1}
    std::vector<FollowerId> followers;  // f_1 .. f_k
    int length() const { return 2 * static_cast<int>(followers.size()) - 1; }
};

// Throws std::invalid_argument describing the first violated path invariant.
void check_dd_path(const Matching& m, const DdPath& path);

// Minimum-length deficit-decreasing path over all poor leaders, or nullopt.
// Ties break to the lexicographically smallest node sequence.
std::optional<DdPath> shortest_dd_path(const Matching& m);

// Flip the path's matched and unmatched edges; total deficit drops by one.
Matching solve_dd_path(const Matching& m, const DdPath& path);

// Edges in exactly one of the two matchings (same network required).
std::vector<Edge> symmetric_difference(const Matching& a, const Matching& b);

struct DisjointDdPaths {
    int count = 0;
    std::vector<DdPath> paths;
};

// Maximum family of pairwise follower-disjoint deficit-decreasing paths that
// use only edges of m XOR stable, with at most leader_deficit(l) paths
// starting at each poor leader l. Computed as a unit-capacity-on-followers
// max flow; returns the count and one witness family.
DisjointDdPaths max_follower_disjoint_dd_paths(const Matching& m, const Matching& stable);

enum class ApproxStatus { Stable, ApproxStable, ApproxBest, Neither };

// Classification against the deficit thresholds, strict inequalities:
// Stable iff d = 0; ApproxStable iff a stable matching exists (d_star = 0)
// and d < eps*m; ApproxBest iff d - d_star < eps*m.
ApproxStatus approx_status(const Matching& m, double eps, long long d_star);

std::string to_string(ApproxStatus s);

// Matching text format: lines `match <leader_id> <follower_id>`; followers
// not listed are unmatched.
Matching parse_matching(const BipartiteNetwork& net, std::istream& in, const std::string& name);
Matching load_matching(const BipartiteNetwork& net, const std::string& path);
std::string format_matching(const Matching& m);
void save_matching(const Matching& m, const std::string& path);

}  // namespace teamform

#endif
