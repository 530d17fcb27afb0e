#ifndef TEAMFORM_NETWORK_HPP
#define TEAMFORM_NETWORK_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace teamform {

// Ids are 1-based throughout; 0 is the "none" sentinel.
using LeaderId = int;
using FollowerId = int;

using Edge = std::pair<LeaderId, FollowerId>;

// How gen_random assigns team-size constraints.
struct ConstraintRule {
    enum class Kind { Fixed, CappedRatio };
    Kind kind = Kind::Fixed;
    int fixed_c = 1;

    static ConstraintRule fixed(int c) { return {Kind::Fixed, c}; }
    // c_l = min(floor(m/n), |N_l|); leaders with no neighbors force a resample.
    static ConstraintRule capped_ratio() { return {Kind::CappedRatio, 0}; }
};

// A bipartite network between leaders (each with a team-size constraint
// c_l >= 1) and followers. Immutable after construction; adjacency is kept
// sorted on both sides and the two sides are validated to agree.
class BipartiteNetwork {
public:
    BipartiteNetwork(int num_leaders, int num_followers,
                     const std::vector<Edge>& edges,
                     const std::vector<std::pair<LeaderId, int>>& constraints);

    int num_leaders() const { return num_leaders_; }
    int num_followers() const { return num_followers_; }
    long long num_edges() const { return num_edges_; }

    int constraint(LeaderId l) const { return constraint_[static_cast<std::size_t>(l)]; }
    long long total_constraint() const { return total_constraint_; }

    const std::vector<FollowerId>& leader_neighbors(LeaderId l) const {
        return leader_adj_[static_cast<std::size_t>(l)];
    }
    const std::vector<LeaderId>& follower_neighbors(FollowerId f) const {
        return follower_adj_[static_cast<std::size_t>(f)];
    }
    int leader_degree(LeaderId l) const {
        return static_cast<int>(leader_adj_[static_cast<std::size_t>(l)].size());
    }
    int max_leader_degree() const { return max_leader_degree_; }

    bool has_edge(LeaderId l, FollowerId f) const;
    std::vector<Edge> edges() const;  // sorted (leader, follower)

    bool operator==(const BipartiteNetwork& o) const;

private:
    int num_leaders_ = 0;
    int num_followers_ = 0;
    long long num_edges_ = 0;
    long long total_constraint_ = 0;
    int max_leader_degree_ = 0;
    std::vector<int> constraint_;                    // [1..n]
    std::vector<std::vector<FollowerId>> leader_adj_;    // [1..n], sorted
    std::vector<std::vector<LeaderId>> follower_adj_;    // [1..m], sorted
};

// Validating constructor wrapper. Throws std::invalid_argument on
// out-of-range ids, duplicate edges, or missing/nonpositive constraints.
BipartiteNetwork build_network(int num_leaders, int num_followers,
                               const std::vector<Edge>& edges,
                               const std::vector<std::pair<LeaderId, int>>& constraints);

// The triangular family: n leaders, n followers, leader i adjacent to
// followers 1..i, every constraint 1. Its unique deficit-0 matching pairs
// each leader with its same-index follower.
BipartiteNetwork gen_counterexample(int n);

// Seeded random bipartite network: each (leader, follower) edge present
// independently with probability rho. Under ConstraintRule::capped_ratio,
// networks containing an isolated leader are resampled (at most max_retries
// times); under fixed constraints isolated leaders are allowed.
BipartiteNetwork gen_random(int n, int m, double rho, std::uint64_t seed,
                            const ConstraintRule& rule, int max_retries = 100);

// Text format (UTF-8, line oriented, '#' starts a comment):
//   leaders <n>
//   followers <m>
//   constraint <leader_id> <c>     (one per leader, required)
//   edge <leader_id> <follower_id>
// The leaders/followers lines come first; constraint/edge lines in any
// order; duplicate lines are errors.
BipartiteNetwork parse_network(std::istream& in, const std::string& name);
BipartiteNetwork load_network(const std::string& path);
std::string format_network(const BipartiteNetwork& net);
void save_network(const BipartiteNetwork& net, const std::string& path);

}  // namespace teamform

#endif
