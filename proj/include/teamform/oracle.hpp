#ifndef TEAMFORM_ORACLE_HPP
#define TEAMFORM_ORACLE_HPP

#include <functional>
#include <limits>
#include <vector>

#include "teamform/matching.hpp"
#include "teamform/network.hpp"

namespace teamform {

struct OracleResult {
    long long d_star = 0;
    Matching witness;
    bool stable_exists = false;
};

// Exact minimum deficit over all matchings, via max flow with unit follower
// capacities (source -> leader with capacity c_l, leader -> neighbor with
// capacity 1, follower -> sink with capacity 1). d_star = sum c_l - flow.
OracleResult best_matching(const BipartiteNetwork& net);

bool stable_exists(const BipartiteNetwork& net);

// Brute-force enumeration of every matching: each follower assigned to one
// neighboring leader or none, teams capped at c_l. Aborts with
// std::runtime_error once more than leaf_limit complete assignments have
// been visited. max_deficit, when given, prunes branches whose deficit is
// already forced above it (leaders none of whose remaining neighbors are
// still unassigned count as locked).
void for_each_matching(const BipartiteNetwork& net,
                       const std::function<void(const Matching&)>& visit,
                       long long leaf_limit = 20'000'000,
                       long long max_deficit = std::numeric_limits<long long>::max());

std::vector<Matching> enumerate_matchings(
    const BipartiteNetwork& net, const std::function<bool(const Matching&)>& predicate,
    long long leaf_limit = 20'000'000,
    long long max_deficit = std::numeric_limits<long long>::max());

// Independent route to d_star for cross-checking the flow oracle.
long long brute_force_min_deficit(const BipartiteNetwork& net,
                                  long long leaf_limit = 20'000'000);

}  // namespace teamform

#endif
