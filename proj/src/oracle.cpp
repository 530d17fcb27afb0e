#include "teamform/oracle.hpp"

#include <algorithm>
#include <stdexcept>

#include "teamform/flow.hpp"

namespace teamform {

OracleResult best_matching(const BipartiteNetwork& net) {
    const int n = net.num_leaders();
    const int m = net.num_followers();
    const int source = 0;
    const int sink = n + m + 1;
    MaxFlow flow(sink + 1);

    std::vector<std::vector<std::pair<FollowerId, int>>> leader_arcs(
        static_cast<std::size_t>(n) + 1);
    for (LeaderId l = 1; l <= n; ++l) {
        flow.add_arc(source, l, net.constraint(l));
        for (FollowerId f : net.leader_neighbors(l))
            leader_arcs[static_cast<std::size_t>(l)].push_back({f, flow.add_arc(l, n + f, 1)});
    }
    for (FollowerId f = 1; f <= m; ++f) flow.add_arc(n + f, sink, 1);

    long long value = flow.run(source, sink);

    OracleResult result{net.total_constraint() - value, Matching(net), false};
    for (LeaderId l = 1; l <= n; ++l)
        for (const auto& [f, arc] : leader_arcs[static_cast<std::size_t>(l)])
            if (flow.flow_on(arc) > 0) result.witness.assign(f, l);
    result.stable_exists = (result.d_star == 0);
    return result;
}

bool stable_exists(const BipartiteNetwork& net) { return best_matching(net).d_star == 0; }

namespace {

struct Enumerator {
    const BipartiteNetwork& net;
    const std::function<void(const Matching&)>& visit;
    long long leaf_limit;
    long long max_deficit;

    Matching current;
    std::vector<std::vector<LeaderId>> by_last;  // leaders whose final neighbor is f
    long long locked = 0;
    long long leaves = 0;

    Enumerator(const BipartiteNetwork& n_, const std::function<void(const Matching&)>& v,
               long long limit, long long maxdef)
        : net(n_), visit(v), leaf_limit(limit), max_deficit(maxdef), current(n_),
          by_last(static_cast<std::size_t>(n_.num_followers()) + 1) {
        for (LeaderId l = 1; l <= net.num_leaders(); ++l) {
            const auto& nbrs = net.leader_neighbors(l);
            if (nbrs.empty())
                locked += net.constraint(l);
            else
                by_last[static_cast<std::size_t>(nbrs.back())].push_back(l);
        }
    }

    long long lock_after(FollowerId f) {
        long long delta = 0;
        for (LeaderId l : by_last[static_cast<std::size_t>(f)]) delta += current.leader_deficit(l);
        return delta;
    }

    void descend(FollowerId f) {
        long long delta = lock_after(f);
        locked += delta;
        if (locked <= max_deficit) recurse(f + 1);
        locked -= delta;
    }

    void recurse(FollowerId f) {
        if (f > net.num_followers()) {
            if (++leaves > leaf_limit)
                throw std::runtime_error("enumeration limit exceeded (" +
                                         std::to_string(leaf_limit) + " matchings)");
            visit(current);
            return;
        }
        descend(f);  // f left unmatched
        for (LeaderId l : net.follower_neighbors(f)) {
            if (current.team_size(l) < net.constraint(l)) {
                current.assign(f, l);
                descend(f);
                current.unassign(f);
            }
        }
    }
};

}  // namespace

void for_each_matching(const BipartiteNetwork& net,
                       const std::function<void(const Matching&)>& visit,
                       long long leaf_limit, long long max_deficit) {
    Enumerator e(net, visit, leaf_limit, max_deficit);
    if (e.locked <= max_deficit) e.recurse(1);
}

std::vector<Matching> enumerate_matchings(const BipartiteNetwork& net,
                                          const std::function<bool(const Matching&)>& predicate,
                                          long long leaf_limit, long long max_deficit) {
    std::vector<Matching> out;
    for_each_matching(
        net, [&](const Matching& m) { if (predicate(m)) out.push_back(m); },
        leaf_limit, max_deficit);
    return out;
}

long long brute_force_min_deficit(const BipartiteNetwork& net, long long leaf_limit) {
    long long best = net.total_constraint();
    for_each_matching(
        net, [&](const Matching& m) { best = std::min(best, m.total_deficit()); }, leaf_limit);
    return best;
}

}  // namespace teamform
