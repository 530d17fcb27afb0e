#include "teamform/matching.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "teamform/flow.hpp"

namespace teamform {

Matching::Matching(const BipartiteNetwork& net)
    : net_(&net),
      leader_of_(static_cast<std::size_t>(net.num_followers()) + 1, 0),
      team_size_(static_cast<std::size_t>(net.num_leaders()) + 1, 0) {}

std::vector<FollowerId> Matching::team(LeaderId l) const {
    std::vector<FollowerId> out;
    for (FollowerId f = 1; f <= net_->num_followers(); ++f)
        if (leader_of(f) == l) out.push_back(f);
    return out;
}

void Matching::assign(FollowerId f, LeaderId l) {
    if (f < 1 || f > net_->num_followers())
        throw std::invalid_argument("assign: follower " + std::to_string(f) + " out of range");
    if (!net_->has_edge(l, f))
        throw std::invalid_argument("assign: (" + std::to_string(l) + ", " + std::to_string(f) +
                                    ") is not a network edge");
    LeaderId old = leader_of(f);
    if (old == l) return;
    if (team_size(l) >= net_->constraint(l))
        throw std::invalid_argument("assign: leader " + std::to_string(l) + "'s team is full");
    if (old != 0) {
        --team_size_[static_cast<std::size_t>(old)];
        --num_matched_;
    }
    leader_of_[static_cast<std::size_t>(f)] = l;
    ++team_size_[static_cast<std::size_t>(l)];
    ++num_matched_;
}

void Matching::unassign(FollowerId f) {
    if (f < 1 || f > net_->num_followers())
        throw std::invalid_argument("unassign: follower " + std::to_string(f) + " out of range");
    LeaderId old = leader_of(f);
    if (old == 0) return;
    --team_size_[static_cast<std::size_t>(old)];
    --num_matched_;
    leader_of_[static_cast<std::size_t>(f)] = 0;
}

std::vector<Edge> Matching::edges() const {
    std::vector<Edge> out;
    for (FollowerId f = 1; f <= net_->num_followers(); ++f)
        if (is_matched(f)) out.push_back({leader_of(f), f});
    std::sort(out.begin(), out.end());
    return out;
}

bool Matching::operator==(const Matching& o) const {
    return *net_ == *o.net_ && leader_of_ == o.leader_of_;
}

Matching empty_matching(const BipartiteNetwork& net) { return Matching(net); }

DeficitReport deficit(const Matching& m) {
    const BipartiteNetwork& net = m.network();
    DeficitReport r;
    r.per_leader.assign(static_cast<std::size_t>(net.num_leaders()) + 1, 0);
    std::vector<int> sizes(static_cast<std::size_t>(net.num_leaders()) + 1, 0);
    for (FollowerId f = 1; f <= net.num_followers(); ++f) {
        LeaderId l = m.leader_of(f);
        if (l == 0)
            r.unmatched_followers.push_back(f);
        else
            ++sizes[static_cast<std::size_t>(l)];
    }
    for (LeaderId l = 1; l <= net.num_leaders(); ++l) {
        int d = net.constraint(l) - sizes[static_cast<std::size_t>(l)];
        r.per_leader[static_cast<std::size_t>(l)] = d;
        r.total += d;
        if (d > 0) r.poor_leaders.push_back(l);
    }
    return r;
}

void check_dd_path(const Matching& m, const DdPath& path) {
    const BipartiteNetwork& net = m.network();
    const std::size_t k = path.followers.size();
    if (k == 0 || path.leaders.size() != k)
        throw std::invalid_argument("path must have equally many leaders and followers");
    std::set<LeaderId> lseen(path.leaders.begin(), path.leaders.end());
    std::set<FollowerId> fseen(path.followers.begin(), path.followers.end());
    if (lseen.size() != k || fseen.size() != k)
        throw std::invalid_argument("path revisits a node");
    if (m.leader_deficit(path.leaders[0]) <= 0)
        throw std::invalid_argument("path must start at a poor leader");
    if (m.is_matched(path.followers[k - 1]))
        throw std::invalid_argument("path must end at an unmatched follower");
    for (std::size_t i = 0; i < k; ++i) {
        if (!net.has_edge(path.leaders[i], path.followers[i]))
            throw std::invalid_argument("path uses a non-edge (" + std::to_string(path.leaders[i]) +
                                        ", " + std::to_string(path.followers[i]) + ")");
        if (i + 1 < k && m.leader_of(path.followers[i]) != path.leaders[i + 1])
            throw std::invalid_argument("follower " + std::to_string(path.followers[i]) +
                                        " is not matched to the next leader on the path");
    }
}

std::optional<DdPath> shortest_dd_path(const Matching& m) {
    const BipartiteNetwork& net = m.network();
    const int n = net.num_leaders();
    const int fm = net.num_followers();
    constexpr int kInf = std::numeric_limits<int>::max();

    // Distance-to-terminal over the alternating structure, built backwards
    // from every unmatched follower: a follower continues through its
    // matching edge only; a leader continues through any non-matching edge.
    std::vector<int> rem_leader(static_cast<std::size_t>(n) + 1, kInf);
    std::vector<int> rem_follower(static_cast<std::size_t>(fm) + 1, kInf);
    std::vector<std::vector<FollowerId>> teams(static_cast<std::size_t>(n) + 1);
    std::queue<std::pair<bool, int>> q;  // (is_leader, id)
    for (FollowerId f = 1; f <= fm; ++f) {
        LeaderId l = m.leader_of(f);
        if (l == 0) {
            rem_follower[static_cast<std::size_t>(f)] = 0;
            q.push({false, f});
        } else {
            teams[static_cast<std::size_t>(l)].push_back(f);
        }
    }
    while (!q.empty()) {
        auto [is_leader, id] = q.front();
        q.pop();
        if (is_leader) {
            int d = rem_leader[static_cast<std::size_t>(id)];
            for (FollowerId f : teams[static_cast<std::size_t>(id)]) {
                if (rem_follower[static_cast<std::size_t>(f)] == kInf) {
                    rem_follower[static_cast<std::size_t>(f)] = d + 1;
                    q.push({false, f});
                }
            }
        } else {
            int d = rem_follower[static_cast<std::size_t>(id)];
            for (LeaderId l : net.follower_neighbors(id)) {
                if (m.leader_of(id) != l && rem_leader[static_cast<std::size_t>(l)] == kInf) {
                    rem_leader[static_cast<std::size_t>(l)] = d + 1;
                    q.push({true, l});
                }
            }
        }
    }

    LeaderId best = 0;
    int best_len = kInf;
    for (LeaderId l = 1; l <= n; ++l) {
        if (m.leader_deficit(l) > 0 && rem_leader[static_cast<std::size_t>(l)] < best_len) {
            best = l;
            best_len = rem_leader[static_cast<std::size_t>(l)];
        }
    }
    if (best == 0) return std::nullopt;

    // Greedy descent along exact distance decrements: picks the smallest
    // follower at every step, giving the lexicographically least sequence.
    // Distances strictly decrease along the walk, so it cannot revisit a node.
    DdPath path;
    LeaderId cur = best;
    int r = best_len;
    path.leaders.push_back(cur);
    while (true) {
        FollowerId next = 0;
        for (FollowerId f : net.leader_neighbors(cur)) {
            if (m.leader_of(f) != cur && rem_follower[static_cast<std::size_t>(f)] == r - 1) {
                next = f;
                break;  // neighbors sorted ascending
            }
        }
        path.followers.push_back(next);
        r -= 1;
        if (r == 0) break;
        cur = m.leader_of(next);
        path.leaders.push_back(cur);
        r -= 1;
    }
    return path;
}

Matching solve_dd_path(const Matching& m, const DdPath& path) {
    check_dd_path(m, path);
    Matching out = m;
    // Walk front to back: each follower moves to the leader before it, which
    // always has a free slot by the time its follower arrives.
    for (std::size_t i = 0; i < path.followers.size(); ++i)
        out.assign(path.followers[i], path.leaders[i]);
    return out;
}

std::vector<Edge> symmetric_difference(const Matching& a, const Matching& b) {
    if (!(a.network() == b.network()))
        throw std::invalid_argument("symmetric_difference: matchings are on different networks");
    std::vector<Edge> ea = a.edges(), eb = b.edges(), out;
    std::set_symmetric_difference(ea.begin(), ea.end(), eb.begin(), eb.end(),
                                  std::back_inserter(out));
    return out;
}

DisjointDdPaths max_follower_disjoint_dd_paths(const Matching& m, const Matching& stable) {
    if (!(m.network() == stable.network()))
        throw std::invalid_argument("matchings are on different networks");
    if (stable.total_deficit() != 0)
        throw std::invalid_argument("second matching must be stable (deficit 0)");
    const BipartiteNetwork& net = m.network();
    const int n = net.num_leaders();
    const int fm = net.num_followers();

    // Node layout: source, leaders, follower-in, follower-out, sink.
    const int source = 0;
    const auto leader_node = [](LeaderId l) { return l; };
    const auto fin_node = [&](FollowerId f) { return n + f; };
    const auto fout_node = [&](FollowerId f) { return n + fm + f; };
    const int sink = n + 2 * fm + 1;
    MaxFlow flow(sink + 1);

    for (LeaderId l = 1; l <= n; ++l) {
        int d = m.leader_deficit(l);
        if (d > 0) flow.add_arc(source, leader_node(l), d);
    }
    for (FollowerId f = 1; f <= fm; ++f) {
        flow.add_arc(fin_node(f), fout_node(f), 1);
        if (!m.is_matched(f)) flow.add_arc(fout_node(f), sink, 1);
    }
    // Arcs follow the alternating direction through the symmetric difference:
    // edges missing from m are traversed leader -> follower, edges of m that
    // the stable matching drops are traversed follower -> leader.
    for (const auto& [l, f] : symmetric_difference(m, stable)) {
        if (m.leader_of(f) == l)
            flow.add_arc(fout_node(f), leader_node(l), 1);
        else
            flow.add_arc(leader_node(l), fin_node(f), 1);
    }

    DisjointDdPaths result;
    result.count = static_cast<int>(flow.run(source, sink));

    // Trace unit paths through the positive flow, splicing out any leader
    // loop so every witness path is simple.
    std::map<int, std::vector<std::pair<int, long long>>> out_flow;
    for (const auto& [from, to, units] : flow.positive_flows())
        out_flow[from].push_back({to, units});

    const auto take_step = [&](int node) -> int {
        auto& arcs = out_flow[node];
        for (auto& [to, units] : arcs) {
            if (units > 0) {
                --units;
                return to;
            }
        }
        throw std::logic_error("flow decomposition ran out of arcs");
    };

    for (int path_idx = 0; path_idx < result.count; ++path_idx) {
        std::vector<int> nodes;
        int cur = take_step(source);
        while (cur != sink) {
            nodes.push_back(cur);
            cur = take_step(cur);
        }
        DdPath p;
        std::map<LeaderId, std::size_t> leader_pos;
        for (int node : nodes) {
            if (node >= 1 && node <= n) {
                LeaderId l = node;
                auto it = leader_pos.find(l);
                if (it != leader_pos.end()) {
                    // Loop back to an earlier leader: drop the cycle.
                    for (std::size_t i = it->second; i < p.leaders.size(); ++i)
                        leader_pos.erase(p.leaders[i]);
                    p.leaders.resize(it->second);
                    p.followers.resize(it->second);
                }
                leader_pos[l] = p.leaders.size();
                p.leaders.push_back(l);
            } else if (node > n && node <= n + fm) {
                p.followers.push_back(node - n);
            }
            // follower-out nodes carry no new information
        }
        check_dd_path(m, p);
        result.paths.push_back(std::move(p));
    }
    return result;
}

ApproxStatus approx_status(const Matching& m, double eps, long long d_star) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must be in [0, 1]");
    if (d_star < 0) throw std::invalid_argument("d_star must be nonnegative");
    const long long d = m.total_deficit();
    const double threshold = eps * static_cast<double>(m.network().num_followers());
    if (d == 0) return ApproxStatus::Stable;
    if (d_star == 0 && strictly_below(static_cast<double>(d), threshold))
        return ApproxStatus::ApproxStable;
    if (strictly_below(static_cast<double>(d - d_star), threshold))
        return ApproxStatus::ApproxBest;
    return ApproxStatus::Neither;
}

std::string to_string(ApproxStatus s) {
    switch (s) {
        case ApproxStatus::Stable: return "stable";
        case ApproxStatus::ApproxStable: return "approx_stable";
        case ApproxStatus::ApproxBest: return "approx_best";
        case ApproxStatus::Neither: return "neither";
    }
    return "unknown";
}

Matching parse_matching(const BipartiteNetwork& net, std::istream& in, const std::string& name) {
    Matching m(net);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok != "match")
            throw std::runtime_error(name + ":" + std::to_string(lineno) + ": unknown directive '" + tok + "'");
        LeaderId l;
        FollowerId f;
        if (!(ls >> l >> f))
            throw std::runtime_error(name + ":" + std::to_string(lineno) + ": match needs <leader_id> <follower_id>");
        if (f >= 1 && f <= net.num_followers() && m.is_matched(f))
            throw std::runtime_error(name + ":" + std::to_string(lineno) + ": follower " +
                                     std::to_string(f) + " listed twice");
        try {
            m.assign(f, l);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(name + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return m;
}

Matching load_matching(const BipartiteNetwork& net, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matching file " + path);
    return parse_matching(net, in, path);
}

std::string format_matching(const Matching& m) {
    std::ostringstream out;
    for (const auto& [l, f] : m.edges()) out << "match " << l << " " << f << "\n";
    return out.str();
}

void save_matching(const Matching& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write matching file " + path);
    out << format_matching(m);
}

}  // namespace teamform
