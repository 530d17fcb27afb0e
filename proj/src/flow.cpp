#include "teamform/flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace teamform {

MaxFlow::MaxFlow(int num_nodes)
    : g_(static_cast<std::size_t>(num_nodes)),
      level_(static_cast<std::size_t>(num_nodes)),
      iter_(static_cast<std::size_t>(num_nodes)) {}

int MaxFlow::add_arc(int from, int to, long long cap) {
    if (cap < 0) throw std::invalid_argument("arc capacity must be nonnegative");
    int id = static_cast<int>(arc_index_.size());
    arc_index_.push_back({from, static_cast<int>(g_[static_cast<std::size_t>(from)].size())});
    orig_cap_.push_back(cap);
    g_[static_cast<std::size_t>(from)].push_back(
        {to, cap, static_cast<int>(g_[static_cast<std::size_t>(to)].size())});
    g_[static_cast<std::size_t>(to)].push_back(
        {from, 0, static_cast<int>(g_[static_cast<std::size_t>(from)].size()) - 1});
    return id;
}

bool MaxFlow::bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (const Arc& a : g_[static_cast<std::size_t>(v)]) {
            if (a.cap > 0 && level_[static_cast<std::size_t>(a.to)] < 0) {
                level_[static_cast<std::size_t>(a.to)] = level_[static_cast<std::size_t>(v)] + 1;
                q.push(a.to);
            }
        }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
}

long long MaxFlow::dfs(int v, int t, long long limit) {
    if (v == t) return limit;
    for (int& i = iter_[static_cast<std::size_t>(v)];
         i < static_cast<int>(g_[static_cast<std::size_t>(v)].size()); ++i) {
        Arc& a = g_[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
        if (a.cap <= 0 || level_[static_cast<std::size_t>(v)] + 1 != level_[static_cast<std::size_t>(a.to)])
            continue;
        long long pushed = dfs(a.to, t, std::min(limit, a.cap));
        if (pushed > 0) {
            a.cap -= pushed;
            g_[static_cast<std::size_t>(a.to)][static_cast<std::size_t>(a.rev)].cap += pushed;
            return pushed;
        }
    }
    return 0;
}

long long MaxFlow::run(int source, int sink) {
    long long flow = 0;
    while (bfs(source, sink)) {
        std::fill(iter_.begin(), iter_.end(), 0);
        while (long long pushed = dfs(source, sink, std::numeric_limits<long long>::max()))
            flow += pushed;
    }
    return flow;
}

long long MaxFlow::flow_on(int arc_id) const {
    const auto& [node, slot] = arc_index_[static_cast<std::size_t>(arc_id)];
    return orig_cap_[static_cast<std::size_t>(arc_id)] -
           g_[static_cast<std::size_t>(node)][static_cast<std::size_t>(slot)].cap;
}

std::vector<std::tuple<int, int, long long>> MaxFlow::positive_flows() const {
    std::vector<std::tuple<int, int, long long>> out;
    for (int id = 0; id < static_cast<int>(arc_index_.size()); ++id) {
        long long f = flow_on(id);
        if (f > 0) {
            const auto& [node, slot] = arc_index_[static_cast<std::size_t>(id)];
            out.push_back({node, g_[static_cast<std::size_t>(node)][static_cast<std::size_t>(slot)].to, f});
        }
    }
    return out;
}

}  // namespace teamform
