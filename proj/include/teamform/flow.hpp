#ifndef TEAMFORM_FLOW_HPP
#define TEAMFORM_FLOW_HPP

#include <tuple>
#include <utility>
#include <vector>

namespace teamform {

// Dinic's max flow on integer capacities. Nodes are 0..n-1.
class MaxFlow {
public:
    explicit MaxFlow(int num_nodes);

    // Adds a directed arc and returns its id for later flow queries.
    int add_arc(int from, int to, long long cap);

    long long run(int source, int sink);

    long long flow_on(int arc_id) const;

    // All forward arcs carrying positive flow, as (from, to, flow).
    std::vector<std::tuple<int, int, long long>> positive_flows() const;

private:
    struct Arc {
        int to;
        long long cap;  // residual
        int rev;        // index of reverse arc in g_[to]
    };

    bool bfs(int s, int t);
    long long dfs(int v, int t, long long limit);

    std::vector<std::vector<Arc>> g_;
    std::vector<std::pair<int, int>> arc_index_;  // arc id -> (node, slot)
    std::vector<long long> orig_cap_;
    std::vector<int> level_;
    std::vector<int> iter_;
};

}  // namespace teamform

#endif
