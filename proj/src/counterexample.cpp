#include "teamform/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace teamform {

bool is_counterexample_network(const BipartiteNetwork& net) {
    const int n = net.num_leaders();
    if (net.num_followers() != n) return false;
    for (LeaderId l = 1; l <= n; ++l) {
        if (net.constraint(l) != 1) return false;
        const auto& nbrs = net.leader_neighbors(l);
        if (static_cast<int>(nbrs.size()) != l) return false;
        // sorted, so it is exactly 1..l iff ends at l with l entries
        if (nbrs.back() != l) return false;
    }
    return true;
}

namespace {

void require_triangular(const BipartiteNetwork& net) {
    if (!is_counterexample_network(net))
        throw std::invalid_argument("network does not have the triangular counterexample shape");
}

void require_valid_index_set(const IndexSet& s) {
    if (s.n < 1) throw std::invalid_argument("index set needs an owner size n >= 1");
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (s.values[i] < 1 || s.values[i] > s.n)
            throw std::invalid_argument("index set element out of range");
        if (i > 0 && s.values[i] <= s.values[i - 1])
            throw std::invalid_argument("index set must be sorted and distinct");
    }
}

}  // namespace

IndexSet index_set(const Matching& m) {
    require_triangular(m.network());
    if (m.total_deficit() > 1)
        throw std::invalid_argument("index sets only identify matchings of deficit 0 or 1");
    IndexSet s;
    s.n = m.network().num_leaders();
    for (int j = 1; j <= s.n; ++j)
        if (m.leader_of(j) != j) s.values.push_back(j);
    return s;
}

Matching matching_from_index_set(const BipartiteNetwork& net, const IndexSet& s) {
    require_triangular(net);
    require_valid_index_set(s);
    if (s.n != net.num_leaders())
        throw std::invalid_argument("index set size does not match the network");
    Matching m(net);
    std::size_t next = 0;
    for (int k = 1; k <= s.n; ++k) {
        if (next < s.values.size() && s.values[next] == k)
            ++next;
        else
            m.assign(k, k);
    }
    for (std::size_t k = 0; k + 1 < s.values.size(); ++k)
        m.assign(s.values[k], s.values[k + 1]);
    return m;
}

int height(const IndexSet& s) {
    require_valid_index_set(s);
    if (s.values.size() < 2) return 0;
    return s.values[s.values.size() - 2];
}

int height(const Matching& m) { return height(index_set(m)); }

Matching shifted_matching(const BipartiteNetwork& net) {
    require_triangular(net);
    IndexSet s;
    s.n = net.num_leaders();
    for (int k = 1; k <= s.n; ++k) s.values.push_back(k);
    return matching_from_index_set(net, s);
}

Matching diagonal_matching(const BipartiteNetwork& net) {
    require_triangular(net);
    return matching_from_index_set(net, IndexSet{net.num_leaders(), {}});
}

int LabeledTree::depth(int node) const {
    int d = 0;
    while (nodes[static_cast<std::size_t>(node)].parent != -1) {
        node = nodes[static_cast<std::size_t>(node)].parent;
        ++d;
    }
    return d;
}

namespace {

int build_subtree(LabeledTree& t, int label, int parent) {
    int id = t.size();
    t.nodes.push_back({label, parent, {}});
    std::vector<int> kids;
    kids.reserve(static_cast<std::size_t>(label - 1));
    for (int child_label = 1; child_label < label; ++child_label)
        kids.push_back(build_subtree(t, child_label, id));
    t.nodes[static_cast<std::size_t>(id)].children = std::move(kids);
    return id;
}

}  // namespace

LabeledTree build_tree(int m) {
    if (m < 1) throw std::invalid_argument("tree parameter must be at least 1");
    if (m > 22) throw std::invalid_argument("tree parameter above 22 is too large to materialize");
    LabeledTree t;
    t.height_param = m;
    t.nodes.push_back({m + 1, -1, {}});
    int child = build_subtree(t, m, 0);
    t.nodes[0].children.push_back(child);
    return t;
}

int tree_node_for(const LabeledTree& tree, const IndexSet& s) {
    require_valid_index_set(s);
    if (s.values.empty())
        throw std::invalid_argument("the empty index set has no node in the tree");
    if (s.values.size() == 1) return tree.root();
    if (s.values[s.values.size() - 2] != tree.height_param)
        throw std::invalid_argument("index set is not reachable within this tree");
    int node = tree.root();
    for (std::size_t i = s.values.size() - 1; i-- > 0;) {
        int label = s.values[i];
        const auto& children = tree.nodes[static_cast<std::size_t>(node)].children;
        node = (node == tree.root()) ? children[0]
                                     : children[static_cast<std::size_t>(label) - 1];
    }
    return node;
}

std::vector<std::pair<IndexSet, double>> transition_distribution(const IndexSet& s) {
    require_valid_index_set(s);
    if (s.values.empty()) return {{s, 1.0}};
    if (s.values.size() == 1) return {{IndexSet{s.n, {}}, 1.0}};
    const int mn = s.values[0];
    const double prob = 1.0 / static_cast<double>(mn);
    std::vector<std::pair<IndexSet, double>> out;
    for (int k = 1; k < mn; ++k) {
        IndexSet grown = s;
        grown.values.insert(grown.values.begin(), k);
        out.push_back({std::move(grown), prob});
    }
    IndexSet shrunk = s;
    shrunk.values.erase(shrunk.values.begin());
    out.push_back({std::move(shrunk), prob});
    return out;
}

long long walk_hitting_time(const LabeledTree& tree, int start_node, Rng& rng) {
    if (start_node < 0 || start_node >= tree.size())
        throw std::invalid_argument("walk start node out of range");
    if (start_node == tree.root())
        throw std::invalid_argument("walk must start away from the root");
    long long steps = 0;
    int cur = start_node;
    while (cur != tree.root()) {
        const auto& node = tree.nodes[static_cast<std::size_t>(cur)];
        std::size_t degree = node.children.size() + 1;  // parent plus children
        std::size_t pick = rng.uniform_index(degree);
        cur = (pick == 0) ? node.parent : node.children[pick - 1];
        ++steps;
    }
    return steps;
}

long long walk_hitting_time(const LabeledTree& tree, int start_node, std::uint64_t seed) {
    Rng rng(seed);
    return walk_hitting_time(tree, start_node, rng);
}

unsigned long long count_by_height(int n, int j) {
    if (n < 1 || n > 62) throw std::invalid_argument("count_by_height needs 1 <= n <= 62");
    if (j < 0 || j > n - 1) throw std::invalid_argument("height must be in [0, n-1]");
    if (j == 0) return static_cast<unsigned long long>(n);
    return static_cast<unsigned long long>(n - j) * (1ULL << (j - 1));
}

unsigned long long count_all(int n) {
    if (n < 1 || n > 62) throw std::invalid_argument("count_all needs 1 <= n <= 62");
    return (1ULL << n) - 1;
}

double low_height_fraction(int n, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in (0, 1)");
    const int cutoff = static_cast<int>(std::ceil(gamma * n - 1e-9));
    unsigned long long below = 0;
    for (int j = 0; j < cutoff && j <= n - 1; ++j) below += count_by_height(n, j);
    return static_cast<double>(below) / static_cast<double>(count_all(n));
}

}  // namespace teamform
