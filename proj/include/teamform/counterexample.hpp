#ifndef TEAMFORM_COUNTEREXAMPLE_HPP
#define TEAMFORM_COUNTEREXAMPLE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "teamform/matching.hpp"
#include "teamform/network.hpp"
#include "teamform/rng.hpp"

namespace teamform {

// True iff net has the triangular shape produced by gen_counterexample:
// n leaders, n followers, leader i adjacent to followers 1..i, constraints 1.
bool is_counterexample_network(const BipartiteNetwork& net);

// Sorted indexes of the leaders of a triangular network that are not matched
// along the diagonal; empty encodes the unique stable matching. Any deficit-1
// matching is identified by such a set, and every nonempty subset of 1..n
// arises from exactly one deficit-1 matching.
struct IndexSet {
    int n = 0;                // owning network size
    std::vector<int> values;  // sorted, distinct, in [1, n]

    bool operator==(const IndexSet& o) const { return n == o.n && values == o.values; }
    bool operator<(const IndexSet& o) const {
        return values < o.values;
    }
};

// Requires a triangular network and total deficit 0 or 1.
IndexSet index_set(const Matching& m);

// Inverse of index_set: diagonal edges off the set, chain edges
// (leader values[k+1], follower values[k]) inside it.
Matching matching_from_index_set(const BipartiteNetwork& net, const IndexSet& s);

// Second-largest element when the set has at least two, else 0. Controls how
// long the protocol takes to drain the final deficit unit.
int height(const IndexSet& s);
int height(const Matching& m);

// The deficit-1 matching with every diagonal edge absent (index set 1..n).
Matching shifted_matching(const BipartiteNetwork& net);
// The unique stable matching of a triangular network (diagonal edges).
Matching diagonal_matching(const BipartiteNetwork& net);

// Rooted labeled tree: the size-m tree has root label m whose children are
// the roots of copies of the trees of sizes 1..m-1; build_tree(m) adds a top
// root labeled m+1 with that tree as its only child. Node 0 is the root;
// children are stored in ascending label order, so the child with label x of
// a label-j node is children[x-1].
struct LabeledTree {
    struct Node {
        int label = 0;
        int parent = -1;           // -1 for the root
        std::vector<int> children; // ascending labels 1..label-1
    };
    std::vector<Node> nodes;  // node 0 = root
    int height_param = 0;     // the m in build_tree(m)

    int root() const { return 0; }
    int size() const { return static_cast<int>(nodes.size()); }
    int depth(int node) const;
};

// Node count is 2^(m-1) + 1; m is capped at 22 to bound memory.
LabeledTree build_tree(int m);

// The tree node encoding a reachable deficit-1 state with index set s: the
// singleton set maps to the root; otherwise the node labeled min(s) whose
// ancestor labels are the remaining indexes of s in ascending order (the
// largest index is carried by the root). Requires the second-largest element
// to equal the tree's height parameter.
int tree_node_for(const LabeledTree& tree, const IndexSet& s);

// One-round transition law of the index-set chain when p = q = 1: from a set
// with more than one element, mass 1/min(s) on each of s + {k} for k < min(s)
// and on s - {min(s)}; a singleton moves to the empty set with probability 1;
// the empty set is absorbing.
std::vector<std::pair<IndexSet, double>> transition_distribution(const IndexSet& s);

// Steps of a uniform random walk from start_node until the root is first hit.
long long walk_hitting_time(const LabeledTree& tree, int start_node, Rng& rng);
long long walk_hitting_time(const LabeledTree& tree, int start_node, std::uint64_t seed);

// Closed-form counts of deficit-1 matchings of the size-n triangular network:
// n of height 0 and (n-j)*2^(j-1) of height j >= 1; 2^n - 1 in total.
unsigned long long count_by_height(int n, int j);
unsigned long long count_all(int n);
// Fraction of deficit-1 matchings with height below gamma*n.
double low_height_fraction(int n, double gamma);

}  // namespace teamform

#endif
