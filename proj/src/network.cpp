#include "teamform/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "teamform/rng.hpp"

namespace teamform {

BipartiteNetwork::BipartiteNetwork(int num_leaders, int num_followers,
                                   const std::vector<Edge>& edges,
                                   const std::vector<std::pair<LeaderId, int>>& constraints) {
    if (num_leaders < 1) throw std::invalid_argument("network needs at least one leader");
    if (num_followers < 1) throw std::invalid_argument("network needs at least one follower");
    num_leaders_ = num_leaders;
    num_followers_ = num_followers;
    constraint_.assign(static_cast<std::size_t>(num_leaders) + 1, 0);
    leader_adj_.assign(static_cast<std::size_t>(num_leaders) + 1, {});
    follower_adj_.assign(static_cast<std::size_t>(num_followers) + 1, {});

    for (const auto& [l, c] : constraints) {
        if (l < 1 || l > num_leaders)
            throw std::invalid_argument("constraint for out-of-range leader " + std::to_string(l));
        if (constraint_[static_cast<std::size_t>(l)] != 0)
            throw std::invalid_argument("duplicate constraint for leader " + std::to_string(l));
        if (c < 1)
            throw std::invalid_argument("constraint for leader " + std::to_string(l) +
                                        " must be positive, got " + std::to_string(c));
        constraint_[static_cast<std::size_t>(l)] = c;
    }
    for (LeaderId l = 1; l <= num_leaders; ++l) {
        if (constraint_[static_cast<std::size_t>(l)] == 0)
            throw std::invalid_argument("missing constraint for leader " + std::to_string(l));
        total_constraint_ += constraint_[static_cast<std::size_t>(l)];
    }

    std::set<Edge> seen;
    for (const auto& [l, f] : edges) {
        if (l < 1 || l > num_leaders)
            throw std::invalid_argument("edge references out-of-range leader " + std::to_string(l));
        if (f < 1 || f > num_followers)
            throw std::invalid_argument("edge references out-of-range follower " + std::to_string(f));
        if (!seen.insert({l, f}).second)
            throw std::invalid_argument("duplicate edge (" + std::to_string(l) + ", " +
                                        std::to_string(f) + ")");
        leader_adj_[static_cast<std::size_t>(l)].push_back(f);
        follower_adj_[static_cast<std::size_t>(f)].push_back(l);
    }
    num_edges_ = static_cast<long long>(seen.size());
    for (auto& nbrs : leader_adj_) std::sort(nbrs.begin(), nbrs.end());
    for (auto& nbrs : follower_adj_) std::sort(nbrs.begin(), nbrs.end());
    for (LeaderId l = 1; l <= num_leaders; ++l)
        max_leader_degree_ = std::max(max_leader_degree_, leader_degree(l));
}

bool BipartiteNetwork::has_edge(LeaderId l, FollowerId f) const {
    if (l < 1 || l > num_leaders_ || f < 1 || f > num_followers_) return false;
    const auto& nbrs = leader_adj_[static_cast<std::size_t>(l)];
    return std::binary_search(nbrs.begin(), nbrs.end(), f);
}

std::vector<Edge> BipartiteNetwork::edges() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(num_edges_));
    for (LeaderId l = 1; l <= num_leaders_; ++l)
        for (FollowerId f : leader_adj_[static_cast<std::size_t>(l)]) out.push_back({l, f});
    return out;
}

bool BipartiteNetwork::operator==(const BipartiteNetwork& o) const {
    return num_leaders_ == o.num_leaders_ && num_followers_ == o.num_followers_ &&
           constraint_ == o.constraint_ && leader_adj_ == o.leader_adj_;
}

BipartiteNetwork build_network(int num_leaders, int num_followers,
                               const std::vector<Edge>& edges,
                               const std::vector<std::pair<LeaderId, int>>& constraints) {
    return BipartiteNetwork(num_leaders, num_followers, edges, constraints);
}

BipartiteNetwork gen_counterexample(int n) {
    if (n < 1) throw std::invalid_argument("triangular network needs n >= 1");
    std::vector<Edge> edges;
    std::vector<std::pair<LeaderId, int>> constraints;
    edges.reserve(static_cast<std::size_t>(n) * (static_cast<std::size_t>(n) + 1) / 2);
    for (LeaderId i = 1; i <= n; ++i) {
        constraints.push_back({i, 1});
        for (FollowerId j = 1; j <= i; ++j) edges.push_back({i, j});
    }
    return BipartiteNetwork(n, n, edges, constraints);
}

BipartiteNetwork gen_random(int n, int m, double rho, std::uint64_t seed,
                            const ConstraintRule& rule, int max_retries) {
    if (n < 1 || m < 1) throw std::invalid_argument("gen_random needs n, m >= 1");
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::invalid_argument("edge probability must be in [0, 1]");
    const int ratio = m / n;
    if (rule.kind == ConstraintRule::Kind::CappedRatio && ratio < 1)
        throw std::invalid_argument("capped_ratio needs m >= n (floor(m/n) would be 0)");
    if (rule.kind == ConstraintRule::Kind::Fixed && rule.fixed_c < 1)
        throw std::invalid_argument("fixed constraint must be positive");

    Rng rng(seed);
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        std::vector<Edge> edges;
        std::vector<int> degree(static_cast<std::size_t>(n) + 1, 0);
        for (LeaderId l = 1; l <= n; ++l)
            for (FollowerId f = 1; f <= m; ++f)
                if (rng.bernoulli(rho)) {
                    edges.push_back({l, f});
                    ++degree[static_cast<std::size_t>(l)];
                }

        std::vector<std::pair<LeaderId, int>> constraints;
        constraints.reserve(static_cast<std::size_t>(n));
        if (rule.kind == ConstraintRule::Kind::Fixed) {
            for (LeaderId l = 1; l <= n; ++l) constraints.push_back({l, rule.fixed_c});
            return BipartiteNetwork(n, m, edges, constraints);
        }
        bool isolated = false;
        for (LeaderId l = 1; l <= n; ++l) {
            int d = degree[static_cast<std::size_t>(l)];
            if (d == 0) { isolated = true; break; }
            constraints.push_back({l, std::min(ratio, d)});
        }
        if (!isolated) return BipartiteNetwork(n, m, edges, constraints);
    }
    throw std::runtime_error("gen_random: exceeded retry limit resampling isolated leaders");
}

namespace {

[[noreturn]] void parse_fail(const std::string& name, int line, const std::string& msg) {
    throw std::runtime_error(name + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

BipartiteNetwork parse_network(std::istream& in, const std::string& name) {
    int n = -1, m = -1;
    std::vector<Edge> edges;
    std::vector<std::pair<LeaderId, int>> constraints;
    std::set<LeaderId> constraint_seen;
    std::set<Edge> edge_seen;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;  // blank or comment-only

        if (tok == "leaders") {
            if (n != -1) parse_fail(name, lineno, "duplicate leaders line");
            if (!(ls >> n) || n < 1) parse_fail(name, lineno, "bad leader count");
        } else if (tok == "followers") {
            if (n == -1) parse_fail(name, lineno, "followers line before leaders line");
            if (m != -1) parse_fail(name, lineno, "duplicate followers line");
            if (!(ls >> m) || m < 1) parse_fail(name, lineno, "bad follower count");
        } else if (tok == "constraint") {
            if (n == -1 || m == -1) parse_fail(name, lineno, "constraint before header lines");
            LeaderId l; int c;
            if (!(ls >> l >> c)) parse_fail(name, lineno, "constraint needs <leader_id> <c>");
            if (l < 1 || l > n) parse_fail(name, lineno, "constraint for out-of-range leader " + std::to_string(l));
            if (c < 1) parse_fail(name, lineno, "constraint for leader " + std::to_string(l) + " must be positive");
            if (!constraint_seen.insert(l).second)
                parse_fail(name, lineno, "duplicate constraint line for leader " + std::to_string(l));
            constraints.push_back({l, c});
        } else if (tok == "edge") {
            if (n == -1 || m == -1) parse_fail(name, lineno, "edge before header lines");
            LeaderId l; FollowerId f;
            if (!(ls >> l >> f)) parse_fail(name, lineno, "edge needs <leader_id> <follower_id>");
            if (l < 1 || l > n) parse_fail(name, lineno, "edge references out-of-range leader " + std::to_string(l));
            if (f < 1 || f > m) parse_fail(name, lineno, "edge references out-of-range follower " + std::to_string(f));
            if (!edge_seen.insert({l, f}).second)
                parse_fail(name, lineno, "duplicate edge line (" + std::to_string(l) + ", " + std::to_string(f) + ")");
            edges.push_back({l, f});
        } else {
            parse_fail(name, lineno, "unknown directive '" + tok + "'");
        }
        std::string extra;
        if (ls >> extra) parse_fail(name, lineno, "trailing tokens after directive");
    }
    if (n == -1) throw std::runtime_error(name + ": missing leaders line");
    if (m == -1) throw std::runtime_error(name + ": missing followers line");
    for (LeaderId l = 1; l <= n; ++l)
        if (!constraint_seen.count(l))
            throw std::runtime_error(name + ": missing constraint for leader " + std::to_string(l));
    return BipartiteNetwork(n, m, edges, constraints);
}

BipartiteNetwork load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open network file " + path);
    return parse_network(in, path);
}

std::string format_network(const BipartiteNetwork& net) {
    std::ostringstream out;
    out << "leaders " << net.num_leaders() << "\n";
    out << "followers " << net.num_followers() << "\n";
    for (LeaderId l = 1; l <= net.num_leaders(); ++l)
        out << "constraint " << l << " " << net.constraint(l) << "\n";
    for (const auto& [l, f] : net.edges()) out << "edge " << l << " " << f << "\n";
    return out.str();
}

void save_network(const BipartiteNetwork& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write network file " + path);
    out << format_network(net);
}

}  // namespace teamform
