#include "teamform/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace teamform {

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::Stable: return "stable";
        case StopReason::DeficitBelow: return "deficit_below";
        case StopReason::FixedRounds: return "fixed_rounds";
        case StopReason::MaxRounds: return "max_rounds";
    }
    return "unknown";
}

RoundRequests leader_stage(const BipartiteNetwork& net, const Matching& m, double p, Rng& rng) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must be in (0, 1]");
    RoundRequests requests(static_cast<std::size_t>(net.num_followers()) + 1);
    std::vector<FollowerId> candidates;
    for (LeaderId l = 1; l <= net.num_leaders(); ++l) {
        const auto& nbrs = net.leader_neighbors(l);
        int cap = std::min(net.constraint(l), static_cast<int>(nbrs.size()));
        if (m.team_size(l) >= cap) continue;
        if (!rng.bernoulli(p)) continue;
        candidates.clear();
        for (FollowerId f : nbrs)
            if (!m.is_matched(f)) candidates.push_back(f);
        if (candidates.empty()) {
            // no unmatched neighbor: recruit among neighbors outside the team
            for (FollowerId f : nbrs)
                if (m.leader_of(f) != l) candidates.push_back(f);
        }
        FollowerId target = candidates[rng.uniform_index(candidates.size())];
        requests[static_cast<std::size_t>(target)].push_back(l);
    }
    return requests;
}

Matching follower_stage(const BipartiteNetwork& net, const Matching& m,
                        const RoundRequests& requests, double q, Rng& rng,
                        std::optional<double> q_matched) {
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("q must be in (0, 1]");
    const double qm = q_matched.value_or(q);
    if (!(qm > 0.0 && qm <= 1.0)) throw std::invalid_argument("q_matched must be in (0, 1]");

    std::vector<std::pair<FollowerId, LeaderId>> moves;
    std::vector<LeaderId> surviving;
    for (FollowerId f = 1; f <= net.num_followers(); ++f) {
        const auto& incoming = requests[static_cast<std::size_t>(f)];
        if (incoming.empty()) continue;
        const double accept = m.is_matched(f) ? qm : q;
        surviving.clear();
        for (LeaderId l : incoming)
            if (rng.bernoulli(accept)) surviving.push_back(l);
        if (surviving.empty()) continue;
        moves.push_back({f, surviving[rng.uniform_index(surviving.size())]});
    }

    // Commit all moves at once: detach first so no team transiently overfills.
    Matching next = m;
    for (const auto& [f, l] : moves) {
        (void)l;
        next.unassign(f);
    }
    for (const auto& [f, l] : moves) next.assign(f, l);
    return next;
}

namespace {

TrajectoryRow snapshot_row(long long round, const Matching& m) {
    TrajectoryRow row;
    row.round = round;
    row.deficit = m.total_deficit();
    row.matched_followers = m.num_matched();
    for (LeaderId l = 1; l <= m.network().num_leaders(); ++l)
        if (m.leader_deficit(l) > 0) ++row.poor_leaders;
    return row;
}

bool stop_satisfied(const SimConfig& cfg, long long deficit, int num_followers) {
    switch (cfg.stop_rule) {
        case StopRule::Stable:
            return deficit == 0;
        case StopRule::DeficitBelow:
            return strictly_below(static_cast<double>(deficit),
                                  cfg.deficit_below_x * static_cast<double>(num_followers));
        case StopRule::FixedRounds:
            return false;
    }
    return false;
}

}  // namespace

Trajectory run(const BipartiteNetwork& net, const Matching& initial, const SimConfig& config) {
    if (!(config.p > 0.0 && config.p <= 1.0)) throw std::invalid_argument("p must be in (0, 1]");
    if (!(config.q > 0.0 && config.q <= 1.0)) throw std::invalid_argument("q must be in (0, 1]");
    if (config.stop_rule == StopRule::DeficitBelow && !(config.deficit_below_x > 0.0))
        throw std::invalid_argument("deficit_below threshold must be positive");
    if (config.max_rounds < 0) throw std::invalid_argument("max_rounds must be nonnegative");

    Rng rng(config.seed);
    Trajectory t{.rows = {},
                 .final_matching = initial,
                 .rounds_elapsed = 0,
                 .stop_reason = StopReason::MaxRounds,
                 .num_leaders = net.num_leaders(),
                 .num_followers = net.num_followers(),
                 .seed = config.seed,
                 .p = config.p,
                 .q = config.q};

    Matching cur = initial;
    long long round = 0;
    TrajectoryRow row = snapshot_row(0, cur);
    t.rows.push_back(row);

    for (;;) {
        if (stop_satisfied(config, row.deficit, net.num_followers())) {
            t.stop_reason = (config.stop_rule == StopRule::Stable) ? StopReason::Stable
                                                                   : StopReason::DeficitBelow;
            break;
        }
        if (round >= config.max_rounds) {
            t.stop_reason = (config.stop_rule == StopRule::FixedRounds) ? StopReason::FixedRounds
                                                                        : StopReason::MaxRounds;
            break;
        }
        RoundRequests requests = leader_stage(net, cur, config.p, rng);
        cur = follower_stage(net, cur, requests, config.q, rng, config.q_matched);
        ++round;
        TrajectoryRow next = snapshot_row(round, cur);
        if (next.deficit > row.deficit)
            throw std::logic_error("deficit increased from " + std::to_string(row.deficit) +
                                   " to " + std::to_string(next.deficit) + " in round " +
                                   std::to_string(round));
        if (next.deficit != row.deficit || next.poor_leaders != row.poor_leaders ||
            next.matched_followers != row.matched_followers)
            t.rows.push_back(next);
        row = next;
    }
    t.rounds_elapsed = round;
    t.final_matching = cur;
    return t;
}

std::optional<long long> tau(const Trajectory& t, double x) {
    if (!(x > 0.0 && x <= 1.0)) throw std::invalid_argument("tau threshold must be in (0, 1]");
    const double threshold = x * static_cast<double>(t.num_followers);
    for (const TrajectoryRow& row : t.rows)
        if (strictly_below(static_cast<double>(row.deficit), threshold)) return row.round;
    return std::nullopt;
}

RoundBound approx_bound(int m, int max_degree, double p, double q, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must be in (0, 1)");
    if (m < 1 || max_degree < 1) throw std::invalid_argument("m and max_degree must be positive");
    if (!(p > 0.0 && p <= 1.0) || !(q > 0.0 && q <= 1.0))
        throw std::invalid_argument("p and q must be in (0, 1]");
    const double k = std::floor(1.0 / eps);
    const double c = 1.0 + 1.0 / (static_cast<double>(m) * (1.0 - eps));
    RoundBound b;
    b.rounds = c * k * std::pow(static_cast<double>(max_degree) / (p * q), k) * m;
    b.probability = 1.0 - std::exp(-c * m * eps * eps / 2.0);
    return b;
}

void write_trajectory_csv(const Trajectory& t, std::ostream& out) {
    out << "round,deficit,poor_leaders,matched_followers\n";
    for (const TrajectoryRow& r : t.rows)
        out << r.round << "," << r.deficit << "," << r.poor_leaders << ","
            << r.matched_followers << "\n";
    out << "# stop_reason=" << to_string(t.stop_reason) << " rounds=" << t.rounds_elapsed
        << " seed=" << t.seed << " rng=" << Rng::kAlgorithm << "\n";
}

std::string trajectory_csv(const Trajectory& t) {
    std::ostringstream out;
    write_trajectory_csv(t, out);
    return out.str();
}

}  // namespace teamform
