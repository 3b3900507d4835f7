#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "xbandit/objective.hpp"
#include "xbandit/partition.hpp"

// Serial reference implementation of the level-synchronous search: at each
// depth h every player pulls every node of the confidence set S_h exactly
// T_h times, the per-player means are averaged, and nodes close enough to
// the best estimate are expanded to form S_{h+1}. The run stops before any
// level that no longer fits the per-player budget.

namespace xbandit {

struct AlgoParams {
    int m = 1;               // players
    std::int64_t n = 1600;   // per-player evaluation budget
    double delta = 0.05;
    SmoothnessParams smoothness{};

    void validate() const {
        if (m < 1) throw std::invalid_argument("AlgoParams: m must be >= 1");
        if (n < 1) throw std::invalid_argument("AlgoParams: n must be >= 1");
        if (!(delta > 0.0 && delta < 1.0)) {
            throw std::invalid_argument("AlgoParams: delta must be in (0,1)");
        }
        if (!smoothness.valid()) {
            throw std::invalid_argument("AlgoParams: invalid smoothness parameters");
        }
    }
};

// Per-player pulls for each node of S_h:
//   T_h = ceil( log(pi^2 (h+1)^2 |S_h| / (3 delta)) / (2 (nu1 rho^h)^2 m) ).
// The value is integral but returned as double: past depth ~30 with the
// default geometry it exceeds any 64-bit integer.
inline double compute_T(int h, std::int64_t set_size, const AlgoParams& p) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double level = static_cast<double>(h + 1);
    const double width = p.smoothness.nu1 * std::pow(p.smoothness.rho, h);
    const double raw = std::log(pi2 * level * level * static_cast<double>(set_size) / (3.0 * p.delta))
                       / (2.0 * width * width * static_cast<double>(p.m));
    return std::ceil(raw);
}

// Half-width of the aggregated-mean confidence interval after m*T pulls:
//   eps = sqrt( log(pi^2 (h+1)^2 set_size / (3 delta)) / (2 m T) ).
// With T from compute_T this never exceeds nu1*rho^h.
inline double confidence_radius(int h, std::int64_t set_size, double T, int m, double delta) {
    if (!(T >= 1.0)) throw std::invalid_argument("confidence_radius: T must be >= 1");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double level = static_cast<double>(h + 1);
    return std::sqrt(std::log(pi2 * level * level * static_cast<double>(set_size) / (3.0 * delta))
                     / (2.0 * static_cast<double>(m) * T));
}

// Cross-player average of the per-node means. Input rows are (player id,
// means) pairs with ids exactly {1..m}; summation always runs in id order,
// so the result is bit-identical no matter how the rows arrive.
inline std::vector<double> aggregate_means(std::vector<std::pair<int, std::vector<double>>> per_player,
                                           int m) {
    if (static_cast<int>(per_player.size()) != m) {
        throw std::invalid_argument("aggregate_means: expected one row per player");
    }
    std::sort(per_player.begin(), per_player.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::size_t width = per_player.front().second.size();
    for (int j = 0; j < m; ++j) {
        if (per_player[j].first != j + 1) {
            throw std::invalid_argument("aggregate_means: player ids must be exactly 1..m");
        }
        if (per_player[j].second.size() != width) {
            throw std::invalid_argument("aggregate_means: missing per-player entries");
        }
    }
    std::vector<double> agg(width, 0.0);
    for (int j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < width; ++k) {
            agg[k] += per_player[j].second[k];
        }
    }
    for (double& v : agg) v /= static_cast<double>(m);
    return agg;
}

// The confidence set at one depth, with estimates once the level completed.
struct ConfidenceSet {
    int h = 0;
    std::vector<NodeId> members;                    // ascending node index
    double T = 0.0;                                 // per-player pulls per node
    std::vector<std::vector<double>> player_means;  // [player-1][member]
    std::vector<double> agg_means;                  // [member]

    friend bool operator==(const ConfidenceSet&, const ConfidenceSet&) = default;
};

inline ConfidenceSet root_set() {
    ConfidenceSet s;
    s.h = 0;
    s.members = {NodeId{0, 1}};
    return s;
}

// Position of the largest value; first occurrence wins, which together with
// the ascending member order makes every tie-break the lowest node index.
inline std::size_t argmax_first(const std::vector<double>& values) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < values.size(); ++k) {
        if (values[k] > values[best]) best = k;
    }
    return best;
}

struct Expansion {
    std::vector<NodeId> expanded;
    ConfidenceSet next;
};

// Expands every member whose aggregated mean is within 3*nu1*rho^h of the
// best one; the argmax always qualifies, so the next set is never empty.
inline Expansion select_expansions(const ConfidenceSet& set, const AlgoParams& p) {
    if (set.agg_means.size() != set.members.size()) {
        throw std::invalid_argument("select_expansions: aggregated means not populated");
    }
    const double mu_star = set.agg_means[argmax_first(set.agg_means)];
    const double threshold = mu_star - 3.0 * p.smoothness.nu1 * std::pow(p.smoothness.rho, set.h);
    Expansion out;
    out.next.h = set.h + 1;
    for (std::size_t k = 0; k < set.members.size(); ++k) {
        if (set.agg_means[k] >= threshold) {
            out.expanded.push_back(set.members[k]);
            auto [left, right] = children(set.members[k]);
            out.next.members.push_back(left);
            out.next.members.push_back(right);
        }
    }
    return out;
}

struct LevelRecord {
    int h = 0;
    std::int64_t set_size = 0;
    double T = 0.0;
    double mu_star = 0.0;
    std::int64_t expanded = 0;

    friend bool operator==(const LevelRecord&, const LevelRecord&) = default;
};

struct RunResult {
    int m = 1;
    std::int64_t n = 0;                        // per-player budget this result was produced with
    double x_n = 0.5;                          // output point
    double loss = 0.0;                         // f* - f(x_n)
    int h_max = -1;                            // deepest expanded depth; -1 if no level completed
    std::int64_t rounds_q = 0;                 // communication rounds
    std::int64_t messages_per_player = 0;      // values broadcast per player, sum of |S_h|
    std::vector<std::int64_t> evals_per_player;
    std::vector<LevelRecord> trajectory;
    std::vector<ConfidenceSet> levels;         // completed levels with all estimates
    bool budget_too_small = false;

    friend bool operator==(const RunResult&, const RunResult&) = default;
};

// One player's sampling pass over a level: pull each member t times in
// member order, return the means in the same order.
template <typename Oracle>
std::vector<double> sample_level(Oracle& oracle, const std::vector<NodeId>& members,
                                 std::int64_t t) {
    std::vector<double> means(members.size());
    for (std::size_t k = 0; k < members.size(); ++k) {
        const double x = cell_of(members[k]).rep;
        double sum = 0.0;
        for (std::int64_t l = 0; l < t; ++l) {
            sum += oracle.pull(x);
        }
        means[k] = sum / static_cast<double>(t);
    }
    return means;
}

// Fills in the output point, loss and accounting of a result whose levels
// and trajectory are already populated. Shared by the serial runner, the
// distributed simulator and budget snapshots so all three agree exactly.
inline void finalize_result(RunResult& out, const ObjectiveFn& fn, const GroundTruth& gt) {
    if (out.levels.empty()) {
        out.budget_too_small = true;
        out.x_n = cell_of(NodeId{0, 1}).rep;
        out.h_max = -1;
        out.rounds_q = 0;
        out.messages_per_player = 0;
    } else {
        const ConfidenceSet& deepest = out.levels.back();
        const std::size_t best = argmax_first(deepest.agg_means);
        out.budget_too_small = false;
        out.x_n = cell_of(deepest.members[best]).rep;
        out.h_max = deepest.h;
        out.rounds_q = deepest.h;
        out.messages_per_player = 0;
        for (const ConfidenceSet& s : out.levels) {
            out.messages_per_player += static_cast<std::int64_t>(s.members.size());
        }
    }
    out.loss = gt.f_star - evaluate(fn, out.x_n);
}

// Serial reference runner: one process emulates all m players in lock step.
// The factory must provide make(player_id) -> oracle and objective().
template <typename Factory>
RunResult run_serial(const AlgoParams& params, const Factory& factory, const GroundTruth& gt) {
    params.validate();
    RunResult out;
    out.m = params.m;
    out.n = params.n;
    out.evals_per_player.assign(params.m, 0);

    std::vector<decltype(factory.make(1))> oracles;
    oracles.reserve(params.m);
    for (int j = 1; j <= params.m; ++j) {
        oracles.push_back(factory.make(j));
    }

    ConfidenceSet set = root_set();
    std::int64_t remaining = params.n;
    while (true) {
        const auto size = static_cast<std::int64_t>(set.members.size());
        const double T = compute_T(set.h, size, params);
        if (T * static_cast<double>(size) > static_cast<double>(remaining)) {
            break;  // next level no longer fits the per-player budget
        }
        const auto t = static_cast<std::int64_t>(T);
        set.T = T;

        std::vector<std::pair<int, std::vector<double>>> rows;
        rows.reserve(params.m);
        for (int j = 1; j <= params.m; ++j) {
            rows.emplace_back(j, sample_level(oracles[j - 1], set.members, t));
        }
        set.player_means.clear();
        for (const auto& [id, means] : rows) {
            (void)id;  // rows are already in id order here
            set.player_means.push_back(means);
        }
        set.agg_means = aggregate_means(std::move(rows), params.m);
        remaining -= t * size;

        Expansion ex = select_expansions(set, params);
        out.trajectory.push_back({set.h, size, T,
                                  set.agg_means[argmax_first(set.agg_means)],
                                  static_cast<std::int64_t>(ex.expanded.size())});
        out.levels.push_back(std::move(set));
        set = std::move(ex.next);
    }

    for (int j = 0; j < params.m; ++j) {
        out.evals_per_player[j] = static_cast<std::int64_t>(oracles[j].pulls());
    }
    finalize_result(out, factory.objective(), gt);
    return out;
}

// Result the same run would have produced under a smaller budget. Levels
// are deterministic given the seeds, so the prefix that fits n_checkpoint
// is exactly what a fresh run with that budget computes.
inline RunResult snapshot_at(const RunResult& full, std::int64_t n_checkpoint,
                             const ObjectiveFn& fn, const GroundTruth& gt) {
    if (n_checkpoint < 1 || n_checkpoint > full.n) {
        throw std::invalid_argument("snapshot_at: checkpoint must be in [1, n]");
    }
    RunResult out;
    out.m = full.m;
    out.n = n_checkpoint;
    std::int64_t remaining = n_checkpoint;
    for (std::size_t idx = 0; idx < full.levels.size(); ++idx) {
        const ConfidenceSet& s = full.levels[idx];
        const std::int64_t cost =
            static_cast<std::int64_t>(s.T) * static_cast<std::int64_t>(s.members.size());
        if (cost > remaining) break;
        remaining -= cost;
        out.levels.push_back(s);
        out.trajectory.push_back(full.trajectory[idx]);
    }
    out.evals_per_player.assign(full.m, n_checkpoint - remaining);
    finalize_result(out, fn, gt);
    return out;
}

}  // namespace xbandit
