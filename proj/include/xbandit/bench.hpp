#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "xbandit/bounds.hpp"
#include "xbandit/core.hpp"
#include "xbandit/distsim.hpp"
#include "xbandit/objective.hpp"

// Experiment harness: seeded loss-vs-budget sweeps over player counts, CSV
// output, and verification of every closed-form bound against the runs.

namespace xbandit {

struct ExperimentConfig {
    std::string objective = "double_sine";
    NoiseModel noise = NoiseModel::gauss(0.1);
    std::vector<int> players{1, 4, 16};
    std::vector<std::int64_t> budgets{1600};  // checkpoints, ascending
    double delta = 0.05;
    SmoothnessParams smoothness{};
    std::vector<std::uint64_t> seeds;
    std::string out_path{};
    ExecMode mode = ExecMode::Sequential;

    void validate() const {
        objective_by_name(objective);  // throws on unknown names
        if (players.empty()) throw std::invalid_argument("config: players list is empty");
        for (int m : players) {
            if (m < 1) throw std::invalid_argument("config: player counts must be >= 1");
        }
        if (budgets.empty()) throw std::invalid_argument("config: budget list is empty");
        std::int64_t prev = 0;
        for (std::int64_t n : budgets) {
            if (n <= prev) {
                throw std::invalid_argument("config: budgets must be positive and ascending");
            }
            prev = n;
        }
        if (seeds.empty()) throw std::invalid_argument("config: need at least one seed");
        if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("config: delta not in (0,1)");
        if (!smoothness.valid()) throw std::invalid_argument("config: invalid smoothness");
    }
};

struct SweepRecord {
    std::string objective;
    int m = 1;
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    double loss = 0.0;
    int h_max = -1;
    std::int64_t q = 0;
    std::int64_t M = 0;
    std::int64_t pulls = 0;
    double wall_ms = 0.0;
};

// One simulated run per (m, seed) at the largest budget; every listed
// checkpoint is then read off the same trajectory, which is exactly what
// independent runs at the smaller budgets would produce.
inline std::vector<SweepRecord> run_sweep(const ExperimentConfig& config) {
    config.validate();
    const ObjectiveFn fn = objective_by_name(config.objective);
    const GroundTruth& gt = builtin_ground_truth(fn.id);

    std::vector<SweepRecord> records;
    records.reserve(config.players.size() * config.seeds.size() * config.budgets.size());
    DistOptions opt;
    opt.mode = config.mode;
    for (int m : config.players) {
        for (std::uint64_t seed : config.seeds) {
            AlgoParams params;
            params.m = m;
            params.n = config.budgets.back();
            params.delta = config.delta;
            params.smoothness = config.smoothness;
            OracleFactory<> factory(fn, config.noise, seed);

            const auto started = std::chrono::steady_clock::now();
            const DistResult full = run_distributed(params, factory, gt, opt);
            const double run_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
                    .count();

            for (std::int64_t n : config.budgets) {
                const RunResult at_n = snapshot_at(full.result, n, fn, gt);
                SweepRecord rec;
                rec.objective = config.objective;
                rec.m = m;
                rec.n = n;
                rec.seed = seed;
                rec.loss = at_n.loss;
                rec.h_max = at_n.h_max;
                rec.q = at_n.rounds_q;
                rec.M = at_n.messages_per_player;
                rec.pulls = 0;
                for (std::int64_t e : at_n.evals_per_player) rec.pulls += e;
                rec.wall_ms = run_ms;
                records.push_back(std::move(rec));
            }
        }
    }
    return records;
}

struct BoundReport {
    std::int64_t total = 0;
    std::int64_t pass_loss = 0;
    std::int64_t pass_rounds = 0;
    std::int64_t pass_messages = 0;
    std::int64_t pass_hmax = 0;

    // Round and message counts are deterministic consequences of the
    // schedule; the loss and depth bounds only hold with probability
    // 1 - delta.
    bool deterministic_ok() const { return pass_rounds == total && pass_messages == total; }
    bool probabilistic_ok(double delta) const {
        const double need = (1.0 - delta) * static_cast<double>(total);
        return static_cast<double>(pass_loss) >= need && static_cast<double>(pass_hmax) >= need;
    }
};

inline BoundReport verify_bounds(const std::vector<SweepRecord>& records, const BoundParams& base) {
    BoundReport report;
    for (const SweepRecord& rec : records) {
        BoundParams p = base;
        p.m = rec.m;
        p.n = rec.n;
        ++report.total;
        if (rec.loss <= loss_upper_bound(p)) ++report.pass_loss;
        if (static_cast<double>(rec.q) <= rounds_upper_bound(p)) ++report.pass_rounds;
        if (rec.h_max >= 0 &&
            static_cast<double>(rec.M) <= messages_upper_bound(p, rec.h_max)) {
            ++report.pass_messages;
        }
        if (static_cast<double>(rec.h_max) >= std::floor(hmax_lower_bound(p))) ++report.pass_hmax;
    }
    return report;
}

inline std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void emit_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
    out << "objective,m,n,seed,loss,h_max,q,M,pulls,wall_ms\n";
    for (const SweepRecord& rec : records) {
        char wall[32];
        std::snprintf(wall, sizeof wall, "%.3f", rec.wall_ms);
        out << rec.objective << ',' << rec.m << ',' << rec.n << ',' << rec.seed << ','
            << format_double(rec.loss) << ',' << rec.h_max << ',' << rec.q << ',' << rec.M << ','
            << rec.pulls << ',' << wall << '\n';
    }
}

inline void emit_csv(const std::vector<SweepRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
    emit_csv(records, out);
    if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

// Smallest integer C such that |S_h| <= 2C held at every depth h >= 1 of a
// set of noise-free probe runs. With d = 0 the packing bound says the
// confidence sets stay this size at every depth.
inline int calibrate_capacity(const ObjectiveFn& fn, const GroundTruth& gt,
                              const SmoothnessParams& smoothness = {}, double delta = 0.05,
                              std::int64_t budget = 10000, std::vector<int> players = {1, 4, 16}) {
    std::int64_t largest = 1;
    for (int m : players) {
        AlgoParams params;
        params.m = m;
        params.n = budget;
        params.delta = delta;
        params.smoothness = smoothness;
        OracleFactory<> factory(fn, NoiseModel::none(), 1);
        const RunResult run = run_serial(params, factory, gt);
        for (const LevelRecord& level : run.trajectory) {
            if (level.h >= 1) largest = std::max(largest, level.set_size);
        }
    }
    return static_cast<int>((largest + 1) / 2);
}

}  // namespace xbandit
