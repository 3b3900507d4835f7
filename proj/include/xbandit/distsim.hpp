#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "xbandit/core.hpp"

// Agent-based simulation of m players around a broadcast bus. Between
// rounds every agent owns its state exclusively; the per-level barrier is
// the only synchronization point. Results are bit-identical to run_serial
// (and across execution modes) because per-player streams are derived from
// the master seed alone and aggregation always sums in player-id order.

namespace xbandit {

class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

class BarrierTimeout : public std::runtime_error {
public:
    explicit BarrierTimeout(const std::string& what) : std::runtime_error(what) {}
};

// Reusable generation barrier with a timeout, for the threaded mode.
class SyncBarrier {
public:
    explicit SyncBarrier(int parties, std::chrono::milliseconds timeout = std::chrono::seconds(30))
        : parties_(parties), timeout_(timeout) {}

    void arrive_and_wait() {
        std::unique_lock<std::mutex> lock(mutex_);
        if (aborted_) throw BarrierTimeout("barrier aborted");
        const std::uint64_t gen = generation_;
        if (++arrived_ == parties_) {
            arrived_ = 0;
            ++generation_;
            cv_.notify_all();
            return;
        }
        if (!cv_.wait_for(lock, timeout_, [&] { return generation_ != gen || aborted_; })) {
            aborted_ = true;
            cv_.notify_all();
            throw BarrierTimeout("barrier timed out waiting for peers");
        }
        if (aborted_) throw BarrierTimeout("barrier aborted");
    }

    void abort() {
        std::lock_guard<std::mutex> lock(mutex_);
        aborted_ = true;
        cv_.notify_all();
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int parties_;
    int arrived_ = 0;
    std::uint64_t generation_ = 0;
    bool aborted_ = false;
    std::chrono::milliseconds timeout_;
};

struct BroadcastMessage {
    int sender = 0;  // player id, 1-based
    int h = 0;
    std::vector<std::pair<NodeId, double>> payload;  // one entry per member of S_h
};

struct CommAccounting {
    // Rounds separate consecutive depths: a run that completes depths
    // 0..h_max has h_max of them. The estimates of the final depth still
    // cross the bus (they decide the output), so payload_sizes has one
    // entry per completed depth and values_per_player sums all of them.
    std::int64_t rounds_q = 0;
    std::int64_t values_per_player = 0;
    std::int64_t bus_total_values = 0;
    std::vector<std::int64_t> payload_sizes;
};

struct CommSummary {
    std::int64_t q = 0;
    std::int64_t values_per_player = 0;
    std::int64_t max_payload = 0;
};

inline CommSummary account(const CommAccounting& comm) {
    CommSummary s{comm.rounds_q, comm.values_per_player, 0};
    for (std::int64_t p : comm.payload_sizes) s.max_payload = std::max(s.max_payload, p);
    return s;
}

// One simulated player: its own oracle (and stream), its local view of the
// current confidence set, and its record of every completed level.
template <typename Oracle>
struct PlayerAgent {
    int id = 1;
    Oracle oracle;
    int h = 0;
    std::vector<NodeId> members{NodeId{0, 1}};
    double T = 0.0;
    std::vector<double> pending_means;
    std::vector<ConfidenceSet> levels;
    std::vector<LevelRecord> trajectory;
    std::int64_t values_broadcast = 0;

    PlayerAgent(int player_id, Oracle player_oracle)
        : id(player_id), oracle(std::move(player_oracle)) {}

    void sample(const AlgoParams& params) {
        T = compute_T(h, static_cast<std::int64_t>(members.size()), params);
        pending_means = sample_level(oracle, members, static_cast<std::int64_t>(T));
    }

    BroadcastMessage make_message() const {
        BroadcastMessage msg{id, h, {}};
        msg.payload.reserve(members.size());
        for (std::size_t k = 0; k < members.size(); ++k) {
            msg.payload.emplace_back(members[k], pending_means[k]);
        }
        return msg;
    }

    // Consumes one full round of messages: rebuilds the aggregated set the
    // same way every other agent does, records it, and moves to the next
    // depth. Message arrival order must not matter.
    void absorb_round(const std::vector<BroadcastMessage>& round, const AlgoParams& params) {
        if (static_cast<int>(round.size()) != params.m) {
            throw DivergenceError("round is missing messages");
        }
        std::vector<std::pair<int, std::vector<double>>> rows;
        rows.reserve(round.size());
        for (const BroadcastMessage& msg : round) {
            if (msg.h != h || msg.payload.size() != members.size()) {
                throw DivergenceError("broadcast payload does not match local confidence set");
            }
            std::vector<double> means(msg.payload.size());
            for (std::size_t k = 0; k < msg.payload.size(); ++k) {
                if (msg.payload[k].first != members[k]) {
                    throw DivergenceError("broadcast payload node mismatch");
                }
                means[k] = msg.payload[k].second;
            }
            rows.emplace_back(msg.sender, std::move(means));
        }

        ConfidenceSet set;
        set.h = h;
        set.members = members;
        set.T = T;
        std::sort(rows.begin(), rows.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [id_, means] : rows) {
            (void)id_;
            set.player_means.push_back(means);
        }
        set.agg_means = aggregate_means(std::move(rows), params.m);

        Expansion ex = select_expansions(set, params);
        trajectory.push_back({h, static_cast<std::int64_t>(members.size()), T,
                              set.agg_means[argmax_first(set.agg_means)],
                              static_cast<std::int64_t>(ex.expanded.size())});
        values_broadcast += static_cast<std::int64_t>(members.size());
        levels.push_back(std::move(set));
        members = std::move(ex.next.members);
        h += 1;
        pending_means.clear();
    }
};

// One broadcast round over a group of agents that all finished sampling
// depth h. Messages are collected in the given arrival order; every agent
// aggregates them itself and must land on the same result.
template <typename Oracle>
std::vector<double> barrier_broadcast(const std::vector<PlayerAgent<Oracle>*>& arrival, int h,
                                      const AlgoParams& params, CommAccounting& comm) {
    std::vector<BroadcastMessage> round;
    round.reserve(arrival.size());
    for (const PlayerAgent<Oracle>* agent : arrival) {
        round.push_back(agent->make_message());
    }
    const auto payload = static_cast<std::int64_t>(round.front().payload.size());
    comm.payload_sizes.push_back(payload);
    comm.values_per_player += payload;
    comm.bus_total_values += payload * static_cast<std::int64_t>(arrival.size());

    for (PlayerAgent<Oracle>* agent : arrival) {
        agent->absorb_round(round, params);
    }
    const ConfidenceSet& reference = arrival.front()->levels.back();
    for (const PlayerAgent<Oracle>* agent : arrival) {
        if (agent->levels.back() != reference || agent->members != arrival.front()->members) {
            throw DivergenceError("agents disagree after round at depth " + std::to_string(h));
        }
    }
    return reference.agg_means;
}

enum class ExecMode { Sequential, Threaded };

struct DistOptions {
    ExecMode mode = ExecMode::Sequential;
    // Stepping/arrival order for the sequential scheduler (permutation of
    // 1..m); empty means 1,2,...,m. Ignored by the threaded scheduler.
    std::vector<int> agent_order{};
    std::chrono::milliseconds barrier_timeout{30000};
};

struct DistResult {
    RunResult result;
    CommAccounting comm;
};

namespace detail {

inline std::vector<int> resolve_order(const DistOptions& opt, int m) {
    if (opt.agent_order.empty()) {
        std::vector<int> order(m);
        std::iota(order.begin(), order.end(), 1);
        return order;
    }
    std::vector<int> sorted = opt.agent_order;
    std::sort(sorted.begin(), sorted.end());
    for (int j = 0; j < m; ++j) {
        if (sorted[static_cast<std::size_t>(j)] != j + 1) {
            throw std::invalid_argument("agent_order must be a permutation of 1..m");
        }
    }
    return opt.agent_order;
}

// Collects the canonical result once all agents finished, checking that
// their views never diverged.
template <typename Oracle>
DistResult harvest(std::vector<PlayerAgent<Oracle>>& agents, const AlgoParams& params,
                   const ObjectiveFn& fn, const GroundTruth& gt, CommAccounting comm) {
    const PlayerAgent<Oracle>& canon = agents.front();
    for (const PlayerAgent<Oracle>& agent : agents) {
        if (agent.levels != canon.levels || agent.trajectory != canon.trajectory ||
            agent.values_broadcast != canon.values_broadcast) {
            throw DivergenceError("agent " + std::to_string(agent.id) +
                                  " diverged from agent " + std::to_string(canon.id));
        }
    }
    DistResult out;
    out.result.m = params.m;
    out.result.n = params.n;
    out.result.levels = canon.levels;
    out.result.trajectory = canon.trajectory;
    out.result.evals_per_player.resize(params.m);
    for (int j = 0; j < params.m; ++j) {
        out.result.evals_per_player[j] = static_cast<std::int64_t>(agents[j].oracle.pulls());
    }
    finalize_result(out.result, fn, gt);
    comm.rounds_q = out.result.rounds_q;
    if (comm.values_per_player != out.result.messages_per_player) {
        throw DivergenceError("bus accounting disagrees with trajectory accounting");
    }
    out.comm = std::move(comm);
    return out;
}

template <typename Factory>
DistResult run_sequential(const AlgoParams& params, const Factory& factory,
                          const GroundTruth& gt, const DistOptions& opt) {
    using Oracle = decltype(factory.make(1));
    std::vector<PlayerAgent<Oracle>> agents;
    agents.reserve(params.m);
    for (int j = 1; j <= params.m; ++j) {
        agents.emplace_back(j, factory.make(j));
    }
    const std::vector<int> order = resolve_order(opt, params.m);

    CommAccounting comm;
    std::int64_t remaining = params.n;
    while (true) {
        const auto size = static_cast<std::int64_t>(agents.front().members.size());
        const int h = agents.front().h;
        const double T = compute_T(h, size, params);
        if (T * static_cast<double>(size) > static_cast<double>(remaining)) break;
        for (int id : order) {
            agents[id - 1].sample(params);
        }
        remaining -= static_cast<std::int64_t>(T) * size;

        std::vector<PlayerAgent<Oracle>*> arrival;
        arrival.reserve(params.m);
        for (int id : order) {
            arrival.push_back(&agents[id - 1]);
        }
        barrier_broadcast(arrival, h, params, comm);
    }
    return harvest(agents, params, factory.objective(), gt, std::move(comm));
}

template <typename Factory>
DistResult run_threaded(const AlgoParams& params, const Factory& factory,
                        const GroundTruth& gt, const DistOptions& opt) {
    using Oracle = decltype(factory.make(1));
    std::vector<PlayerAgent<Oracle>> agents;
    agents.reserve(params.m);
    for (int j = 1; j <= params.m; ++j) {
        agents.emplace_back(j, factory.make(j));
    }

    SyncBarrier barrier(params.m, opt.barrier_timeout);
    std::vector<BroadcastMessage> slots(params.m);
    std::atomic<std::int64_t> bus_total{0};
    std::vector<std::int64_t> payload_sizes;  // written by agent 1 only
    std::vector<std::exception_ptr> errors(params.m);

    auto worker = [&](int j) {
        PlayerAgent<Oracle>& self = agents[j - 1];
        try {
            std::int64_t remaining = params.n;
            while (true) {
                const auto size = static_cast<std::int64_t>(self.members.size());
                const double T = compute_T(self.h, size, params);
                if (T * static_cast<double>(size) > static_cast<double>(remaining)) break;
                self.sample(params);
                remaining -= static_cast<std::int64_t>(T) * size;

                slots[j - 1] = self.make_message();
                bus_total.fetch_add(size, std::memory_order_relaxed);
                if (j == 1) payload_sizes.push_back(size);
                barrier.arrive_and_wait();  // all messages posted
                std::vector<BroadcastMessage> round = slots;
                barrier.arrive_and_wait();  // all agents took their copy
                self.absorb_round(round, params);
            }
        } catch (...) {
            errors[j - 1] = std::current_exception();
            barrier.abort();
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(params.m);
    for (int j = 1; j <= params.m; ++j) {
        threads.emplace_back(worker, j);
    }
    for (std::thread& t : threads) {
        t.join();
    }
    for (const std::exception_ptr& err : errors) {
        if (err) std::rethrow_exception(err);
    }

    CommAccounting comm;
    comm.payload_sizes = std::move(payload_sizes);
    comm.values_per_player = agents.front().values_broadcast;
    comm.bus_total_values = bus_total.load();
    return harvest(agents, params, factory.objective(), gt, std::move(comm));
}

}  // namespace detail

// Runs m agents against the simulated broadcast bus. Behaviorally identical
// to run_serial on every result field for any scheduler and agent order.
template <typename Factory>
DistResult run_distributed(const AlgoParams& params, const Factory& factory,
                           const GroundTruth& gt, const DistOptions& opt = {}) {
    params.validate();
    if (opt.mode == ExecMode::Threaded) {
        return detail::run_threaded(params, factory, gt, opt);
    }
    return detail::run_sequential(params, factory, gt, opt);
}

}  // namespace xbandit
