// Player-count sweep through the distributed simulator: same seed and
// objective, growing collaboration, plus the bus accounting and a couple
// of budget checkpoints read off each full run.

#include <cstdio>

#include "xbandit/xbandit.hpp"

int main() {
    using namespace xbandit;

    const ObjectiveFn fn = garland();
    const GroundTruth& gt = builtin_ground_truth(fn.id);

    std::printf("%8s %10s %10s %7s %8s %10s %12s\n", "players", "budget", "loss", "depth",
                "rounds", "msgs/pl", "bus values");
    for (int m : {1, 4, 16}) {
        AlgoParams params;
        params.m = m;
        params.n = 10000;
        const OracleFactory<> factory(fn, NoiseModel::gauss(0.1), 42);
        const DistResult dist = run_distributed(params, factory, gt);

        for (std::int64_t checkpoint : {std::int64_t{1000}, std::int64_t{10000}}) {
            const RunResult at = snapshot_at(dist.result, checkpoint, fn, gt);
            std::printf("%8d %10lld %10.6f %7d %8lld %10lld %12lld\n", m,
                        static_cast<long long>(checkpoint), at.loss, at.h_max,
                        static_cast<long long>(at.rounds_q),
                        static_cast<long long>(at.messages_per_player),
                        static_cast<long long>(m * at.messages_per_player));
        }
        const CommSummary summary = account(dist.comm);
        std::printf("%8s largest broadcast payload: %lld values\n", "",
                    static_cast<long long>(summary.max_payload));
    }
    return 0;
}
