// Smallest possible use of the library: four players, one noisy objective,
// one serial run, print what came out.

#include <cstdio>

#include "xbandit/xbandit.hpp"

int main() {
    using namespace xbandit;

    AlgoParams params;
    params.m = 4;
    params.n = 1600;

    const ObjectiveFn fn = double_sine();
    const GroundTruth& gt = builtin_ground_truth(fn.id);
    const OracleFactory<> factory(fn, NoiseModel::gauss(0.1), 7);

    const RunResult run = run_serial(params, factory, gt);
    std::printf("x_n      = %.6f\n", run.x_n);
    std::printf("loss     = %.6f\n", run.loss);
    std::printf("depth    = %d\n", run.h_max);
    std::printf("rounds   = %lld\n", static_cast<long long>(run.rounds_q));
    std::printf("messages = %lld per player\n", static_cast<long long>(run.messages_per_player));
    return 0;
}
