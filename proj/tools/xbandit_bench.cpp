// Benchmark driver: seeded loss sweeps over player counts and budgets,
// CSV output, and optional verification of the closed-form bounds against
// every run. All runs go through the distributed simulator, so the CSV
// doubles as a regression record for the whole stack.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xbandit/xbandit.hpp"

namespace {

using namespace xbandit;

void print_summary(const std::vector<SweepRecord>& records, std::FILE* out) {
    std::map<std::pair<int, std::int64_t>, std::pair<double, int>> cells;
    for (const SweepRecord& rec : records) {
        auto& [sum, count] = cells[{rec.m, rec.n}];
        sum += rec.loss;
        ++count;
    }
    std::fprintf(out, "%8s %10s %12s\n", "players", "budget", "mean loss");
    for (const auto& [key, cell] : cells) {
        std::fprintf(out, "%8d %10lld %12.6f\n", key.first,
                     static_cast<long long>(key.second), cell.first / cell.second);
    }
}

int print_bound_report(const std::vector<SweepRecord>& records, const ExperimentConfig& config,
                       std::FILE* out) {
    const ObjectiveFn fn = objective_by_name(config.objective);
    const GroundTruth& gt = builtin_ground_truth(fn.id);
    BoundParams base;
    base.C = static_cast<double>(calibrate_capacity(fn, gt, config.smoothness, config.delta));
    base.nu1 = config.smoothness.nu1;
    base.rho = config.smoothness.rho;
    base.delta = config.delta;

    const BoundReport report = verify_bounds(records, base);
    std::fprintf(out,
                 "bounds over %lld runs (capacity C=%.0f): loss %lld, rounds %lld, "
                 "messages %lld, depth %lld\n",
                 static_cast<long long>(report.total), base.C,
                 static_cast<long long>(report.pass_loss),
                 static_cast<long long>(report.pass_rounds),
                 static_cast<long long>(report.pass_messages),
                 static_cast<long long>(report.pass_hmax));
    if (!report.deterministic_ok()) {
        std::fprintf(out, "deterministic bound violated (rounds or messages)\n");
        return 1;
    }
    if (!report.probabilistic_ok(config.delta)) {
        std::fprintf(out, "note: probabilistic bounds below the 1-delta fraction\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collaborative dyadic-search benchmark"};
    app.set_config("--config", "", "read options from an INI file");

    std::string objective = "double_sine";
    app.add_option("--objective", objective, "objective function")
        ->check(CLI::IsMember({"double_sine", "garland"}))
        ->capture_default_str();

    std::vector<int> players{1, 4, 16};
    app.add_option("--players", players, "player counts to sweep")
        ->delimiter(',')
        ->capture_default_str();

    std::vector<std::int64_t> budgets{1600};
    app.add_option("--budget", budgets, "per-player budgets, ascending checkpoints")
        ->delimiter(',')
        ->capture_default_str();

    double delta = 0.05;
    app.add_option("--delta", delta, "confidence parameter")->capture_default_str();

    std::string noise = "gauss";
    app.add_option("--noise", noise, "noise model")
        ->check(CLI::IsMember({"none", "gauss", "uniform"}))
        ->capture_default_str();
    double sigma = 0.1;
    app.add_option("--sigma", sigma, "gaussian noise scale")->capture_default_str();
    double halfwidth = 0.25;
    app.add_option("--halfwidth", halfwidth, "uniform noise half-width")->capture_default_str();
    bool resample = false;
    app.add_flag("--resample", resample, "redraw gaussian rewards outside [0,1] instead of clamping");
    bool unit_noise = false;
    app.add_flag("--unit-noise", unit_noise, "shorthand for --noise gauss --sigma 1");

    int seeds = 20;
    app.add_option("--seeds", seeds, "number of seeds, runs use 1..N")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    std::string out_path;
    app.add_option("--out", out_path, "CSV output path (stdout when empty)");
    bool verify = false;
    app.add_flag("--verify-bounds", verify, "check every run against the closed-form bounds");
    bool threaded = false;
    app.add_flag("--threaded", threaded, "one thread per simulated player");

    SmoothnessParams smoothness;
    app.add_option("--nu1", smoothness.nu1, "smoothness scale")->capture_default_str();
    app.add_option("--rho", smoothness.rho, "smoothness decay per depth")->capture_default_str();
    app.add_option("--nu2", smoothness.nu2, "inner-ball scale")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    ExperimentConfig config;
    config.objective = objective;
    config.players = players;
    config.budgets = budgets;
    config.delta = delta;
    config.smoothness = smoothness;
    config.mode = threaded ? ExecMode::Threaded : ExecMode::Sequential;
    config.seeds.resize(static_cast<std::size_t>(seeds));
    std::iota(config.seeds.begin(), config.seeds.end(), 1);
    if (unit_noise) {
        noise = "gauss";
        sigma = 1.0;
    }
    if (noise == "none") {
        config.noise = NoiseModel::none();
    } else if (noise == "gauss") {
        config.noise =
            NoiseModel::gauss(sigma, resample ? Truncation::Resample : Truncation::Clamp);
    } else {
        config.noise = NoiseModel::uniform(halfwidth);
    }

    try {
        config.validate();
        for (const AssumptionViolation& v : check_assumptions(config.smoothness, 30)) {
            std::fprintf(stderr, "warning: %s\n", v.describe().c_str());
        }

        const std::vector<SweepRecord> records = run_sweep(config);
        if (out_path.empty()) {
            emit_csv(records, std::cout);
            print_summary(records, stderr);
            return verify ? print_bound_report(records, config, stderr) : 0;
        }
        emit_csv(records, out_path);
        std::fprintf(stdout, "wrote %zu records to %s\n", records.size(), out_path.c_str());
        print_summary(records, stdout);
        return verify ? print_bound_report(records, config, stdout) : 0;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    }
}
