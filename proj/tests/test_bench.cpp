#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "xbandit/bench.hpp"

using namespace xbandit;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig config;
    config.objective = "double_sine";
    config.noise = NoiseModel::gauss(0.1);
    config.players = {1, 4};
    config.budgets = {400, 1600};
    config.seeds = {1, 2};
    return config;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::string drop_wall_column(const std::string& line) {
    return line.substr(0, line.rfind(','));
}

}  // namespace

TEST_CASE("config validation rejects malformed experiments", "[bench]") {
    CHECK_NOTHROW(small_config().validate());

    ExperimentConfig config = small_config();
    config.seeds.clear();
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = small_config();
    config.budgets = {1600, 400};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = small_config();
    config.objective = "rosenbrock";
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = small_config();
    config.players = {4, 0};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);

    config = small_config();
    config.delta = 1.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("a sweep enumerates players, seeds and checkpoints in order", "[bench]") {
    const ExperimentConfig config = small_config();
    const std::vector<SweepRecord> records = run_sweep(config);
    REQUIRE(records.size() == 8);

    std::size_t idx = 0;
    for (int m : config.players) {
        for (std::uint64_t seed : config.seeds) {
            for (std::int64_t n : config.budgets) {
                CAPTURE(m, seed, n);
                const SweepRecord& rec = records[idx++];
                CHECK(rec.objective == "double_sine");
                CHECK(rec.m == m);
                CHECK(rec.n == n);
                CHECK(rec.seed == seed);
                CHECK(rec.wall_ms >= 0.0);
            }
        }
    }
}

TEST_CASE("every checkpoint record matches a fresh run at that budget", "[bench]") {
    const ExperimentConfig config = small_config();
    const std::vector<SweepRecord> records = run_sweep(config);
    const ObjectiveFn fn = objective_by_name(config.objective);
    const GroundTruth& gt = builtin_ground_truth(fn.id);

    for (const SweepRecord& rec : records) {
        AlgoParams params;
        params.m = rec.m;
        params.n = rec.n;
        params.delta = config.delta;
        const OracleFactory<> factory(fn, config.noise, rec.seed);
        const DistResult fresh = run_distributed(params, factory, gt);

        CHECK(rec.loss == fresh.result.loss);
        CHECK(rec.h_max == fresh.result.h_max);
        CHECK(rec.q == fresh.result.rounds_q);
        CHECK(rec.M == fresh.result.messages_per_player);
        std::int64_t pulls = 0;
        for (std::int64_t e : fresh.result.evals_per_player) pulls += e;
        CHECK(rec.pulls == pulls);
    }
}

TEST_CASE("csv output is reproducible up to wall time", "[bench]") {
    const ExperimentConfig config = small_config();
    std::ostringstream first_out;
    emit_csv(run_sweep(config), first_out);
    std::ostringstream second_out;
    emit_csv(run_sweep(config), second_out);

    const std::vector<std::string> first = split_lines(first_out.str());
    const std::vector<std::string> second = split_lines(second_out.str());
    REQUIRE(first.size() == 9);  // header + 8 records
    REQUIRE(second.size() == first.size());
    CHECK(first[0] == "objective,m,n,seed,loss,h_max,q,M,pulls,wall_ms");
    for (std::size_t k = 1; k < first.size(); ++k) {
        CHECK(drop_wall_column(first[k]) == drop_wall_column(second[k]));
    }
}

TEST_CASE("csv writer surfaces filesystem errors", "[bench]") {
    CHECK_THROWS_AS(emit_csv({}, std::string("/nonexistent_dir/out.csv")), std::runtime_error);
}

TEST_CASE("bound verification passes on calibrated noise-free sweeps", "[bench]") {
    ExperimentConfig config = small_config();
    config.noise = NoiseModel::none();
    config.players = {1, 4, 16};
    config.budgets = {1600};
    config.seeds = {1};
    const std::vector<SweepRecord> records = run_sweep(config);

    BoundParams base;
    base.C = static_cast<double>(calibrate_capacity(double_sine(),
                                                    builtin_ground_truth(ObjectiveId::DoubleSine)));
    base.delta = config.delta;
    const BoundReport report = verify_bounds(records, base);
    CHECK(report.total == static_cast<std::int64_t>(records.size()));
    CHECK(report.deterministic_ok());
    CHECK(report.pass_loss == report.total);
    CHECK(report.pass_hmax == report.total);
}

TEST_CASE("bound verification on nothing is vacuous", "[bench]") {
    const BoundReport report = verify_bounds({}, BoundParams{});
    CHECK(report.total == 0);
    CHECK(report.deterministic_ok());
}

TEST_CASE("capacity calibration lands on the pinned constants", "[bench]") {
    CHECK(calibrate_capacity(double_sine(), builtin_ground_truth(ObjectiveId::DoubleSine)) == 8);
    CHECK(calibrate_capacity(garland(), builtin_ground_truth(ObjectiveId::Garland)) == 6);
}
