#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

// Test objectives on [0,1], bounded noise models, the reward oracle with
// per-player random streams, and a brute-force ground-truth maximizer.

namespace xbandit {

enum class ObjectiveId { DoubleSine, Garland, Custom };

struct ObjectiveFn {
    ObjectiveId id = ObjectiveId::Custom;
    std::string name = "custom";
    std::function<double(double)> eval;
};

inline ObjectiveFn double_sine() {
    return {ObjectiveId::DoubleSine, "double_sine", [](double x) {
                return 0.5 * (std::sin(13.0 * x) * std::sin(27.0 * x) / 2.0 + 1.0);
            }};
}

inline ObjectiveFn garland() {
    return {ObjectiveId::Garland, "garland", [](double x) {
                return x * (1.0 - x) * (4.0 - std::sqrt(std::fabs(std::sin(60.0 * x))));
            }};
}

inline ObjectiveFn custom(std::function<double(double)> fn, std::string name = "custom") {
    return {ObjectiveId::Custom, std::move(name), std::move(fn)};
}

inline ObjectiveFn objective_by_name(const std::string& name) {
    if (name == "double_sine") return double_sine();
    if (name == "garland") return garland();
    throw std::invalid_argument("unknown objective: " + name);
}

inline double evaluate(const ObjectiveFn& fn, double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error("evaluate: x outside [0,1]");
    }
    return fn.eval(x);
}

enum class NoiseKind { None, TruncatedGaussian, Uniform };

// Truncation flavor for the Gaussian model. Clamp pins f(x)+g to [0,1]
// (cheap, but biases E[r] toward 0.5 when sigma is large relative to the
// distance to the boundary); Resample redraws g until the reward lands in
// [0,1], which keeps the distribution a genuine truncated Gaussian.
enum class Truncation { Clamp, Resample };

struct NoiseModel {
    NoiseKind kind = NoiseKind::None;
    double sigma = 1.0;      // TruncatedGaussian
    double halfwidth = 0.0;  // Uniform
    Truncation truncation = Truncation::Clamp;

    static NoiseModel none() { return {NoiseKind::None, 0.0, 0.0, Truncation::Clamp}; }
    static NoiseModel gauss(double sigma, Truncation t = Truncation::Clamp) {
        return {NoiseKind::TruncatedGaussian, sigma, 0.0, t};
    }
    static NoiseModel uniform(double halfwidth) {
        return {NoiseKind::Uniform, 0.0, halfwidth, Truncation::Clamp};
    }
};

// splitmix64 finalizer; decorrelates consecutive seeds.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream seed for player j (1-based) under a master seed. Every player gets
// an independent stream; the derivation depends only on (master, j), never
// on scheduling.
inline std::uint64_t player_seed(std::uint64_t master, int player) {
    return mix_seed(master + static_cast<std::uint64_t>(player) * 0x9e3779b97f4a7c15ULL);
}

// Noisy evaluation oracle. Owns its engine and its pull counter; never
// shared between players.
template <typename Engine = std::mt19937_64>
class RewardOracle {
public:
    RewardOracle(ObjectiveFn fn, NoiseModel noise, std::uint64_t seed)
        : fn_(std::move(fn)), noise_(noise), rng_(seed) {}

    double pull(double x) {
        const double f = evaluate(fn_, x);
        ++pulls_;
        switch (noise_.kind) {
            case NoiseKind::None:
                return f;
            case NoiseKind::TruncatedGaussian: {
                if (noise_.truncation == Truncation::Clamp) {
                    return std::clamp(f + noise_.sigma * gauss_(rng_), 0.0, 1.0);
                }
                for (int attempt = 0; attempt < 100000; ++attempt) {
                    const double r = f + noise_.sigma * gauss_(rng_);
                    if (r >= 0.0 && r <= 1.0) return r;
                }
                // Unreachable for any sane sigma; keep the contract anyway.
                return std::clamp(f, 0.0, 1.0);
            }
            case NoiseKind::Uniform: {
                std::uniform_real_distribution<double> u(-noise_.halfwidth, noise_.halfwidth);
                return std::clamp(f + u(rng_), 0.0, 1.0);
            }
        }
        throw std::logic_error("unhandled noise kind");
    }

    std::uint64_t pulls() const { return pulls_; }
    const ObjectiveFn& objective() const { return fn_; }
    const NoiseModel& noise() const { return noise_; }

private:
    ObjectiveFn fn_;
    NoiseModel noise_;
    Engine rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
    std::uint64_t pulls_ = 0;
};

// Builds per-player oracles from one master seed.
template <typename Engine = std::mt19937_64>
class OracleFactory {
public:
    OracleFactory(ObjectiveFn fn, NoiseModel noise, std::uint64_t master_seed)
        : fn_(std::move(fn)), noise_(noise), master_(master_seed) {}

    RewardOracle<Engine> make(int player) const {
        return RewardOracle<Engine>(fn_, noise_, player_seed(master_, player));
    }

    const ObjectiveFn& objective() const { return fn_; }
    const NoiseModel& noise() const { return noise_; }
    std::uint64_t master_seed() const { return master_; }

private:
    ObjectiveFn fn_;
    NoiseModel noise_;
    std::uint64_t master_;
};

struct GroundTruth {
    double f_star = 0.0;
    double x_star = 0.0;
    std::int64_t grid_resolution = 0;
};

// Grid scan over resolution+1 points, then ternary refinement inside the
// winning grid step. Both built-ins have a few dozen oscillations at most,
// so the default 1e7 grid over-resolves every basin.
inline GroundTruth find_ground_truth(const ObjectiveFn& fn, std::int64_t resolution = 10'000'000) {
    if (resolution < 1000) {
        throw std::invalid_argument("find_ground_truth: resolution must be >= 1000");
    }
    double best_x = 0.0;
    double best_f = evaluate(fn, 0.0);
    for (std::int64_t k = 1; k <= resolution; ++k) {
        const double x = static_cast<double>(k) / static_cast<double>(resolution);
        const double f = fn.eval(x);
        if (f > best_f) {
            best_f = f;
            best_x = x;
        }
    }
    const double step = 1.0 / static_cast<double>(resolution);
    double lo = std::max(0.0, best_x - step);
    double hi = std::min(1.0, best_x + step);
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (fn.eval(m1) < fn.eval(m2)) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    const double refined_x = 0.5 * (lo + hi);
    const double refined_f = fn.eval(refined_x);
    GroundTruth gt;
    gt.grid_resolution = resolution;
    if (refined_f >= best_f) {
        gt.f_star = refined_f;
        gt.x_star = refined_x;
    } else {
        gt.f_star = best_f;
        gt.x_star = best_x;
    }
    return gt;
}

// Cached full-resolution ground truth for the built-ins.
inline const GroundTruth& builtin_ground_truth(ObjectiveId id) {
    static const GroundTruth ds = find_ground_truth(double_sine());
    static const GroundTruth ga = find_ground_truth(garland());
    switch (id) {
        case ObjectiveId::DoubleSine: return ds;
        case ObjectiveId::Garland: return ga;
        default: throw std::invalid_argument("builtin_ground_truth: not a built-in objective");
    }
}

}  // namespace xbandit
