#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

// Closed-form performance bounds for the level-synchronous search, kept as
// exact expressions (no O(.) slack) so runs can be checked against them.
// d is the near-optimality dimension and C its packing constant; both test
// objectives have d = 0, where several expressions degenerate to limits.

namespace xbandit {

struct BoundParams {
    double d = 0.0;
    double C = 1.0;
    double nu1 = 1.0;
    double rho = 0.5;
    int m = 1;
    std::int64_t n = 1600;
    double delta = 0.05;
};

inline double log_budget_term(const BoundParams& p) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double n = static_cast<double>(p.n);
    return std::log(pi2 * n * n * n / (3.0 * p.delta));
}

// c1 = (1/(rho*nu1)) * (C * 6^-d / (1 - rho^(d+2)))^(1/(d+2))
inline double c1_constant(const BoundParams& p) {
    if (!(p.rho > 0.0 && p.rho < 1.0)) {
        throw std::domain_error("c1_constant: rho must be in (0,1)");
    }
    const double inner = p.C * std::pow(6.0, -p.d) / (1.0 - std::pow(p.rho, p.d + 2.0));
    return std::pow(inner, 1.0 / (p.d + 2.0)) / (p.rho * p.nu1);
}

// Deepest expanded depth is at least
//   log_rho( c1 * (log(pi^2 n^3 / (3 delta)) / (m n))^(1/(d+2)) )
// with high probability; callers floor it before comparing.
inline double hmax_lower_bound(const BoundParams& p) {
    const double inner =
        c1_constant(p) *
        std::pow(log_budget_term(p) / (static_cast<double>(p.m) * static_cast<double>(p.n)),
                 1.0 / (p.d + 2.0));
    return std::log(inner) / std::log(p.rho);
}

// loss <= 6 nu1 c1 * (log(pi^2 n^3 / (3 delta)) / (m n))^(1/(d+2))
inline double loss_upper_bound(const BoundParams& p) {
    return 6.0 * p.nu1 * c1_constant(p) *
           std::pow(log_budget_term(p) / (static_cast<double>(p.m) * static_cast<double>(p.n)),
                    1.0 / (p.d + 2.0));
}

// rounds <= log(nu1^2 m n) / (2 log(1/rho)); holds deterministically.
inline double rounds_upper_bound(const BoundParams& p) {
    const double arg = p.nu1 * p.nu1 * static_cast<double>(p.m) * static_cast<double>(p.n);
    if (!(arg > 1.0)) {
        throw std::domain_error("rounds_upper_bound: requires nu1^2 * m * n > 1");
    }
    return std::log(arg) / (2.0 * std::log(1.0 / p.rho));
}

// Values each player broadcasts over a whole run, via the geometric series
//   M <= 1 + C K (6 nu1)^-d * (rho^(-d h_max) - 1) / (rho^-d - 1)
// with arity K = 2; the d -> 0 limit is 1 + 2 C h_max.
inline double messages_upper_bound(const BoundParams& p, std::int64_t h_max) {
    if (h_max < 0) {
        throw std::invalid_argument("messages_upper_bound: h_max must be >= 0");
    }
    constexpr double K = 2.0;
    if (p.d < 1e-12) {
        return 1.0 + K * p.C * static_cast<double>(h_max);
    }
    const double ratio = std::pow(p.rho, -p.d);
    return 1.0 + p.C * K * std::pow(6.0 * p.nu1, -p.d) *
                     (std::pow(ratio, static_cast<double>(h_max)) - 1.0) / (ratio - 1.0);
}

}  // namespace xbandit
