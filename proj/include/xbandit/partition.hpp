#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

// Dyadic binary partition (covering tree) of the arm space X = [0,1].
// Node (h,i) has depth h >= 0 and index i in [1, 2^h]; its cell is the
// interval [(i-1)*2^-h, i*2^-h] with the midpoint as representative point.

namespace xbandit {

struct NodeId {
    int h = 0;
    std::int64_t i = 1;

    friend bool operator==(const NodeId&, const NodeId&) = default;
    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

struct Cell {
    NodeId node;
    double lower = 0.0;
    double upper = 1.0;
    double rep = 0.5;
};

// Smoothness parameters tying the semi-metric to the cell geometry:
// cells at depth h must have radius (from the representative) at most
// nu1*rho^h and must contain a ball of radius nu2*rho^h around it.
struct SmoothnessParams {
    double nu1 = 1.0;
    double rho = 0.5;
    double nu2 = 0.5;

    bool valid() const {
        return nu1 > 0.0 && rho > 0.0 && rho < 1.0 && nu2 > 0.0 && nu2 <= nu1;
    }
};

inline bool is_valid(const NodeId& node) {
    if (node.h < 0 || node.h >= 62 || node.i < 1) return false;
    return node.i <= (std::int64_t{1} << node.h);
}

inline std::pair<NodeId, NodeId> children(const NodeId& node) {
    return {NodeId{node.h + 1, 2 * node.i - 1}, NodeId{node.h + 1, 2 * node.i}};
}

inline Cell cell_of(const NodeId& node) {
    Cell c;
    c.node = node;
    c.lower = std::ldexp(static_cast<double>(node.i - 1), -node.h);
    c.upper = std::ldexp(static_cast<double>(node.i), -node.h);
    c.rep = std::ldexp(static_cast<double>(2 * node.i - 1), -(node.h + 1));
    return c;
}

// Dissimilarity on X: symmetric, zero iff equal.
inline double semi_metric(double x, double y) {
    return std::fabs(x - y);
}

struct AssumptionViolation {
    enum class Kind { CellDiameter, InnerBall };
    Kind kind;
    int h;
    double observed;  // cell radius at depth h
    double required;  // nu1*rho^h resp. nu2*rho^h

    std::string describe() const {
        const char* what = kind == Kind::CellDiameter
            ? "cell radius exceeds nu1*rho^h"
            : "ball of radius nu2*rho^h does not fit in cell";
        return "depth " + std::to_string(h) + ": " + what;
    }
};

// Checks the two geometric contracts for every depth up to max_depth.
// Dyadic endpoints make both exact: every cell at depth h extends exactly
// 2^-(h+1) on each side of its representative, so one check per depth
// covers all 2^h cells.
inline std::vector<AssumptionViolation> check_assumptions(const SmoothnessParams& params,
                                                          int max_depth) {
    std::vector<AssumptionViolation> violations;
    for (int h = 0; h <= max_depth; ++h) {
        const double radius = std::ldexp(1.0, -(h + 1));
        const double scale = std::pow(params.rho, h);
        if (radius > params.nu1 * scale) {
            violations.push_back({AssumptionViolation::Kind::CellDiameter, h,
                                  radius, params.nu1 * scale});
        }
        if (params.nu2 * scale > radius) {
            violations.push_back({AssumptionViolation::Kind::InnerBall, h,
                                  radius, params.nu2 * scale});
        }
    }
    return violations;
}

}  // namespace xbandit
