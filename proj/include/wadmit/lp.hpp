#pragma once

#include <cstddef>
#include <vector>

namespace wadmit::lp {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Constraint {
    std::vector<double> coeffs;  // dense, one entry per variable
    Relation relation = Relation::LessEqual;
    double rhs = 0.0;
};

/// maximize objective·x subject to the constraints and x >= 0.
struct Problem {
    std::size_t num_vars = 0;
    std::vector<double> objective;
    std::vector<Constraint> constraints;

    explicit Problem(std::size_t n) : num_vars(n), objective(n, 0.0) {}

    Constraint& add(Relation rel, double rhs) {
        constraints.push_back({std::vector<double>(num_vars, 0.0), rel, rhs});
        return constraints.back();
    }
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
    Status status = Status::Infeasible;
    double objective = 0.0;
    std::vector<double> x;
    std::size_t pivots = 0;
};

/// Dense two-phase tableau simplex with Bland's anti-cycling rule.
/// Intended for small problems (tens of rows, a few thousand columns).
Solution maximize(const Problem& problem);

} // namespace wadmit::lp
