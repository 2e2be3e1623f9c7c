#include "wadmit/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wadmit::lp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;

enum class ColumnKind { Structural, Slack, Artificial };

class Tableau {
public:
    explicit Tableau(const Problem& p) : m_(p.constraints.size()), n_struct_(p.num_vars) {
        std::size_t extra = 0;
        for (const auto& c : p.constraints) {
            if (c.coeffs.size() != p.num_vars) throw std::invalid_argument("constraint width mismatch");
            const bool flip = c.rhs < 0.0;
            auto rel = c.relation;
            if (flip && rel == Relation::LessEqual) rel = Relation::GreaterEqual;
            else if (flip && rel == Relation::GreaterEqual) rel = Relation::LessEqual;
            relations_.push_back(rel);
            flips_.push_back(flip);
            extra += rel == Relation::GreaterEqual ? 2 : 1;
        }
        cols_ = n_struct_ + extra;
        width_ = cols_ + 1;
        data_.assign((m_ + 1) * width_, 0.0);
        kind_.assign(cols_, ColumnKind::Structural);
        basis_.assign(m_, 0);
        active_row_.assign(m_, true);

        std::size_t next = n_struct_;
        for (std::size_t i = 0; i < m_; ++i) {
            const auto& c = p.constraints[i];
            const double sign = flips_[i] ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_struct_; ++j) at(i, j) = sign * c.coeffs[j];
            at(i, cols_) = sign * c.rhs;
            switch (relations_[i]) {
            case Relation::LessEqual:
                kind_[next] = ColumnKind::Slack;
                at(i, next) = 1.0;
                basis_[i] = next++;
                break;
            case Relation::GreaterEqual:
                kind_[next] = ColumnKind::Slack;
                at(i, next++) = -1.0;
                kind_[next] = ColumnKind::Artificial;
                at(i, next) = 1.0;
                basis_[i] = next++;
                break;
            case Relation::Equal:
                kind_[next] = ColumnKind::Artificial;
                at(i, next) = 1.0;
                basis_[i] = next++;
                break;
            }
        }
    }

    double& at(std::size_t r, std::size_t c) { return data_[r * width_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * width_ + c]; }

    // Objective row holds -c + c_B B^-1 A; its rhs entry is the current objective value.
    void load_objective(const std::vector<double>& cost) {
        for (std::size_t j = 0; j <= cols_; ++j) at(m_, j) = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) at(m_, j) = -cost[j];
        for (std::size_t i = 0; i < m_; ++i) {
            if (!active_row_[i]) continue;
            const double cb = cost[basis_[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) at(m_, j) += cb * at(i, j);
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        const double inv = 1.0 / at(r, c);
        for (std::size_t j = 0; j <= cols_; ++j) at(r, j) *= inv;
        at(r, c) = 1.0;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == r) continue;
            if (i < m_ && !active_row_[i]) continue;
            const double f = at(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
            at(i, c) = 0.0;
        }
        basis_[r] = c;
        ++pivots_;
    }

    // Returns false when the objective is unbounded along some column.
    bool optimise(bool allow_artificial) {
        for (;;) {
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (!allow_artificial && kind_[j] == ColumnKind::Artificial) continue;
                if (at(m_, j) < -kPivotTol) {
                    enter = j;
                    break;
                }
            }
            if (enter == cols_) return true;

            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                if (!active_row_[i]) continue;
                const double a = at(i, enter);
                if (a > kPivotTol) best = std::min(best, at(i, cols_) / a);
            }
            if (best == std::numeric_limits<double>::infinity()) return false;

            // Bland: among minimum-ratio rows, the one whose basic variable has the lowest index
            std::size_t leave = m_;
            for (std::size_t i = 0; i < m_; ++i) {
                if (!active_row_[i]) continue;
                const double a = at(i, enter);
                if (a <= kPivotTol || at(i, cols_) / a > best + kPivotTol) continue;
                if (leave == m_ || basis_[i] < basis_[leave]) leave = i;
            }
            pivot(leave, enter);
        }
    }

    void drive_out_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (!active_row_[i] || kind_[basis_[i]] != ColumnKind::Artificial) continue;
            std::size_t replacement = cols_;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (kind_[j] == ColumnKind::Artificial) continue;
                if (std::abs(at(i, j)) > kPivotTol) {
                    replacement = j;
                    break;
                }
            }
            if (replacement == cols_) active_row_[i] = false;  // redundant row
            else pivot(i, replacement);
        }
    }

    Solution solve(const Problem& p) {
        Solution out;
        bool any_artificial = false;
        std::vector<double> cost(cols_, 0.0);
        for (std::size_t j = 0; j < cols_; ++j)
            if (kind_[j] == ColumnKind::Artificial) {
                cost[j] = -1.0;
                any_artificial = true;
            }
        if (any_artificial) {
            load_objective(cost);
            optimise(true);
            if (at(m_, cols_) < -kFeasTol) {
                out.status = Status::Infeasible;
                out.pivots = pivots_;
                return out;
            }
            drive_out_artificials();
        }

        std::fill(cost.begin(), cost.end(), 0.0);
        for (std::size_t j = 0; j < n_struct_; ++j) cost[j] = p.objective[j];
        load_objective(cost);
        if (!optimise(false)) {
            out.status = Status::Unbounded;
            out.pivots = pivots_;
            return out;
        }

        out.status = Status::Optimal;
        out.x.assign(n_struct_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (active_row_[i] && basis_[i] < n_struct_) out.x[basis_[i]] = std::max(0.0, at(i, cols_));
        out.objective = 0.0;
        for (std::size_t j = 0; j < n_struct_; ++j) out.objective += p.objective[j] * out.x[j];
        out.pivots = pivots_;
        return out;
    }

private:
    std::size_t m_;
    std::size_t n_struct_;
    std::size_t cols_ = 0;
    std::size_t width_ = 0;
    std::vector<double> data_;
    std::vector<ColumnKind> kind_;
    std::vector<std::size_t> basis_;
    std::vector<bool> active_row_;
    std::vector<Relation> relations_;
    std::vector<bool> flips_;
    std::size_t pivots_ = 0;
};

} // namespace

Solution maximize(const Problem& problem) {
    if (problem.objective.size() != problem.num_vars) throw std::invalid_argument("objective width mismatch");
    Tableau t(problem);
    return t.solve(problem);
}

} // namespace wadmit::lp
