#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ctxfrac/errors.hpp"
#include "ctxfrac/numeric.hpp"

namespace ctxfrac {

enum class Sense { Maximize, Minimize };
enum class Relation { LessEq, GreaterEq, Equal };
enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Dense LP in container form: optimize c.x subject to per-row relations
/// A x (<=|>=|=) b and x >= lower_bounds (componentwise; empty means 0).
template <typename T>
struct LinearProgram {
    Sense sense = Sense::Maximize;
    std::vector<T> objective;
    std::vector<std::vector<T>> rows;
    std::vector<Relation> relations;
    std::vector<T> rhs;
    std::vector<T> lower_bounds;  // optional

    std::size_t num_variables() const { return objective.size(); }
    std::size_t num_rows() const { return rows.size(); }
};

template <typename T>
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    T value = T(0);
    std::vector<T> point;
    /// Final basic variable per tableau row: structural indices < nv, then
    /// slack/surplus columns in row order.
    std::vector<std::size_t> basis;
};

namespace detail {

inline bool lp_finite(double x) { return std::isfinite(x); }
inline bool lp_finite(const Rational&) { return true; }

/// Two-phase dense tableau simplex. Bland's pivoting rule throughout:
/// entering variable is the lowest-index improving column, ties in the
/// ratio test go to the row whose basic variable has the lowest index.
/// This makes cycling impossible and the optimal vertex a deterministic
/// function of the variable order.
template <typename T>
class SimplexTableau {
  public:
    SimplexTableau(const LinearProgram<T>& lp, T eps) : eps_(eps) {
        nv_ = lp.num_variables();
        std::size_t m = lp.num_rows();
        if (lp.rhs.size() != m || lp.relations.size() != m)
            throw ValidationError("inconsistent LP dimensions");
        for (const auto& row : lp.rows)
            if (row.size() != nv_) throw ValidationError("inconsistent LP row width");
        if (!lp.lower_bounds.empty() && lp.lower_bounds.size() != nv_)
            throw ValidationError("inconsistent lower-bound vector");
        for (const T& c : lp.objective)
            if (!lp_finite(c)) throw ValidationError("non-finite objective coefficient");
        for (const auto& row : lp.rows)
            for (const T& a : row)
                if (!lp_finite(a)) throw ValidationError("non-finite constraint coefficient");
        for (const T& b : lp.rhs)
            if (!lp_finite(b)) throw ValidationError("non-finite right-hand side");

        maximize_ = lp.sense == Sense::Maximize;
        costs_ = lp.objective;
        if (!maximize_)
            for (T& c : costs_) c = -c;

        // Shift x := x' + lb so every variable has lower bound 0.
        shift_.assign(nv_, T(0));
        if (!lp.lower_bounds.empty()) shift_ = lp.lower_bounds;
        std::vector<T> b = lp.rhs;
        std::vector<std::vector<T>> a = lp.rows;
        std::vector<Relation> rel = lp.relations;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < nv_; ++j) b[i] -= a[i][j] * shift_[j];
        for (std::size_t j = 0; j < nv_; ++j) constant_ += costs_[j] * shift_[j];

        // Negative right-hand sides flip the row.
        for (std::size_t i = 0; i < m; ++i) {
            if (b[i] < T(0)) {
                for (T& x : a[i]) x = -x;
                b[i] = -b[i];
                if (rel[i] == Relation::LessEq)
                    rel[i] = Relation::GreaterEq;
                else if (rel[i] == Relation::GreaterEq)
                    rel[i] = Relation::LessEq;
            }
        }

        std::size_t num_slack = 0, num_art = 0;
        for (Relation r : rel) {
            if (r != Relation::Equal) ++num_slack;
            if (r != Relation::LessEq) ++num_art;
        }
        cols_ = nv_ + num_slack + num_art;
        art_begin_ = nv_ + num_slack;
        tab_.assign(m, std::vector<T>(cols_ + 1, T(0)));
        basis_.assign(m, 0);

        std::size_t slack = nv_, art = art_begin_;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < nv_; ++j) tab_[i][j] = a[i][j];
            tab_[i][cols_] = b[i];
            switch (rel[i]) {
                case Relation::LessEq:
                    tab_[i][slack] = T(1);
                    basis_[i] = slack++;
                    break;
                case Relation::GreaterEq:
                    tab_[i][slack] = T(-1);
                    ++slack;
                    tab_[i][art] = T(1);
                    basis_[i] = art++;
                    break;
                case Relation::Equal:
                    tab_[i][art] = T(1);
                    basis_[i] = art++;
                    break;
            }
        }
    }

    LpSolution<T> run() {
        LpSolution<T> sol;
        if (art_begin_ < cols_ && !phase_one()) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        LpStatus status = phase_two();
        sol.status = status;
        if (status != LpStatus::Optimal) return sol;

        sol.point.assign(nv_, T(0));
        for (std::size_t i = 0; i < tab_.size(); ++i)
            if (basis_[i] < nv_) sol.point[basis_[i]] = tab_[i][cols_];
        T value = obj_value_ + constant_;
        for (std::size_t j = 0; j < nv_; ++j) sol.point[j] += shift_[j];
        sol.value = maximize_ ? value : T(-value);
        sol.basis = basis_;
        return sol;
    }

  private:
    void pivot(std::size_t r, std::size_t s) {
        T p = tab_[r][s];
        if (num::abs(p) <= eps_)
            throw NumericalBreakdown("simplex pivot below tolerance");
        T inv = T(1) / p;
        for (T& x : tab_[r]) x *= inv;
        tab_[r][s] = T(1);
        for (std::size_t i = 0; i < tab_.size(); ++i) {
            if (i == r) continue;
            T f = tab_[i][s];
            if (f == T(0)) continue;
            for (std::size_t j = 0; j <= cols_; ++j) tab_[i][j] -= f * tab_[r][j];
            tab_[i][s] = T(0);
        }
        T f = obj_[s];
        if (f != T(0)) {
            for (std::size_t j = 0; j <= cols_; ++j) obj_[j] -= f * tab_[r][j];
            obj_[s] = T(0);
            obj_value_ += f * tab_[r][cols_];
        }
        basis_[r] = s;
    }

    /// One Bland-rule optimization pass over columns [0, limit).
    LpStatus iterate(std::size_t limit) {
        const std::size_t max_pivots = 1000 + 60 * (tab_.size() + cols_);
        for (std::size_t iter = 0; iter < max_pivots; ++iter) {
            std::size_t enter = limit;
            for (std::size_t j = 0; j < limit; ++j) {
                if (obj_[j] > eps_) {
                    enter = j;
                    break;
                }
            }
            if (enter == limit) return LpStatus::Optimal;

            std::size_t leave = tab_.size();
            T best_ratio = T(0);
            for (std::size_t i = 0; i < tab_.size(); ++i) {
                const T& coef = tab_[i][enter];
                if (!(coef > eps_)) continue;
                T ratio = tab_[i][cols_] / coef;
                if (leave == tab_.size() || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == tab_.size()) {
                if constexpr (!num::traits<T>::exact) {
                    // A column that is only marginally nonpositive is a
                    // numerical failure, not genuine unboundedness.
                    T biggest = T(0);
                    for (std::size_t i = 0; i < tab_.size(); ++i)
                        if (tab_[i][enter] > biggest) biggest = tab_[i][enter];
                    if (biggest > eps_ / 100) throw NumericalBreakdown("ambiguous pivot column");
                }
                return LpStatus::Unbounded;
            }
            pivot(leave, enter);
        }
        throw NumericalBreakdown("simplex failed to converge (pivot cap reached)");
    }

    bool phase_one() {
        obj_.assign(cols_ + 1, T(0));
        obj_value_ = T(0);
        for (std::size_t i = 0; i < tab_.size(); ++i) {
            if (basis_[i] < art_begin_) continue;
            for (std::size_t j = 0; j < art_begin_; ++j) obj_[j] += tab_[i][j];
            obj_value_ -= tab_[i][cols_];
        }
        if (iterate(art_begin_) != LpStatus::Optimal)
            throw NumericalBreakdown("phase-1 subproblem unbounded");
        // obj_value_ is minus the residual infeasibility.
        if constexpr (num::traits<T>::exact) {
            if (obj_value_ < T(0)) return false;
        } else {
            if (obj_value_ < T(-1e-7)) return false;
            if (obj_value_ < T(-1e-9))
                throw NumericalBreakdown("phase-1 residual in the ambiguous zone");
        }

        // Any artificial still basic sits at zero: pivot it out or drop a
        // redundant row.
        for (std::size_t i = 0; i < tab_.size();) {
            if (basis_[i] < art_begin_) {
                ++i;
                continue;
            }
            std::size_t s = art_begin_;
            for (std::size_t j = 0; j < art_begin_; ++j) {
                if (num::abs(tab_[i][j]) > eps_) {
                    s = j;
                    break;
                }
            }
            if (s == art_begin_) {
                tab_.erase(tab_.begin() + static_cast<std::ptrdiff_t>(i));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
            } else {
                pivot(i, s);
                ++i;
            }
        }
        return true;
    }

    LpStatus phase_two() {
        obj_.assign(cols_ + 1, T(0));
        obj_value_ = T(0);
        for (std::size_t j = 0; j < nv_; ++j) obj_[j] = costs_[j];
        for (std::size_t i = 0; i < tab_.size(); ++i) {
            std::size_t bj = basis_[i];
            if (bj >= nv_) continue;
            T cb = costs_[bj];
            if (cb == T(0)) continue;
            for (std::size_t j = 0; j <= cols_; ++j) obj_[j] -= cb * tab_[i][j];
            obj_value_ += cb * tab_[i][cols_];
        }
        for (std::size_t i = 0; i < tab_.size(); ++i) obj_[basis_[i]] = T(0);
        return iterate(art_begin_);
    }

    std::size_t nv_ = 0;
    std::size_t cols_ = 0;
    std::size_t art_begin_ = 0;
    bool maximize_ = true;
    T eps_;
    T constant_ = T(0);
    std::vector<T> costs_;
    std::vector<T> shift_;
    std::vector<std::vector<T>> tab_;
    std::vector<std::size_t> basis_;
    std::vector<T> obj_;
    T obj_value_ = T(0);
};

}  // namespace detail

/// Solves the LP. The float instantiation reports NumericalBreakdown
/// rather than silently absorbing questionable pivots; solutions are
/// checked against the original constraints (residual <= 1e-9 scaled).
/// The Rational instantiation is exact.
template <typename T>
LpSolution<T> solve(const LinearProgram<T>& lp) {
    detail::SimplexTableau<T> tableau(lp, num::traits<T>::lp_eps());
    LpSolution<T> sol = tableau.run();
    if (sol.status != LpStatus::Optimal) return sol;
    if constexpr (!num::traits<T>::exact) {
        double scale = 1;
        for (const T& b : lp.rhs) scale = std::max(scale, std::fabs(b));
        for (std::size_t i = 0; i < lp.num_rows(); ++i) {
            double lhs = 0;
            for (std::size_t j = 0; j < lp.num_variables(); ++j)
                lhs += lp.rows[i][j] * sol.point[j];
            double resid = lhs - lp.rhs[i];
            bool bad = false;
            switch (lp.relations[i]) {
                case Relation::LessEq: bad = resid > 1e-9 * scale; break;
                case Relation::GreaterEq: bad = resid < -1e-9 * scale; break;
                case Relation::Equal: bad = std::fabs(resid) > 1e-9 * scale; break;
            }
            if (bad)
                throw NumericalBreakdown("solution violates constraint " + std::to_string(i) +
                                         " by " + num::to_string(resid));
        }
    }
    return sol;
}

template <typename T>
struct DualityReport {
    T primal_value = T(0);
    T dual_value = T(0);
    T gap = T(0);
    bool pass = false;
};

/// Solves both programs of a primal/dual pair and reports the duality gap.
template <typename T>
DualityReport<T> verify_duality(const LinearProgram<T>& primal, const LinearProgram<T>& dual,
                                T tol = num::traits<T>::exact ? T(0) : T(1e-7)) {
    LpSolution<T> p = solve(primal);
    LpSolution<T> d = solve(dual);
    if (p.status != LpStatus::Optimal || d.status != LpStatus::Optimal)
        throw StatusMismatch("duality check requires both programs optimal");
    DualityReport<T> report;
    report.primal_value = p.value;
    report.dual_value = d.value;
    report.gap = num::abs(T(p.value - d.value));
    report.pass = !(report.gap > tol);
    return report;
}

}  // namespace ctxfrac
