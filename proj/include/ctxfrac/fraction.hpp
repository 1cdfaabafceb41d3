#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ctxfrac/bell.hpp"
#include "ctxfrac/empirical.hpp"
#include "ctxfrac/errors.hpp"
#include "ctxfrac/lp.hpp"
#include "ctxfrac/numeric.hpp"
#include "ctxfrac/scenario.hpp"

namespace ctxfrac {

/// Scales below which a decomposition part is numerically meaningless.
inline constexpr double kDecompositionDelta = 1e-9;

template <typename T>
struct FractionResult {
    T ncf = T(0);
    T cf = T(0);
    /// Optimal global subprobability distribution b*; weight equals ncf.
    SubDistribution<T> optimal_subdistribution;

    /// The weight of the non-contextual part in the optimal decomposition.
    const T& lambda() const { return ncf; }
};

/// The primal program: maximize 1.b subject to M b <= v^e, b >= 0. The
/// zero vector is feasible and the feasible set is bounded, so the status
/// is always Optimal.
template <typename T>
LinearProgram<T> primal_lp(const EmpiricalModel<T>& e,
                           std::size_t max_globals = kDefaultGlobalGuard) {
    IncidenceMatrix inc = build_incidence_matrix(e.scenario(), max_globals);
    LinearProgram<T> lp;
    lp.sense = Sense::Maximize;
    lp.objective.assign(inc.cols, T(1));
    lp.rows.assign(inc.rows, std::vector<T>(inc.cols, T(0)));
    for (std::size_t r = 0; r < inc.rows; ++r)
        for (std::size_t c = 0; c < inc.cols; ++c)
            if (inc.at(r, c)) lp.rows[r][c] = T(1);
    lp.relations.assign(inc.rows, Relation::LessEq);
    lp.rhs = to_vector(e);
    return lp;
}

/// The symmetric dual: minimize y . v^e subject to M^T y >= 1, y >= 0.
template <typename T>
LinearProgram<T> dual_lp(const EmpiricalModel<T>& e,
                         std::size_t max_globals = kDefaultGlobalGuard) {
    IncidenceMatrix inc = build_incidence_matrix(e.scenario(), max_globals);
    LinearProgram<T> lp;
    lp.sense = Sense::Minimize;
    lp.objective = to_vector(e);
    lp.rows.assign(inc.cols, std::vector<T>(inc.rows, T(0)));
    for (std::size_t r = 0; r < inc.rows; ++r)
        for (std::size_t c = 0; c < inc.cols; ++c)
            if (inc.at(r, c)) lp.rows[c][r] = T(1);
    lp.relations.assign(inc.cols, Relation::GreaterEq);
    lp.rhs.assign(inc.cols, T(1));
    return lp;
}

/// Maximum weight of a global subprobability distribution whose marginals
/// are dominated by the empirical data. Bland's rule makes the returned
/// optimal vertex deterministic.
template <typename T>
FractionResult<T> noncontextual_fraction(const EmpiricalModel<T>& e,
                                         std::size_t max_globals = kDefaultGlobalGuard) {
    LpSolution<T> sol = solve(primal_lp(e, max_globals));
    if (sol.status != LpStatus::Optimal)
        throw NumericalBreakdown("fraction LP must be feasible and bounded");
    FractionResult<T> result;
    result.ncf = sol.value;
    if (result.ncf < T(0)) result.ncf = T(0);
    if (result.ncf > T(1)) {
        if (num::to_double(result.ncf) > 1 + 1e-7)
            throw NumericalBreakdown("non-contextual fraction above 1");
        result.ncf = T(1);
    }
    result.cf = T(1) - result.ncf;
    for (T& w : sol.point)
        if (w < T(0)) w = T(0);
    result.optimal_subdistribution.weights = std::move(sol.point);
    return result;
}

template <typename T>
struct Decomposition {
    T ncf = T(0);
    std::optional<EmpiricalModel<T>> noncontextual_part;
    std::optional<EmpiricalModel<T>> strongly_contextual_part;
    /// Set when a part was omitted because its weight fell inside (0, delta).
    bool degenerate = false;
};

/// Splits e = ncf * e^NC + cf * e^SC using the optimal b*:
/// e^NC = (M b*)/|b*| and e^SC = (v^e - M b*)/(1 - |b*|). Parts whose
/// weight vanishes are absent; weights inside (0, delta) are reported as
/// degenerate and the part omitted. The decomposition is one optimal
/// choice among possibly many (the Bland vertex); uniqueness is not
/// implied.
template <typename T>
Decomposition<T> decompose(const EmpiricalModel<T>& e, const FractionResult<T>& fraction,
                           double delta = kDecompositionDelta) {
    const Scenario& scn = e.scenario();
    const std::vector<T>& b = fraction.optimal_subdistribution.weights;
    std::vector<T> image(scn.num_local_assignments(), T(0));
    for (std::size_t g = 0; g < b.size(); ++g) {
        if (b[g] == T(0)) continue;
        for (std::size_t c = 0; c < scn.num_contexts(); ++c)
            image[scn.context_block_offset(c) + scn.restrict_global(g, c)] += b[g];
    }

    Decomposition<T> dec;
    dec.ncf = fraction.ncf;
    T validation_eps = num::traits<T>::exact ? T(0) : T(1e-7);

    double ncf = num::to_double(fraction.ncf);
    double cf = num::to_double(fraction.cf);
    if (ncf > 0 && ncf < delta) {
        dec.degenerate = true;
    } else if (ncf > 0) {
        std::vector<T> part(image.size());
        for (std::size_t i = 0; i < image.size(); ++i) part[i] = image[i] / fraction.ncf;
        dec.noncontextual_part = EmpiricalModel<T>::create(
            e.scenario_ptr(), tables_from_vector(scn, part), validation_eps);
    }
    if (cf > 0 && cf < delta) {
        dec.degenerate = true;
    } else if (cf > 0) {
        std::vector<T> v = to_vector(e);
        std::vector<T> part(image.size());
        for (std::size_t i = 0; i < image.size(); ++i)
            part[i] = (v[i] - image[i]) / fraction.cf;
        dec.strongly_contextual_part = EmpiricalModel<T>::create(
            e.scenario_ptr(), tables_from_vector(scn, part), validation_eps);
    }
    return dec;
}

template <typename T>
Decomposition<T> decompose(const EmpiricalModel<T>& e,
                           std::size_t max_globals = kDefaultGlobalGuard,
                           double delta = kDecompositionDelta) {
    return decompose(e, noncontextual_fraction(e, max_globals), delta);
}

template <typename T>
struct Witness {
    BellInequality<T> inequality;  // bound 0
    /// Set when the model is non-contextual, so the dual program can only
    /// produce an inequality with no positive violation (possibly one
    /// saturated by every no-signalling model). Returned, never suppressed.
    bool trivial_witness = false;
    T algebraic_bound = T(0);
    T normalized_violation = T(0);
};

/// Witnessing Bell inequality from the dual optimum: a* = |M|^-1 1 - y*,
/// bound 0. For contextual models ||a*|| = 1 and the normalized violation
/// by e equals CF(e).
template <typename T>
Witness<T> witnessing_inequality(const EmpiricalModel<T>& e,
                                 std::size_t max_globals = kDefaultGlobalGuard) {
    LpSolution<T> sol = solve(dual_lp(e, max_globals));
    if (sol.status != LpStatus::Optimal)
        throw NumericalBreakdown("dual fraction LP must be feasible and bounded");
    const Scenario& scn = e.scenario();
    T inv_contexts = T(1) / T(static_cast<long>(scn.num_contexts()));
    std::vector<T> coeffs(sol.point.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = inv_contexts - sol.point[i];

    Witness<T> w{BellInequality<T>::create(e.scenario_ptr(), std::move(coeffs), T(0))};
    T cf = T(1) - sol.value;  // strong duality: dual value = NCF(e)
    w.trivial_witness = num::to_double(cf) <= kDecompositionDelta;
    w.algebraic_bound = algebraic_bound(w.inequality);
    if (w.algebraic_bound > w.inequality.bound)
        w.normalized_violation = normalized_violation(w.inequality, e);
    return w;
}

template <typename T>
struct TightnessReport {
    T noncontextual_value = T(0);    // a . v^{e^NC}, expected 0
    T strongly_contextual_value = T(0);  // a . v^{e^SC}, expected 1
    bool pass = false;
};

/// Checks that the witness is saturated by the non-contextual part and
/// maximally violated by the strongly contextual part. Requires a proper
/// decomposition (0 < cf < 1, both parts present).
template <typename T>
TightnessReport<T> check_tightness(const BellInequality<T>& ineq, const Decomposition<T>& dec,
                                   T tol = num::traits<T>::exact ? T(0) : T(1e-6)) {
    if (!dec.noncontextual_part || !dec.strongly_contextual_part)
        throw PreconditionViolated("tightness check needs both decomposition parts");
    TightnessReport<T> report;
    report.noncontextual_value = evaluate(ineq, *dec.noncontextual_part);
    report.strongly_contextual_value = evaluate(ineq, *dec.strongly_contextual_part);
    report.pass = !(num::abs(report.noncontextual_value) > tol) &&
                  !(num::abs(T(report.strongly_contextual_value - T(1))) > tol);
    return report;
}

}  // namespace ctxfrac
