#pragma once

#include <cstddef>
#include <vector>

#include "ctxfrac/empirical.hpp"
#include "ctxfrac/errors.hpp"
#include "ctxfrac/numeric.hpp"
#include "ctxfrac/scenario.hpp"

namespace ctxfrac {

/// An inequality a . v <= R over model vectors, with coefficients indexed
/// by the canonical local-assignment order and a nonnegative bound. It is
/// a Bell inequality when every non-contextual model satisfies it; that is
/// a queryable property, not a construction invariant, and neither is
/// non-triviality (R < ||a||).
template <typename T>
struct BellInequality {
    ScenarioPtr scenario;
    std::vector<T> coefficients;
    T bound = T(0);

    static BellInequality create(ScenarioPtr scn, std::vector<T> coefficients, T bound) {
        if (coefficients.size() != scn->num_local_assignments())
            throw DomainMismatch("coefficient vector has wrong length");
        if (bound < T(0)) throw DomainMismatch("inequality bound must be nonnegative");
        return BellInequality{std::move(scn), std::move(coefficients), std::move(bound)};
    }
};

/// a . v^e.
template <typename T>
T evaluate(const BellInequality<T>& ineq, const EmpiricalModel<T>& e) {
    if (*ineq.scenario != e.scenario())
        throw ScenarioMismatch("inequality and model live on different scenarios");
    T total = T(0);
    const Scenario& scn = e.scenario();
    for (std::size_t c = 0; c < scn.num_contexts(); ++c) {
        std::size_t offset = scn.context_block_offset(c);
        for (std::size_t s = 0; s < scn.context_block_size(c); ++s)
            total += ineq.coefficients[offset + s] * e.probability(c, s);
    }
    return total;
}

/// ||a||: the per-context maxima summed — the largest value a . v can take
/// on any model, no-signalling or not.
template <typename T>
T algebraic_bound(const BellInequality<T>& ineq) {
    const Scenario& scn = *ineq.scenario;
    T total = T(0);
    for (std::size_t c = 0; c < scn.num_contexts(); ++c) {
        std::size_t offset = scn.context_block_offset(c);
        T best = ineq.coefficients[offset];
        for (std::size_t s = 1; s < scn.context_block_size(c); ++s)
            if (ineq.coefficients[offset + s] > best) best = ineq.coefficients[offset + s];
        total += best;
    }
    return total;
}

/// max{0, a . v - R} / (||a|| - R). Throws TrivialInequality when the
/// denominator vanishes (inequality satisfied by everything).
template <typename T>
T normalized_violation(const BellInequality<T>& ineq, const EmpiricalModel<T>& e) {
    T alg = algebraic_bound(ineq);
    if (!(alg > ineq.bound))
        throw TrivialInequality("algebraic bound does not exceed the inequality bound");
    T excess = evaluate(ineq, e) - ineq.bound;
    if (excess < T(0)) return T(0);
    return excess / (alg - ineq.bound);
}

/// a . v^{delta_g} for the deterministic model of global assignment g.
template <typename T>
T deterministic_value(const BellInequality<T>& ineq, std::size_t g) {
    const Scenario& scn = *ineq.scenario;
    T total = T(0);
    for (std::size_t c = 0; c < scn.num_contexts(); ++c)
        total += ineq.coefficients[scn.context_block_offset(c) + scn.restrict_global(g, c)];
    return total;
}

/// True iff every deterministic model satisfies a . v <= R + tol. The
/// deterministic models are the vertices of the non-contextual polytope,
/// so this settles all non-contextual models.
template <typename T>
bool is_bell_inequality(const BellInequality<T>& ineq, T tol = T(0),
                        std::size_t max_globals = kDefaultGlobalGuard) {
    const Scenario& scn = *ineq.scenario;
    std::size_t n = scn.num_global_assignments();
    if (n > max_globals)
        throw SizeLimitExceeded("vertex check over " + std::to_string(n) +
                                " assignments exceeds guard");
    for (std::size_t g = 0; g < n; ++g)
        if (deterministic_value(ineq, g) > ineq.bound + tol) return false;
    return true;
}

/// True iff some deterministic model attains the bound within tol.
template <typename T>
bool is_tight(const BellInequality<T>& ineq,
              T tol = num::traits<T>::exact ? T(0) : T(1e-9),
              std::size_t max_globals = kDefaultGlobalGuard) {
    if (!is_bell_inequality(ineq, tol, max_globals)) return false;
    const Scenario& scn = *ineq.scenario;
    for (std::size_t g = 0; g < scn.num_global_assignments(); ++g)
        if (num::abs(T(deterministic_value(ineq, g) - ineq.bound)) <= tol) return true;
    return false;
}

/// Expands a correlation-form inequality (sum of signed correlators
/// E_C <= R, two outcomes) into local-assignment coefficients: each
/// assignment contributes sign_C * (+1 for even outcome parity, -1 for
/// odd). The CHSH family is `signs = {+1,+1,+1,-1}, bound 2`.
template <typename T>
BellInequality<T> correlation_inequality(ScenarioPtr scenario, const std::vector<int>& signs,
                                         T bound) {
    const Scenario& scn = *scenario;
    if (scn.num_outcomes() != 2)
        throw DomainMismatch("correlation form requires two outcomes");
    if (signs.size() != scn.num_contexts())
        throw DomainMismatch("one sign per context required");
    std::vector<T> coeffs(scn.num_local_assignments(), T(0));
    for (std::size_t c = 0; c < scn.num_contexts(); ++c) {
        std::size_t offset = scn.context_block_offset(c);
        for (std::size_t s = 0; s < scn.context_block_size(c); ++s) {
            std::size_t ones = 0;
            for (std::size_t k = 0; k < scn.contexts()[c].size(); ++k)
                ones += scn.local_outcome(c, s, k);
            coeffs[offset + s] = T(signs[c] * (ones % 2 == 0 ? 1 : -1));
        }
    }
    return BellInequality<T>::create(std::move(scenario), std::move(coeffs), std::move(bound));
}

}  // namespace ctxfrac
