#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "ctxfrac/errors.hpp"
#include "ctxfrac/numeric.hpp"
#include "ctxfrac/scenario.hpp"

namespace ctxfrac {

/// Flattened model vector v indexed by the canonical local-assignment
/// order; per-context blocks are probability distributions.
template <typename T>
using ModelVector = std::vector<T>;

/// Nonnegative weights over an ordered finite carrier, total at most 1.
template <typename T>
struct SubDistribution {
    std::vector<T> weights;

    T weight() const {
        return std::accumulate(weights.begin(), weights.end(), T(0));
    }
};

/// Marginalizes a distribution over O^C onto a sub-tuple U of C.
/// `context` and `subset` are measurement indices in measurement-list
/// order; the output is indexed lexicographically over O^U. U may be empty
/// (the output is then the single total mass).
template <typename T>
std::vector<T> marginalize(const std::vector<T>& table, const std::vector<std::size_t>& context,
                           const std::vector<std::size_t>& subset, std::size_t num_outcomes) {
    std::vector<std::size_t> positions;
    positions.reserve(subset.size());
    for (std::size_t m : subset) {
        auto it = std::find(context.begin(), context.end(), m);
        if (it == context.end())
            throw DomainMismatch("marginalization target is not a subset of the context");
        positions.push_back(static_cast<std::size_t>(it - context.begin()));
    }
    std::size_t out_size = detail::pow_checked(num_outcomes, subset.size());
    std::vector<T> out(out_size, T(0));
    for (std::size_t s = 0; s < table.size(); ++s) {
        // digits of s, first context measurement most significant
        std::size_t idx = 0;
        for (std::size_t pos : positions) {
            std::size_t shift = context.size() - 1 - pos;
            std::size_t divisor = 1;
            for (std::size_t i = 0; i < shift; ++i) divisor *= num_outcomes;
            idx = idx * num_outcomes + (s / divisor) % num_outcomes;
        }
        out[idx] += table[s];
    }
    return out;
}

template <typename T>
struct NoSignallingReport {
    bool pass = true;
    T worst = T(0);
    std::size_t context_a = 0;
    std::size_t context_b = 0;
    std::vector<std::size_t> overlap;  // measurement indices of the worst pair
};

template <typename T>
struct ValidationReport {
    bool ok = true;
    std::size_t clamped_entries = 0;
    T worst_normalization = T(0);
    NoSignallingReport<T> signalling;
    std::string message;
};

/// Per-context probability tables over a shared scenario. Instances are
/// immutable after construction and cheap to share; `create` enforces the
/// model invariants (nonnegativity with dust-clamping, normalization,
/// compatibility of marginals) at tolerance eps, while `unchecked` defers
/// judgement to an explicit validation report.
template <typename T>
class EmpiricalModel {
  public:
    static EmpiricalModel create(ScenarioPtr scenario, std::vector<std::vector<T>> tables,
                                 T eps = num::traits<T>::default_eps());
    static EmpiricalModel unchecked(ScenarioPtr scenario, std::vector<std::vector<T>> tables) {
        check_shape(*scenario, tables);
        return EmpiricalModel(std::move(scenario), std::move(tables));
    }

    const Scenario& scenario() const { return *scenario_; }
    const ScenarioPtr& scenario_ptr() const { return scenario_; }
    const std::vector<std::vector<T>>& tables() const { return tables_; }

    /// e_C(s) for context c and local-assignment index s.
    const T& probability(std::size_t c, std::size_t s) const { return tables_[c][s]; }

    std::size_t clamped_entries() const { return clamped_entries_; }

  private:
    EmpiricalModel(ScenarioPtr scenario, std::vector<std::vector<T>> tables)
        : scenario_(std::move(scenario)), tables_(std::move(tables)) {}

    static void check_shape(const Scenario& scn, const std::vector<std::vector<T>>& tables) {
        if (tables.size() != scn.num_contexts())
            throw ValidationError("expected one table per context");
        for (std::size_t c = 0; c < tables.size(); ++c)
            if (tables[c].size() != scn.context_block_size(c))
                throw ValidationError("table " + std::to_string(c) + " has wrong size");
    }

    ScenarioPtr scenario_;
    std::vector<std::vector<T>> tables_;
    std::size_t clamped_entries_ = 0;
};

/// Worst pairwise marginal discrepancy across overlapping contexts.
/// Failure is a report, never an exception. The empty overlap is included
/// (total masses of the two contexts must agree).
template <typename T>
NoSignallingReport<T> check_no_signalling(const EmpiricalModel<T>& e,
                                          T eps = num::traits<T>::default_eps()) {
    const Scenario& scn = e.scenario();
    NoSignallingReport<T> report;
    for (std::size_t a = 0; a < scn.num_contexts(); ++a) {
        for (std::size_t b = a + 1; b < scn.num_contexts(); ++b) {
            const auto& ca = scn.contexts()[a];
            const auto& cb = scn.contexts()[b];
            std::vector<std::size_t> overlap;
            std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(),
                                  std::back_inserter(overlap));
            auto ma = marginalize(e.tables()[a], ca, overlap, scn.num_outcomes());
            auto mb = marginalize(e.tables()[b], cb, overlap, scn.num_outcomes());
            for (std::size_t t = 0; t < ma.size(); ++t) {
                T diff = num::abs(T(ma[t] - mb[t]));
                if (diff > report.worst) {
                    report.worst = diff;
                    report.context_a = a;
                    report.context_b = b;
                    report.overlap = overlap;
                }
            }
        }
    }
    report.pass = !(report.worst > eps);
    return report;
}

/// Full invariant check on raw tables: shape, nonnegativity (entries in
/// [-eps, 0) are clamped and counted, more negative ones are rejected),
/// per-context normalization, and no-signalling. Does not throw on
/// failures other than shape.
template <typename T>
ValidationReport<T> validate_tables(const ScenarioPtr& scenario,
                                    std::vector<std::vector<T>>& tables,
                                    T eps = num::traits<T>::default_eps()) {
    ValidationReport<T> report;
    const Scenario& scn = *scenario;
    for (std::size_t c = 0; c < tables.size(); ++c) {
        T sum = T(0);
        for (auto& x : tables[c]) {
            if (x < T(0)) {
                if (T(-x) > eps) {
                    report.ok = false;
                    report.message = "negative probability in context " + std::to_string(c);
                    return report;
                }
                x = T(0);
                ++report.clamped_entries;
            }
            sum += x;
        }
        T err = num::abs(T(sum - T(1)));
        if (err > report.worst_normalization) report.worst_normalization = err;
    }
    if (report.worst_normalization > eps) {
        report.ok = false;
        report.message = "context table does not sum to 1 (error " +
                         num::to_string(report.worst_normalization) + ")";
        return report;
    }
    report.signalling =
        check_no_signalling(EmpiricalModel<T>::unchecked(scenario, tables), eps);
    if (!report.signalling.pass) {
        report.ok = false;
        std::string where;
        for (std::size_t m : report.signalling.overlap)
            where += (where.empty() ? "" : ",") + scn.measurements()[m];
        report.message = "signalling between contexts " +
                         std::to_string(report.signalling.context_a) + " and " +
                         std::to_string(report.signalling.context_b) + " on {" + where +
                         "} (violation " + num::to_string(report.signalling.worst) + ")";
    }
    return report;
}

template <typename T>
EmpiricalModel<T> EmpiricalModel<T>::create(ScenarioPtr scenario,
                                            std::vector<std::vector<T>> tables, T eps) {
    check_shape(*scenario, tables);
    auto report = validate_tables(scenario, tables, eps);
    if (!report.ok) throw ValidationError(report.message);
    EmpiricalModel model(std::move(scenario), std::move(tables));
    model.clamped_entries_ = report.clamped_entries;
    return model;
}

/// v^e: the flattened table in canonical local-assignment order.
template <typename T>
ModelVector<T> to_vector(const EmpiricalModel<T>& e) {
    ModelVector<T> v;
    v.reserve(e.scenario().num_local_assignments());
    for (const auto& table : e.tables()) v.insert(v.end(), table.begin(), table.end());
    return v;
}

/// Inverse of to_vector (no validation): slices a flat vector into
/// per-context tables.
template <typename T>
std::vector<std::vector<T>> tables_from_vector(const Scenario& scn, const std::vector<T>& v) {
    if (v.size() != scn.num_local_assignments())
        throw DomainMismatch("model vector has wrong length");
    std::vector<std::vector<T>> tables(scn.num_contexts());
    for (std::size_t c = 0; c < scn.num_contexts(); ++c) {
        auto begin = v.begin() + static_cast<std::ptrdiff_t>(scn.context_block_offset(c));
        tables[c].assign(begin, begin + static_cast<std::ptrdiff_t>(scn.context_block_size(c)));
    }
    return tables;
}

/// The deterministic model of a global assignment: each context table is
/// the point mass at g restricted to that context. Its vector form is the
/// incidence column of g.
template <typename T>
EmpiricalModel<T> deterministic_model(const ScenarioPtr& scenario, std::size_t g) {
    const Scenario& scn = *scenario;
    std::vector<std::vector<T>> tables(scn.num_contexts());
    for (std::size_t c = 0; c < scn.num_contexts(); ++c) {
        tables[c].assign(scn.context_block_size(c), T(0));
        tables[c][scn.restrict_global(g, c)] = T(1);
    }
    return EmpiricalModel<T>::unchecked(scenario, std::move(tables));
}

template <typename T>
EmpiricalModel<T> deterministic_model(const ScenarioPtr& scenario, const GlobalAssignment& g) {
    return deterministic_model<T>(scenario, encode_global(*scenario, g));
}

template <typename T>
EmpiricalModel<T> uniform_model(const ScenarioPtr& scenario) {
    std::vector<std::vector<T>> tables(scenario->num_contexts());
    for (std::size_t c = 0; c < tables.size(); ++c) {
        std::size_t k = scenario->context_block_size(c);
        tables[c].assign(k, T(1) / T(static_cast<long>(k)));
    }
    return EmpiricalModel<T>::unchecked(scenario, std::move(tables));
}

/// Convex mixture at each context: lambda * e1 + (1 - lambda) * e2.
template <typename T>
EmpiricalModel<T> mix(const EmpiricalModel<T>& e1, const EmpiricalModel<T>& e2, const T& lambda) {
    if (e1.scenario() != e2.scenario())
        throw ScenarioMismatch("mix requires models on the same scenario");
    if (lambda < T(0) || lambda > T(1))
        throw DomainMismatch("mixing weight must lie in [0,1]");
    std::vector<std::vector<T>> tables(e1.tables().size());
    for (std::size_t c = 0; c < tables.size(); ++c) {
        tables[c].resize(e1.tables()[c].size());
        for (std::size_t s = 0; s < tables[c].size(); ++s)
            tables[c][s] =
                lambda * e1.probability(c, s) + (T(1) - lambda) * e2.probability(c, s);
    }
    return EmpiricalModel<T>::unchecked(e1.scenario_ptr(), std::move(tables));
}

/// Direct support search: true iff no global assignment has strictly
/// positive probability (> eps) at every context restriction. Kept
/// independent of the LP path so the two can cross-validate.
template <typename T>
bool is_strongly_contextual(const EmpiricalModel<T>& e,
                            T eps = num::traits<T>::default_eps(),
                            std::size_t max_globals = kDefaultGlobalGuard) {
    const Scenario& scn = e.scenario();
    std::size_t n = scn.num_global_assignments();
    if (n > max_globals)
        throw SizeLimitExceeded("support search over " + std::to_string(n) +
                                " global assignments exceeds guard");
    for (std::size_t g = 0; g < n; ++g) {
        bool consistent = true;
        for (std::size_t c = 0; c < scn.num_contexts() && consistent; ++c)
            consistent = e.probability(c, scn.restrict_global(g, c)) > eps;
        if (consistent) return false;
    }
    return true;
}

}  // namespace ctxfrac
