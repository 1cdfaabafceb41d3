#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "ctxfrac/empirical.hpp"
#include "ctxfrac/scenario.hpp"

namespace ctxfrac {

/// Deterministic uniform [0,1) independent of libstdc++ distribution
/// internals, so seeded corpora reproduce across platforms.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Random small scenario: up to `max_measurements` measurements, up to
/// `max_outcomes` outcomes, a handful of distinct contexts covering every
/// measurement.
inline ScenarioPtr random_scenario(std::mt19937_64& rng, std::size_t max_measurements = 4,
                                   std::size_t max_outcomes = 3) {
    std::size_t nx = 1 + rng() % max_measurements;
    std::size_t no = 1 + rng() % max_outcomes;
    std::vector<std::string> measurements, outcomes;
    for (std::size_t i = 0; i < nx; ++i) measurements.push_back("m" + std::to_string(i));
    for (std::size_t i = 0; i < no; ++i) outcomes.push_back(std::to_string(i));

    std::vector<std::vector<std::size_t>> contexts;
    auto try_add = [&](std::vector<std::size_t> ctx) {
        if (ctx.empty()) return;
        std::sort(ctx.begin(), ctx.end());
        ctx.erase(std::unique(ctx.begin(), ctx.end()), ctx.end());
        if (std::find(contexts.begin(), contexts.end(), ctx) == contexts.end())
            contexts.push_back(std::move(ctx));
    };
    std::size_t want = 1 + rng() % 4;
    for (std::size_t i = 0; i < want; ++i) {
        std::vector<std::size_t> ctx;
        for (std::size_t m = 0; m < nx; ++m)
            if (uniform01(rng) < 0.5) ctx.push_back(m);
        try_add(std::move(ctx));
    }
    std::vector<bool> covered(nx, false);
    for (const auto& ctx : contexts)
        for (std::size_t m : ctx) covered[m] = true;
    for (std::size_t m = 0; m < nx; ++m)
        if (!covered[m]) try_add({m});
    return make_scenario(
        Scenario::create_indexed(std::move(measurements), std::move(outcomes), std::move(contexts)));
}

/// Random point of the non-contextual polytope: the image of a strictly
/// positive random distribution on global assignments.
inline std::vector<double> random_noncontextual_vector(const Scenario& scn,
                                                       std::mt19937_64& rng) {
    std::size_t n = scn.num_global_assignments();
    std::vector<double> d(n);
    double total = 0;
    for (double& x : d) {
        x = -std::log(1.0 - uniform01(rng));  // exponential, strictly positive
        total += x;
    }
    for (double& x : d) x /= total;
    std::vector<double> v(scn.num_local_assignments(), 0.0);
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t c = 0; c < scn.num_contexts(); ++c)
            v[scn.context_block_offset(c) + scn.restrict_global(g, c)] += d[g];
    return v;
}

inline EmpiricalModel<double> random_noncontextual_model(const ScenarioPtr& scenario,
                                                         std::mt19937_64& rng) {
    auto v = random_noncontextual_vector(*scenario, rng);
    return EmpiricalModel<double>::create(scenario, tables_from_vector(*scenario, v));
}

/// Basis of the linear space of no-signalling-preserving perturbations:
/// vectors whose per-context blocks sum to zero and whose overlapping
/// marginals agree. Computed by Gaussian elimination on the constraint
/// matrix; adding any member to a model vector keeps it inside the
/// no-signalling affine subspace.
inline std::vector<std::vector<double>> ns_nullspace_basis(const Scenario& scn) {
    std::size_t m = scn.num_local_assignments();
    std::vector<std::vector<double>> rows;
    for (std::size_t c = 0; c < scn.num_contexts(); ++c) {
        std::vector<double> row(m, 0.0);
        for (std::size_t s = 0; s < scn.context_block_size(c); ++s)
            row[scn.context_block_offset(c) + s] = 1.0;
        rows.push_back(std::move(row));
    }
    for (std::size_t a = 0; a < scn.num_contexts(); ++a) {
        for (std::size_t b = a + 1; b < scn.num_contexts(); ++b) {
            const auto& ca = scn.contexts()[a];
            const auto& cb = scn.contexts()[b];
            std::vector<std::size_t> overlap;
            std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(),
                                  std::back_inserter(overlap));
            if (overlap.empty()) continue;
            // one equation per joint outcome of the overlap
            std::size_t width = detail::pow_checked(scn.num_outcomes(), overlap.size());
            for (std::size_t t = 0; t < width; ++t) rows.emplace_back(m, 0.0);
            std::size_t base = rows.size() - width;
            auto accumulate = [&](std::size_t c, const std::vector<std::size_t>& ctx,
                                  double sign) {
                std::vector<std::size_t> positions;
                for (std::size_t mm : overlap)
                    positions.push_back(static_cast<std::size_t>(
                        std::find(ctx.begin(), ctx.end(), mm) - ctx.begin()));
                for (std::size_t s = 0; s < scn.context_block_size(c); ++s) {
                    std::size_t t = 0;
                    for (std::size_t pos : positions)
                        t = t * scn.num_outcomes() + scn.local_outcome(c, s, pos);
                    rows[base + t][scn.context_block_offset(c) + s] += sign;
                }
            };
            accumulate(a, ca, 1.0);
            accumulate(b, cb, -1.0);
        }
    }

    // Row echelon with partial pivoting; free columns span the null space.
    const double tol = 1e-10;
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m && rank < rows.size(); ++col) {
        std::size_t best = rank;
        for (std::size_t r = rank + 1; r < rows.size(); ++r)
            if (std::fabs(rows[r][col]) > std::fabs(rows[best][col])) best = r;
        if (std::fabs(rows[best][col]) < tol) continue;
        std::swap(rows[rank], rows[best]);
        double inv = 1.0 / rows[rank][col];
        for (double& x : rows[rank]) x *= inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank) continue;
            double f = rows[r][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) rows[r][j] -= f * rows[rank][j];
        }
        pivot_col.push_back(col);
        ++rank;
    }

    std::vector<std::vector<double>> basis;
    std::vector<bool> is_pivot(m, false);
    for (std::size_t col : pivot_col) is_pivot[col] = true;
    for (std::size_t col = 0; col < m; ++col) {
        if (is_pivot[col]) continue;
        std::vector<double> x(m, 0.0);
        x[col] = 1.0;
        for (std::size_t r = 0; r < rank; ++r) x[pivot_col[r]] = -rows[r][col];
        basis.push_back(std::move(x));
    }
    return basis;
}

/// Random point of the no-signalling polytope: a strictly interior
/// non-contextual point plus a random no-signalling-preserving
/// perturbation, shrunk until every entry stays nonnegative, then
/// re-validated. Can land outside the non-contextual polytope.
inline EmpiricalModel<double> random_no_signalling_model(const ScenarioPtr& scenario,
                                                         std::mt19937_64& rng) {
    const Scenario& scn = *scenario;
    std::vector<double> v = random_noncontextual_vector(scn, rng);
    auto basis = ns_nullspace_basis(scn);
    if (!basis.empty()) {
        std::vector<double> pert(v.size(), 0.0);
        for (const auto& dir : basis) {
            double w = uniform01(rng) - 0.5;
            for (std::size_t i = 0; i < pert.size(); ++i) pert[i] += w * dir[i];
        }
        double lambda_max = 1.0;
        bool shrinking = false;
        for (std::size_t i = 0; i < pert.size(); ++i) {
            if (pert[i] < -1e-15) {
                double cap = v[i] / -pert[i];
                if (!shrinking || cap < lambda_max) lambda_max = cap;
                shrinking = true;
            }
        }
        double theta = uniform01(rng) * lambda_max;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += theta * pert[i];
    }
    return EmpiricalModel<double>::create(scenario, tables_from_vector(scn, v));
}

}  // namespace ctxfrac
