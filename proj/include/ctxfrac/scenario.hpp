#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctxfrac/errors.hpp"

namespace ctxfrac {

/// Default cap on the number of global assignments (LP columns). Dense
/// enumeration is intentional at desk scale; callers may override.
inline constexpr std::size_t kDefaultGlobalGuard = std::size_t(1) << 20;

/// Default cap on incidence-matrix entries (m * n).
inline constexpr std::size_t kDefaultIncidenceGuard = std::size_t(1) << 26;

namespace detail {

/// base^exp, throwing if the result cannot be represented.
inline std::size_t pow_checked(std::size_t base, std::size_t exp) {
    std::size_t result = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base != 0 && result > std::numeric_limits<std::size_t>::max() / base)
            throw SizeLimitExceeded("assignment count overflows 64 bits");
        result *= base;
    }
    return result;
}

}  // namespace detail

/// A measurement scenario: measurements X, outcomes O shared by every
/// measurement, and a family M of contexts (subsets of X that can be
/// measured jointly). Contexts are stored as given: overlapping, nested or
/// otherwise redundant contexts are accepted, and M is not forced to be an
/// antichain.
///
/// All enumeration orders are canonical and stable: measurements and
/// outcomes in declared order, assignments lexicographic with the earliest
/// measurement most significant. This fixes the LP column order, so optimal
/// vertices are reproducible.
class Scenario {
  public:
    /// Builds and validates a scenario. Contexts are given as lists of
    /// measurement labels; within each context measurements are reordered
    /// to measurement-list order.
    static Scenario create(std::vector<std::string> measurements,
                           std::vector<std::string> outcomes,
                           const std::vector<std::vector<std::string>>& contexts) {
        std::unordered_map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < measurements.size(); ++i) {
            if (!index.emplace(measurements[i], i).second)
                throw InvalidScenario("duplicate measurement label '" + measurements[i] + "'");
        }
        std::vector<std::vector<std::size_t>> ctx_indices;
        ctx_indices.reserve(contexts.size());
        for (const auto& ctx : contexts) {
            std::vector<std::size_t> c;
            c.reserve(ctx.size());
            for (const auto& label : ctx) {
                auto it = index.find(label);
                if (it == index.end())
                    throw InvalidScenario("context mentions unknown measurement '" + label + "'");
                c.push_back(it->second);
            }
            ctx_indices.push_back(std::move(c));
        }
        return create_indexed(std::move(measurements), std::move(outcomes), std::move(ctx_indices));
    }

    /// Same as create(), with contexts already given as measurement indices.
    static Scenario create_indexed(std::vector<std::string> measurements,
                                   std::vector<std::string> outcomes,
                                   std::vector<std::vector<std::size_t>> contexts) {
        Scenario s;
        s.measurements_ = std::move(measurements);
        s.outcomes_ = std::move(outcomes);
        s.contexts_ = std::move(contexts);
        s.validate();
        s.index_blocks();
        return s;
    }

    const std::vector<std::string>& measurements() const { return measurements_; }
    const std::vector<std::string>& outcomes() const { return outcomes_; }
    const std::vector<std::vector<std::size_t>>& contexts() const { return contexts_; }

    std::size_t num_measurements() const { return measurements_.size(); }
    std::size_t num_outcomes() const { return outcomes_.size(); }
    std::size_t num_contexts() const { return contexts_.size(); }

    /// n = |O|^|X|.
    std::size_t num_global_assignments() const {
        return detail::pow_checked(num_outcomes(), num_measurements());
    }

    /// m = sum over contexts of |O|^|C|.
    std::size_t num_local_assignments() const { return block_offsets_.back(); }

    /// Row index of the first local assignment of context c.
    std::size_t context_block_offset(std::size_t c) const { return block_offsets_[c]; }

    /// |O|^|C|, the number of local assignments of context c.
    std::size_t context_block_size(std::size_t c) const {
        return block_offsets_[c + 1] - block_offsets_[c];
    }

    /// Outcome index assigned to `measurement` by global assignment `g`
    /// (global assignments are base-|O| numerals, first measurement most
    /// significant).
    std::size_t global_outcome(std::size_t g, std::size_t measurement) const {
        std::size_t shift = num_measurements() - 1 - measurement;
        std::size_t divisor = 1;
        for (std::size_t i = 0; i < shift; ++i) divisor *= num_outcomes();
        return (g / divisor) % num_outcomes();
    }

    /// Local-assignment index (within context c's block) of g restricted
    /// to that context.
    std::size_t restrict_global(std::size_t g, std::size_t c) const {
        const auto& ctx = contexts_[c];
        std::size_t local = 0;
        for (std::size_t k = 0; k < ctx.size(); ++k)
            local = local * num_outcomes() + global_outcome(g, ctx[k]);
        return local;
    }

    /// Outcome index at position k of a local assignment of context c.
    std::size_t local_outcome(std::size_t c, std::size_t local, std::size_t k) const {
        std::size_t shift = contexts_[c].size() - 1 - k;
        std::size_t divisor = 1;
        for (std::size_t i = 0; i < shift; ++i) divisor *= num_outcomes();
        return (local / divisor) % num_outcomes();
    }

    bool operator==(const Scenario& other) const {
        return measurements_ == other.measurements_ && outcomes_ == other.outcomes_ &&
               contexts_ == other.contexts_;
    }
    bool operator!=(const Scenario& other) const { return !(*this == other); }

  private:
    Scenario() = default;

    void validate() const {
        if (outcomes_.empty()) throw InvalidScenario("outcome set is empty");
        {
            auto sorted = outcomes_;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw InvalidScenario("duplicate outcome label");
        }
        if (measurements_.empty()) throw InvalidScenario("measurement set is empty");
        if (contexts_.empty()) throw InvalidScenario("context family is empty");
        std::vector<bool> covered(measurements_.size(), false);
        for (const auto& ctx : contexts_) {
            if (ctx.empty()) throw InvalidScenario("empty context");
            for (std::size_t m : ctx) {
                if (m >= measurements_.size())
                    throw InvalidScenario("context measurement index out of range");
                covered[m] = true;
            }
            auto sorted = ctx;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw InvalidScenario("repeated measurement within a context");
        }
        for (std::size_t i = 0; i < covered.size(); ++i)
            if (!covered[i])
                throw InvalidScenario("measurement '" + measurements_[i] +
                                      "' appears in no context");
        for (std::size_t i = 0; i < contexts_.size(); ++i) {
            auto a = contexts_[i];
            std::sort(a.begin(), a.end());
            for (std::size_t j = i + 1; j < contexts_.size(); ++j) {
                auto b = contexts_[j];
                std::sort(b.begin(), b.end());
                if (a == b) throw InvalidScenario("duplicate context");
            }
        }
    }

    void index_blocks() {
        // Contexts keep measurement-list order internally.
        for (auto& ctx : contexts_) std::sort(ctx.begin(), ctx.end());
        block_offsets_.assign(1, 0);
        for (const auto& ctx : contexts_)
            block_offsets_.push_back(block_offsets_.back() +
                                     detail::pow_checked(num_outcomes(), ctx.size()));
    }

    std::vector<std::string> measurements_;
    std::vector<std::string> outcomes_;
    std::vector<std::vector<std::size_t>> contexts_;
    std::vector<std::size_t> block_offsets_;
};

using ScenarioPtr = std::shared_ptr<const Scenario>;

inline ScenarioPtr make_scenario(Scenario s) {
    return std::make_shared<const Scenario>(std::move(s));
}

/// A total assignment of outcomes to all measurements, as outcome indices
/// in measurement order.
using GlobalAssignment = std::vector<std::size_t>;

/// One row label of the incidence matrix: a context together with an
/// assignment of outcomes to exactly that context's measurements.
struct LocalAssignment {
    std::size_t context;
    std::vector<std::size_t> outcomes;  // one per context measurement, in context order
};

inline GlobalAssignment decode_global(const Scenario& scn, std::size_t g) {
    GlobalAssignment out(scn.num_measurements());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = scn.global_outcome(g, j);
    return out;
}

inline std::size_t encode_global(const Scenario& scn, const GlobalAssignment& g) {
    if (g.size() != scn.num_measurements())
        throw DomainMismatch("global assignment must cover every measurement");
    std::size_t idx = 0;
    for (std::size_t outcome : g) {
        if (outcome >= scn.num_outcomes()) throw DomainMismatch("outcome index out of range");
        idx = idx * scn.num_outcomes() + outcome;
    }
    return idx;
}

/// All global assignments in lexicographic order (declared measurement and
/// outcome orders). Guarded: |O|^|X| must not exceed `max_globals`.
inline std::vector<GlobalAssignment> enumerate_global_assignments(
    const Scenario& scn, std::size_t max_globals = kDefaultGlobalGuard) {
    std::size_t n = scn.num_global_assignments();
    if (n > max_globals)
        throw SizeLimitExceeded("global assignment count " + std::to_string(n) +
                                " exceeds guard " + std::to_string(max_globals));
    std::vector<GlobalAssignment> out;
    out.reserve(n);
    for (std::size_t g = 0; g < n; ++g) out.push_back(decode_global(scn, g));
    return out;
}

/// All local assignments: contexts in declared order, assignments
/// lexicographic within each context.
inline std::vector<LocalAssignment> enumerate_local_assignments(const Scenario& scn) {
    std::vector<LocalAssignment> out;
    out.reserve(scn.num_local_assignments());
    for (std::size_t c = 0; c < scn.num_contexts(); ++c) {
        std::size_t width = scn.contexts()[c].size();
        for (std::size_t local = 0; local < scn.context_block_size(c); ++local) {
            LocalAssignment la;
            la.context = c;
            la.outcomes.resize(width);
            for (std::size_t k = 0; k < width; ++k) la.outcomes[k] = scn.local_outcome(c, local, k);
            out.push_back(std::move(la));
        }
    }
    return out;
}

/// The m x n 0/1 matrix with entry[<C,s>, g] = 1 iff g restricted to C
/// equals s. Rows follow the canonical local-assignment order, columns the
/// canonical global order.
struct IncidenceMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> entries;  // row-major

    std::uint8_t at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
};

inline IncidenceMatrix build_incidence_matrix(const Scenario& scn,
                                              std::size_t max_globals = kDefaultGlobalGuard,
                                              std::size_t max_entries = kDefaultIncidenceGuard) {
    std::size_t n = scn.num_global_assignments();
    std::size_t m = scn.num_local_assignments();
    if (n > max_globals)
        throw SizeLimitExceeded("global assignment count " + std::to_string(n) +
                                " exceeds guard " + std::to_string(max_globals));
    if (m != 0 && n > max_entries / m)
        throw SizeLimitExceeded("incidence matrix size " + std::to_string(m) + "x" +
                                std::to_string(n) + " exceeds guard");
    IncidenceMatrix mat;
    mat.rows = m;
    mat.cols = n;
    mat.entries.assign(m * n, 0);
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t c = 0; c < scn.num_contexts(); ++c) {
            std::size_t row = scn.context_block_offset(c) + scn.restrict_global(g, c);
            mat.entries[row * n + g] = 1;
        }
    return mat;
}

}  // namespace ctxfrac
