#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "ctxfrac/empirical.hpp"
#include "ctxfrac/errors.hpp"
#include "ctxfrac/numeric.hpp"
#include "ctxfrac/scenario.hpp"

namespace ctxfrac {

/// A context-preserving map f between measurement sets: every source
/// context lands inside some target context. Pulling models back along f
/// covers restriction to fewer measurements, replication, and relabelling.
class MeasurementTranslation {
  public:
    static MeasurementTranslation create(ScenarioPtr source, ScenarioPtr target,
                                         std::vector<std::size_t> map) {
        if (source->outcomes() != target->outcomes())
            throw OutcomeMismatch("translation requires a shared outcome set");
        if (map.size() != source->num_measurements())
            throw DomainMismatch("translation map must be total on the source measurements");
        for (std::size_t x : map)
            if (x >= target->num_measurements())
                throw DomainMismatch("translation map hits an unknown target measurement");

        MeasurementTranslation t;
        t.source_ = std::move(source);
        t.target_ = std::move(target);
        t.map_ = std::move(map);
        for (std::size_t c = 0; c < t.source_->num_contexts(); ++c) {
            std::vector<std::size_t> image;
            for (std::size_t x : t.source_->contexts()[c]) image.push_back(t.map_[x]);
            std::sort(image.begin(), image.end());
            image.erase(std::unique(image.begin(), image.end()), image.end());
            std::size_t cover = t.target_->num_contexts();
            for (std::size_t tc = 0; tc < t.target_->num_contexts(); ++tc) {
                const auto& cand = t.target_->contexts()[tc];
                if (std::includes(cand.begin(), cand.end(), image.begin(), image.end())) {
                    cover = tc;
                    break;
                }
            }
            if (cover == t.target_->num_contexts())
                throw NotContextPreserving("image of source context " + std::to_string(c) +
                                           " is inside no target context");
            t.images_.push_back(std::move(image));
            t.covers_.push_back(cover);
        }
        return t;
    }

    const ScenarioPtr& source() const { return source_; }
    const ScenarioPtr& target() const { return target_; }
    const std::vector<std::size_t>& map() const { return map_; }
    const std::vector<std::size_t>& image_of_context(std::size_t c) const { return images_[c]; }
    std::size_t covering_context(std::size_t c) const { return covers_[c]; }

  private:
    MeasurementTranslation() = default;
    ScenarioPtr source_;
    ScenarioPtr target_;
    std::vector<std::size_t> map_;
    std::vector<std::vector<std::size_t>> images_;
    std::vector<std::size_t> covers_;
};

/// f*e: the pullback of a model on the target scenario. Each source
/// context reads off the marginal of its image; assignments that force two
/// identified measurements to disagree get probability zero.
template <typename T>
EmpiricalModel<T> translate(const MeasurementTranslation& f, const EmpiricalModel<T>& e) {
    if (*f.target() != e.scenario())
        throw ScenarioMismatch("model does not live on the translation's target scenario");
    const Scenario& src = *f.source();
    const Scenario& tgt = e.scenario();
    std::vector<std::vector<T>> tables(src.num_contexts());
    for (std::size_t c = 0; c < src.num_contexts(); ++c) {
        const auto& image = f.image_of_context(c);
        std::size_t cover = f.covering_context(c);
        auto marg =
            marginalize(e.tables()[cover], tgt.contexts()[cover], image, tgt.num_outcomes());
        const auto& ctx = src.contexts()[c];
        tables[c].assign(src.context_block_size(c), T(0));
        std::vector<std::size_t> slot(ctx.size());
        for (std::size_t k = 0; k < ctx.size(); ++k) {
            std::size_t y = f.map()[ctx[k]];
            slot[k] = static_cast<std::size_t>(
                std::find(image.begin(), image.end(), y) - image.begin());
        }
        constexpr std::size_t unset = static_cast<std::size_t>(-1);
        for (std::size_t s = 0; s < tables[c].size(); ++s) {
            std::vector<std::size_t> t(image.size(), unset);
            bool consistent = true;
            for (std::size_t k = 0; k < ctx.size() && consistent; ++k) {
                std::size_t outcome = src.local_outcome(c, s, k);
                if (t[slot[k]] == unset)
                    t[slot[k]] = outcome;
                else
                    consistent = t[slot[k]] == outcome;
            }
            if (!consistent) continue;
            std::size_t idx = 0;
            for (std::size_t v : t) idx = idx * tgt.num_outcomes() + v;
            tables[c][s] = marg[idx];
        }
    }
    return EmpiricalModel<T>::create(f.source(), std::move(tables));
}

/// A total map of outcome labels O' -> O.
struct OutcomeCoarseGraining {
    std::vector<std::size_t> map;             // source outcome index -> target index
    std::vector<std::string> target_outcomes;

    static OutcomeCoarseGraining create(std::vector<std::size_t> map,
                                        std::vector<std::string> target_outcomes) {
        for (std::size_t o : map)
            if (o >= target_outcomes.size())
                throw DomainMismatch("coarse-graining hits an unknown target outcome");
        return OutcomeCoarseGraining{std::move(map), std::move(target_outcomes)};
    }
};

/// e/h: push outcomes forward along h, summing the fibres.
template <typename T>
EmpiricalModel<T> coarse_grain(const EmpiricalModel<T>& e, const OutcomeCoarseGraining& h) {
    const Scenario& scn = e.scenario();
    if (h.map.size() != scn.num_outcomes())
        throw DomainMismatch("coarse-graining must be total on the source outcomes");
    auto scenario = make_scenario(Scenario::create_indexed(
        scn.measurements(), h.target_outcomes, scn.contexts()));
    const Scenario& out = *scenario;
    std::vector<std::vector<T>> tables(scn.num_contexts());
    for (std::size_t c = 0; c < scn.num_contexts(); ++c) {
        tables[c].assign(out.context_block_size(c), T(0));
        std::size_t width = scn.contexts()[c].size();
        for (std::size_t s = 0; s < scn.context_block_size(c); ++s) {
            std::size_t idx = 0;
            for (std::size_t k = 0; k < width; ++k)
                idx = idx * out.num_outcomes() + h.map[scn.local_outcome(c, s, k)];
            tables[c][idx] += e.probability(c, s);
        }
    }
    return EmpiricalModel<T>::create(std::move(scenario), std::move(tables));
}

namespace detail {

inline ScenarioPtr disjoint_union_scenario(const Scenario& s1, const Scenario& s2,
                                           bool product_contexts) {
    if (s1.outcomes() != s2.outcomes())
        throw OutcomeMismatch("combined scenarios must share the outcome set");
    std::vector<std::string> measurements;
    for (const auto& x : s1.measurements()) measurements.push_back("1:" + x);
    for (const auto& x : s2.measurements()) measurements.push_back("2:" + x);
    std::size_t offset = s1.num_measurements();
    std::vector<std::vector<std::size_t>> contexts;
    if (product_contexts) {
        for (const auto& c1 : s1.contexts())
            for (const auto& c2 : s2.contexts()) {
                std::vector<std::size_t> ctx = c1;
                for (std::size_t x : c2) ctx.push_back(x + offset);
                contexts.push_back(std::move(ctx));
            }
    } else {
        for (const auto& c1 : s1.contexts()) contexts.push_back(c1);
        for (const auto& c2 : s2.contexts()) {
            std::vector<std::size_t> ctx;
            for (std::size_t x : c2) ctx.push_back(x + offset);
            contexts.push_back(std::move(ctx));
        }
    }
    return make_scenario(Scenario::create_indexed(std::move(measurements), s1.outcomes(),
                                                  std::move(contexts)));
}

}  // namespace detail

/// Controlled choice e1 & e2 on the disjoint union of the scenarios
/// (labels tagged "1:"/"2:"): each context keeps its source table.
/// NCF(e1 & e2) = min(NCF(e1), NCF(e2)).
template <typename T>
EmpiricalModel<T> choice(const EmpiricalModel<T>& e1, const EmpiricalModel<T>& e2) {
    auto scenario = detail::disjoint_union_scenario(e1.scenario(), e2.scenario(), false);
    std::vector<std::vector<T>> tables = e1.tables();
    tables.insert(tables.end(), e2.tables().begin(), e2.tables().end());
    return EmpiricalModel<T>::create(std::move(scenario), std::move(tables));
}

/// Product e1 (x) e2: contexts are pairwise unions and tables multiply.
/// Global assignments multiply, so this is the scalability cliff — guarded.
/// NCF(e1 (x) e2) = NCF(e1) * NCF(e2).
template <typename T>
EmpiricalModel<T> product(const EmpiricalModel<T>& e1, const EmpiricalModel<T>& e2,
                          std::size_t max_globals = kDefaultGlobalGuard) {
    const Scenario& s1 = e1.scenario();
    const Scenario& s2 = e2.scenario();
    std::size_t n1 = s1.num_global_assignments();
    std::size_t n2 = s2.num_global_assignments();
    if (n2 != 0 && n1 > max_globals / n2)
        throw SizeLimitExceeded("product scenario exceeds the global-assignment guard");
    auto scenario = detail::disjoint_union_scenario(s1, s2, true);
    std::vector<std::vector<T>> tables;
    tables.reserve(s1.num_contexts() * s2.num_contexts());
    for (std::size_t c1 = 0; c1 < s1.num_contexts(); ++c1)
        for (std::size_t c2 = 0; c2 < s2.num_contexts(); ++c2) {
            std::size_t k2 = s2.context_block_size(c2);
            std::vector<T> table(s1.context_block_size(c1) * k2);
            for (std::size_t a = 0; a < s1.context_block_size(c1); ++a)
                for (std::size_t b = 0; b < k2; ++b)
                    table[a * k2 + b] = e1.probability(c1, a) * e2.probability(c2, b);
            tables.push_back(std::move(table));
        }
    return EmpiricalModel<T>::create(std::move(scenario), std::move(tables));
}

/// A coupling of two subprobability distributions: weights over the
/// product carrier, row-major (first carrier indexes rows).
template <typename T>
struct Coupling {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<T> weights;

    T weight() const {
        T total = T(0);
        for (const T& w : weights) total += w;
        return total;
    }
    std::vector<T> row_marginal() const {
        std::vector<T> out(rows, T(0));
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) out[i] += weights[i * cols + j];
        return out;
    }
    std::vector<T> col_marginal() const {
        std::vector<T> out(cols, T(0));
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) out[j] += weights[i * cols + j];
        return out;
    }
};

/// Monotone (quantile) coupling via cumulative-interval overlap, after
/// shrinking the heavier marginal. The output weight is min(|bS|, |bT|),
/// both marginals are dominated by the inputs, and in the equal-weight
/// case they are reproduced exactly. The carrier order is the canonical
/// index order.
template <typename T>
Coupling<T> couple_subdistributions(const SubDistribution<T>& bs, const SubDistribution<T>& bt) {
    Coupling<T> out;
    out.rows = bs.weights.size();
    out.cols = bt.weights.size();
    out.weights.assign(out.rows * out.cols, T(0));
    T ws = bs.weight();
    T wt = bt.weight();
    if (ws == T(0) || wt == T(0)) return out;

    std::vector<T> s = bs.weights;
    std::vector<T> t = bt.weights;
    if (ws < wt) {
        T shrink = ws / wt;
        for (T& x : t) x *= shrink;
    } else if (wt < ws) {
        T shrink = wt / ws;
        for (T& x : s) x *= shrink;
    }

    auto fences = [](const std::vector<T>& weights) {
        std::vector<T> left(weights.size()), right(weights.size());
        T acc = T(0);
        for (std::size_t i = 0; i < weights.size(); ++i) {
            left[i] = acc;
            acc += weights[i];
            right[i] = acc;
        }
        return std::pair(left, right);
    };
    auto [ls, rs] = fences(s);
    auto [lt, rt] = fences(t);
    for (std::size_t i = 0; i < out.rows; ++i)
        for (std::size_t j = 0; j < out.cols; ++j) {
            T lo = std::max(ls[i], lt[j]);
            T hi = std::min(rs[i], rt[j]);
            if (hi > lo) out.weights[i * out.cols + j] = hi - lo;
        }
    return out;
}

}  // namespace ctxfrac
