#pragma once

#include <bit>
#include <string>
#include <vector>

#include "ctxfrac/empirical.hpp"
#include "ctxfrac/errors.hpp"
#include "ctxfrac/scenario.hpp"

namespace ctxfrac {

/// The (n,2,2) Bell scenario: parties a, b, c, ... with measurements a1/a2
/// etc., two outcomes, and one context per choice of setting for every
/// party. Contexts are listed in binary order of the settings vector with
/// the first party most significant, so for n = 2 the order is
/// a1b1, a1b2, a2b1, a2b2.
inline ScenarioPtr bell_scenario(std::size_t parties) {
    if (parties == 0 || parties > 26)
        throw InvalidScenario("party count out of range");
    std::vector<std::string> measurements;
    for (std::size_t p = 0; p < parties; ++p) {
        std::string who(1, static_cast<char>('a' + p));
        measurements.push_back(who + "1");
        measurements.push_back(who + "2");
    }
    std::vector<std::vector<std::string>> contexts;
    std::size_t count = detail::pow_checked(2, parties);
    for (std::size_t q = 0; q < count; ++q) {
        std::vector<std::string> ctx;
        for (std::size_t p = 0; p < parties; ++p) {
            std::size_t setting = (q >> (parties - 1 - p)) & 1;
            ctx.push_back(measurements[2 * p + setting]);
        }
        contexts.push_back(std::move(ctx));
    }
    return make_scenario(Scenario::create(std::move(measurements), {"0", "1"}, contexts));
}

namespace detail {

template <typename T>
std::vector<T> correlated_table(bool correlated) {
    T half = T(1) / T(2);
    if (correlated) return {half, T(0), T(0), half};
    return {T(0), half, half, T(0)};
}

}  // namespace detail

/// The Popescu-Rohrlich box: perfectly correlated on a1b1, a1b2 and a2b1,
/// perfectly anticorrelated on a2b2. Strongly contextual.
template <typename T>
EmpiricalModel<T> pr_box() {
    std::vector<std::vector<T>> tables{
        detail::correlated_table<T>(true), detail::correlated_table<T>(true),
        detail::correlated_table<T>(true), detail::correlated_table<T>(false)};
    return EmpiricalModel<T>::create(bell_scenario(2), std::move(tables));
}

/// The CHSH quantum model: the table produced by equatorial measurements
/// at angles 0 (first setting) and pi/3 (second) on the two-qubit state
/// with perfectly correlated Z outcomes. Correlators are 1, 1/2, 1/2, -1/2.
template <typename T>
EmpiricalModel<T> chsh_model() {
    T e8 = T(1) / T(8);
    T t8 = T(3) / T(8);
    T half = T(1) / T(2);
    std::vector<std::vector<T>> tables{
        {half, T(0), T(0), half}, {t8, e8, e8, t8}, {t8, e8, e8, t8}, {e8, t8, t8, e8}};
    return EmpiricalModel<T>::create(bell_scenario(2), std::move(tables));
}

/// The tripartite GHZ-Mermin model (settings: X first, Y second). Contexts
/// with zero Y's carry the even-parity outcomes uniformly, contexts with
/// two Y's the odd-parity ones, and the remaining contexts are uniform.
template <typename T>
EmpiricalModel<T> ghz_mermin_model() {
    std::vector<std::vector<T>> tables;
    T quarter = T(1) / T(4);
    T eighth = T(1) / T(8);
    for (std::size_t q = 0; q < 8; ++q) {
        unsigned ys = std::popcount(static_cast<unsigned>(q));
        std::vector<T> table(8, T(0));
        for (std::size_t s = 0; s < 8; ++s) {
            unsigned parity = std::popcount(static_cast<unsigned>(s)) % 2;
            if (ys == 0)
                table[s] = parity == 0 ? quarter : T(0);
            else if (ys == 2)
                table[s] = parity == 1 ? quarter : T(0);
            else
                table[s] = eighth;
        }
        tables.push_back(std::move(table));
    }
    return EmpiricalModel<T>::create(bell_scenario(3), std::move(tables));
}

/// Builtin models by id, so tests and docs need no fixture files.
template <typename T>
EmpiricalModel<T> builtin_model(const std::string& id) {
    if (id == "pr-box") return pr_box<T>();
    if (id == "chsh") return chsh_model<T>();
    if (id == "ghz3-mermin") return ghz_mermin_model<T>();
    if (id == "uniform-n2") return uniform_model<T>(bell_scenario(2));
    throw ParseError("unknown builtin model id '" + id + "'");
}

inline const std::vector<std::string>& builtin_model_ids() {
    static const std::vector<std::string> ids{"pr-box", "chsh", "ghz3-mermin", "uniform-n2"};
    return ids;
}

}  // namespace ctxfrac
