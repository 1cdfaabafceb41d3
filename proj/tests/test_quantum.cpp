#include <catch2/catch_amalgamated.hpp>

#include "ctxfrac/fraction.hpp"
#include "ctxfrac/quantum.hpp"

using namespace ctxfrac;
using Catch::Matchers::WithinAbs;

namespace {

double correlator(const EmpiricalModel<double>& e, std::size_t context) {
    double total = 0;
    const Scenario& scn = e.scenario();
    for (std::size_t s = 0; s < scn.context_block_size(context); ++s) {
        std::size_t ones = 0;
        for (std::size_t k = 0; k < scn.contexts()[context].size(); ++k)
            ones += scn.local_outcome(context, s, k);
        total += (ones % 2 == 0 ? 1.0 : -1.0) * e.probability(context, s);
    }
    return total;
}

EmpiricalModel<double> bell_model(double phi1, double phi2) {
    return born_model(ghz_state(2), EquatorialSetting::create(phi1),
                      EquatorialSetting::create(phi2));
}

}  // namespace

TEST_CASE("GHZ states") {
    auto bell = ghz_state(2);
    REQUIRE(bell.amplitudes.size() == 4);
    REQUIRE_THAT(std::abs(bell.amplitudes[0]), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
    REQUIRE_THAT(std::abs(bell.amplitudes[3]), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
    REQUIRE(std::abs(bell.amplitudes[1]) == 0.0);

    auto ghz3 = ghz_state(3);
    REQUIRE(std::abs(ghz3.amplitudes[0]) > 0);
    REQUIRE(std::abs(ghz3.amplitudes[7]) > 0);
    double norm2 = 0;
    for (const auto& a : ghz3.amplitudes) norm2 += std::norm(a);
    REQUIRE_THAT(norm2, WithinAbs(1.0, 1e-14));

    REQUIRE_THROWS_AS(ghz_state(1), DomainMismatch);
    REQUIRE_THROWS_AS(ghz_state(13), SizeLimitExceeded);
    REQUIRE_THROWS_AS(PureState::create(1, {1.0, 0.5}), DomainMismatch);
    REQUIRE_THROWS_AS(EquatorialSetting::create(kPi), DomainMismatch);
    REQUIRE_THROWS_AS(EquatorialSetting::create(-0.1), DomainMismatch);
}

TEST_CASE("Born tables at the CHSH angles match the hand table") {
    auto e = bell_model(0.0, kPi / 3.0);
    // context a1b1: perfectly correlated halves
    REQUIRE_THAT(e.probability(0, 0), WithinAbs(0.5, 1e-12));
    REQUIRE_THAT(e.probability(0, 1), WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(e.probability(0, 2), WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(e.probability(0, 3), WithinAbs(0.5, 1e-12));
    // a1b2 and a2b1: (3/8, 1/8, 1/8, 3/8)
    for (std::size_t c : {std::size_t(1), std::size_t(2)}) {
        REQUIRE_THAT(e.probability(c, 0), WithinAbs(0.375, 1e-12));
        REQUIRE_THAT(e.probability(c, 1), WithinAbs(0.125, 1e-12));
        REQUIRE_THAT(e.probability(c, 2), WithinAbs(0.125, 1e-12));
        REQUIRE_THAT(e.probability(c, 3), WithinAbs(0.375, 1e-12));
    }
    // a2b2: (1/8, 3/8, 3/8, 1/8)
    REQUIRE_THAT(e.probability(3, 0), WithinAbs(0.125, 1e-12));
    REQUIRE_THAT(e.probability(3, 1), WithinAbs(0.375, 1e-12));

    // equals the builtin CHSH model entrywise
    auto builtin = chsh_model<double>();
    auto ve = to_vector(e);
    auto vb = to_vector(builtin);
    for (std::size_t i = 0; i < ve.size(); ++i) REQUIRE_THAT(ve[i], WithinAbs(vb[i], 1e-12));
}

TEST_CASE("Bell-state correlators follow cos(phi_a + phi_b)") {
    std::vector<double> angles{0.0, kPi / 8, kPi / 3, kPi / 2, 2.9};
    for (double phi1 : angles)
        for (double phi2 : angles) {
            if (phi1 == phi2) continue;
            auto e = bell_model(phi1, phi2);
            REQUIRE_THAT(correlator(e, 0), WithinAbs(std::cos(2 * phi1), 1e-9));
            REQUIRE_THAT(correlator(e, 1), WithinAbs(std::cos(phi1 + phi2), 1e-9));
            REQUIRE_THAT(correlator(e, 2), WithinAbs(std::cos(phi1 + phi2), 1e-9));
            REQUIRE_THAT(correlator(e, 3), WithinAbs(std::cos(2 * phi2), 1e-9));
            REQUIRE(check_no_signalling(e, 1e-7).pass);
        }
}

TEST_CASE("known angle pairs hit known fractions") {
    // (0, pi/2) is local
    REQUIRE_THAT(noncontextual_fraction(bell_model(0.0, kPi / 2)).cf, WithinAbs(0.0, 1e-9));

    // Tsirelson angles: cf = sqrt(2) - 1 and the Table III form
    auto tsirelson = bell_model(kPi / 8, 5 * kPi / 8);
    REQUIRE_THAT(noncontextual_fraction(tsirelson).cf,
                 WithinAbs(std::sqrt(2.0) - 1.0, 1e-9));
    double p = (std::sqrt(2.0) + 2.0) / 8.0;
    REQUIRE_THAT(tsirelson.probability(0, 0), WithinAbs(p, 1e-9));
    REQUIRE_THAT(tsirelson.probability(0, 1), WithinAbs(0.5 - p, 1e-9));
    for (std::size_t c = 1; c < 4; ++c) {
        REQUIRE_THAT(tsirelson.probability(c, 0), WithinAbs(0.5 - p, 1e-9));
        REQUIRE_THAT(tsirelson.probability(c, 1), WithinAbs(p, 1e-9));
        REQUIRE_THAT(tsirelson.probability(c, 2), WithinAbs(p, 1e-9));
        REQUIRE_THAT(tsirelson.probability(c, 3), WithinAbs(0.5 - p, 1e-9));
    }

    // GHZ(3) at (pi/2, 0) is the strongly contextual Mermin model
    auto mermin = born_model(ghz_state(3), EquatorialSetting::create(kPi / 2),
                             EquatorialSetting::create(0.0));
    REQUIRE_THAT(noncontextual_fraction(mermin).cf, WithinAbs(1.0, 1e-6));
    REQUIRE(is_strongly_contextual(mermin, 1e-7));
}

TEST_CASE("the Mermin builtin agrees with the Born rule at (0, pi/2)") {
    auto generated = born_model(ghz_state(3), EquatorialSetting::create(0.0),
                                EquatorialSetting::create(kPi / 2));
    auto exact = ghz_mermin_model<double>();
    auto vg = to_vector(generated);
    auto vx = to_vector(exact);
    REQUIRE(vg.size() == vx.size());
    for (std::size_t i = 0; i < vg.size(); ++i) REQUIRE_THAT(vg[i], WithinAbs(vx[i], 1e-9));
}

TEST_CASE("rotating both settings matches rotating the state") {
    double shift = kPi / 8;
    auto shifted_settings = bell_model(0.0 + shift, kPi / 2 + shift);
    // measuring at phi + shift equals measuring the counter-rotated state
    auto rotated_state = born_model(rotate_z_all(ghz_state(2), -shift),
                                    EquatorialSetting::create(0.0),
                                    EquatorialSetting::create(kPi / 2));
    double cf1 = num::to_double(noncontextual_fraction(shifted_settings).cf);
    double cf2 = num::to_double(noncontextual_fraction(rotated_state).cf);
    REQUIRE_THAT(cf1, WithinAbs(cf2, 1e-7));
    // and the tables themselves agree
    auto v1 = to_vector(shifted_settings);
    auto v2 = to_vector(rotated_state);
    for (std::size_t i = 0; i < v1.size(); ++i) REQUIRE_THAT(v1[i], WithinAbs(v2[i], 1e-9));
}

TEST_CASE("sweep grids are row-major and symmetric") {
    auto grid = sweep(ghz_state(2), 4, 2);
    REQUIRE(grid.cf.size() == 16);
    REQUIRE_THAT(grid.at(0, 0), WithinAbs(0.0, 1e-9));  // identical settings are local
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) REQUIRE_THAT(grid.at(i, j), WithinAbs(grid.at(j, i), 1e-9));
    // sequential and parallel sweeps agree cell by cell
    auto serial = sweep(ghz_state(2), 4, 1);
    for (std::size_t c = 0; c < grid.cf.size(); ++c)
        REQUIRE_THAT(grid.cf[c], WithinAbs(serial.cf[c], 1e-12));
}

TEST_CASE("proposition-4 angle families are strongly contextual") {
    REQUIRE(proposition4_check(3, 0));
    REQUIRE(proposition4_check(3, 1));
    REQUIRE(proposition4_check(4, 2));
    REQUIRE_THROWS_AS(proposition4_check(2, 0), DomainMismatch);
    REQUIRE_THROWS_AS(proposition4_check(3, 3), DomainMismatch);
}
