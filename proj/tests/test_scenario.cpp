#include <catch2/catch_amalgamated.hpp>

#include "ctxfrac/builtin.hpp"
#include "ctxfrac/sampling.hpp"
#include "ctxfrac/scenario.hpp"

using namespace ctxfrac;

namespace {

ScenarioPtr two_measurements_three_outcomes() {
    return make_scenario(Scenario::create({"a", "b"}, {"0", "1", "2"}, {{"a", "b"}}));
}

}  // namespace

TEST_CASE("global assignments enumerate lexicographically") {
    auto single = Scenario::create({"a"}, {"0", "1"}, {{"a"}});
    auto globals = enumerate_global_assignments(single);
    REQUIRE(globals == std::vector<GlobalAssignment>{{0}, {1}});

    auto bell = bell_scenario(2);
    REQUIRE(enumerate_global_assignments(*bell).size() == 16);

    auto pair = two_measurements_three_outcomes();
    auto nine = enumerate_global_assignments(*pair);
    std::vector<GlobalAssignment> expected{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1},
                                           {1, 2}, {2, 0}, {2, 1}, {2, 2}};
    REQUIRE(nine == expected);
}

TEST_CASE("global assignment count is guarded") {
    std::vector<std::string> measurements;
    std::vector<std::vector<std::string>> contexts;
    for (int i = 0; i < 21; ++i) {
        measurements.push_back("m" + std::to_string(i));
        contexts.push_back({measurements.back()});
    }
    auto big = Scenario::create(measurements, {"0", "1"}, contexts);
    REQUIRE_THROWS_AS(enumerate_global_assignments(big), SizeLimitExceeded);
    REQUIRE_NOTHROW(enumerate_global_assignments(big, std::size_t(1) << 21));
}

TEST_CASE("local assignments follow declared context order") {
    auto bell = bell_scenario(2);
    auto locals = enumerate_local_assignments(*bell);
    REQUIRE(locals.size() == 16);
    REQUIRE(bell->num_local_assignments() == 16);
    // first block: context a1b1, assignments 00,01,10,11
    REQUIRE(locals[0].context == 0);
    REQUIRE(locals[0].outcomes == std::vector<std::size_t>{0, 0});
    REQUIRE(locals[3].outcomes == std::vector<std::size_t>{1, 1});
    REQUIRE(locals[4].context == 1);

    auto single_ctx = Scenario::create({"a"}, {"0", "1"}, {{"a"}});
    REQUIRE(enumerate_local_assignments(single_ctx).size() == 2);

    auto nested = Scenario::create({"a", "b"}, {"0", "1"}, {{"a"}, {"a", "b"}});
    REQUIRE(nested.num_local_assignments() == 6);
    REQUIRE(enumerate_local_assignments(nested).size() == 6);
}

TEST_CASE("incidence matrix on fixed scenarios") {
    auto single = Scenario::create({"a"}, {"0", "1"}, {{"a"}});
    auto id2 = build_incidence_matrix(single);
    REQUIRE(id2.rows == 2);
    REQUIRE(id2.cols == 2);
    REQUIRE(id2.at(0, 0) == 1);
    REQUIRE(id2.at(1, 1) == 1);
    REQUIRE(id2.at(0, 1) == 0);
    REQUIRE(id2.at(1, 0) == 0);

    auto bell = bell_scenario(2);
    auto inc = build_incidence_matrix(*bell);
    REQUIRE(inc.rows == 16);
    REQUIRE(inc.cols == 16);
    for (std::size_t g = 0; g < inc.cols; ++g) {
        int sum = 0;
        for (std::size_t r = 0; r < inc.rows; ++r) sum += inc.at(r, g);
        REQUIRE(sum == 4);
    }

    auto partial = Scenario::create({"a", "b"}, {"0", "1"}, {{"a"}, {"a", "b"}});
    auto pinc = build_incidence_matrix(partial);
    for (std::size_t r = 0; r < 2; ++r) {  // block of context {a}
        int sum = 0;
        for (std::size_t g = 0; g < pinc.cols; ++g) sum += pinc.at(r, g);
        REQUIRE(sum == 2);  // |O|^(|X|-|C|)
    }
}

TEST_CASE("incidence matrix invariants on random scenarios") {
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 40; ++trial) {
        auto scn = random_scenario(rng);
        auto inc = build_incidence_matrix(*scn);
        for (std::size_t g = 0; g < inc.cols; ++g) {
            std::size_t sum = 0;
            for (std::size_t r = 0; r < inc.rows; ++r) sum += inc.at(r, g);
            REQUIRE(sum == scn->num_contexts());
        }
        for (std::size_t c = 0; c < scn->num_contexts(); ++c) {
            std::size_t expected = 1;
            for (std::size_t i = 0; i < scn->num_measurements() - scn->contexts()[c].size(); ++i)
                expected *= scn->num_outcomes();
            for (std::size_t s = 0; s < scn->context_block_size(c); ++s) {
                std::size_t row = scn->context_block_offset(c) + s;
                std::size_t sum = 0;
                for (std::size_t g = 0; g < inc.cols; ++g) sum += inc.at(row, g);
                REQUIRE(sum == expected);
            }
        }
        // entry 1 iff the restriction matches
        for (std::size_t g = 0; g < inc.cols; ++g)
            for (std::size_t c = 0; c < scn->num_contexts(); ++c)
                for (std::size_t s = 0; s < scn->context_block_size(c); ++s) {
                    bool match = scn->restrict_global(g, c) == s;
                    REQUIRE(inc.at(scn->context_block_offset(c) + s, g) == (match ? 1 : 0));
                }
    }
}

TEST_CASE("enumeration is deterministic across runs") {
    std::mt19937_64 rng_a(7), rng_b(7);
    auto scn_a = random_scenario(rng_a);
    auto scn_b = random_scenario(rng_b);
    REQUIRE(*scn_a == *scn_b);
    REQUIRE(enumerate_global_assignments(*scn_a) == enumerate_global_assignments(*scn_b));
    REQUIRE(build_incidence_matrix(*scn_a).entries == build_incidence_matrix(*scn_b).entries);
}

TEST_CASE("scenario validation rejects malformed input") {
    REQUIRE_THROWS_AS(Scenario::create({"a", "a"}, {"0"}, {{"a"}}), InvalidScenario);
    REQUIRE_THROWS_AS(Scenario::create({"a"}, {}, {{"a"}}), InvalidScenario);
    REQUIRE_THROWS_AS(Scenario::create({"a", "b"}, {"0"}, {{"a"}}), InvalidScenario);  // b uncovered
    REQUIRE_THROWS_AS(Scenario::create({"a"}, {"0"}, {{"a"}, {"a"}}), InvalidScenario);
    REQUIRE_THROWS_AS(Scenario::create({"a"}, {"0"}, {{}}), InvalidScenario);
    REQUIRE_THROWS_AS(Scenario::create({"a"}, {"0"}, {{"z"}}), InvalidScenario);
    REQUIRE_THROWS_AS(Scenario::create({"a", "b"}, {"0"}, {{"a", "b", "a"}}), InvalidScenario);
    // overlapping and nested contexts are allowed
    REQUIRE_NOTHROW(Scenario::create({"a", "b"}, {"0", "1"}, {{"a"}, {"a", "b"}, {"b"}}));
}
