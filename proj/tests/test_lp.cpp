#include <catch2/catch_amalgamated.hpp>

#include "ctxfrac/lp.hpp"

using namespace ctxfrac;
using Catch::Matchers::WithinAbs;

namespace {

template <typename T>
LinearProgram<T> box_lp() {
    // max x subject to x <= 1
    LinearProgram<T> lp;
    lp.objective = {T(1)};
    lp.rows = {{T(1)}};
    lp.relations = {Relation::LessEq};
    lp.rhs = {T(1)};
    return lp;
}

}  // namespace

TEST_CASE("single-variable box") {
    auto sol = solve(box_lp<double>());
    REQUIRE(sol.status == LpStatus::Optimal);
    REQUIRE_THAT(sol.value, WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(sol.point[0], WithinAbs(1.0, 1e-12));
}

TEST_CASE("Bland's rule picks the lowest-index optimal vertex") {
    // max x+y subject to x+y <= 1: the optimum is the whole edge; Bland
    // enters x first, so the vertex is (1,0).
    LinearProgram<double> lp;
    lp.objective = {1, 1};
    lp.rows = {{1, 1}};
    lp.relations = {Relation::LessEq};
    lp.rhs = {1};
    auto sol = solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    REQUIRE_THAT(sol.value, WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(sol.point[0], WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(sol.point[1], WithinAbs(0.0, 1e-12));

    auto again = solve(lp);
    REQUIRE(again.point == sol.point);
    REQUIRE(again.basis == sol.basis);
}

TEST_CASE("infeasible and unbounded programs are reported") {
    LinearProgram<double> infeasible;
    infeasible.objective = {1};
    infeasible.rows = {{1}};
    infeasible.relations = {Relation::LessEq};
    infeasible.rhs = {-1};  // x <= -1 with x >= 0
    REQUIRE(solve(infeasible).status == LpStatus::Infeasible);

    LinearProgram<double> unbounded;
    unbounded.objective = {1};
    unbounded.rows = {{-1}};
    unbounded.relations = {Relation::LessEq};
    unbounded.rhs = {1};
    REQUIRE(solve(unbounded).status == LpStatus::Unbounded);
}

TEST_CASE("minimization, equalities and shifted lower bounds") {
    LinearProgram<double> lp;
    lp.sense = Sense::Minimize;
    lp.objective = {1};
    lp.rows = {{1}};
    lp.relations = {Relation::GreaterEq};
    lp.rhs = {3};
    auto sol = solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    REQUIRE_THAT(sol.value, WithinAbs(3.0, 1e-12));

    LinearProgram<double> eq;
    eq.objective = {1, 1};
    eq.rows = {{1, 1}, {1, 0}};
    eq.relations = {Relation::Equal, Relation::LessEq};
    eq.rhs = {2, 1.5};
    auto esol = solve(eq);
    REQUIRE(esol.status == LpStatus::Optimal);
    REQUIRE_THAT(esol.value, WithinAbs(2.0, 1e-12));
    REQUIRE(esol.point[0] <= 1.5 + 1e-12);
    REQUIRE_THAT(esol.point[0] + esol.point[1], WithinAbs(2.0, 1e-12));

    LinearProgram<double> shifted;
    shifted.objective = {-1};
    shifted.lower_bounds = {2};
    auto ssol = solve(shifted);
    REQUIRE(ssol.status == LpStatus::Optimal);
    REQUIRE_THAT(ssol.value, WithinAbs(-2.0, 1e-12));
    REQUIRE_THAT(ssol.point[0], WithinAbs(2.0, 1e-12));
}

TEST_CASE("rational backend is exact") {
    LinearProgram<Rational> lp;
    lp.objective = {Rational(1)};
    lp.rows = {{Rational(3)}};
    lp.relations = {Relation::LessEq};
    lp.rhs = {Rational(1)};
    auto sol = solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    REQUIRE(sol.value == Rational(1) / Rational(3));
    REQUIRE(sol.point[0] == Rational(1) / Rational(3));

    auto rbox = solve(box_lp<Rational>());
    REQUIRE(rbox.value == Rational(1));
}

TEST_CASE("duality gap on a hand-built pair") {
    // max x s.t. x <= 1  <->  min y s.t. y >= 1
    auto primal = box_lp<double>();
    LinearProgram<double> dual;
    dual.sense = Sense::Minimize;
    dual.objective = {1};
    dual.rows = {{1}};
    dual.relations = {Relation::GreaterEq};
    dual.rhs = {1};
    auto report = verify_duality(primal, dual);
    REQUIRE(report.pass);
    REQUIRE_THAT(report.gap, WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(report.primal_value, WithinAbs(1.0, 1e-12));

    LinearProgram<double> bad = dual;
    bad.rhs = {1};
    bad.relations = {Relation::LessEq};
    bad.sense = Sense::Maximize;
    bad.objective = {-1};
    // pair an optimal program with an infeasible one
    LinearProgram<double> infeasible;
    infeasible.objective = {1};
    infeasible.rows = {{1}};
    infeasible.relations = {Relation::LessEq};
    infeasible.rhs = {-2};
    REQUIRE_THROWS_AS(verify_duality(primal, infeasible), StatusMismatch);
}

TEST_CASE("malformed programs are rejected") {
    LinearProgram<double> lp;
    lp.objective = {1, 2};
    lp.rows = {{1}};
    lp.relations = {Relation::LessEq};
    lp.rhs = {1};
    REQUIRE_THROWS_AS(solve(lp), ValidationError);

    LinearProgram<double> nan_lp = box_lp<double>();
    nan_lp.rhs = {std::nan("")};
    REQUIRE_THROWS_AS(solve(nan_lp), ValidationError);
}
