#include <catch2/catch_amalgamated.hpp>

#include "fcvide/solver.hpp"
#include "example_problems.hpp"

#include <cmath>

using namespace fcvide;
using namespace fcvide::testing;

namespace {

RationalFn p_minus_inv_p() {
    // p - 1/p = (p^2-1)/p
    return RationalFn(Polynomial{{-1.0, 0.0, 1.0}}, Polynomial{{0.0, 1.0}});
}

} // namespace

TEST_CASE("assembled systems match the worked equations") {
    const RationalFn L_one_plus_t(Polynomial{{1.0, 1.0}}, Polynomial{{0.0, 0.0, 1.0}});
    const RationalFn inv_p(Polynomial{{1.0}}, Polynomial{{0.0, 1.0}});
    const RationalFn p = RationalFn::from_poly(Polynomial::variable());

    SECTION("example 1, (i)-differentiable, x positive: decoupled") {
        auto sys = assemble_system(example1(Sign::Positive), Slice::Base);
        CHECK(approx_equal(sys.m[0][0], p_minus_inv_p(), 1e-12));
        CHECK(approx_equal(sys.m[1][1], p_minus_inv_p(), 1e-12));
        CHECK(sys.m[0][1].is_zero(1e-12));
        CHECK(sys.m[1][0].is_zero(1e-12));
        CHECK(approx_equal(sys.b[0], L_one_plus_t, 1e-12));
        CHECK(approx_equal(sys.b[1], rat_mul(RationalFn::constant(-2.0), L_one_plus_t), 1e-12));

        auto rsys = assemble_system(example1(Sign::Positive), Slice::RPart);
        CHECK(approx_equal(rsys.b[0], L_one_plus_t, 1e-12));
        CHECK(approx_equal(rsys.b[1], L_one_plus_t, 1e-12));
    }

    SECTION("example 1, (i)-differentiable, x negative: coupled") {
        auto sys = assemble_system(example1(Sign::Negative), Slice::Base);
        CHECK(approx_equal(sys.m[0][0], p, 1e-12));
        CHECK(approx_equal(sys.m[0][1], -inv_p, 1e-12));
        CHECK(approx_equal(sys.m[1][0], -inv_p, 1e-12));
        CHECK(approx_equal(sys.m[1][1], p, 1e-12));
    }

    SECTION("example 2, (ii)-differentiable, x negative: decoupled with swapped forcing") {
        auto sys = assemble_system(example2(Sign::Negative), Slice::Base);
        CHECK(approx_equal(sys.m[0][0], p_minus_inv_p(), 1e-12));
        CHECK(approx_equal(sys.m[1][1], p_minus_inv_p(), 1e-12));
        CHECK(sys.m[0][1].is_zero(1e-12));
        CHECK(sys.m[1][0].is_zero(1e-12));
        // lower equation carries the upper forcing endpoint (1-r): base +1/p
        CHECK(approx_equal(sys.b[0], inv_p, 1e-12));
        CHECK(approx_equal(sys.b[1], -inv_p, 1e-12));
    }
}

TEST_CASE("example 1 positive case closed form") {
    const FuzzySolution sol = solve_fcvide(example1(Sign::Positive));
    const TimeExpr growth = exp_t_minus_one();
    CHECK(approx_equal(sol.x.lower.base, growth, 1e-9));
    CHECK(approx_equal(sol.x.lower.rpart, growth, 1e-9));
    CHECK(approx_equal(sol.x.upper.base, scale(-2.0, growth), 1e-9));
    CHECK(approx_equal(sol.x.upper.rpart, growth, 1e-9));

    // the declared sign holds for the lower endpoint but the upper endpoint
    // is negative, so stacking fails; the solver reports, never rejects
    CHECK(sol.diagnostics.initial_condition.ok);
    CHECK_FALSE(sol.diagnostics.sign_upper.ok);
    CHECK_FALSE(sol.diagnostics.stacking.ok);
}

TEST_CASE("example 2 closed forms") {
    SECTION("negative case: (1-r) sinh t") {
        const FuzzySolution sol = solve_fcvide(example2(Sign::Negative));
        CHECK(approx_equal(sol.x.lower.base, sinh_t(), 1e-9));
        CHECK(approx_equal(sol.x.lower.rpart, scale(-1.0, sinh_t()), 1e-9));
        CHECK(approx_equal(sol.x.upper.base, scale(-1.0, sinh_t()), 1e-9));
        CHECK(approx_equal(sol.x.upper.rpart, sinh_t(), 1e-9));

        // x_lower = (1-r) sinh t >= 0 on t > 0: declared "negative" is
        // violated for r < 1 and must be reported
        CHECK_FALSE(sol.diagnostics.sign_lower.ok);
    }
    SECTION("positive case: sinh parts cancel to (1-r) sin t") {
        const FuzzySolution sol = solve_fcvide(example2(Sign::Positive));
        CHECK(approx_equal(sol.x.lower.base, sin_t(), 1e-9));
        CHECK(approx_equal(sol.x.lower.rpart, scale(-1.0, sin_t()), 1e-9));
        CHECK(approx_equal(sol.x.upper.base, scale(-1.0, sin_t()), 1e-9));
        CHECK(approx_equal(sol.x.upper.rpart, sin_t(), 1e-9));
    }
}

TEST_CASE("initial condition reproduced at t = 0") {
    for (const auto& prob : {example1(Sign::Positive), example1(Sign::Negative),
                             example2(Sign::Negative), example3()}) {
        const FuzzySolution sol = solve_fcvide(prob);
        for (double r : {0.0, 0.5, 1.0}) {
            CHECK_THAT(sol.x.lower.eval_at(0.0, r),
                       Catch::Matchers::WithinAbs(prob.x0.lower(r), 1e-9));
            CHECK_THAT(sol.x.upper.eval_at(0.0, r),
                       Catch::Matchers::WithinAbs(prob.x0.upper(r), 1e-9));
        }
        CHECK(sol.diagnostics.initial_condition.ok);
    }
}

TEST_CASE("crisp problems collapse to the classical solution in every mode/sign case") {
    // x' = 1 + int_0^t x, x(0) = 1 has transform (p+1)/(p^2-1) = 1/(p-1): x = e^t
    FCVIDEProblem prob;
    prob.kernel = TimeExpr::constant(1.0);
    prob.forcing.lower = {TimeExpr::constant(1.0), TimeExpr::zero()};
    prob.forcing.upper = {TimeExpr::constant(1.0), TimeExpr::zero()};
    prob.x0 = FuzzyNumber::crisp(1.0);

    const TimeExpr classical = TimeExpr::term(1.0, 0, 1.0);
    for (Mode mode : {Mode::IDiff, Mode::IIDiff}) {
        for (Sign sx : {Sign::Positive, Sign::Negative}) {
            for (Sign sk : {Sign::Positive, Sign::Negative}) {
                prob.mode = mode;
                prob.sign_x = sx;
                prob.sign_k = sk;
                const FuzzySolution sol = solve_fcvide(prob);
                CHECK(approx_equal(sol.x.lower.base, classical, 1e-9));
                CHECK(approx_equal(sol.x.upper.base, classical, 1e-9));
                CHECK(sol.x.lower.rpart.is_zero());
                CHECK(sol.x.upper.rpart.is_zero());
            }
        }
    }
}

TEST_CASE("solution is linear in the forcing") {
    FCVIDEProblem prob = example1(Sign::Positive);
    FCVIDEProblem scaled = prob;
    for (auto* ep : {&scaled.forcing.lower, &scaled.forcing.upper}) {
        ep->base = scale(3.0, ep->base);
        ep->rpart = scale(3.0, ep->rpart);
    }
    const FuzzySolution sol = solve_fcvide(prob);
    const FuzzySolution sol3 = solve_fcvide(scaled);
    CHECK(approx_equal(sol3.x.lower.base, scale(3.0, sol.x.lower.base), 1e-9));
    CHECK(approx_equal(sol3.x.upper.base, scale(3.0, sol.x.upper.base), 1e-9));
    CHECK(approx_equal(sol3.x.lower.rpart, scale(3.0, sol.x.lower.rpart), 1e-9));
    CHECK(approx_equal(sol3.x.upper.rpart, scale(3.0, sol.x.upper.rpart), 1e-9));
}

TEST_CASE("decoupled cases agree with the closed formula") {
    // (i)-differentiable, everything positive: L[x_lower] = (x0 + l[f])/(p - l[k])
    const FCVIDEProblem prob = example1(Sign::Positive);
    const RationalFn kernel_tf = laplace_transform(prob.kernel);
    for (Slice slice : {Slice::Base, Slice::RPart}) {
        const auto sys = assemble_system(prob, slice);
        const auto cramer = solve_system(sys);
        const double x0 = slice == Slice::Base ? prob.x0.lower.a : prob.x0.lower.b;
        const TimeExpr& f = slice == Slice::Base ? prob.forcing.lower.base : prob.forcing.lower.rpart;
        const RationalFn closed =
            rat_div(rat_add(RationalFn::constant(x0), laplace_transform(f)),
                    rat_sub(RationalFn::from_poly(Polynomial::variable()), kernel_tf));
        CHECK(approx_equal(cramer[0], closed, 1e-9));
    }
}

TEST_CASE("singular systems are rejected") {
    // kernel transform p makes the lower diagonal p - p = 0: determinant 0
    FCVIDEProblem prob = example1(Sign::Positive);
    prob.kernel = TimeExpr::delta(1.0, 1); // L[delta'] = p
    CHECK_THROWS_AS(solve_fcvide(prob), SingularSystem);
}

TEST_CASE("verify_solution passes a crisp consistent solution") {
    FCVIDEProblem prob;
    prob.kernel = TimeExpr::constant(1.0);
    prob.forcing.lower = {TimeExpr::constant(1.0), TimeExpr::zero()};
    prob.forcing.upper = {TimeExpr::constant(1.0), TimeExpr::zero()};
    prob.x0 = FuzzyNumber::crisp(1.0);
    const FuzzySolution sol = solve_fcvide(prob);
    CHECK(sol.diagnostics.all_ok());
    CHECK(approx_equal(sol.x.lower.base, sol.x.upper.base, 1e-9));
}
