#pragma once

#include "fcvide/errors.hpp"
#include "fcvide/laplace.hpp"
#include "fcvide/problem.hpp"
#include "fcvide/rational.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace fcvide {

/// Which affine slice of the fuzzy data enters the right-hand side.
enum class Slice { Base, RPart };

/// 2x2 linear system M (L_lower, L_upper)^T = b over rational functions.
struct LaplaceSystem {
    std::array<std::array<RationalFn, 2>, 2> m;
    std::array<RationalFn, 2> b;
};

/// Assemble the Laplace-domain system for one affine slice of the data.
/// Equation i reads  p*L_i - x0_i = l[f_j] + K * L_t  with (j, t) supplied
/// by the mode/sign plan; the convolution coefficient moves to the left:
/// row i gets p on the diagonal and -K in column t.
inline LaplaceSystem assemble_system(const FCVIDEProblem& prob, Slice slice) {
    const auto plans = equation_plans(prob.mode, prob.sign_x, prob.sign_k);
    const RationalFn kernel_transform = laplace_transform(prob.kernel); // crisp: both slots equal
    const RationalFn p = RationalFn::from_poly(Polynomial::variable());

    LaplaceSystem sys;
    const double x0_vals[2] = {
        slice == Slice::Base ? prob.x0.lower.a : prob.x0.lower.b,
        slice == Slice::Base ? prob.x0.upper.a : prob.x0.upper.b,
    };
    const EndpointFn* forcing[2] = {&prob.forcing.lower, &prob.forcing.upper};

    for (int i = 0; i < 2; ++i) {
        const auto& plan = plans[i];
        sys.m[i][0] = RationalFn::constant(0.0);
        sys.m[i][1] = RationalFn::constant(0.0);
        sys.m[i][i] = p;
        sys.m[i][plan.conv_target] = rat_sub(sys.m[i][plan.conv_target], kernel_transform);
        const TimeExpr& f = slice == Slice::Base ? forcing[plan.forcing_src]->base
                                                 : forcing[plan.forcing_src]->rpart;
        sys.b[i] = rat_add(RationalFn::constant(x0_vals[i]), laplace_transform(f));
    }
    return sys;
}

/// Cramer solve of the assembled 2x2 system.
inline std::array<RationalFn, 2> solve_system(const LaplaceSystem& sys) {
    RationalFn det = rat_sub(rat_mul(sys.m[0][0], sys.m[1][1]), rat_mul(sys.m[0][1], sys.m[1][0]));
    if (det.is_zero(1e-12 * std::max(1.0, det.num.max_abs_coeff())))
        throw SingularSystem("solve_fcvide: assembled system has identically zero determinant");
    RationalFn lower = rat_div(rat_sub(rat_mul(sys.b[0], sys.m[1][1]), rat_mul(sys.b[1], sys.m[0][1])), det);
    RationalFn upper = rat_div(rat_sub(rat_mul(sys.m[0][0], sys.b[1]), rat_mul(sys.m[1][0], sys.b[0])), det);
    return {lower, upper};
}

namespace detail {

inline std::string format_point(double t, double r, double v) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "t=%.6g, r=%.6g, value=%.6g", t, r, v);
    return buf;
}

} // namespace detail

/// Post-hoc diagnostics: declared-sign check, stacking/monotonicity of the
/// fuzzy solution, and the t = 0 initial condition. Reporting only -- a
/// failed check does not invalidate the algebra, it flags the declared case.
inline SolutionDiagnostics verify_solution(const FCVIDEProblem& prob, const FuzzyFn& x,
                                           const std::vector<double>& t_grid,
                                           const std::vector<double>& r_grid) {
    SolutionDiagnostics diag;
    const double tol = 1e-9;
    const double want = prob.sign_x == Sign::Positive ? 1.0 : -1.0;

    auto check_sign = [&](const EndpointFn& f, CheckResult& res, const char* which) {
        for (double t : t_grid) {
            for (double r : r_grid) {
                const double v = f.eval_at(t, r);
                if (want * v < -tol) {
                    res.ok = false;
                    res.detail = std::string(which) + " violates declared sign " +
                                 to_string(prob.sign_x) + " at " + detail::format_point(t, r, v);
                    return;
                }
            }
        }
    };
    check_sign(x.lower, diag.sign_lower, "x_lower");
    check_sign(x.upper, diag.sign_upper, "x_upper");

    for (double t : t_grid) {
        for (double r : r_grid) {
            const double lo = x.lower.eval_at(t, r);
            const double up = x.upper.eval_at(t, r);
            if (lo > up + tol && diag.stacking.ok) {
                diag.stacking.ok = false;
                diag.stacking.detail = "x_lower > x_upper at " + detail::format_point(t, r, lo - up);
            }
        }
        for (size_t i = 0; i + 1 < r_grid.size(); ++i) {
            if (!diag.monotonicity.ok) break;
            const double r0 = r_grid[i], r1 = r_grid[i + 1];
            if (x.lower.eval_at(t, r1) < x.lower.eval_at(t, r0) - tol) {
                diag.monotonicity.ok = false;
                diag.monotonicity.detail =
                    "x_lower decreasing in r at " + detail::format_point(t, r1, x.lower.eval_at(t, r1));
            } else if (x.upper.eval_at(t, r1) > x.upper.eval_at(t, r0) + tol) {
                diag.monotonicity.ok = false;
                diag.monotonicity.detail =
                    "x_upper increasing in r at " + detail::format_point(t, r1, x.upper.eval_at(t, r1));
            }
        }
    }

    for (double r : {0.0, 0.5, 1.0}) {
        const double lo_dev = std::fabs(x.lower.eval_at(0.0, r) - prob.x0.lower(r));
        const double up_dev = std::fabs(x.upper.eval_at(0.0, r) - prob.x0.upper(r));
        if (std::max(lo_dev, up_dev) > tol) {
            diag.initial_condition.ok = false;
            diag.initial_condition.detail =
                "smooth part at t=0 deviates from x0 by " + std::to_string(std::max(lo_dev, up_dev)) +
                " at r=" + std::to_string(r);
            break;
        }
    }
    return diag;
}

/// Solve the problem by the transform method: assemble the 2x2 system once
/// per affine slice of the data, Cramer-solve over rational functions,
/// invert, and package endpoints as base + r*rpart. Linearity in r makes
/// the two slices equivalent to the r-carrying closed formulas.
inline FuzzySolution solve_fcvide(const FCVIDEProblem& prob) {
    const auto base_sys = assemble_system(prob, Slice::Base);
    const auto rpart_sys = assemble_system(prob, Slice::RPart);
    const auto base_sol = solve_system(base_sys);
    const auto rpart_sol = solve_system(rpart_sys);

    FuzzySolution sol;
    sol.x.lower.base = inverse_laplace(base_sol[0]);
    sol.x.upper.base = inverse_laplace(base_sol[1]);
    sol.x.lower.rpart = inverse_laplace(rpart_sol[0]);
    sol.x.upper.rpart = inverse_laplace(rpart_sol[1]);

    std::vector<double> t_grid, r_grid;
    for (int i = 1; i <= 8; ++i) t_grid.push_back(prob.t_max * i / 8.0);
    for (int i = 0; i <= 4; ++i) r_grid.push_back(i / 4.0);
    sol.diagnostics = verify_solution(prob, sol.x, t_grid, r_grid);
    return sol;
}

} // namespace fcvide
