#pragma once

#include "fcvide/errors.hpp"
#include "fcvide/problem.hpp"
#include "fcvide/time_expr.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fcvide {

/// Endpoint trajectories of one fixed-r run of the numeric solver.
struct NumericTrajectory {
    double t_max = 0.0;
    double h = 0.0;
    double r = 0.0;
    std::vector<double> lower;
    std::vector<double> upper;

    double t_at(size_t i) const { return h * static_cast<double>(i); }
    size_t size() const { return lower.size(); }
};

/// Independent numeric integration of the classical coupled pair implied by
/// the mode/sign case: explicit Heun stepping with the convolution term
/// recomputed per stage by composite trapezoid. Direct O(n^2) quadrature --
/// no state augmentation, so any closed-form kernel works unchanged.
inline NumericTrajectory numeric_solve(const FCVIDEProblem& prob, double r, double t_max, int steps) {
    if (steps < 16) throw Error("numeric_solve: steps must be >= 16");
    if (r < 0.0 || r > 1.0) throw Error("numeric_solve: r must lie in [0,1]");

    const auto plans = equation_plans(prob.mode, prob.sign_x, prob.sign_k);
    const double h = t_max / steps;
    const int n = steps;

    std::vector<double> kernel_vals(n + 1), forcing_vals[2];
    const EndpointFn* forcing[2] = {&prob.forcing.lower, &prob.forcing.upper};
    for (int eq = 0; eq < 2; ++eq) {
        forcing_vals[eq].resize(n + 1);
        for (int i = 0; i <= n; ++i)
            forcing_vals[eq][i] = forcing[plans[eq].forcing_src]->eval_at(h * i, r);
    }
    for (int i = 0; i <= n; ++i) kernel_vals[i] = eval_smooth(prob.kernel, h * i);

    NumericTrajectory traj;
    traj.t_max = t_max;
    traj.h = h;
    traj.r = r;
    traj.lower.assign(n + 1, 0.0);
    traj.upper.assign(n + 1, 0.0);
    traj.lower[0] = prob.x0.lower(r);
    traj.upper[0] = prob.x0.upper(r);

    std::vector<double>* endpoints[2] = {&traj.lower, &traj.upper};

    // trapezoid convolution over history [0, t_j]; optional override value
    // stands in for the not-yet-committed endpoint at index j
    auto convolution = [&](int eq, int j, double predicted, bool use_predicted) {
        if (j == 0) return 0.0;
        const std::vector<double>& y = *endpoints[plans[eq].conv_target];
        double sum = 0.5 * kernel_vals[j] * y[0];
        for (int i = 1; i < j; ++i) sum += kernel_vals[j - i] * y[i];
        const double yj = use_predicted ? predicted : y[j];
        sum += 0.5 * kernel_vals[0] * yj;
        return h * sum;
    };

    for (int j = 0; j < n; ++j) {
        double rhs1[2], predicted[2];
        for (int eq = 0; eq < 2; ++eq)
            rhs1[eq] = forcing_vals[eq][j] + convolution(eq, j, 0.0, false);
        for (int eq = 0; eq < 2; ++eq) predicted[eq] = (*endpoints[eq])[j] + h * rhs1[eq];
        double rhs2[2];
        for (int eq = 0; eq < 2; ++eq) {
            const double pred_target = predicted[plans[eq].conv_target];
            rhs2[eq] = forcing_vals[eq][j + 1] + convolution(eq, j + 1, pred_target, true);
        }
        for (int eq = 0; eq < 2; ++eq)
            (*endpoints[eq])[j + 1] = (*endpoints[eq])[j] + 0.5 * h * (rhs1[eq] + rhs2[eq]);
    }
    return traj;
}

namespace detail {

/// Composite Simpson on [0, t] with an even panel count.
template <typename F>
double simpson(F&& f, double t, int panels) {
    if (t <= 0.0) return 0.0;
    if (panels % 2 != 0) ++panels;
    const double h = t / panels;
    double sum = f(0.0) + f(t);
    for (int i = 1; i < panels; ++i) sum += f(h * i) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

} // namespace detail

/// Number of Simpson panels used by the residual quadrature.
inline constexpr int kResidualPanels = 10000;

/// Substitute a solution back into the equation pair: evaluates
/// |x_i'(t) - f_j(t,r) - int_0^t k(t-s) x_t(s,r) ds| with the mode/sign
/// pairing, derivative taken by term calculus, integral by composite
/// Simpson. Smooth parts only; delta terms have no pointwise trace.
inline double residual_check(const FCVIDEProblem& prob, const FuzzySolution& sol, double r,
                             const std::vector<double>& t_grid) {
    const auto plans = equation_plans(prob.mode, prob.sign_x, prob.sign_k);
    const EndpointFn* endpoints[2] = {&sol.x.lower, &sol.x.upper};
    const EndpointFn* forcing[2] = {&prob.forcing.lower, &prob.forcing.upper};

    double worst = 0.0;
    for (int eq = 0; eq < 2; ++eq) {
        const TimeExpr x_at_r = endpoints[eq]->at_r(r);
        const TimeExpr dx = derivative(x_at_r);
        const TimeExpr target = endpoints[plans[eq].conv_target]->at_r(r);
        for (double t : t_grid) {
            const double conv = detail::simpson(
                [&](double s) { return eval_smooth(prob.kernel, t - s) * eval_smooth(target, s); }, t,
                kResidualPanels);
            const double res = std::fabs(eval_smooth(dx, t) -
                                         forcing[plans[eq].forcing_src]->eval_at(t, r) - conv);
            worst = std::max(worst, res);
        }
    }
    return worst;
}

/// Max absolute gap between a symbolic solution and a numeric trajectory at
/// the trajectory's r, over t > 0 (delta terms carry no pointwise value).
inline double compare(const FuzzySolution& sol, const NumericTrajectory& traj) {
    double worst = 0.0;
    for (size_t i = 1; i < traj.size(); ++i) {
        const double t = traj.t_at(i);
        worst = std::max(worst, std::fabs(sol.x.lower.eval_at(t, traj.r) - traj.lower[i]));
        worst = std::max(worst, std::fabs(sol.x.upper.eval_at(t, traj.r) - traj.upper[i]));
    }
    return worst;
}

} // namespace fcvide
