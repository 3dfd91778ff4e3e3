#pragma once

#include "fcvide/errors.hpp"
#include "fcvide/oracle.hpp"
#include "fcvide/pretty.hpp"
#include "fcvide/problem_file.hpp"
#include "fcvide/solver.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace fcvide {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolverError = 2;
inline constexpr int kExitParseError = 3;

namespace driver_detail {

inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

inline void report_check(std::ostream& out, const char* name, const CheckResult& check) {
    if (check.ok)
        out << "  " << name << ": OK\n";
    else
        out << "  WARN " << name << ": " << check.detail << "\n";
}

} // namespace driver_detail

inline std::vector<double> r_grid_of(int r_points) {
    std::vector<double> grid;
    if (r_points == 1) {
        grid.push_back(1.0);
        return grid;
    }
    for (int i = 0; i < r_points; ++i) grid.push_back(static_cast<double>(i) / (r_points - 1));
    return grid;
}

/// Sample the solution's smooth part over the t x r grid. Columns are
/// exactly `t,r,lower,upper`, 15 significant digits, LF line endings.
inline void write_csv(const std::string& path, const FuzzySolution& sol, double t_max, int steps,
                      const std::vector<double>& r_grid) {
    std::ofstream csv(path);
    if (!csv) throw Error("cannot open CSV output file: " + path);
    csv << "t,r,lower,upper\n";
    char buf[128];
    const double h = t_max / steps;
    for (int i = 0; i <= steps; ++i) {
        const double t = h * i;
        for (double r : r_grid) {
            std::snprintf(buf, sizeof(buf), "%.15g,%.15g,%.15g,%.15g\n", t, r,
                          sol.x.lower.eval_at(t, r), sol.x.upper.eval_at(t, r));
            csv << buf;
        }
    }
}

/// Solve, print the report (closed forms, diagnostics, oracle summary),
/// write the CSV when configured. Diagnostics failures WARN but do not
/// change the exit code; solver errors exit 2.
inline int run(const ProblemFile& file, std::ostream& out) {
    const FCVIDEProblem& prob = file.problem;
    out << "mode: " << to_string(prob.mode) << "-differentiable"
        << "   sign_x: " << to_string(prob.sign_x) << "   sign_k: " << to_string(prob.sign_k) << "\n";

    FuzzySolution sol;
    try {
        sol = solve_fcvide(prob);
    } catch (const Error& err) {
        out << "solver error: " << err.what() << "\n";
        return kExitSolverError;
    }

    out << "closed form:\n";
    out << "  x_lower(t,r) = " << format_endpoint(sol.x.lower) << "\n";
    out << "  x_upper(t,r) = " << format_endpoint(sol.x.upper) << "\n";

    out << "diagnostics:\n";
    driver_detail::report_check(out, "initial condition", sol.diagnostics.initial_condition);
    driver_detail::report_check(out, "sign x_lower", sol.diagnostics.sign_lower);
    driver_detail::report_check(out, "sign x_upper", sol.diagnostics.sign_upper);
    driver_detail::report_check(out, "stacking", sol.diagnostics.stacking);
    driver_detail::report_check(out, "monotonicity in r", sol.diagnostics.monotonicity);

    const std::vector<double> r_grid = r_grid_of(file.options.r_points);
    if (file.options.oracle) {
        out << "oracle (steps=" << file.options.steps << ", t_max=" << format_number(file.options.t_max)
            << "):\n";
        std::vector<double> residual_grid;
        for (int i = 1; i <= 4; ++i) residual_grid.push_back(file.options.t_max * i / 4.0);
        double worst_compare = 0.0, worst_residual = 0.0;
        for (double r : r_grid) {
            const auto traj = numeric_solve(prob, r, file.options.t_max, file.options.steps);
            const double cmp = compare(sol, traj);
            const double res = residual_check(prob, sol, r, residual_grid);
            worst_compare = std::max(worst_compare, cmp);
            worst_residual = std::max(worst_residual, res);
            out << "  r=" << format_number(r) << ": compare=" << driver_detail::sci(cmp)
                << " residual=" << driver_detail::sci(res) << "\n";
        }
        sol.diagnostics.oracle_compare = worst_compare;
        sol.diagnostics.oracle_residual = worst_residual;
    }

    if (!file.options.csv_out.empty()) {
        write_csv(file.options.csv_out, sol, file.options.t_max, file.options.steps, r_grid);
        out << "csv: wrote " << (file.options.steps + 1) * r_grid.size() << " rows to "
            << file.options.csv_out << "\n";
    }
    return kExitOk;
}

} // namespace fcvide
