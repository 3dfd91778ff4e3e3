#pragma once

#include "fcvide/fuzzy.hpp"
#include "fcvide/time_expr.hpp"

#include <array>
#include <optional>
#include <string>

namespace fcvide {

/// Differentiability mode of the unknown: (i) passes endpoint derivatives
/// straight through, (ii) swaps them.
enum class Mode { IDiff, IIDiff };

enum class Sign { Positive, Negative };

inline const char* to_string(Mode m) { return m == Mode::IDiff ? "i" : "ii"; }
inline const char* to_string(Sign s) { return s == Sign::Positive ? "positive" : "negative"; }

/// Endpoint function of a fuzzy-valued function of t: value at parameter r
/// is base(t) + r * rpart(t).
struct EndpointFn {
    TimeExpr base;
    TimeExpr rpart;

    double eval_at(double t, double r) const { return eval_smooth(base, t) + r * eval_smooth(rpart, t); }
    TimeExpr at_r(double r) const { return linear_combine(1.0, base, r, rpart); }
};

/// Fuzzy-valued function in endpoint form. Delta terms appear only in
/// solver outputs, never in problem data.
struct FuzzyFn {
    EndpointFn lower;
    EndpointFn upper;
};

/// First-order convolution Volterra integro-differential problem
/// x'(t) = f(t) + int_0^t k(t-s) x(s) ds with fuzzy forcing and initial
/// condition. The kernel is crisp; the declared signs of x and k select the
/// endpoint pairing of the convolution term and are verified post hoc, never
/// inferred.
struct FCVIDEProblem {
    TimeExpr kernel;
    FuzzyFn forcing;
    FuzzyNumber x0;
    Mode mode = Mode::IDiff;
    Sign sign_x = Sign::Positive;
    Sign sign_k = Sign::Positive;
    double t_max = 1.0; ///< horizon for verification grids and the oracle
};

/// How one endpoint equation is wired: which forcing endpoint it carries,
/// which endpoint of x its convolution references, and which kernel endpoint
/// multiplies it (the two kernel slots coincide for crisp kernels, but the
/// assembly keeps both so a fuzzy-kernel extension is input plumbing only).
///
/// Index convention: 0 = lower, 1 = upper.
struct EquationPlan {
    int forcing_src;
    int conv_target;
    int kernel_src;
};

/// The classical form of the equation per mode and sign case:
///
///   mode (i):  lower eq carries f_lower and the lower pairing of l[k]l[x];
///              upper eq carries f_upper and the upper pairing.
///   mode (ii): the forcing endpoints and pairings swap between equations.
///
/// Sign-case pairing of the product l[k]l[x]:
///   lower pairing picks l[k_lower] iff k is positive, l[x_lower] iff x is
///   positive; the upper pairing is complementary in both slots.
inline std::array<EquationPlan, 2> equation_plans(Mode mode, Sign sign_x, Sign sign_k) {
    const int low_k = sign_k == Sign::Positive ? 0 : 1;
    const int low_x = sign_x == Sign::Positive ? 0 : 1;
    const EquationPlan lower_pairing{0, low_x, low_k};
    const EquationPlan upper_pairing{1, 1 - low_x, 1 - low_k};
    if (mode == Mode::IDiff) return {lower_pairing, upper_pairing};
    return {EquationPlan{upper_pairing.forcing_src, upper_pairing.conv_target, upper_pairing.kernel_src},
            EquationPlan{lower_pairing.forcing_src, lower_pairing.conv_target, lower_pairing.kernel_src}};
}

/// One verification check: pass/fail plus the first violation found.
struct CheckResult {
    bool ok = true;
    std::string detail;
};

/// Post-hoc solution diagnostics. None of these are fatal: the literature
/// itself presents solutions that fail their declared sign case.
struct SolutionDiagnostics {
    CheckResult sign_lower;
    CheckResult sign_upper;
    CheckResult stacking;      ///< lower(t,r) <= upper(t,r)
    CheckResult monotonicity;  ///< lower nondecreasing / upper nonincreasing in r
    CheckResult initial_condition;
    std::optional<double> oracle_compare;  ///< max |symbolic - numeric| when the oracle ran
    std::optional<double> oracle_residual; ///< max equation residual when the oracle ran

    bool all_ok() const {
        return sign_lower.ok && sign_upper.ok && stacking.ok && monotonicity.ok && initial_condition.ok;
    }
};

struct FuzzySolution {
    FuzzyFn x;
    SolutionDiagnostics diagnostics;
};

} // namespace fcvide
