#pragma once

#include "fcvide/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace fcvide {

/// Scalar affine in the membership parameter r: value(r) = a + b*r, r in [0,1].
/// All fuzzy data in this library is affine in r, so sup/inf over r are exact
/// endpoint evaluations.
struct AffineR {
    double a = 0.0; ///< constant part
    double b = 0.0; ///< coefficient of r

    double operator()(double r) const { return a + b * r; }

    AffineR operator+(const AffineR& o) const { return {a + o.a, b + o.b}; }
    AffineR operator-(const AffineR& o) const { return {a - o.a, b - o.b}; }
    AffineR operator*(double k) const { return {k * a, k * b}; }
    AffineR operator-() const { return {-a, -b}; }

    bool operator==(const AffineR& o) const = default;
};

/// Parametric fuzzy number: endpoint functions (lower(r), upper(r)), both
/// affine in r. Invalid shapes (wrong monotonicity or crossing endpoints)
/// are constructible -- several literature problems carry such data -- and
/// are surfaced through validate().
struct FuzzyNumber {
    AffineR lower; ///< left endpoint of the r-cut
    AffineR upper; ///< right endpoint of the r-cut

    bool operator==(const FuzzyNumber& o) const = default;

    static FuzzyNumber crisp(double v) { return {{v, 0.0}, {v, 0.0}}; }
};

/// Clause-by-clause compliance report for the parametric fuzzy-number
/// conditions: lower nondecreasing, upper nonincreasing, lower <= upper.
struct ValidityReport {
    bool lower_nondecreasing = false;
    bool upper_nonincreasing = false;
    bool ordered = false;

    bool valid() const { return lower_nondecreasing && upper_nonincreasing && ordered; }

    std::vector<std::string> violations() const {
        std::vector<std::string> v;
        if (!lower_nondecreasing) v.push_back("lower endpoint decreasing in r");
        if (!upper_nonincreasing) v.push_back("upper endpoint increasing in r");
        if (!ordered) v.push_back("lower(r) > upper(r) somewhere in [0,1]");
        return v;
    }
};

/// Check the three parametric-form clauses. Affinity makes endpoint
/// evaluation at r = 0 and r = 1 sufficient.
inline ValidityReport validate(const FuzzyNumber& u) {
    ValidityReport rep;
    rep.lower_nondecreasing = u.lower.b >= 0.0;
    rep.upper_nonincreasing = u.upper.b <= 0.0;
    rep.ordered = u.lower(0.0) <= u.upper(0.0) && u.lower(1.0) <= u.upper(1.0);
    return rep;
}

/// Componentwise addition of r-cut endpoints.
inline FuzzyNumber add(const FuzzyNumber& u, const FuzzyNumber& v) {
    return {u.lower + v.lower, u.upper + v.upper};
}

/// Multiplication by a crisp scalar; negative scalars swap the endpoints.
inline FuzzyNumber scalar_mul(double j, const FuzzyNumber& u) {
    if (j >= 0.0) return {u.lower * j, u.upper * j};
    return {u.upper * j, u.lower * j};
}

/// Hukuhara difference z with x = y + z. Exists only when the componentwise
/// difference is itself a valid fuzzy number.
inline FuzzyNumber h_difference(const FuzzyNumber& x, const FuzzyNumber& y) {
    FuzzyNumber z{x.lower - y.lower, x.upper - y.upper};
    if (!validate(z).valid())
        throw NoHDifference("H-difference does not exist: componentwise difference is not a valid fuzzy number");
    return z;
}

/// Hausdorff distance sup_r max{|lower gap|, |upper gap|}. For affine
/// endpoints the sup is attained at r = 0 or r = 1.
inline double hausdorff_distance(const FuzzyNumber& u, const FuzzyNumber& v) {
    const double cands[4] = {
        std::fabs(u.lower(0.0) - v.lower(0.0)),
        std::fabs(u.lower(1.0) - v.lower(1.0)),
        std::fabs(u.upper(0.0) - v.upper(0.0)),
        std::fabs(u.upper(1.0) - v.upper(1.0)),
    };
    return *std::max_element(cands, cands + 4);
}

} // namespace fcvide
