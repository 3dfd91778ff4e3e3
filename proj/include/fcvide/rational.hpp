#pragma once

#include "fcvide/errors.hpp"
#include "fcvide/polynomial.hpp"
#include "fcvide/roots.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace fcvide {

/// Ratio of real polynomials in the Laplace variable p. Normalized form has
/// a monic denominator and no common num/den root within the clustering
/// tolerance. Coefficients are plain doubles; every comparison downstream
/// carries an explicit tolerance.
struct RationalFn {
    Polynomial num;
    Polynomial den = Polynomial::constant(1.0);

    RationalFn() = default;
    RationalFn(Polynomial n, Polynomial d) : num(std::move(n)), den(std::move(d)) { normalize(); }

    static RationalFn constant(double c) { return RationalFn(Polynomial::constant(c), Polynomial::constant(1.0)); }
    static RationalFn from_poly(Polynomial p) { return RationalFn(std::move(p), Polynomial::constant(1.0)); }

    bool is_zero(double tol = 0.0) const { return num.max_abs_coeff() <= tol; }

    std::complex<double> eval(std::complex<double> p) const { return num.eval(p) / den.eval(p); }

    void normalize() {
        if (den.is_zero()) throw Error("RationalFn: zero denominator");
        if (num.is_zero()) {
            den = Polynomial::constant(1.0);
            return;
        }
        cancel_common_roots();
        const double lead = den.leading();
        num = num * (1.0 / lead);
        den = den * (1.0 / lead);
        if (!den.coeffs.empty()) den.coeffs.back() = 1.0;
    }

    bool operator==(const RationalFn& o) const { return num == o.num && den == o.den; }

private:
    /// Divide p by (x - r)^count or, for a conjugate pair, by the real
    /// quadratic power. Returns false (leaving p untouched) when the
    /// remainder is not at coefficient-noise level, i.e. the factor is not
    /// genuinely shared.
    static bool deflate(Polynomial& p, std::complex<double> root, int count) {
        const double noise = [&] {
            double s = 0.0, zp = 1.0;
            const double az = std::max(1.0, std::abs(root));
            for (double c : p.coeffs) {
                s += std::fabs(c) * zp;
                zp *= az;
            }
            return s;
        }();
        Polynomial factor = root.imag() == 0.0
                                ? Polynomial{{-root.real(), 1.0}}
                                : Polynomial{{std::norm(root), -2.0 * root.real(), 1.0}};
        Polynomial work = p;
        for (int i = 0; i < count; ++i) {
            auto [q, rem] = divmod(work, factor);
            if (rem.max_abs_coeff() > 1e-6 * std::max(noise, 1.0)) return false;
            work = std::move(q);
        }
        p = std::move(work);
        return true;
    }

    /// Cancel shared num/den roots by deflation. Conjugate pairs are
    /// cancelled together through their real quadratic, so coefficients stay
    /// real and the untouched factors keep full precision. Only runs when a
    /// shared root is actually detected, so the cancellation-free path never
    /// round-trips through root finding.
    void cancel_common_roots() {
        if (num.degree() < 1 || den.degree() < 1) return;
        auto nroots = poly_roots(num);
        auto droots = poly_roots(den);
        for (auto& [dr, dm] : droots) {
            if (dr.imag() < 0.0) continue; // pair handled via its upper member
            for (auto& [nr, nm] : nroots) {
                if (nm == 0 || dm == 0 || nr.imag() < 0.0) continue;
                if (std::abs(nr - dr) > kRootClusterTol * std::max(1.0, std::abs(dr))) continue;
                const int c = std::min(nm, dm);
                Polynomial num_try = num, den_try = den;
                if (!deflate(num_try, dr, c) || !deflate(den_try, dr, c)) continue;
                num = std::move(num_try);
                den = std::move(den_try);
                nm -= c;
                dm -= c;
                if (num.degree() < 1 || den.degree() < 1) return;
            }
        }
    }
};

inline RationalFn rat_add(const RationalFn& a, const RationalFn& b) {
    return RationalFn(a.num * b.den + b.num * a.den, a.den * b.den);
}

inline RationalFn rat_sub(const RationalFn& a, const RationalFn& b) {
    return RationalFn(a.num * b.den - b.num * a.den, a.den * b.den);
}

inline RationalFn rat_mul(const RationalFn& a, const RationalFn& b) {
    return RationalFn(a.num * b.num, a.den * b.den);
}

inline RationalFn rat_div(const RationalFn& a, const RationalFn& b) {
    if (b.num.is_zero()) throw DivisionByZeroRational("rat_div: division by the zero rational function");
    return RationalFn(a.num * b.den, a.den * b.num);
}

inline RationalFn operator+(const RationalFn& a, const RationalFn& b) { return rat_add(a, b); }
inline RationalFn operator-(const RationalFn& a, const RationalFn& b) { return rat_sub(a, b); }
inline RationalFn operator*(const RationalFn& a, const RationalFn& b) { return rat_mul(a, b); }
inline RationalFn operator/(const RationalFn& a, const RationalFn& b) { return rat_div(a, b); }
inline RationalFn operator-(const RationalFn& a) { return RationalFn(-a.num, a.den); }

enum class RatOp { Add, Mul, Div };

/// Dispatch form of the rational arithmetic entry points.
inline RationalFn rat_arith(RatOp op, const RationalFn& a, const RationalFn& b) {
    switch (op) {
        case RatOp::Add: return rat_add(a, b);
        case RatOp::Mul: return rat_mul(a, b);
        case RatOp::Div: return rat_div(a, b);
    }
    throw Error("rat_arith: unknown op");
}

/// Coefficientwise comparison relative to the larger coefficient scale.
inline bool approx_equal(const RationalFn& a, const RationalFn& b, double tol) {
    Polynomial diff = a.num * b.den - b.num * a.den;
    double scale = std::max({1.0, a.num.max_abs_coeff() * b.den.max_abs_coeff(),
                             b.num.max_abs_coeff() * a.den.max_abs_coeff()});
    return diff.max_abs_coeff() <= tol * scale;
}

inline std::string to_string(const RationalFn& r) {
    if (r.den.degree() == 0) return to_string(r.num);
    return "(" + to_string(r.num) + ") / (" + to_string(r.den) + ")";
}

} // namespace fcvide
