#pragma once

#include "fcvide/errors.hpp"
#include "fcvide/polynomial.hpp"
#include "fcvide/rational.hpp"
#include "fcvide/roots.hpp"
#include "fcvide/time_expr.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace fcvide {

namespace detail {

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

inline double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
    return b;
}

/// (p - a)^m expanded to ascending real coefficients.
inline Polynomial real_linear_power(double a, int m) {
    std::vector<double> c(m + 1, 0.0);
    for (int k = 0; k <= m; ++k) c[k] = binomial(m, k) * std::pow(-a, m - k);
    return Polynomial(std::move(c));
}

// Extended-precision kernel for residue extraction. Double-precision pole
// estimates cost ~1e-10; the t^n e^{at} value scale at t ~ 2 amplifies that
// past the round-trip tolerance, so the inner PFD arithmetic runs in long
// double.
using cplxl = std::complex<long double>;

inline std::vector<long double> to_ld(const std::vector<double>& c) {
    return std::vector<long double>(c.begin(), c.end());
}

inline std::vector<long double> derivative_ld(const std::vector<long double>& c) {
    if (c.size() <= 1) return {};
    std::vector<long double> d(c.size() - 1);
    for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<long double>(i);
    return d;
}

inline cplxl eval_ld(const std::vector<long double>& c, cplxl z) {
    cplxl v = 0.0L;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
    return v;
}

inline cplxl newton_ld(const std::vector<long double>& c, cplxl z0) {
    const auto d = derivative_ld(c);
    cplxl z = z0;
    for (int it = 0; it < 80; ++it) {
        cplxl f = eval_ld(c, z);
        cplxl df = eval_ld(d, z);
        if (std::abs(df) == 0.0L) break;
        cplxl step = f / df;
        z -= step;
        if (std::abs(step) <= 1e-19L * std::max<long double>(1.0L, std::abs(z))) break;
    }
    return z;
}

} // namespace detail

/// Table-driven Laplace transform of a closed-form expression.
///   t^n e^{at}            -> n!/(p-a)^{n+1}
///   t^n e^{at} cos/sin wt -> conjugate-pair combination over ((p-a)^2+w^2)^{n+1}
///   delta^{(k)}           -> p^k
/// Terms sharing a pole family (rate, omega) are combined over one exact
/// power of the common factor, so no shared den factor is ever created and
/// later cancelled. The region of convergence is not tracked; the result is
/// the formal rational function.
inline RationalFn laplace_transform(const TimeExpr& e) {
    using cplx = std::complex<double>;
    struct PoleGroup {
        double rate, omega;
        std::vector<const SmoothTerm*> terms;
    };
    std::vector<PoleGroup> groups;
    for (const auto& t : e.smooth) {
        PoleGroup* g = nullptr;
        for (auto& cand : groups)
            if (cand.rate == t.rate && cand.omega == t.omega) g = &cand;
        if (!g) {
            groups.push_back({t.rate, t.omega, {}});
            g = &groups.back();
        }
        g->terms.push_back(&t);
    }

    RationalFn acc = RationalFn::constant(0.0);
    for (const auto& g : groups) {
        int m_max = 0;
        for (const auto* t : g.terms) m_max = std::max(m_max, t->n + 1);
        const Polynomial factor = g.omega == 0.0
                                      ? Polynomial{{-g.rate, 1.0}}
                                      : Polynomial{{g.rate * g.rate + g.omega * g.omega, -2.0 * g.rate, 1.0}};
        Polynomial den = Polynomial::constant(1.0);
        for (int k = 0; k < m_max; ++k) den = den * factor;

        Polynomial num_sum;
        for (const auto* t : g.terms) {
            const int m = t->n + 1;
            const double fac = detail::factorial(t->n);
            Polynomial num_term;
            if (t->osc == Osc::None) {
                num_term = Polynomial::constant(t->coeff * fac);
            } else {
                // num_k = Re or -Im of C(m,k) (-alpha)^{m-k}, alpha = a + i w
                const cplx alpha(t->rate, t->omega);
                std::vector<double> num(m + 1, 0.0);
                for (int k = 0; k <= m; ++k) {
                    cplx y = detail::binomial(m, k) * std::pow(-alpha, m - k);
                    num[k] = t->coeff * fac * (t->osc == Osc::Cos ? y.real() : -y.imag());
                }
                num_term = Polynomial(std::move(num));
            }
            for (int k = 0; k < m_max - m; ++k) num_term = num_term * factor;
            num_sum = num_sum + num_term;
        }
        acc = rat_add(acc, RationalFn(std::move(num_sum), std::move(den)));
    }
    for (const auto& d : e.deltas) {
        std::vector<double> c(d.k + 1, 0.0);
        c[d.k] = d.coeff;
        acc = rat_add(acc, RationalFn::from_poly(Polynomial(std::move(c))));
    }
    return acc;
}

/// One partial-fraction term coefficient/(p - root)^multiplicity.
struct PFDTerm {
    std::complex<double> root;
    int multiplicity = 1;
    std::complex<double> coefficient;
};

struct PartialFractions {
    Polynomial quotient; ///< nonzero only for improper input
    std::vector<PFDTerm> terms;
};

/// Decompose R into quotient + sum of residue terms over its poles.
/// Residues at a multiplicity-m pole come from the derivatives of
/// h = N/B at the pole (B = den with the pole's factor removed), computed
/// by the Leibniz recurrence on N = h*B -- polynomial calculus only, no
/// limit sampling.
inline PartialFractions partial_fractions(const RationalFn& r) {
    using cplx = std::complex<double>;
    PartialFractions out;
    Polynomial num = r.num;
    const Polynomial& den = r.den;
    if (num.is_zero()) return out;
    if (num.degree() >= den.degree()) {
        auto [q, rem] = divmod(num, den);
        out.quotient = std::move(q);
        num = std::move(rem);
        if (num.is_zero()) return out;
    }
    if (den.degree() == 0) return out; // constant denominator, already in quotient

    auto roots = poly_roots(den);
    const auto den_ld = detail::to_ld(den.coeffs);
    const auto num_ld = detail::to_ld(num.coeffs);
    for (const auto& [alpha0, m] : roots) {
        // Re-polish the pole in extended precision on the derivative where it
        // is simple; fall back to the clustered estimate if Newton drifts.
        std::vector<long double> q = den_ld;
        for (int i = 0; i < m - 1; ++i) q = detail::derivative_ld(q);
        detail::cplxl alpha = detail::newton_ld(q, detail::cplxl(alpha0));
        if (std::abs(alpha - detail::cplxl(alpha0)) >
            1e-4L * std::max<long double>(1.0L, std::abs(alpha0)))
            alpha = detail::cplxl(alpha0);

        // Deflate: B = den / (p - alpha)^m, complex synthetic division.
        std::vector<detail::cplxl> b(den_ld.begin(), den_ld.end());
        for (int pass = 0; pass < m; ++pass) {
            std::vector<detail::cplxl> qq(b.size() - 1);
            detail::cplxl carry = b.back();
            for (int i = static_cast<int>(b.size()) - 2; i >= 0; --i) {
                qq[i] = carry;
                carry = b[i] + carry * alpha;
            }
            b = std::move(qq);
        }
        // Taylor coefficients of B and N at alpha by repeated Horner shifts.
        auto taylor_at = [&](const std::vector<detail::cplxl>& poly, int orders) {
            std::vector<detail::cplxl> d(orders + 1, 0.0L);
            for (int i = static_cast<int>(poly.size()) - 1; i >= 0; --i) {
                for (int j = orders; j >= 1; --j) d[j] = d[j] * alpha + d[j - 1];
                d[0] = d[0] * alpha + poly[i];
            }
            return d; // d[j] = poly^{(j)}(alpha)/j!
        };
        auto nd = taylor_at(std::vector<detail::cplxl>(num_ld.begin(), num_ld.end()), m - 1);
        auto bd = taylor_at(b, m - 1);
        if (std::abs(bd[0]) == 0.0L) throw Error("partial_fractions: pole deflation failed");

        // h[j] = h^{(j)}(alpha)/j! from N = h*B: nd[j] = sum h[k] bd[j-k].
        std::vector<detail::cplxl> h(m, 0.0L);
        for (int j = 0; j < m; ++j) {
            detail::cplxl s = nd[j];
            for (int k = 0; k < j; ++k) s -= h[k] * bd[j - k];
            h[j] = s / bd[0];
        }
        // h[j] is the coefficient of (p-alpha)^{m-j} in the decomposition.
        const cplx alpha_d(static_cast<double>(alpha.real()), static_cast<double>(alpha.imag()));
        for (int j = 0; j < m; ++j) {
            const cplx coeff(static_cast<double>(h[j].real()), static_cast<double>(h[j].imag()));
            if (std::abs(coeff) > 0.0) out.terms.push_back({alpha_d, m - j, coeff});
        }
    }
    return out;
}

/// Recombine a decomposition over the common denominator (test/diagnostic
/// helper; complex arithmetic, imaginary part of the result should vanish
/// for conjugate-symmetric input).
inline RationalFn recombine(const PartialFractions& pf) {
    using cplx = std::complex<double>;
    // gather distinct poles with their max multiplicity
    std::vector<std::pair<cplx, int>> poles;
    for (const auto& t : pf.terms) {
        bool found = false;
        for (auto& [r, m] : poles)
            if (std::abs(r - t.root) == 0.0) {
                m = std::max(m, t.multiplicity);
                found = true;
            }
        if (!found) poles.emplace_back(t.root, t.multiplicity);
    }
    auto cmul = [](const std::vector<cplx>& a, const std::vector<cplx>& b) {
        std::vector<cplx> c(a.size() + b.size() - 1, 0.0);
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
        return c;
    };
    std::vector<cplx> den{1.0};
    for (const auto& [r, m] : poles)
        for (int k = 0; k < m; ++k) den = cmul(den, {-r, cplx(1.0)});
    std::vector<cplx> num{0.0};
    for (const auto& t : pf.terms) {
        // t.coefficient * den / (p - t.root)^t.multiplicity
        std::vector<cplx> part{t.coefficient};
        for (const auto& [r, m] : poles) {
            int reduce = (std::abs(r - t.root) == 0.0) ? t.multiplicity : 0;
            for (int k = 0; k < m - reduce; ++k) part = cmul(part, {-r, cplx(1.0)});
        }
        if (num.size() < part.size()) num.resize(part.size(), 0.0);
        for (size_t i = 0; i < part.size(); ++i) num[i] += part[i];
    }
    if (!pf.quotient.is_zero()) {
        std::vector<cplx> q(pf.quotient.coeffs.begin(), pf.quotient.coeffs.end());
        auto qd = cmul(q, den);
        if (num.size() < qd.size()) num.resize(qd.size(), 0.0);
        for (size_t i = 0; i < qd.size(); ++i) num[i] += qd[i];
    }
    std::vector<double> rnum(num.size()), rden(den.size());
    for (size_t i = 0; i < num.size(); ++i) rnum[i] = num[i].real();
    for (size_t i = 0; i < den.size(); ++i) rden[i] = den[i].real();
    return RationalFn(Polynomial(std::move(rnum)), Polynomial(std::move(rden)));
}

/// Inverse transform of a rational function.
///   coefficient/(p-a)^m             -> coefficient t^{m-1} e^{at}/(m-1)!
///   conjugate pair at a +- i w      -> t^{m-1} e^{at}(c1 cos wt + c2 sin wt)
///   quotient sum q_k p^k            -> sum q_k delta^{(k)}(t)
/// Unpaired complex roots or residues with a stray imaginary part signal a
/// clustering failure upstream and raise ResidualImaginaryTooLarge.
inline TimeExpr inverse_laplace(const RationalFn& r) {
    auto pf = partial_fractions(r);
    TimeExpr out;
    for (int k = 0; k <= pf.quotient.degree(); ++k)
        if (pf.quotient.coeffs[k] != 0.0) out.deltas.push_back({pf.quotient.coeffs[k], k});

    const double scale = std::max(1.0, r.num.max_abs_coeff());
    std::vector<bool> used(pf.terms.size(), false);
    for (size_t i = 0; i < pf.terms.size(); ++i) {
        if (used[i]) continue;
        const auto& t = pf.terms[i];
        const double fac = detail::factorial(t.multiplicity - 1);
        if (t.root.imag() == 0.0) {
            if (std::fabs(t.coefficient.imag()) > 1e-9 * scale)
                throw ResidualImaginaryTooLarge("inverse_laplace: real pole with imaginary residue");
            out.smooth.push_back({t.coefficient.real() / fac, t.multiplicity - 1, t.root.real(),
                                  Osc::None, 0.0});
            used[i] = true;
            continue;
        }
        // find the conjugate partner term
        size_t partner = pf.terms.size();
        for (size_t j = i + 1; j < pf.terms.size(); ++j) {
            if (used[j] || pf.terms[j].multiplicity != t.multiplicity) continue;
            if (std::abs(pf.terms[j].root - std::conj(t.root)) <=
                1e-9 * std::max(1.0, std::abs(t.root))) {
                partner = j;
                break;
            }
        }
        if (partner == pf.terms.size())
            throw ResidualImaginaryTooLarge("inverse_laplace: unpaired complex pole");
        const auto& u = pf.terms[partner];
        if (std::abs(t.coefficient - std::conj(u.coefficient)) >
            1e-9 * std::max(1.0, std::abs(t.coefficient)) + 1e-9 * scale)
            throw ResidualImaginaryTooLarge("inverse_laplace: conjugate residues are not conjugate");
        std::complex<double> c = (t.coefficient + std::conj(u.coefficient)) / 2.0;
        const double a = t.root.real();
        const double w = std::fabs(t.root.imag());
        // residue attached to the +i w root of the pair
        if (t.root.imag() < 0.0) c = std::conj(c);
        out.smooth.push_back({2.0 * c.real() / fac, t.multiplicity - 1, a, Osc::Cos, w});
        out.smooth.push_back({-2.0 * c.imag() / fac, t.multiplicity - 1, a, Osc::Sin, w});
        used[i] = used[partner] = true;
    }
    return TimeExpr::normalized(out);
}

} // namespace fcvide
