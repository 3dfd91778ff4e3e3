#pragma once

#include "fcvide/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace fcvide {

/// Real-coefficient polynomial in the Laplace variable p, coefficients
/// stored ascending. The zero polynomial has an empty coefficient vector.
struct Polynomial {
    std::vector<double> coeffs;

    Polynomial() = default;
    Polynomial(std::initializer_list<double> c) : coeffs(c) { trim(); }
    explicit Polynomial(std::vector<double> c) : coeffs(std::move(c)) { trim(); }

    static Polynomial constant(double c) { return Polynomial{{c}}; }
    static Polynomial variable() { return Polynomial{{0.0, 1.0}}; }

    /// Strip leading coefficients at or below abs_tol (exact zeros by default).
    void trim(double abs_tol = 0.0) {
        while (!coeffs.empty() && std::fabs(coeffs.back()) <= abs_tol) coeffs.pop_back();
    }

    bool is_zero() const { return coeffs.empty(); }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    double leading() const { return coeffs.empty() ? 0.0 : coeffs.back(); }
    double max_abs_coeff() const {
        double m = 0.0;
        for (double c : coeffs) m = std::max(m, std::fabs(c));
        return m;
    }

    double operator[](size_t i) const { return i < coeffs.size() ? coeffs[i] : 0.0; }

    double eval(double x) const {
        double v = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
        return v;
    }
    std::complex<double> eval(std::complex<double> x) const {
        std::complex<double> v = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
        return v;
    }

    Polynomial derivative() const {
        if (coeffs.size() <= 1) return {};
        std::vector<double> d(coeffs.size() - 1);
        for (size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = coeffs[i] * static_cast<double>(i);
        return Polynomial(std::move(d));
    }

    Polynomial operator+(const Polynomial& o) const {
        std::vector<double> c(std::max(coeffs.size(), o.coeffs.size()), 0.0);
        for (size_t i = 0; i < coeffs.size(); ++i) c[i] += coeffs[i];
        for (size_t i = 0; i < o.coeffs.size(); ++i) c[i] += o.coeffs[i];
        return Polynomial(std::move(c));
    }
    Polynomial operator-(const Polynomial& o) const {
        std::vector<double> c(std::max(coeffs.size(), o.coeffs.size()), 0.0);
        for (size_t i = 0; i < coeffs.size(); ++i) c[i] += coeffs[i];
        for (size_t i = 0; i < o.coeffs.size(); ++i) c[i] -= o.coeffs[i];
        return Polynomial(std::move(c));
    }
    Polynomial operator*(const Polynomial& o) const {
        if (is_zero() || o.is_zero()) return {};
        std::vector<double> c(coeffs.size() + o.coeffs.size() - 1, 0.0);
        for (size_t i = 0; i < coeffs.size(); ++i)
            for (size_t j = 0; j < o.coeffs.size(); ++j) c[i + j] += coeffs[i] * o.coeffs[j];
        return Polynomial(std::move(c));
    }
    Polynomial operator*(double k) const {
        std::vector<double> c = coeffs;
        for (double& x : c) x *= k;
        return Polynomial(std::move(c));
    }
    Polynomial operator-() const { return *this * -1.0; }

    bool operator==(const Polynomial& o) const { return coeffs == o.coeffs; }
};

/// Long division: a = q*b + r with deg r < deg b. The leading term of the
/// running remainder is cancelled by construction, so no tolerance enters.
inline std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw Error("divmod: division by zero polynomial");
    if (a.degree() < b.degree()) return {{}, a};
    std::vector<double> rem = a.coeffs;
    std::vector<double> quot(a.degree() - b.degree() + 1, 0.0);
    const double lead = b.leading();
    for (int d = a.degree(); d >= b.degree(); --d) {
        double f = rem[d] / lead;
        quot[d - b.degree()] = f;
        for (int i = 0; i <= b.degree(); ++i) rem[d - b.degree() + i] -= f * b.coeffs[i];
        rem[d] = 0.0;
        rem.pop_back();
    }
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

/// Expand a polynomial from a set of (root, multiplicity) factors times a
/// leading scalar. Conjugate pairs are multiplied as real quadratics so the
/// result stays exactly real.
inline Polynomial poly_from_roots(const std::vector<std::pair<std::complex<double>, int>>& roots,
                                  double leading = 1.0) {
    Polynomial out = Polynomial::constant(leading);
    std::vector<std::pair<std::complex<double>, int>> pending = roots;
    const double imag_tol = 1e-12;
    for (size_t i = 0; i < pending.size(); ++i) {
        auto [r, m] = pending[i];
        if (m <= 0) continue;
        if (std::fabs(r.imag()) <= imag_tol * std::max(1.0, std::fabs(r.real()))) {
            Polynomial lin{{-r.real(), 1.0}};
            for (int k = 0; k < m; ++k) out = out * lin;
            continue;
        }
        // find and consume the conjugate partner
        bool paired = false;
        for (size_t j = i + 1; j < pending.size(); ++j) {
            auto& [s, ms] = pending[j];
            if (ms == m && std::fabs(s.real() - r.real()) < 1e-9 && std::fabs(s.imag() + r.imag()) < 1e-9) {
                Polynomial quad{{std::norm(r), -2.0 * r.real(), 1.0}};
                for (int k = 0; k < m; ++k) out = out * quad;
                ms = 0;
                paired = true;
                break;
            }
        }
        if (!paired) throw Error("poly_from_roots: unpaired complex root");
    }
    return out;
}

inline std::string to_string(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (int i = p.degree(); i >= 0; --i) {
        double c = p.coeffs[i];
        if (c == 0.0) continue;
        if (!out.empty()) {
            out += c < 0.0 ? " - " : " + ";
            c = std::fabs(c);
        } else if (c < 0.0) {
            out += "-";
            c = -c;
        }
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%g", c);
        if (i == 0)
            out += buf;
        else {
            if (c != 1.0) {
                out += buf;
                out += "*";
            }
            out += i == 1 ? "p" : "p^" + std::to_string(i);
        }
    }
    return out;
}

} // namespace fcvide
