#pragma once

#include "fcvide/fuzzy.hpp"
#include "fcvide/problem.hpp"
#include "fcvide/time_expr.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace fcvide {

/// Human-facing number format: integers print bare ("2", "-1"), everything
/// else shortest round-trip.
inline std::string format_number(double v) {
    char buf[40];
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

namespace pretty_detail {

/// One display term after sinh/cosh re-sugaring.
struct DisplayTerm {
    double coeff;
    int n;
    std::string body; ///< factor string without coefficient or t-power
};

inline std::string linear_arg(double k) {
    if (k == 1.0) return "t";
    if (k == -1.0) return "-t";
    return format_number(k) + "*t";
}

/// Rewrite exact e^{at} / e^{-at} coefficient pairs as sinh/cosh and format
/// every term down to coefficient + body.
inline std::vector<DisplayTerm> display_terms(const TimeExpr& e) {
    std::vector<DisplayTerm> out;
    std::vector<bool> used(e.smooth.size(), false);
    const auto& terms = e.smooth;
    for (size_t i = 0; i < terms.size(); ++i) {
        if (used[i]) continue;
        const auto& t = terms[i];
        if (t.osc == Osc::None && t.rate != 0.0) {
            // look for the mirrored rate with matching power
            for (size_t j = 0; j < terms.size(); ++j) {
                if (j == i || used[j]) continue;
                const auto& u = terms[j];
                if (u.osc != Osc::None || u.n != t.n || u.rate != -t.rate) continue;
                const double scale = std::max({1.0, std::fabs(t.coeff), std::fabs(u.coeff)});
                const double a = std::fabs(t.rate);
                const auto& pos = t.rate > 0.0 ? t : u;
                const auto& neg = t.rate > 0.0 ? u : t;
                if (std::fabs(pos.coeff + neg.coeff) <= 1e-12 * scale) {
                    out.push_back({2.0 * pos.coeff, t.n, "sinh(" + linear_arg(a) + ")"});
                    used[i] = used[j] = true;
                } else if (std::fabs(pos.coeff - neg.coeff) <= 1e-12 * scale) {
                    out.push_back({2.0 * pos.coeff, t.n, "cosh(" + linear_arg(a) + ")"});
                    used[i] = used[j] = true;
                }
                if (used[i]) break;
            }
            if (used[i]) continue;
        }
        std::string body;
        if (t.rate != 0.0) body += "exp(" + linear_arg(t.rate) + ")";
        if (t.osc == Osc::Cos) body += (body.empty() ? "" : "*") + ("cos(" + linear_arg(t.omega) + ")");
        if (t.osc == Osc::Sin) body += (body.empty() ? "" : "*") + ("sin(" + linear_arg(t.omega) + ")");
        out.push_back({t.coeff, t.n, std::move(body)});
        used[i] = true;
    }
    for (const auto& d : e.deltas)
        out.push_back({d.coeff, 0, d.k == 0 ? "delta(t)" : "delta^" + std::to_string(d.k) + "(t)"});
    return out;
}

inline std::string join(const std::vector<DisplayTerm>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    for (const auto& term : terms) {
        double c = term.coeff;
        if (out.empty()) {
            if (c < 0.0) out += "-";
        } else {
            out += c < 0.0 ? " - " : " + ";
        }
        c = std::fabs(c);
        std::string factors;
        if (term.n > 0) factors = term.n == 1 ? "t" : "t^" + std::to_string(term.n);
        if (!term.body.empty()) {
            if (!factors.empty()) factors += "*";
            factors += term.body;
        }
        if (factors.empty())
            out += format_number(c);
        else if (c == 1.0)
            out += factors;
        else
            out += format_number(c) + "*" + factors;
    }
    return out;
}

} // namespace pretty_detail

/// Sugared expression form: coefficient-1 elision, bare integers, sinh/cosh
/// recovered from their exponential halves. Re-parses to the same expression.
inline std::string format_sugared(const TimeExpr& e) {
    return pretty_detail::join(pretty_detail::display_terms(e));
}

/// "(1 + r)", "(1 - r)", "(-2 + r)", "2", "(3*r)"
inline std::string format_affine(const AffineR& a) {
    if (a.b == 0.0) return format_number(a.a);
    std::string out = "(";
    if (a.a != 0.0) {
        out += format_number(a.a);
        out += a.b < 0.0 ? " - " : " + ";
        if (std::fabs(a.b) != 1.0) out += format_number(std::fabs(a.b)) + "*";
        out += "r";
    } else {
        if (a.b == -1.0)
            out += "-r";
        else if (a.b == 1.0)
            out += "r";
        else
            out += format_number(a.b) + "*r";
    }
    out += ")";
    return out;
}

namespace pretty_detail {

/// rpart = lambda * base, structurally? The canonical term order makes this
/// a pairwise signature walk.
inline bool proportional_to(const TimeExpr& base, const TimeExpr& rpart, double& lambda) {
    if (base.is_zero()) return false;
    if (base.smooth.size() != rpart.smooth.size() || base.deltas.size() != rpart.deltas.size())
        return false;
    bool have_lambda = false;
    auto check = [&](double bc, double rc, bool same_sig) {
        if (!same_sig || bc == 0.0) return false;
        if (!have_lambda) {
            lambda = rc / bc;
            have_lambda = true;
            return true;
        }
        return std::fabs(rc - lambda * bc) <= 1e-9 * std::max(1.0, std::fabs(rc));
    };
    for (size_t i = 0; i < base.smooth.size(); ++i) {
        const auto& b = base.smooth[i];
        const auto& r = rpart.smooth[i];
        const bool sig = b.n == r.n && b.osc == r.osc && std::fabs(b.rate - r.rate) <= 1e-9 &&
                         std::fabs(b.omega - r.omega) <= 1e-9;
        if (!check(b.coeff, r.coeff, sig)) return false;
    }
    for (size_t i = 0; i < base.deltas.size(); ++i)
        if (!check(base.deltas[i].coeff, rpart.deltas[i].coeff, base.deltas[i].k == rpart.deltas[i].k))
            return false;
    return have_lambda && lambda != 0.0;
}

} // namespace pretty_detail

/// Endpoint function pretty-printer. When rpart is proportional to base the
/// affine factor is pulled out, giving the familiar "(1 + r)*(exp(t) - 1)"
/// shape; otherwise prints base + r*(rpart).
inline std::string format_endpoint(const EndpointFn& f) {
    const TimeExpr& base = f.base;
    const TimeExpr& rpart = f.rpart;
    if (base.is_zero() && rpart.is_zero()) return "0";
    if (rpart.is_zero()) return format_sugared(base);

    double lambda = 0.0;
    if (pretty_detail::proportional_to(base, rpart, lambda)) {
        // anchor on the last sugared term so the factored expression leads
        // with a unit coefficient: (1 + r)*(exp(t) - 1), (1 - r)*sinh(t)
        const auto display = pretty_detail::display_terms(base);
        const double anchor = display.back().coeff;
        const TimeExpr unit = scale(1.0 / anchor, base);
        const std::string affine = format_affine({anchor, anchor * lambda});
        const auto unit_display = pretty_detail::display_terms(unit);
        const std::string unit_str = pretty_detail::join(unit_display);
        if (unit_str == "1") return affine;
        if (unit_display.size() == 1 && unit_display[0].coeff >= 0.0) return affine + "*" + unit_str;
        return affine + "*(" + unit_str + ")";
    }
    std::string out = base.is_zero() ? "" : format_sugared(base);
    if (!out.empty()) out += " + ";
    out += "r*(" + format_sugared(rpart) + ")";
    return out;
}

} // namespace fcvide
