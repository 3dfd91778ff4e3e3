#pragma once

#include "fcvide/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

namespace fcvide {

/// Coefficients with magnitude below this are dropped during normalization.
/// Double-precision partial fractions leave roundoff residue; exact-zero
/// filtering would keep ghost terms alive.
inline constexpr double kCoeffDropTol = 1e-12;

/// Tolerance for merging smooth-term signatures whose rate/frequency differ
/// only by root-finding roundoff.
inline constexpr double kSignatureMergeTol = 1e-9;

enum class Osc { None, Cos, Sin };

/// One term coeff * t^n * exp(rate*t) * {1, cos(omega t), sin(omega t)}.
/// omega is 0 exactly when osc == None, and > 0 otherwise.
struct SmoothTerm {
    double coeff = 0.0;
    int n = 0;
    double rate = 0.0;
    Osc osc = Osc::None;
    double omega = 0.0;
};

/// Distributional term coeff * delta^(k)(t).
struct DeltaTerm {
    double coeff = 0.0;
    int k = 0;
};

/// Finite sum of exponential-polynomial-trigonometric terms plus Dirac
/// terms. Normalized form: no duplicate (n, rate, osc, omega) signatures,
/// no duplicate delta orders, terms sorted by (rate, omega, n, osc tag),
/// so equality is structural.
struct TimeExpr {
    std::vector<SmoothTerm> smooth;
    std::vector<DeltaTerm> deltas;

    static TimeExpr zero() { return {}; }
    static TimeExpr constant(double c) {
        TimeExpr e;
        if (c != 0.0) e.smooth.push_back({c, 0, 0.0, Osc::None, 0.0});
        return e;
    }
    static TimeExpr term(double coeff, int n, double rate, Osc osc = Osc::None, double omega = 0.0) {
        TimeExpr e;
        e.smooth.push_back({coeff, n, rate, osc, omega});
        return normalized(e);
    }
    static TimeExpr delta(double coeff, int k = 0) {
        TimeExpr e;
        e.deltas.push_back({coeff, k});
        return e;
    }

    bool is_zero() const { return smooth.empty() && deltas.empty(); }

    static TimeExpr normalized(TimeExpr e);
};

namespace detail {

inline int osc_tag(Osc o) {
    switch (o) {
        case Osc::None: return 0;
        case Osc::Cos: return 1;
        case Osc::Sin: return 2;
    }
    return 0;
}

inline bool term_key_less(const SmoothTerm& x, const SmoothTerm& y) {
    if (x.rate != y.rate) return x.rate < y.rate;
    if (x.omega != y.omega) return x.omega < y.omega;
    if (x.n != y.n) return x.n < y.n;
    return osc_tag(x.osc) < osc_tag(y.osc);
}

inline bool same_signature(const SmoothTerm& x, const SmoothTerm& y) {
    return x.n == y.n && x.osc == y.osc &&
           std::fabs(x.rate - y.rate) <= kSignatureMergeTol &&
           std::fabs(x.omega - y.omega) <= kSignatureMergeTol;
}

} // namespace detail

inline TimeExpr TimeExpr::normalized(TimeExpr e) {
    // Canonicalize oscillation: omega < 0 folds by parity, omega == 0 folds
    // into the plain exponential (sin part vanishes).
    for (auto& t : e.smooth) {
        if (t.osc == Osc::None) {
            t.omega = 0.0;
            continue;
        }
        if (t.omega < 0.0) {
            t.omega = -t.omega;
            if (t.osc == Osc::Sin) t.coeff = -t.coeff;
        }
        if (t.omega == 0.0) {
            if (t.osc == Osc::Sin) t.coeff = 0.0;
            t.osc = Osc::None;
        }
    }
    std::sort(e.smooth.begin(), e.smooth.end(), detail::term_key_less);

    std::vector<SmoothTerm> merged;
    for (const auto& t : e.smooth) {
        if (!merged.empty() && detail::same_signature(merged.back(), t))
            merged.back().coeff += t.coeff;
        else
            merged.push_back(t);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const SmoothTerm& t) { return std::fabs(t.coeff) < kCoeffDropTol; }),
                 merged.end());
    e.smooth = std::move(merged);

    std::sort(e.deltas.begin(), e.deltas.end(),
              [](const DeltaTerm& x, const DeltaTerm& y) { return x.k < y.k; });
    std::vector<DeltaTerm> dmerged;
    for (const auto& d : e.deltas) {
        if (!dmerged.empty() && dmerged.back().k == d.k)
            dmerged.back().coeff += d.coeff;
        else
            dmerged.push_back(d);
    }
    dmerged.erase(std::remove_if(dmerged.begin(), dmerged.end(),
                                 [](const DeltaTerm& d) { return std::fabs(d.coeff) < kCoeffDropTol; }),
                  dmerged.end());
    e.deltas = std::move(dmerged);
    return e;
}

/// Pointwise value of the smooth part; delta terms are ignored. No
/// delta-presence guard -- see eval() for the checked variant.
inline double eval_smooth(const TimeExpr& e, double t) {
    double sum = 0.0;
    for (const auto& term : e.smooth) {
        double v = term.coeff * std::exp(term.rate * t);
        if (term.n > 0) v *= std::pow(t, term.n);
        switch (term.osc) {
            case Osc::None: break;
            case Osc::Cos: v *= std::cos(term.omega * t); break;
            case Osc::Sin: v *= std::sin(term.omega * t); break;
        }
        sum += v;
    }
    return sum;
}

/// Pointwise evaluation for t >= 0. Delta terms contribute 0 for t > 0 and
/// make the value undefined at t = 0.
inline double eval(const TimeExpr& e, double t) {
    if (t < 0.0) throw Error("eval: t must be nonnegative");
    if (t == 0.0 && !e.deltas.empty())
        throw DeltaAtPoint("eval: expression has delta terms, pointwise value at t = 0 is undefined");
    return eval_smooth(e, t);
}

/// Normalized c1*e1 + c2*e2.
inline TimeExpr linear_combine(double c1, const TimeExpr& e1, double c2, const TimeExpr& e2) {
    TimeExpr out;
    out.smooth.reserve(e1.smooth.size() + e2.smooth.size());
    for (auto t : e1.smooth) {
        t.coeff *= c1;
        out.smooth.push_back(t);
    }
    for (auto t : e2.smooth) {
        t.coeff *= c2;
        out.smooth.push_back(t);
    }
    for (auto d : e1.deltas) {
        d.coeff *= c1;
        out.deltas.push_back(d);
    }
    for (auto d : e2.deltas) {
        d.coeff *= c2;
        out.deltas.push_back(d);
    }
    return TimeExpr::normalized(out);
}

inline TimeExpr scale(double c, const TimeExpr& e) { return linear_combine(c, e, 0.0, TimeExpr::zero()); }

inline TimeExpr operator+(const TimeExpr& a, const TimeExpr& b) { return linear_combine(1.0, a, 1.0, b); }
inline TimeExpr operator-(const TimeExpr& a, const TimeExpr& b) { return linear_combine(1.0, a, -1.0, b); }

namespace detail {

/// Product of two single oscillation factors, as a list of (coeff, osc, omega)
/// triples via the product-to-sum identities. Exact within the term algebra.
inline void osc_product(Osc o1, double w1, Osc o2, double w2,
                        std::vector<std::tuple<double, Osc, double>>& out) {
    if (o1 == Osc::None) {
        out.emplace_back(1.0, o2, w2);
        return;
    }
    if (o2 == Osc::None) {
        out.emplace_back(1.0, o1, w1);
        return;
    }
    const double wp = w1 + w2, wm = w1 - w2;
    if (o1 == Osc::Cos && o2 == Osc::Cos) {
        out.emplace_back(0.5, Osc::Cos, wm);
        out.emplace_back(0.5, Osc::Cos, wp);
    } else if (o1 == Osc::Sin && o2 == Osc::Sin) {
        out.emplace_back(0.5, Osc::Cos, wm);
        out.emplace_back(-0.5, Osc::Cos, wp);
    } else if (o1 == Osc::Sin && o2 == Osc::Cos) {
        out.emplace_back(0.5, Osc::Sin, wp);
        out.emplace_back(0.5, Osc::Sin, wm);
    } else { // Cos * Sin
        out.emplace_back(0.5, Osc::Sin, wp);
        out.emplace_back(-0.5, Osc::Sin, wm);
    }
}

} // namespace detail

/// Product of two delta-free expressions. Closed in the term algebra:
/// powers add, rates add, trig products expand by product-to-sum.
inline TimeExpr product(const TimeExpr& a, const TimeExpr& b) {
    if (!a.deltas.empty() || !b.deltas.empty())
        throw Error("product: delta terms cannot be multiplied");
    TimeExpr out;
    std::vector<std::tuple<double, Osc, double>> oscs;
    for (const auto& x : a.smooth) {
        for (const auto& y : b.smooth) {
            oscs.clear();
            detail::osc_product(x.osc, x.omega, y.osc, y.omega, oscs);
            for (const auto& [c, o, w] : oscs)
                out.smooth.push_back({x.coeff * y.coeff * c, x.n + y.n, x.rate + y.rate, o, w});
        }
    }
    return TimeExpr::normalized(out);
}

/// Term-calculus derivative. Smooth terms differentiate by product rule;
/// delta orders shift up by one.
inline TimeExpr derivative(const TimeExpr& e) {
    TimeExpr out;
    for (const auto& t : e.smooth) {
        if (t.n > 0) out.smooth.push_back({t.coeff * t.n, t.n - 1, t.rate, t.osc, t.omega});
        if (t.rate != 0.0) out.smooth.push_back({t.coeff * t.rate, t.n, t.rate, t.osc, t.omega});
        if (t.osc == Osc::Cos)
            out.smooth.push_back({-t.coeff * t.omega, t.n, t.rate, Osc::Sin, t.omega});
        else if (t.osc == Osc::Sin)
            out.smooth.push_back({t.coeff * t.omega, t.n, t.rate, Osc::Cos, t.omega});
    }
    for (const auto& d : e.deltas) out.deltas.push_back({d.coeff, d.k + 1});
    return TimeExpr::normalized(out);
}

/// Max pointwise gap over a grid of positive times. Structurally different
/// delta parts (beyond coefficient tolerance 1e-9) flag as +infinity.
inline double expr_distance(const TimeExpr& e1, const TimeExpr& e2, const std::vector<double>& grid) {
    const auto& d1 = e1.deltas;
    const auto& d2 = e2.deltas;
    bool deltas_match = d1.size() == d2.size();
    if (deltas_match) {
        for (size_t i = 0; i < d1.size(); ++i)
            if (d1[i].k != d2[i].k || std::fabs(d1[i].coeff - d2[i].coeff) > 1e-9) {
                deltas_match = false;
                break;
            }
    }
    if (!deltas_match) return std::numeric_limits<double>::infinity();

    double dist = 0.0;
    for (double t : grid) dist = std::max(dist, std::fabs(eval_smooth(e1, t) - eval_smooth(e2, t)));
    return dist;
}

/// Structural comparison with tolerance: every term of one expression must
/// have a partner of matching signature within coefficient tolerance, and
/// unmatched terms must be below tolerance.
inline bool approx_equal(const TimeExpr& e1, const TimeExpr& e2, double tol) {
    TimeExpr diff = linear_combine(1.0, e1, -1.0, e2);
    for (const auto& t : diff.smooth)
        if (std::fabs(t.coeff) > tol) return false;
    for (const auto& d : diff.deltas)
        if (std::fabs(d.coeff) > tol) return false;
    return true;
}

inline bool operator==(const TimeExpr& a, const TimeExpr& b) {
    if (a.smooth.size() != b.smooth.size() || a.deltas.size() != b.deltas.size()) return false;
    for (size_t i = 0; i < a.smooth.size(); ++i) {
        const auto& x = a.smooth[i];
        const auto& y = b.smooth[i];
        if (x.coeff != y.coeff || x.n != y.n || x.rate != y.rate || x.osc != y.osc || x.omega != y.omega)
            return false;
    }
    for (size_t i = 0; i < a.deltas.size(); ++i)
        if (a.deltas[i].coeff != b.deltas[i].coeff || a.deltas[i].k != b.deltas[i].k) return false;
    return true;
}

/// Number formatting for the canonical printer: integers keep one decimal
/// ("2.0"), everything else prints shortest round-trip.
inline std::string format_coeff(double v) {
    char buf[40];
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%.1f", v);
        return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // trim to the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char trial[40];
        std::snprintf(trial, sizeof(trial), "%.*g", prec, v);
        if (std::strtod(trial, nullptr) == v) return trial;
    }
    return buf;
}

/// Canonical printed form, e.g. "2.0*t^1*exp(-1.0*t) + 3.0*delta(t)".
/// Re-parses to a structurally equal expression.
inline std::string to_string(const TimeExpr& e) {
    if (e.is_zero()) return "0.0";
    std::string out;
    auto append = [&out](double coeff, const std::string& body) {
        if (out.empty())
            out += format_coeff(coeff);
        else {
            out += coeff < 0.0 ? " - " : " + ";
            out += format_coeff(std::fabs(coeff));
        }
        out += body;
    };
    for (const auto& t : e.smooth) {
        std::string body;
        if (t.n > 0) body += "*t^" + std::to_string(t.n);
        if (t.rate != 0.0) body += "*exp(" + format_coeff(t.rate) + "*t)";
        if (t.osc == Osc::Cos) body += "*cos(" + format_coeff(t.omega) + "*t)";
        if (t.osc == Osc::Sin) body += "*sin(" + format_coeff(t.omega) + "*t)";
        append(t.coeff, body);
    }
    for (const auto& d : e.deltas) {
        std::string body = d.k == 0 ? "*delta(t)" : "*delta^" + std::to_string(d.k) + "(t)";
        append(d.coeff, body);
    }
    return out;
}

} // namespace fcvide
