#pragma once

#include "fcvide/errors.hpp"
#include "fcvide/parse.hpp"
#include "fcvide/problem.hpp"

#include <charconv>
#include <map>
#include <string>
#include <string_view>

namespace fcvide {

/// Run options carried by a problem file alongside the problem itself.
struct RunOptions {
    double t_max = 1.0;
    int steps = 1024;
    int r_points = 5;
    bool oracle = true;
    std::string csv_out; ///< empty: no CSV written
};

struct ProblemFile {
    FCVIDEProblem problem;
    RunOptions options;
};

namespace file_detail {

struct RawEntry {
    std::string value;
    int line;
    int col; ///< column where the value starts
};

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline double parse_number(const RawEntry& e, const char* what) {
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        throw ParseError(std::string("invalid ") + what + " value '" + e.value + "'", e.line, e.col);
    return v;
}

inline int parse_int(const RawEntry& e, const char* what, int min_value) {
    const double v = parse_number(e, what);
    if (v != static_cast<int>(v) || v < min_value)
        throw ParseError(std::string(what) + " must be an integer >= " + std::to_string(min_value),
                         e.line, e.col);
    return static_cast<int>(v);
}

/// A delta-free, r-free crisp expression (the kernel).
inline TimeExpr parse_crisp(const RawEntry& e, const char* what) {
    ParsedValue v = parse_value(e.value, e.line, e.col);
    if (v.is_pair) throw ParseError(std::string(what) + " must be crisp, not a fuzzy pair", e.line, e.col);
    if (!v.scalar().r_free())
        throw ParseError(std::string(what) + " must not depend on r", e.line, e.col);
    if (!v.scalar().delta_free())
        throw ParseError(std::string(what) + " must not contain delta terms", e.line, e.col);
    return v.scalar().base;
}

/// Fuzzy forcing: pair (or crisp broadcast to both endpoints), delta-free.
inline FuzzyFn parse_fuzzy_fn(const RawEntry& e) {
    ParsedValue v = parse_value(e.value, e.line, e.col);
    const RTimeExpr& lo = v.lower;
    const RTimeExpr& up = v.is_pair ? v.upper : v.lower;
    if (!lo.delta_free() || !up.delta_free())
        throw ParseError("forcing must not contain delta terms", e.line, e.col);
    return {{lo.base, lo.rpart}, {up.base, up.rpart}};
}

/// Initial condition: pair of values affine in r and constant in t.
inline FuzzyNumber parse_x0(const RawEntry& e) {
    ParsedValue v = parse_value(e.value, e.line, e.col);
    auto as_affine = [&](const RTimeExpr& x) {
        auto constant_of = [&](const TimeExpr& expr) {
            if (!expr.deltas.empty())
                throw ParseError("x0 must not contain delta terms", e.line, e.col);
            if (expr.is_zero()) return 0.0;
            if (expr.smooth.size() == 1 && expr.smooth[0].n == 0 && expr.smooth[0].rate == 0.0 &&
                expr.smooth[0].osc == Osc::None)
                return expr.smooth[0].coeff;
            throw ParseError("x0 endpoints must be constant in t", e.line, e.col);
        };
        return AffineR{constant_of(x.base), constant_of(x.rpart)};
    };
    const RTimeExpr& lo = v.lower;
    const RTimeExpr& up = v.is_pair ? v.upper : v.lower;
    return {as_affine(lo), as_affine(up)};
}

} // namespace file_detail

/// Parse the line-based `key = value` problem format with '#' comments.
/// The schema is closed: unknown or duplicate keys are errors, as are
/// missing required keys.
inline ProblemFile parse_problem(const std::string& text) {
    using file_detail::RawEntry;
    static const char* known_keys[] = {"mode",  "kernel", "forcing",  "x0",     "sign_x", "sign_k",
                                       "t_max", "steps",  "r_points", "oracle", "csv_out"};

    std::map<std::string, RawEntry> entries;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string_view line(text.data() + pos, eol - pos);
        ++line_no;
        const size_t line_start = pos;
        pos = eol + 1;

        if (size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (file_detail::trim(line).empty()) continue;

        const size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("expected 'key = value'", line_no, 1);
        const std::string key(file_detail::trim(line.substr(0, eq)));
        std::string_view raw_value = line.substr(eq + 1);
        std::string_view value = file_detail::trim(raw_value);

        bool known = false;
        for (const char* k : known_keys) known = known || key == k;
        if (!known) throw ParseError("unknown key '" + key + "'", line_no, 1);
        if (entries.count(key)) throw ParseError("duplicate key '" + key + "'", line_no, 1);

        const int value_col =
            static_cast<int>(value.empty() ? eq + 2 : value.data() - (text.data() + line_start) + 1);
        entries[key] = RawEntry{std::string(value), line_no, value_col};
    }

    for (const char* k : {"mode", "kernel", "forcing", "x0", "sign_x", "sign_k"})
        if (!entries.count(k)) throw ParseError(std::string("missing required key '") + k + "'", line_no, 1);

    ProblemFile out;
    auto& prob = out.problem;
    auto& opts = out.options;

    {
        const RawEntry& e = entries.at("mode");
        if (e.value == "i")
            prob.mode = Mode::IDiff;
        else if (e.value == "ii")
            prob.mode = Mode::IIDiff;
        else
            throw ParseError("mode must be 'i' or 'ii'", e.line, e.col);
    }
    auto parse_sign = [&](const char* key) {
        const RawEntry& e = entries.at(key);
        if (e.value == "positive") return Sign::Positive;
        if (e.value == "negative") return Sign::Negative;
        throw ParseError(std::string(key) + " must be 'positive' or 'negative'", e.line, e.col);
    };
    prob.sign_x = parse_sign("sign_x");
    prob.sign_k = parse_sign("sign_k");
    prob.kernel = file_detail::parse_crisp(entries.at("kernel"), "kernel");
    prob.forcing = file_detail::parse_fuzzy_fn(entries.at("forcing"));
    prob.x0 = file_detail::parse_x0(entries.at("x0"));

    if (entries.count("t_max")) {
        const RawEntry& e = entries.at("t_max");
        opts.t_max = file_detail::parse_number(e, "t_max");
        if (opts.t_max <= 0.0) throw ParseError("t_max must be positive", e.line, e.col);
    }
    if (entries.count("steps")) opts.steps = file_detail::parse_int(entries.at("steps"), "steps", 16);
    if (entries.count("r_points"))
        opts.r_points = file_detail::parse_int(entries.at("r_points"), "r_points", 1);
    if (entries.count("oracle")) {
        const RawEntry& e = entries.at("oracle");
        if (e.value == "on")
            opts.oracle = true;
        else if (e.value == "off")
            opts.oracle = false;
        else
            throw ParseError("oracle must be 'on' or 'off'", e.line, e.col);
    }
    if (entries.count("csv_out")) opts.csv_out = entries.at("csv_out").value;

    prob.t_max = opts.t_max;
    return out;
}

} // namespace fcvide
