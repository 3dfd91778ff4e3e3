#pragma once

#include "fcvide/errors.hpp"
#include "fcvide/problem.hpp"
#include "fcvide/time_expr.hpp"

#include <cctype>
#include <cmath>
#include <string>
#include <vector>

namespace fcvide {

/// TimeExpr with affine r-dependence: base(t) + r * rpart(t). The parser's
/// scalar domain; products enforce that r-dependence stays affine.
struct RTimeExpr {
    TimeExpr base;
    TimeExpr rpart;

    bool r_free() const { return rpart.is_zero(); }
    bool delta_free() const { return base.deltas.empty() && rpart.deltas.empty(); }
};

/// Result of parsing one expression: either a crisp scalar or an endpoint
/// pair (lower, upper).
struct ParsedValue {
    bool is_pair = false;
    RTimeExpr lower;
    RTimeExpr upper; ///< meaningful only when is_pair

    const RTimeExpr& scalar() const { return lower; }
};

namespace parse_detail {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::string text;
    double value = 0.0;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    Lexer(std::string_view src, int line, int col0) : src_(src), line_(line), col0_(col0) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
                continue;
            }
            const int col = col0_ + static_cast<int>(pos_);
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                out.push_back(lex_number(col));
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                size_t start = pos_;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    ++pos_;
                out.push_back({Tok::Ident, std::string(src_.substr(start, pos_ - start)), 0.0, line_, col});
                continue;
            }
            Tok kind;
            switch (c) {
                case '+': kind = Tok::Plus; break;
                case '-': kind = Tok::Minus; break;
                case '*': kind = Tok::Star; break;
                case '/': kind = Tok::Slash; break;
                case '^': kind = Tok::Caret; break;
                case '(': kind = Tok::LParen; break;
                case ')': kind = Tok::RParen; break;
                case ',': kind = Tok::Comma; break;
                default:
                    throw ParseError(std::string("unexpected character '") + c + "'", line_, col);
            }
            out.push_back({kind, std::string(1, c), 0.0, line_, col});
            ++pos_;
        }
        out.push_back({Tok::End, "", 0.0, line_, col0_ + static_cast<int>(src_.size())});
        return out;
    }

private:
    Token lex_number(int col) {
        size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = mark; // bare 'e' belongs to the next token
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        if (text == ".") throw ParseError("malformed number", line_, col);
        return {Tok::Number, text, std::strtod(text.c_str(), nullptr), line_, col};
    }

    std::string_view src_;
    size_t pos_ = 0;
    int line_;
    int col0_;
};

/// Recursive-descent parser over ParsedValue. Grammar:
///   expr    := term (('+'|'-') term)*
///   term    := factor (('*'|'/') factor)*
///   factor  := ('+'|'-') factor | power
///   power   := primary ('^' nonneg-integer)?
///   primary := number | 't' | 'r' | func '(' expr ')' | delta-form
///            | '(' expr (',' expr)? ')'
/// Fuzzy pairs are first-class values; arithmetic on them is componentwise,
/// and any operation that would leave the affine-in-r scalar domain is a
/// semantic error.
class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    ParsedValue parse_all() {
        ParsedValue v = parse_expr();
        expect(Tok::End, "unexpected trailing input");
        return v;
    }

private:
    const Token& peek() const { return toks_[idx_]; }
    Token take() { return toks_[idx_++]; }
    [[noreturn]] void fail(const std::string& msg, const Token& at) const {
        throw ParseError(msg, at.line, at.col);
    }
    void expect(Tok k, const char* msg) {
        if (peek().kind != k) fail(msg, peek());
        ++idx_;
    }

    static RTimeExpr rte_constant(double c) { return {TimeExpr::constant(c), TimeExpr::zero()}; }

    ParsedValue parse_expr() {
        ParsedValue acc = parse_term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const Token op = take();
            ParsedValue rhs = parse_term();
            const double s = op.kind == Tok::Plus ? 1.0 : -1.0;
            acc = combine(acc, rhs, s);
        }
        return acc;
    }

    static ParsedValue combine(const ParsedValue& a, const ParsedValue& b, double sb) {
        auto add_rte = [sb](const RTimeExpr& x, const RTimeExpr& y) {
            return RTimeExpr{linear_combine(1.0, x.base, sb, y.base),
                             linear_combine(1.0, x.rpart, sb, y.rpart)};
        };
        ParsedValue out;
        out.is_pair = a.is_pair || b.is_pair;
        const RTimeExpr& alo = a.lower;
        const RTimeExpr& aup = a.is_pair ? a.upper : a.lower;
        const RTimeExpr& blo = b.lower;
        const RTimeExpr& bup = b.is_pair ? b.upper : b.lower;
        out.lower = add_rte(alo, blo);
        out.upper = add_rte(aup, bup);
        return out;
    }

    ParsedValue parse_term() {
        ParsedValue acc = parse_factor();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const Token op = take();
            ParsedValue rhs = parse_factor();
            acc = op.kind == Tok::Star ? multiply(acc, rhs, op) : divide(acc, rhs, op);
        }
        return acc;
    }

    RTimeExpr rte_multiply(const RTimeExpr& a, const RTimeExpr& b, const Token& at) {
        if (!a.rpart.is_zero() && !b.rpart.is_zero())
            fail("non-affine r-dependence (product of two r-dependent factors)", at);
        if ((!a.delta_free() || !b.delta_free())) {
            // delta times a plain constant is the only representable product
            const RTimeExpr& with_delta = a.delta_free() ? b : a;
            const RTimeExpr& other = a.delta_free() ? a : b;
            const bool other_const = other.rpart.is_zero() && other.base.deltas.empty() &&
                                     (other.base.is_zero() ||
                                      (other.base.smooth.size() == 1 && other.base.smooth[0].n == 0 &&
                                       other.base.smooth[0].rate == 0.0 &&
                                       other.base.smooth[0].osc == Osc::None));
            if (!other_const) fail("delta terms can only be scaled by constants", at);
            const double c = other.base.is_zero() ? 0.0 : other.base.smooth[0].coeff;
            return {scale(c, with_delta.base), scale(c, with_delta.rpart)};
        }
        return {product(a.base, b.base),
                linear_combine(1.0, product(a.base, b.rpart), 1.0, product(a.rpart, b.base))};
    }

    ParsedValue multiply(const ParsedValue& a, const ParsedValue& b, const Token& at) {
        if (a.is_pair && b.is_pair) fail("product of two fuzzy pairs is not supported", at);
        ParsedValue out;
        if (!a.is_pair && !b.is_pair) {
            out.is_pair = false;
            out.lower = rte_multiply(a.lower, b.lower, at);
            return out;
        }
        const ParsedValue& pair = a.is_pair ? a : b;
        const ParsedValue& crisp = a.is_pair ? b : a;
        out.is_pair = true;
        out.lower = rte_multiply(pair.lower, crisp.lower, at);
        out.upper = rte_multiply(pair.upper, crisp.lower, at);
        return out;
    }

    ParsedValue divide(const ParsedValue& a, const ParsedValue& b, const Token& at) {
        if (b.is_pair) fail("division by a fuzzy pair is not supported", at);
        const RTimeExpr& d = b.lower;
        if (d.rpart.is_zero() && d.base.is_zero()) fail("division by zero", at);
        const bool is_const = d.rpart.is_zero() && d.base.deltas.empty() &&
                              d.base.smooth.size() == 1 && d.base.smooth[0].n == 0 &&
                              d.base.smooth[0].rate == 0.0 && d.base.smooth[0].osc == Osc::None;
        if (!is_const) fail("division only by nonzero real constants", at);
        const double c = d.base.smooth[0].coeff;
        ParsedValue out = a;
        out.lower = {scale(1.0 / c, a.lower.base), scale(1.0 / c, a.lower.rpart)};
        if (a.is_pair) out.upper = {scale(1.0 / c, a.upper.base), scale(1.0 / c, a.upper.rpart)};
        return out;
    }

    ParsedValue parse_factor() {
        if (peek().kind == Tok::Plus) {
            take();
            return parse_factor();
        }
        if (peek().kind == Tok::Minus) {
            const Token op = take();
            ParsedValue v = parse_factor();
            return multiply(v, make_scalar(rte_constant(-1.0)), op);
        }
        return parse_power();
    }

    static ParsedValue make_scalar(RTimeExpr e) {
        ParsedValue v;
        v.is_pair = false;
        v.lower = std::move(e);
        return v;
    }

    ParsedValue parse_power() {
        ParsedValue base = parse_primary();
        if (peek().kind != Tok::Caret) return base;
        const Token op = take();
        const Token expTok = peek();
        if (expTok.kind != Tok::Number) fail("exponent must be a nonnegative integer", expTok);
        take();
        const double v = expTok.value;
        if (v < 0.0 || std::fabs(v - std::round(v)) > 1e-9 || v > 64.0)
            fail("exponent must be a nonnegative integer", expTok);
        if (base.is_pair) fail("fuzzy pairs cannot be raised to powers", op);
        const int k = static_cast<int>(std::round(v));
        ParsedValue acc = make_scalar(rte_constant(1.0));
        for (int i = 0; i < k; ++i) acc = multiply(acc, base, op);
        return acc;
    }

    ParsedValue parse_primary() {
        const Token tok = take();
        switch (tok.kind) {
            case Tok::Number: return make_scalar(rte_constant(tok.value));
            case Tok::LParen: {
                ParsedValue first = parse_expr();
                if (peek().kind == Tok::Comma) {
                    take();
                    ParsedValue second = parse_expr();
                    expect(Tok::RParen, "expected ')' after pair");
                    if (first.is_pair || second.is_pair) fail("nested fuzzy pairs", tok);
                    ParsedValue out;
                    out.is_pair = true;
                    out.lower = first.lower;
                    out.upper = second.lower;
                    return out;
                }
                expect(Tok::RParen, "expected ')'");
                return first;
            }
            case Tok::Ident: return parse_ident(tok);
            default: fail("expected a value", tok);
        }
    }

    ParsedValue parse_ident(const Token& tok) {
        const std::string& name = tok.text;
        if (name == "t") return make_scalar({TimeExpr::term(1.0, 1, 0.0), TimeExpr::zero()});
        if (name == "r") return make_scalar({TimeExpr::zero(), TimeExpr::constant(1.0)});
        if (name == "delta") {
            int order = 0;
            if (peek().kind == Tok::Caret) {
                take();
                const Token k = peek();
                if (k.kind != Tok::Number || k.value < 0.0 ||
                    std::fabs(k.value - std::round(k.value)) > 1e-9 || k.value > 16.0)
                    fail("delta derivative order must be a small nonnegative integer", k);
                take();
                order = static_cast<int>(std::round(k.value));
            }
            expect(Tok::LParen, "expected '(' after delta");
            const Token arg = peek();
            if (arg.kind != Tok::Ident || arg.text != "t") fail("delta argument must be t", arg);
            take();
            expect(Tok::RParen, "expected ')'");
            return make_scalar({TimeExpr::delta(1.0, order), TimeExpr::zero()});
        }
        if (name == "exp" || name == "sin" || name == "cos" || name == "sinh" || name == "cosh") {
            expect(Tok::LParen, "expected '(' after function name");
            ParsedValue arg = parse_expr();
            expect(Tok::RParen, "expected ')'");
            return apply_function(name, arg, tok);
        }
        fail("unknown identifier '" + name + "'", tok);
    }

    /// Function arguments must reduce to c + s*t: anything else leaves the
    /// exponential-polynomial-trigonometric term algebra.
    ParsedValue apply_function(const std::string& name, const ParsedValue& arg, const Token& at) {
        if (arg.is_pair) fail("function of a fuzzy pair", at);
        const RTimeExpr& a = arg.scalar();
        if (!a.r_free()) fail("function arguments must not depend on r", at);
        if (!a.base.deltas.empty()) fail("function of a delta term", at);
        double c = 0.0, slope = 0.0;
        for (const auto& term : a.base.smooth) {
            if (term.osc == Osc::None && term.rate == 0.0 && term.n == 0)
                c = term.coeff;
            else if (term.osc == Osc::None && term.rate == 0.0 && term.n == 1)
                slope = term.coeff;
            else
                fail("argument of " + name + " must be affine in t", at);
        }
        TimeExpr out;
        if (name == "exp") {
            out = TimeExpr::term(std::exp(c), 0, slope);
        } else if (name == "sin") {
            out.smooth = {{std::sin(c), 0, 0.0, Osc::Cos, slope}, {std::cos(c), 0, 0.0, Osc::Sin, slope}};
            out = TimeExpr::normalized(out);
        } else if (name == "cos") {
            out.smooth = {{std::cos(c), 0, 0.0, Osc::Cos, slope}, {-std::sin(c), 0, 0.0, Osc::Sin, slope}};
            out = TimeExpr::normalized(out);
        } else if (name == "sinh") {
            out = linear_combine(0.5 * std::exp(c), TimeExpr::term(1.0, 0, slope),
                                 -0.5 * std::exp(-c), TimeExpr::term(1.0, 0, -slope));
        } else { // cosh
            out = linear_combine(0.5 * std::exp(c), TimeExpr::term(1.0, 0, slope),
                                 0.5 * std::exp(-c), TimeExpr::term(1.0, 0, -slope));
        }
        return make_scalar({std::move(out), TimeExpr::zero()});
    }

    std::vector<Token> toks_;
    size_t idx_ = 0;
};

} // namespace parse_detail

/// Parse one expression into a crisp-or-pair value. `line` and `col0` locate
/// the text inside a larger file for error reporting.
inline ParsedValue parse_value(std::string_view text, int line = 1, int col0 = 1) {
    parse_detail::Lexer lex(text, line, col0);
    parse_detail::Parser parser(lex.run());
    return parser.parse_all();
}

/// Parse a crisp, r-free expression (deltas allowed).
inline TimeExpr parse_time_expr(std::string_view text, int line = 1, int col0 = 1) {
    ParsedValue v = parse_value(text, line, col0);
    if (v.is_pair) throw ParseError("expected a crisp expression, got a fuzzy pair", line, col0);
    if (!v.scalar().r_free()) throw ParseError("expected an r-free expression", line, col0);
    return v.scalar().base;
}

} // namespace fcvide
