#include "ambientforge/parser.hpp"

#include <cctype>

namespace af {

namespace {

enum class Tok { Num, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, LBracket, RBracket, Comma, End };

struct Token {
    Tok kind;
    std::string text;
    size_t pos;
};

class Lexer {
  public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }
    const Token& peek() const { return cur_; }
    Token take() {
        Token t = cur_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        size_t start = i_;
        if (i_ >= s_.size()) {
            cur_ = {Tok::End, "", start};
            return;
        }
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i_;
            while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
            cur_ = {Tok::Num, s_.substr(i_, j - i_), start};
            i_ = j;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t j = i_;
            while (j < s_.size() && std::isalnum(static_cast<unsigned char>(s_[j]))) ++j;
            cur_ = {Tok::Ident, s_.substr(i_, j - i_), start};
            i_ = j;
            return;
        }
        ++i_;
        switch (c) {
            case '+': cur_ = {Tok::Plus, "+", start}; return;
            case '-': cur_ = {Tok::Minus, "-", start}; return;
            case '*': cur_ = {Tok::Star, "*", start}; return;
            case '/': cur_ = {Tok::Slash, "/", start}; return;
            case '^': cur_ = {Tok::Caret, "^", start}; return;
            case '(': cur_ = {Tok::LParen, "(", start}; return;
            case ')': cur_ = {Tok::RParen, ")", start}; return;
            case '[': cur_ = {Tok::LBracket, "[", start}; return;
            case ']': cur_ = {Tok::RBracket, "]", start}; return;
            case ',': cur_ = {Tok::Comma, ",", start}; return;
        }
        throw ParseError(start, std::string("unexpected character '") + c + "'");
    }

    const std::string& s_;
    size_t i_ = 0;
    Token cur_;
};

class Parser {
  public:
    Parser(const std::string& text, const ParseContext& ctx) : lex_(text), ctx_(ctx) {}

    RatExpr parse() {
        RatExpr e = sum();
        if (lex_.peek().kind != Tok::End)
            throw ParseError(lex_.peek().pos, "trailing input '" + lex_.peek().text + "'");
        return e;
    }

  private:
    RatExpr sum() {
        RatExpr e = product();
        while (true) {
            Tok k = lex_.peek().kind;
            if (k == Tok::Plus) {
                lex_.take();
                e += product();
            } else if (k == Tok::Minus) {
                lex_.take();
                e -= product();
            } else {
                return e;
            }
        }
    }

    RatExpr product() {
        RatExpr e = factor();
        while (true) {
            Tok k = lex_.peek().kind;
            if (k == Tok::Star) {
                lex_.take();
                e *= factor();
            } else if (k == Tok::Slash) {
                Token t = lex_.take();
                RatExpr d = factor();
                if (d.is_zero()) throw ParseError(t.pos, "division by zero");
                e /= d;
            } else {
                return e;
            }
        }
    }

    RatExpr factor() {
        Tok k = lex_.peek().kind;
        if (k == Tok::Minus) {
            lex_.take();
            return -factor();
        }
        if (k == Tok::Plus) {
            lex_.take();
            return factor();
        }
        RatExpr base = primary();
        if (lex_.peek().kind == Tok::Caret) {
            lex_.take();
            long e = exponent();
            return base.pow(static_cast<int>(e));
        }
        return base;
    }

    long exponent() {
        bool neg = false, paren = false;
        if (lex_.peek().kind == Tok::LParen) {
            paren = true;
            lex_.take();
        }
        if (lex_.peek().kind == Tok::Minus) {
            neg = true;
            lex_.take();
        }
        Token t = lex_.take();
        if (t.kind != Tok::Num) throw ParseError(t.pos, "exponent must be an integer");
        long v = std::stol(t.text);
        if (paren) expect(Tok::RParen, ")");
        return neg ? -v : v;
    }

    RatExpr primary() {
        Token t = lex_.take();
        switch (t.kind) {
            case Tok::Num:
                return RatExpr(Expr::constant(Rational(BigInt(t.text))));
            case Tok::LParen: {
                RatExpr e = sum();
                expect(Tok::RParen, ")");
                return e;
            }
            case Tok::Ident:
                return identifier(t);
            default:
                throw ParseError(t.pos, "expected a number, identifier or '('");
        }
    }

    RatExpr identifier(const Token& t) {
        if (t.text == "D" && lex_.peek().kind == Tok::LBracket) return deriv_marker(t);
        if (t.text == "log") {
            expect(Tok::LParen, "(");
            Token v = lex_.take();
            if (v.kind != Tok::Ident || v.text != kRho)
                throw ParseError(v.pos, "log is restricted to log(rho)");
            expect(Tok::RParen, ")");
            return RatExpr(Expr::log_rho());
        }
        auto fit = ctx_.functions.find(t.text);
        if (fit != ctx_.functions.end()) {
            if (lex_.peek().kind == Tok::LParen) {
                lex_.take();
                std::vector<std::string> given;
                if (lex_.peek().kind != Tok::RParen) {
                    while (true) {
                        Token a = lex_.take();
                        if (a.kind != Tok::Ident)
                            throw ParseError(a.pos, "function argument must be a variable");
                        given.push_back(a.text);
                        if (lex_.peek().kind != Tok::Comma) break;
                        lex_.take();
                    }
                }
                expect(Tok::RParen, ")");
                if (given != fit->second)
                    throw ParseError(t.pos, "function " + t.text +
                                                " applied to wrong arguments (declared arity " +
                                                std::to_string(fit->second.size()) + ")");
            }
            return RatExpr(Expr::function(t.text, fit->second));
        }
        if (ctx_.variables.count(t.text) || ctx_.allow_undeclared || t.text == kRho)
            return RatExpr(Expr::variable(t.text));
        throw ParseError(t.pos, "undeclared identifier '" + t.text + "'");
    }

    RatExpr deriv_marker(const Token& d) {
        expect(Tok::LBracket, "[");
        Token f = lex_.take();
        if (f.kind != Tok::Ident) throw ParseError(f.pos, "D[...] expects a function name");
        auto fit = ctx_.functions.find(f.text);
        if (fit == ctx_.functions.end())
            throw ParseError(f.pos, "D[...] applied to undeclared function '" + f.text + "'");
        Atom atom = Atom::function(f.text, fit->second);
        bool vanished = false;
        while (lex_.peek().kind == Tok::Comma) {
            lex_.take();
            Token v = lex_.take();
            if (v.kind != Tok::Ident) throw ParseError(v.pos, "D[...] expects variable names");
            if (atom.is_function_of(v.text))
                atom = atom.with_extra_deriv(v.text);
            else
                vanished = true;  // derivative w.r.t. a non-argument is zero
        }
        expect(Tok::RBracket, "]");
        if (atom.deriv.empty() && !vanished)
            throw ParseError(d.pos, "D[...] needs at least one variable");
        if (vanished) return RatExpr();
        return RatExpr(Expr::from_atom(atom));
    }

    void expect(Tok k, const std::string& what) {
        Token t = lex_.take();
        if (t.kind != k) throw ParseError(t.pos, "expected '" + what + "'");
    }

    Lexer lex_;
    const ParseContext& ctx_;
};

}  // namespace

RatExpr parse_ratexpr(const std::string& text, const ParseContext& ctx) {
    return Parser(text, ctx).parse();
}

Expr parse_expr(const std::string& text, const ParseContext& ctx) {
    RatExpr r = parse_ratexpr(text, ctx);
    if (!r.is_polynomial())
        throw ParseError(0, "expression is not polynomial: " + text);
    return r.as_expr();
}

}  // namespace af
