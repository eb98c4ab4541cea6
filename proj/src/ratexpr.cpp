#include "ambientforge/ratexpr.hpp"

#include <algorithm>

namespace af {

namespace {

// Graded-lex order on monomials over the merged atom set. Unlike the storage
// order of Expr this one is compatible with multiplication, which the
// division loop needs for termination.
int total_degree(const Monomial& m) {
    int d = 0;
    for (auto& [a, e] : m) d += e;
    return d;
}

bool grlex_less(const Monomial& a, const Monomial& b) {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first == b[j].first) {
            if (a[i].second != b[j].second) return a[i].second < b[j].second;
            ++i, ++j;
        } else if (a[i].first < b[j].first) {
            // a carries a small atom b lacks: larger in lex on exponent vectors
            return false;
        } else {
            return true;
        }
    }
    return i == a.size() && j < b.size() ? true : false;
}

const std::pair<const Monomial, Rational>* grlex_leading(const Expr& e) {
    const std::pair<const Monomial, Rational>* best = nullptr;
    for (auto& t : e.terms()) {
        if (!best || grlex_less(best->first, t.first)) best = &t;
    }
    return best;
}

// m / d componentwise, or nullopt when d has an atom power m lacks.
std::optional<Monomial> monomial_quotient(const Monomial& m, const Monomial& d) {
    Monomial out;
    size_t i = 0;
    for (auto& [atom, e] : d) {
        while (i < m.size() && m[i].first < atom) out.push_back(m[i++]);
        if (i == m.size() || !(m[i].first == atom) || m[i].second < e) return std::nullopt;
        if (m[i].second > e) out.emplace_back(atom, m[i].second - e);
        ++i;
    }
    for (; i < m.size(); ++i) out.push_back(m[i]);
    return out;
}

// Common monomial factor of every term of e, merged into acc (per-atom min).
void meet_content(const Expr& e, std::optional<Monomial>& acc) {
    for (auto& [m, c] : e.terms()) {
        if (!acc) {
            acc = m;
            continue;
        }
        Monomial next;
        size_t i = 0, j = 0;
        const Monomial& a = *acc;
        while (i < a.size() && j < m.size()) {
            if (a[i].first == m[j].first) {
                next.emplace_back(a[i].first, std::min(a[i].second, m[j].second));
                ++i, ++j;
            } else if (a[i].first < m[j].first) {
                ++i;
            } else {
                ++j;
            }
        }
        *acc = std::move(next);
        if (acc->empty()) return;
    }
}

Expr divide_by_monomial(const Expr& e, const Monomial& m) {
    Expr out;
    for (auto& [mono, c] : e.terms()) {
        auto q = monomial_quotient(mono, m);
        out += Expr::from_monomial(std::move(*q), c);
    }
    return out;
}

}  // namespace

std::optional<Expr> try_divide(const Expr& p, const Expr& d) {
    if (d.is_zero()) return std::nullopt;
    if (p.is_zero()) return Expr();
    if (auto c = d.as_constant()) {
        Expr q = p;
        q *= Rational(1) / *c;
        return q;
    }
    auto lead_d = grlex_leading(d);
    Expr q, r = p;
    size_t steps = 0, budget = 8 * (p.term_count() + d.term_count() + 8);
    while (!r.is_zero()) {
        if (++steps > budget) return std::nullopt;
        auto lead_r = grlex_leading(r);
        auto mq = monomial_quotient(lead_r->first, lead_d->first);
        if (!mq) return std::nullopt;
        Expr t = Expr::from_monomial(std::move(*mq), lead_r->second / lead_d->second);
        q += t;
        r -= t * d;
    }
    return q;
}

RatExpr::RatExpr(Expr num, Expr den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw MathError("RatExpr: zero denominator");
    normalize();
}

void RatExpr::normalize() {
    if (num_.is_zero()) {
        den_ = Expr::integer(1);
        return;
    }
    if (auto c = den_.as_constant()) {
        if (*c != 1) {
            num_ *= Rational(1) / *c;
            den_ = Expr::integer(1);
        }
        return;
    }
    // Strip the joint monomial content, then rescale so the denominator's
    // leading coefficient is one.
    std::optional<Monomial> content;
    meet_content(num_, content);
    if (content && !content->empty()) meet_content(den_, content);
    if (content && !content->empty()) {
        num_ = divide_by_monomial(num_, *content);
        den_ = divide_by_monomial(den_, *content);
    }
    if (auto q = try_divide(num_, den_)) {
        num_ = std::move(*q);
        den_ = Expr::integer(1);
        return;
    }
    const Rational lc = grlex_leading(den_)->second;
    if (lc != 1) {
        Rational inv = Rational(1) / lc;
        num_ *= inv;
        den_ *= inv;
    }
}

bool RatExpr::is_polynomial() const {
    auto c = den_.as_constant();
    return c.has_value() && *c == 1;
}

const Expr& RatExpr::as_expr() const {
    if (!is_polynomial())
        throw MathError("RatExpr: not a polynomial: " + str());
    return num_;
}

std::optional<Rational> RatExpr::as_constant() const {
    if (!is_polynomial()) return std::nullopt;
    return num_.as_constant();
}

bool RatExpr::is_constant() const { return as_constant().has_value(); }

RatExpr RatExpr::operator-() const {
    RatExpr r = *this;
    r.num_ = -r.num_;
    return r;
}

RatExpr operator+(const RatExpr& a, const RatExpr& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return RatExpr(a.num_ + b.num_, a.den_);
    return RatExpr(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatExpr operator-(const RatExpr& a, const RatExpr& b) {
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return RatExpr(a.num_ - b.num_, a.den_);
    return RatExpr(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RatExpr operator*(const RatExpr& a, const RatExpr& b) {
    if (a.is_zero() || b.is_zero()) return RatExpr();
    return RatExpr(a.num_ * b.num_, a.den_ * b.den_);
}

RatExpr operator/(const RatExpr& a, const RatExpr& b) {
    if (b.is_zero()) throw MathError("RatExpr: division by zero");
    if (a.is_zero()) return RatExpr();
    return RatExpr(a.num_ * b.den_, a.den_ * b.num_);
}

RatExpr RatExpr::pow(int k) const {
    if (k >= 0) {
        if (is_polynomial()) return RatExpr(num_.pow(k));
        return RatExpr(num_.pow(k), den_.pow(k));
    }
    if (is_zero()) throw MathError("RatExpr::pow: zero to negative power");
    return RatExpr(den_.pow(-k), num_.pow(-k));
}

bool RatExpr::operator==(const RatExpr& o) const {
    if (den_ == o.den_) return num_ == o.num_;
    return num_ * o.den_ == o.num_ * den_;
}

RatExpr RatExpr::diff(const std::string& var) const {
    if (!den_.depends_on(var)) return RatExpr(num_.diff(var), den_);
    return RatExpr(num_.diff(var) * den_ - num_ * den_.diff(var), den_ * den_);
}

RatExpr RatExpr::substitute(const std::map<std::string, Expr>& bindings) const {
    Expr d = den_.substitute(bindings);
    if (d.is_zero()) throw MathError("RatExpr::substitute: denominator became zero");
    return RatExpr(num_.substitute(bindings), std::move(d));
}

double RatExpr::eval(const EvalPoint& pt) const {
    double d = den_.eval(pt);
    if (d == 0.0) throw MathError("RatExpr::eval: denominator vanishes at point");
    return num_.eval(pt) / d;
}

bool RatExpr::depends_on(const std::string& var) const {
    return num_.depends_on(var) || den_.depends_on(var);
}

std::string RatExpr::str() const {
    if (is_polynomial()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

}  // namespace af
