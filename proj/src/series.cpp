#include "ambientforge/series.hpp"

#include <algorithm>

namespace af {

RhoSeries RhoSeries::term(RatExpr c, HalfInt e, int log_pow, HalfInt trunc) {
    RhoSeries s(trunc);
    s.add_term(e, log_pow, std::move(c));
    return s;
}

void RhoSeries::add_term(HalfInt e, int log_pow, RatExpr c) {
    if (c.is_zero() || e >= trunc_) return;
    if (c.depends_on(kRho))
        throw MathError("RhoSeries: coefficient depends on rho: " + c.str());
    accumulate(SeriesKey{e, log_pow}, std::move(c));
}

void RhoSeries::accumulate(const SeriesKey& k, RatExpr c) {
    if (c.is_zero() || k.exp >= trunc_) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(k, std::move(c));
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

HalfInt RhoSeries::lower_bound() const {
    if (terms_.empty()) return trunc_;
    return min(terms_.begin()->first.exp, trunc_);
}

int RhoSeries::max_log_power() const {
    int m = 0;
    for (auto& [k, c] : terms_) m = std::max(m, k.log_pow);
    return m;
}

const RatExpr& RhoSeries::coeff(HalfInt e, int log_pow) const {
    static const RatExpr kZero;
    if (e >= trunc_)
        throw MathError("RhoSeries: coefficient of rho^" + e.str() +
                        " is beyond truncation rho^" + trunc_.str());
    auto it = terms_.find(SeriesKey{e, log_pow});
    return it == terms_.end() ? kZero : it->second;
}

bool RhoSeries::is_zero_through(HalfInt order) const {
    if (order > trunc_)
        throw MathError("RhoSeries: cannot certify vanishing through rho^" + order.str() +
                        ", known only below rho^" + trunc_.str());
    for (auto& [k, c] : terms_)
        if (k.exp < order) return false;
    return true;
}

RhoSeries RhoSeries::operator-() const {
    RhoSeries s(trunc_);
    for (auto& [k, c] : terms_) s.terms_.emplace(k, -c);
    return s;
}

RhoSeries operator+(const RhoSeries& a, const RhoSeries& b) {
    RhoSeries s(min(a.trunc_, b.trunc_));
    for (auto& [k, c] : a.terms_) s.accumulate(k, c);
    for (auto& [k, c] : b.terms_) s.accumulate(k, c);
    return s;
}

RhoSeries operator-(const RhoSeries& a, const RhoSeries& b) { return a + (-b); }

RhoSeries operator*(const RhoSeries& a, const RhoSeries& b) {
    HalfInt t = min(a.trunc_ + b.lower_bound(), b.trunc_ + a.lower_bound());
    RhoSeries s(t);
    for (auto& [ka, ca] : a.terms_) {
        for (auto& [kb, cb] : b.terms_) {
            HalfInt e = ka.exp + kb.exp;
            if (e >= t) continue;
            s.accumulate(SeriesKey{e, ka.log_pow + kb.log_pow}, ca * cb);
        }
    }
    return s;
}

RhoSeries RhoSeries::scaled(const Rational& q) const {
    RhoSeries s(trunc_);
    if (q == 0) return s;
    for (auto& [k, c] : terms_) s.terms_.emplace(k, c * RatExpr::constant(q));
    return s;
}

RhoSeries RhoSeries::scaled(const RatExpr& c0) const {
    RhoSeries s(trunc_);
    if (c0.is_zero()) return s;
    for (auto& [k, c] : terms_) {
        RatExpr v = c * c0;
        if (!v.is_zero()) s.terms_.emplace(k, std::move(v));
    }
    return s;
}

RhoSeries RhoSeries::d_rho() const {
    RhoSeries s(trunc_.is_infinite() ? trunc_ : trunc_ - HalfInt::whole(1));
    for (auto& [k, c] : terms_) {
        Rational e(k.exp.twice(), 2);
        if (e != 0)
            s.accumulate(SeriesKey{k.exp - HalfInt::whole(1), k.log_pow},
                         c * RatExpr::constant(e));
        if (k.log_pow > 0)
            s.accumulate(SeriesKey{k.exp - HalfInt::whole(1), k.log_pow - 1},
                         c * RatExpr::constant(Rational(k.log_pow)));
    }
    return s;
}

RhoSeries RhoSeries::shifted(HalfInt de, int dlog) const {
    RhoSeries s(trunc_.is_infinite() ? trunc_ : trunc_ + de);
    for (auto& [k, c] : terms_) s.terms_.emplace(SeriesKey{k.exp + de, k.log_pow + dlog}, c);
    return s;
}

RhoSeries RhoSeries::map_coeffs(const std::function<RatExpr(const RatExpr&)>& f) const {
    RhoSeries s(trunc_);
    for (auto& [k, c] : terms_) {
        RatExpr v = f(c);
        if (!v.is_zero()) s.terms_.emplace(k, std::move(v));
    }
    return s;
}

RhoSeries RhoSeries::truncated(HalfInt t) const {
    RhoSeries s(min(t, trunc_));
    for (auto& [k, c] : terms_)
        if (k.exp < s.trunc_) s.terms_.emplace(k, c);
    return s;
}

std::string RhoSeries::str() const {
    std::string out;
    for (auto& [k, c] : terms_) {
        if (!out.empty()) out += " + ";
        out += "(" + c.str() + ")";
        if (!(k.exp == HalfInt::whole(0))) out += "*rho^" + k.exp.str();
        if (k.log_pow == 1) out += "*log(rho)";
        if (k.log_pow > 1) out += "*log(rho)^" + std::to_string(k.log_pow);
    }
    if (out.empty()) out = "0";
    if (!trunc_.is_infinite()) out += " + O(rho^" + trunc_.str() + ")";
    return out;
}

RhoSeries series_inverse(const RhoSeries& s, HalfInt target) {
    if (!s.has_terms()) throw MathError("series_inverse: no leading term");
    auto first = s.terms().begin();
    if (first->first.log_pow != 0)
        throw MathError("series_inverse: leading term carries log(rho)");
    const HalfInt v = first->first.exp;
    const RatExpr lead = first->second;
    // s = rho^v (lead + w), w of positive valuation: invert by a geometric sum.
    RhoSeries w = s.shifted(HalfInt::whole(0) - v) - RhoSeries::term(lead, HalfInt::whole(0));
    if (w.lower_bound() <= HalfInt::whole(0))
        throw MathError("series_inverse: non-positive valuation remainder");
    const HalfInt t = target + v;  // truncation needed for (lead+w)^{-1}
    RatExpr inv_lead = RatExpr::integer(1) / lead;
    RhoSeries geo = RhoSeries::term(inv_lead, HalfInt::whole(0), 0, t);
    RhoSeries pow = RhoSeries::term(inv_lead, HalfInt::whole(0), 0, t);
    RhoSeries minus_w = -w;
    while (true) {
        pow = (pow * minus_w).scaled(inv_lead).truncated(t);
        if (!pow.has_terms()) break;
        geo += pow;
    }
    return geo.shifted(HalfInt::whole(0) - v).truncated(target);
}

namespace {

// Split an Expr into (rho exponent, log power, rho-free coefficient) pieces.
template <class F>
void split_rho(const Expr& e, F&& emit) {
    for (auto& [m, c] : e.terms()) {
        int rho_exp = 0, log_pow = 0;
        Monomial rest;
        for (auto& [atom, exp] : m) {
            if (atom.kind == AtomKind::Variable && atom.name == kRho) {
                rho_exp = exp;
            } else if (atom.kind == AtomKind::Log) {
                log_pow = exp;
            } else {
                if (atom.kind == AtomKind::Function && atom.is_function_of(kRho))
                    throw MathError(
                        "rho_coefficients: rho appears inside function atom " + atom.str());
                rest.emplace_back(atom, exp);
            }
        }
        emit(rho_exp, log_pow, Expr::from_monomial(std::move(rest), c));
    }
}

}  // namespace

RhoSeries rho_coefficients(const Expr& e, HalfInt max_order) {
    RhoSeries s(max_order);
    split_rho(e, [&](int k, int l, Expr coeff) {
        s.add_term(HalfInt::whole(k), l, RatExpr(std::move(coeff)));
    });
    return s;
}

RhoSeries ratexpr_to_series(const RatExpr& r, HalfInt target) {
    if (r.is_zero()) return RhoSeries(target);
    RhoSeries num(HalfInt::infinity());
    split_rho(r.num(), [&](int k, int l, Expr coeff) {
        num.add_term(HalfInt::whole(k), l, RatExpr(std::move(coeff)));
    });
    if (r.is_polynomial()) return num.truncated(target);
    RhoSeries den(HalfInt::infinity());
    split_rho(r.den(), [&](int k, int l, Expr coeff) {
        if (l != 0) throw MathError("ratexpr_to_series: log(rho) in a denominator");
        den.add_term(HalfInt::whole(k), l, RatExpr(std::move(coeff)));
    });
    return (num * series_inverse(den, target - num.lower_bound())).truncated(target);
}

Expr series_to_expr(const RhoSeries& s) {
    Expr out;
    for (auto& [k, c] : s.terms()) {
        if (!k.exp.is_whole() || k.exp < HalfInt::whole(0))
            throw MathError("series_to_expr: exponent " + k.exp.str() + " is not a whole power");
        Expr t = c.as_expr();
        t *= Expr::variable(kRho).pow(k.exp.whole_value());
        if (k.log_pow) t *= Expr::log_rho().pow(k.log_pow);
        out += t;
    }
    return out;
}

}  // namespace af
