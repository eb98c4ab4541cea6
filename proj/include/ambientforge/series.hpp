#ifndef AMBIENTFORGE_SERIES_HPP
#define AMBIENTFORGE_SERIES_HPP

#include "ambientforge/halfint.hpp"
#include "ambientforge/ratexpr.hpp"

#include <functional>
#include <map>

namespace af {

struct SeriesKey {
    HalfInt exp;
    int log_pow = 0;
    auto operator<=>(const SeriesKey&) const = default;
};

// Truncated polyhomogeneous series in rho: finitely many terms
// c * rho^e * log(rho)^l with half-integer e and rho-free coefficients c.
// Terms with exponent >= truncation() are unknown, not zero; arithmetic
// propagates the truncation conservatively.
class RhoSeries {
  public:
    RhoSeries() : trunc_(HalfInt::infinity()) {}
    explicit RhoSeries(HalfInt trunc) : trunc_(trunc) {}
    static RhoSeries term(RatExpr c, HalfInt e, int log_pow = 0,
                          HalfInt trunc = HalfInt::infinity());
    static RhoSeries constant(RatExpr c) { return term(std::move(c), HalfInt::whole(0)); }

    HalfInt truncation() const { return trunc_; }
    // Exponent below which nothing can appear: min(first stored term, truncation).
    HalfInt lower_bound() const;
    bool has_terms() const { return !terms_.empty(); }
    bool is_exact_zero() const { return terms_.empty() && trunc_.is_infinite(); }
    const std::map<SeriesKey, RatExpr>& terms() const { return terms_; }
    int max_log_power() const;

    // Coefficient of rho^e log^l; zero for absent keys below truncation,
    // error at or beyond it (the value there is unknown).
    const RatExpr& coeff(HalfInt e, int log_pow = 0) const;
    bool is_zero_through(HalfInt order) const;

    RhoSeries operator-() const;
    friend RhoSeries operator+(const RhoSeries& a, const RhoSeries& b);
    friend RhoSeries operator-(const RhoSeries& a, const RhoSeries& b);
    friend RhoSeries operator*(const RhoSeries& a, const RhoSeries& b);
    RhoSeries& operator+=(const RhoSeries& o) { return *this = *this + o; }
    RhoSeries& operator-=(const RhoSeries& o) { return *this = *this - o; }
    RhoSeries& operator*=(const RhoSeries& o) { return *this = *this * o; }
    RhoSeries scaled(const Rational& q) const;
    RhoSeries scaled(const RatExpr& c) const;  // c must be rho-free

    bool operator==(const RhoSeries& o) const {
        return trunc_ == o.trunc_ && terms_ == o.terms_;
    }

    // d/drho; lowers the truncation by one and log powers cascade.
    RhoSeries d_rho() const;
    // Multiply by rho^de log^dlog.
    RhoSeries shifted(HalfInt de, int dlog = 0) const;
    // Coefficient-wise map (x-derivatives, substitutions, ...).
    RhoSeries map_coeffs(const std::function<RatExpr(const RatExpr&)>& f) const;
    RhoSeries truncated(HalfInt t) const;

    void add_term(HalfInt e, int log_pow, RatExpr c);
    std::string str() const;

  private:
    // Accumulation without the rho-freeness re-check; coefficients derived
    // from already-validated terms.
    void accumulate(const SeriesKey& k, RatExpr c);
    std::map<SeriesKey, RatExpr> terms_;
    HalfInt trunc_;
};

// Multiplicative inverse of a series whose lowest term has an invertible
// (nonzero) rho-free coefficient; result truncated at `target`.
RhoSeries series_inverse(const RhoSeries& s, HalfInt target);

// Integer-power rho-expansion of a polynomial-in-rho expression. Errors on
// rho hidden inside a function atom's arguments.
RhoSeries rho_coefficients(const Expr& e, HalfInt max_order);

// Exact expansion of a rational function of rho (denominator may vanish at
// rho = 0 only by a factor rho^v, yielding negative exponents).
RhoSeries ratexpr_to_series(const RatExpr& r, HalfInt target);

// Reassemble a series with whole nonnegative exponents into an Expr.
Expr series_to_expr(const RhoSeries& s);

}  // namespace af

#endif
