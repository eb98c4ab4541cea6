#ifndef AMBIENTFORGE_RATEXPR_HPP
#define AMBIENTFORGE_RATEXPR_HPP

#include "ambientforge/expr.hpp"

#include <optional>

namespace af {

// Exact division p / d in the polynomial ring; nullopt when d does not
// divide p (or the attempt exceeds its step budget).
std::optional<Expr> try_divide(const Expr& p, const Expr& d);

// Quotient of two Exprs. Normalization is gcd-free: numeric content, common
// monomial factors and exact division are stripped, but no polynomial gcd is
// computed. Equality is decided by cross-multiplication, so the class is a
// faithful field of fractions over Expr regardless of representation.
class RatExpr {
  public:
    RatExpr() : num_(), den_(Expr::integer(1)) {}
    RatExpr(Expr e) : num_(std::move(e)), den_(Expr::integer(1)) {}  // NOLINT
    RatExpr(Expr num, Expr den);

    static RatExpr constant(Rational q) { return RatExpr(Expr::constant(std::move(q))); }
    static RatExpr integer(long long k) { return RatExpr(Expr::integer(k)); }
    static RatExpr variable(const std::string& v) { return RatExpr(Expr::variable(v)); }

    const Expr& num() const { return num_; }
    const Expr& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const;
    // The numerator when the denominator is 1 (after normalization); throws
    // otherwise.
    const Expr& as_expr() const;
    std::optional<Rational> as_constant() const;
    bool is_constant() const;

    RatExpr operator-() const;
    friend RatExpr operator+(const RatExpr& a, const RatExpr& b);
    friend RatExpr operator-(const RatExpr& a, const RatExpr& b);
    friend RatExpr operator*(const RatExpr& a, const RatExpr& b);
    friend RatExpr operator/(const RatExpr& a, const RatExpr& b);
    RatExpr& operator+=(const RatExpr& o) { return *this = *this + o; }
    RatExpr& operator-=(const RatExpr& o) { return *this = *this - o; }
    RatExpr& operator*=(const RatExpr& o) { return *this = *this * o; }
    RatExpr& operator/=(const RatExpr& o) { return *this = *this / o; }
    RatExpr pow(int k) const;  // any integer k

    bool operator==(const RatExpr& o) const;
    bool operator!=(const RatExpr& o) const { return !(*this == o); }

    RatExpr diff(const std::string& var) const;
    RatExpr substitute(const std::map<std::string, Expr>& bindings) const;
    double eval(const EvalPoint& pt) const;
    bool depends_on(const std::string& var) const;

    std::string str() const;

  private:
    void normalize();
    Expr num_, den_;
};

}  // namespace af

#endif
