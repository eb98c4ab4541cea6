#ifndef AMBIENTFORGE_EXPR_HPP
#define AMBIENTFORGE_EXPR_HPP

#include "ambientforge/rational.hpp"

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace af {

// Name of the distinguished series variable.
inline const std::string kRho = "rho";

struct MathError : std::runtime_error {
    explicit MathError(const std::string& what) : std::runtime_error(what) {}
};

enum class AtomKind { Variable = 0, Function = 1, Log = 2 };

// A multiplicative atom: a coordinate variable, an abstract function symbol
// with the partial derivatives already applied to it, or log(rho).
struct Atom {
    AtomKind kind = AtomKind::Variable;
    std::string name;
    std::vector<std::string> args;                     // function arguments, as declared
    std::vector<std::pair<std::string, int>> deriv;    // sorted derivative multi-index

    static Atom variable(std::string n);
    static Atom function(std::string n, std::vector<std::string> a,
                         std::vector<std::pair<std::string, int>> d = {});
    static Atom log_rho();

    bool is_function_of(const std::string& var) const;
    int deriv_order() const;
    Atom with_extra_deriv(const std::string& var) const;

    std::string str() const;
    auto operator<=>(const Atom&) const = default;
};

// Sorted (atom, exponent) pairs, exponents >= 1. The empty monomial is 1.
using Monomial = std::vector<std::pair<Atom, int>>;

Monomial monomial_mul(const Monomial& a, const Monomial& b);
std::string monomial_str(const Monomial& m);

// Values for numeric evaluation: coordinates and function atoms (including
// the derivative atoms that actually occur).
struct EvalPoint {
    std::map<std::string, double> vars;
    std::map<Atom, double> funcs;
};

// Exact multivariate polynomial over atoms, kept permanently in normal form:
// an expanded sum of monomials with rational coefficients. Two expressions
// that are equal in the polynomial ring compare equal structurally.
class Expr {
  public:
    Expr() = default;

    static Expr constant(Rational q);
    static Expr integer(long long k);
    static Expr variable(const std::string& name);
    static Expr function(const std::string& name, std::vector<std::string> args);
    static Expr log_rho();
    static Expr from_atom(Atom a, int exp = 1);
    static Expr from_monomial(Monomial m, Rational coeff);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    std::optional<Rational> as_constant() const;

    Expr operator-() const;
    Expr& operator+=(const Expr& o);
    Expr& operator-=(const Expr& o);
    friend Expr operator+(Expr a, const Expr& b) { return a += b; }
    friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
    friend Expr operator*(const Expr& a, const Expr& b);
    Expr& operator*=(const Expr& o) { return *this = *this * o; }
    Expr& operator*=(const Rational& q);
    friend Expr operator*(Expr a, const Rational& q) { return a *= q; }
    friend Expr operator*(const Rational& q, Expr a) { return a *= q; }
    Expr pow(int k) const;  // k >= 0

    bool operator==(const Expr& o) const { return terms_ == o.terms_; }
    bool operator!=(const Expr& o) const { return !(*this == o); }
    bool operator<(const Expr& o) const { return terms_ < o.terms_; }

    // Exact partial derivative. Derivatives of function atoms accrue on the
    // multi-index for declared arguments and vanish otherwise. d log(rho)/d rho
    // is only representable when the monomial carries a positive power of rho.
    Expr diff(const std::string& var) const;

    // Simultaneous substitution of variables, then renormalization. Function
    // atoms are opaque: their declared arguments are not rewritten.
    Expr substitute(const std::map<std::string, Expr>& bindings) const;

    double eval(const EvalPoint& pt) const;

    bool depends_on(const std::string& var) const;
    int degree_in(const std::string& var) const;
    std::set<std::string> variables() const;
    bool has_function_atoms() const;
    bool has_log() const;

    const std::map<Monomial, Rational>& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }

    // Leading (largest) monomial in the term order; throws on zero.
    const std::pair<const Monomial, Rational>& leading() const;

    std::string str() const;

  private:
    void insert(Monomial m, Rational c);
    std::map<Monomial, Rational> terms_;
};

}  // namespace af

#endif
