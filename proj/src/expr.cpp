#include "ambientforge/expr.hpp"

#include <algorithm>
#include <cmath>

namespace af {

Atom Atom::variable(std::string n) {
    Atom a;
    a.kind = AtomKind::Variable;
    a.name = std::move(n);
    return a;
}

Atom Atom::function(std::string n, std::vector<std::string> args,
                    std::vector<std::pair<std::string, int>> d) {
    Atom a;
    a.kind = AtomKind::Function;
    a.name = std::move(n);
    a.args = std::move(args);
    a.deriv = std::move(d);
    std::sort(a.deriv.begin(), a.deriv.end());
    return a;
}

Atom Atom::log_rho() {
    Atom a;
    a.kind = AtomKind::Log;
    a.name = "log";
    return a;
}

bool Atom::is_function_of(const std::string& var) const {
    return kind == AtomKind::Function &&
           std::find(args.begin(), args.end(), var) != args.end();
}

int Atom::deriv_order() const {
    int n = 0;
    for (auto& [v, k] : deriv) n += k;
    return n;
}

Atom Atom::with_extra_deriv(const std::string& var) const {
    Atom a = *this;
    for (auto& [v, k] : a.deriv) {
        if (v == var) {
            ++k;
            return a;
        }
    }
    a.deriv.emplace_back(var, 1);
    std::sort(a.deriv.begin(), a.deriv.end());
    return a;
}

std::string Atom::str() const {
    switch (kind) {
        case AtomKind::Variable:
            return name;
        case AtomKind::Log:
            return "log(rho)";
        case AtomKind::Function: {
            if (deriv.empty()) return name;
            std::string s = "D[" + name;
            for (auto& [v, k] : deriv)
                for (int i = 0; i < k; ++i) s += ", " + v;
            s += "]";
            return s;
        }
    }
    return "?";
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first == b[j].first) {
            out.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i, ++j;
        } else if (a[i].first < b[j].first) {
            out.push_back(a[i++]);
        } else {
            out.push_back(b[j++]);
        }
    }
    for (; i < a.size(); ++i) out.push_back(a[i]);
    for (; j < b.size(); ++j) out.push_back(b[j]);
    return out;
}

std::string monomial_str(const Monomial& m) {
    if (m.empty()) return "1";
    std::string s;
    for (size_t i = 0; i < m.size(); ++i) {
        if (i) s += "*";
        s += m[i].first.str();
        if (m[i].second != 1) s += "^" + std::to_string(m[i].second);
    }
    return s;
}

Expr Expr::constant(Rational q) {
    Expr e;
    if (q != 0) e.terms_.emplace(Monomial{}, std::move(q));
    return e;
}

Expr Expr::integer(long long k) { return constant(Rational(k)); }

Expr Expr::variable(const std::string& name) {
    return from_atom(Atom::variable(name));
}

Expr Expr::function(const std::string& name, std::vector<std::string> args) {
    return from_atom(Atom::function(name, std::move(args)));
}

Expr Expr::log_rho() { return from_atom(Atom::log_rho()); }

Expr Expr::from_atom(Atom a, int exp) {
    if (exp < 0) throw MathError("Expr: negative exponent on atom " + a.str());
    if (exp == 0) return integer(1);
    Expr e;
    e.terms_.emplace(Monomial{{std::move(a), exp}}, Rational(1));
    return e;
}

Expr Expr::from_monomial(Monomial m, Rational coeff) {
    Expr e;
    if (coeff != 0) e.terms_.emplace(std::move(m), std::move(coeff));
    return e;
}

bool Expr::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

std::optional<Rational> Expr::as_constant() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() == 1 && terms_.begin()->first.empty()) return terms_.begin()->second;
    return std::nullopt;
}

void Expr::insert(Monomial m, Rational c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(std::move(m), c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Expr Expr::operator-() const {
    Expr e = *this;
    for (auto& [m, c] : e.terms_) c = -c;
    return e;
}

Expr& Expr::operator+=(const Expr& o) {
    for (auto& [m, c] : o.terms_) insert(m, c);
    return *this;
}

Expr& Expr::operator-=(const Expr& o) {
    for (auto& [m, c] : o.terms_) insert(m, -c);
    return *this;
}

Expr operator*(const Expr& a, const Expr& b) {
    Expr out;
    if (a.is_zero() || b.is_zero()) return out;
    for (auto& [ma, ca] : a.terms_) {
        for (auto& [mb, cb] : b.terms_) {
            out.insert(monomial_mul(ma, mb), ca * cb);
        }
    }
    return out;
}

Expr& Expr::operator*=(const Rational& q) {
    if (q == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= q;
    return *this;
}

Expr Expr::pow(int k) const {
    if (k < 0) throw MathError("Expr::pow: negative exponent");
    Expr acc = integer(1);
    Expr base = *this;
    unsigned e = static_cast<unsigned>(k);
    while (e) {
        if (e & 1) acc = acc * base;
        if (e >>= 1) base = base * base;
    }
    return acc;
}

Expr Expr::diff(const std::string& var) const {
    Expr out;
    const bool wrt_rho = (var == kRho);
    for (auto& [m, c] : terms_) {
        for (size_t i = 0; i < m.size(); ++i) {
            const auto& [atom, exp] = m[i];
            // Monomial with this atom's exponent lowered by one.
            auto rest_without = [&](int new_exp) {
                Monomial r;
                r.reserve(m.size());
                for (size_t j = 0; j < m.size(); ++j) {
                    if (j == i) {
                        if (new_exp > 0) r.emplace_back(atom, new_exp);
                    } else {
                        r.push_back(m[j]);
                    }
                }
                return r;
            };
            switch (atom.kind) {
                case AtomKind::Variable:
                    if (atom.name == var)
                        out.insert(rest_without(exp - 1), c * exp);
                    break;
                case AtomKind::Function:
                    if (atom.is_function_of(var)) {
                        Monomial r = rest_without(exp - 1);
                        Monomial d{{atom.with_extra_deriv(var), 1}};
                        out.insert(monomial_mul(r, d), c * exp);
                    }
                    break;
                case AtomKind::Log: {
                    if (!wrt_rho) break;
                    // d/drho log^e = e log^(e-1) / rho: needs a positive rho
                    // power in the same monomial to stay polynomial.
                    Monomial r = rest_without(exp - 1);
                    bool divided = false;
                    for (auto& [a2, e2] : r) {
                        if (a2.kind == AtomKind::Variable && a2.name == kRho) {
                            --e2;
                            divided = true;
                            break;
                        }
                    }
                    if (!divided)
                        throw MathError(
                            "diff: d/drho of log(rho) without a rho factor leaves the "
                            "polynomial ring in monomial " +
                            monomial_str(m));
                    std::erase_if(r, [](auto& p) { return p.second == 0; });
                    out.insert(std::move(r), c * exp);
                    break;
                }
            }
        }
    }
    return out;
}

Expr Expr::substitute(const std::map<std::string, Expr>& bindings) const {
    if (bindings.empty()) return *this;
    Expr out;
    for (auto& [m, c] : terms_) {
        Expr term = constant(c);
        for (auto& [atom, exp] : m) {
            if (atom.kind == AtomKind::Variable) {
                auto it = bindings.find(atom.name);
                if (it != bindings.end()) {
                    term = term * it->second.pow(exp);
                    continue;
                }
            }
            term = term * from_atom(atom, exp);
        }
        out += term;
    }
    return out;
}

double Expr::eval(const EvalPoint& pt) const {
    double total = 0.0;
    for (auto& [m, c] : terms_) {
        double t = to_double(c);
        for (auto& [atom, exp] : m) {
            double v;
            switch (atom.kind) {
                case AtomKind::Variable: {
                    auto it = pt.vars.find(atom.name);
                    if (it == pt.vars.end())
                        throw MathError("eval: unbound variable " + atom.name);
                    v = it->second;
                    break;
                }
                case AtomKind::Function: {
                    auto it = pt.funcs.find(atom);
                    if (it == pt.funcs.end())
                        throw MathError("eval: unbound function atom " + atom.str());
                    v = it->second;
                    break;
                }
                case AtomKind::Log: {
                    auto it = pt.vars.find(kRho);
                    if (it == pt.vars.end() || it->second <= 0)
                        throw MathError("eval: log(rho) needs rho > 0");
                    v = std::log(it->second);
                    break;
                }
            }
            t *= std::pow(v, exp);
        }
        total += t;
    }
    return total;
}

bool Expr::depends_on(const std::string& var) const {
    for (auto& [m, c] : terms_) {
        for (auto& [atom, exp] : m) {
            if (atom.kind == AtomKind::Variable && atom.name == var) return true;
            if (atom.kind == AtomKind::Function && atom.is_function_of(var)) return true;
            if (atom.kind == AtomKind::Log && var == kRho) return true;
        }
    }
    return false;
}

int Expr::degree_in(const std::string& var) const {
    int deg = 0;
    for (auto& [m, c] : terms_) {
        for (auto& [atom, exp] : m) {
            if (atom.kind == AtomKind::Variable && atom.name == var)
                deg = std::max(deg, exp);
        }
    }
    return deg;
}

std::set<std::string> Expr::variables() const {
    std::set<std::string> vs;
    for (auto& [m, c] : terms_)
        for (auto& [atom, exp] : m)
            if (atom.kind == AtomKind::Variable) vs.insert(atom.name);
    return vs;
}

bool Expr::has_function_atoms() const {
    for (auto& [m, c] : terms_)
        for (auto& [atom, exp] : m)
            if (atom.kind == AtomKind::Function) return true;
    return false;
}

bool Expr::has_log() const {
    for (auto& [m, c] : terms_)
        for (auto& [atom, exp] : m)
            if (atom.kind == AtomKind::Log) return true;
    return false;
}

const std::pair<const Monomial, Rational>& Expr::leading() const {
    if (terms_.empty()) throw MathError("Expr::leading on zero");
    return *terms_.rbegin();
}

std::string Expr::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto& [m, c] : terms_) {
        Rational coeff = c;
        if (first) {
            if (coeff < 0) {
                s += "-";
                coeff = -coeff;
            }
        } else {
            if (coeff < 0) {
                s += " - ";
                coeff = -coeff;
            } else {
                s += " + ";
            }
        }
        first = false;
        if (m.empty()) {
            s += to_string(coeff);
        } else if (coeff == 1) {
            s += monomial_str(m);
        } else {
            s += to_string(coeff) + "*" + monomial_str(m);
        }
    }
    return s;
}

}  // namespace af
