// Test-only brute-force polynomial oracle, independent of the Expr engine.
// Parses the same textual grammar (sums, products, integer powers over plain
// variables and rational literals) into an unnormalized tree and expands it
// recursively into a coefficient map keyed by sorted variable multisets.
// Deliberately dumb: no simplification during construction.
#ifndef AF_TESTS_NAIVE_POLY_HPP
#define AF_TESTS_NAIVE_POLY_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace naive {

using Q = boost::multiprecision::cpp_rational;
using Key = std::vector<std::string>;  // sorted variable names with repetition
using Poly = std::map<Key, Q>;

inline Poly add(const Poly& a, const Poly& b) {
    Poly r = a;
    for (auto& [k, c] : b) {
        r[k] += c;
        if (r[k] == 0) r.erase(k);
    }
    return r;
}

inline Poly mul(const Poly& a, const Poly& b) {
    Poly r;
    for (auto& [ka, ca] : a) {
        for (auto& [kb, cb] : b) {
            Key k = ka;
            k.insert(k.end(), kb.begin(), kb.end());
            std::sort(k.begin(), k.end());
            r[k] += ca * cb;
            if (r[k] == 0) r.erase(k);
        }
    }
    return r;
}

inline Poly neg(const Poly& a) {
    Poly r = a;
    for (auto& [k, c] : r) c = -c;
    return r;
}

struct Parser {
    std::string s;
    size_t i = 0;
    explicit Parser(std::string text) : s(std::move(text)) {}

    void skip() {
        while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }

    Poly parse() {
        Poly p = sum();
        skip();
        if (i != s.size()) throw std::runtime_error("naive: trailing input");
        return p;
    }

    Poly sum() {
        Poly p = prod();
        while (true) {
            skip();
            if (eat('+'))
                p = add(p, prod());
            else if (eat('-'))
                p = add(p, neg(prod()));
            else
                return p;
        }
    }

    Poly prod() {
        Poly p = factor();
        while (true) {
            skip();
            if (eat('*')) {
                p = mul(p, factor());
            } else if (eat('/')) {
                // division by a rational literal only
                skip();
                size_t j = i;
                while (j < s.size() && std::isdigit((unsigned char)s[j])) ++j;
                if (j == i) throw std::runtime_error("naive: / needs a constant");
                Q d(s.substr(i, j - i));
                i = j;
                p = mul(p, Poly{{Key{}, Q(1) / d}});
            } else {
                return p;
            }
        }
    }

    Poly factor() {
        skip();
        if (eat('-')) return neg(factor());
        Poly base = primary();
        skip();
        if (eat('^')) {
            skip();
            size_t j = i;
            while (j < s.size() && std::isdigit((unsigned char)s[j])) ++j;
            int e = std::stoi(s.substr(i, j - i));
            i = j;
            Poly acc{{Key{}, Q(1)}};
            for (int k = 0; k < e; ++k) acc = mul(acc, base);
            return acc;
        }
        return base;
    }

    Poly primary() {
        skip();
        if (eat('(')) {
            Poly p = sum();
            if (!eat(')')) throw std::runtime_error("naive: missing )");
            return p;
        }
        if (i < s.size() && std::isdigit((unsigned char)s[i])) {
            size_t j = i;
            while (j < s.size() && std::isdigit((unsigned char)s[j])) ++j;
            Q num(s.substr(i, j - i));
            i = j;
            skip();
            if (eat('/')) {
                skip();
                size_t k = i;
                while (k < s.size() && std::isdigit((unsigned char)s[k])) ++k;
                Q den(s.substr(i, k - i));
                i = k;
                num /= den;
            }
            return Poly{{Key{}, num}};
        }
        if (i < s.size() && std::isalpha((unsigned char)s[i])) {
            size_t j = i;
            while (j < s.size() && std::isalnum((unsigned char)s[j])) ++j;
            std::string name = s.substr(i, j - i);
            i = j;
            return Poly{{Key{name}, Q(1)}};
        }
        throw std::runtime_error("naive: bad primary");
    }
};

inline Poly expand(const std::string& text) { return Parser(text).parse(); }

}  // namespace naive

#endif
