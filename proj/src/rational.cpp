#include "ambientforge/rational.hpp"

#include <stdexcept>

namespace af {

std::string to_string(const Rational& q) {
    if (is_integer(q)) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

Rational rat_pow(const Rational& q, long k) {
    if (k == 0) return Rational(1);
    if (q == 0 && k < 0) throw std::domain_error("rat_pow: zero to negative power");
    Rational base = k > 0 ? q : Rational(1) / q;
    unsigned long e = static_cast<unsigned long>(k > 0 ? k : -k);
    Rational acc(1);
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

Rational factorial(unsigned n) {
    BigInt acc(1);
    for (unsigned i = 2; i <= n; ++i) acc *= i;
    return Rational(acc);
}

}  // namespace af
