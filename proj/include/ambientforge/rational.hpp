#ifndef AMBIENTFORGE_RATIONAL_HPP
#define AMBIENTFORGE_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace af {

// Arbitrary-precision rational; the only number type in the symbolic core.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational rat(long long num, long long den = 1) {
    return Rational(BigInt(num), BigInt(den));
}

inline double to_double(const Rational& q) {
    return q.template convert_to<double>();
}

inline bool is_integer(const Rational& q) {
    return denominator(q) == 1;
}

std::string to_string(const Rational& q);

// q^k for integer k (k may be negative, q != 0 then).
Rational rat_pow(const Rational& q, long k);

// n! as a rational, n >= 0.
Rational factorial(unsigned n);

}  // namespace af

#endif
