#ifndef AMBIENTFORGE_PARSER_HPP
#define AMBIENTFORGE_PARSER_HPP

#include "ambientforge/ratexpr.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace af {

struct ParseError : std::runtime_error {
    ParseError(size_t position, const std::string& what)
        : std::runtime_error("parse error at " + std::to_string(position + 1) + ": " + what),
          pos(position) {}
    size_t pos;
};

// Declarations visible while parsing: coordinate variables and abstract
// function symbols with their argument lists. With allow_undeclared set,
// unknown identifiers become variables (handy in tests and the REPL-free CLI
// paths that declare afterwards).
struct ParseContext {
    std::set<std::string> variables;
    std::map<std::string, std::vector<std::string>> functions;
    bool allow_undeclared = true;

    ParseContext& declare(const std::string& v) {
        variables.insert(v);
        return *this;
    }
    ParseContext& declare_function(const std::string& f, std::vector<std::string> args) {
        functions[f] = std::move(args);
        return *this;
    }
};

// Grammar (also in README): sums/products of identifiers, rational literals,
// powers with integer exponents, derivative markers D[f, v, ...] and
// log(rho). '/' is general division resolved in the rational-function layer.
RatExpr parse_ratexpr(const std::string& text, const ParseContext& ctx = {});

// Same grammar, but the result must be a polynomial (denominator 1).
Expr parse_expr(const std::string& text, const ParseContext& ctx = {});

}  // namespace af

#endif
