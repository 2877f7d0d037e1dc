#pragma once

/**
 * @file grammar.hpp
 * @brief Untyped literals for the CLI surface.
 *
 * expr   := term (('+'|'-') term)*
 * term   := coeff ['*' tpow] | tpow
 * tpow   := 't' ['^' '(' int ['/' int] ')']
 * coeff  := int ['/' int]
 * frac   := '(' expr ')' '/' '(' expr ')'
 * stream := ('rat:'|'sqrt:'|'cf:') payload | 'e69' [':' schedule]
 * cf     := '[' expr (';' expr (',' expr)*)? ']'
 * point  := 'eta(' expr ',' rational ')'
 * ball   := ('ballo('|'ballc(') expr ',' rational ')'
 * word   := gen ('*' gen)*;  gen := 'i' | 't(' expr ')' | 'm(' expr ',' expr ',' expr ')'
 *
 * Exponents may be negative (series contexts); the typed builders enforce
 * per-context restrictions.
 */

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pcf/rational.hpp"

namespace pcf::grammar {

struct Number {
    std::string num = "1";
    std::string den = "1";
};

struct PolyTerm {
    int sign = 1;
    std::optional<Number> coef;  // absent: implicit 1
    bool has_t = false;
    Rational exp = Rational(1);  // meaningful when has_t
};

using PolyLit = std::vector<PolyTerm>;

struct FracLit {
    PolyLit num, den;
};

struct StreamLit {
    std::string kind;     // "rat", "sqrt", "cf", "e69"
    std::string payload;  // raw text after the colon (may be empty for e69)
};

using ExprLit = std::variant<PolyLit, FracLit, StreamLit>;

struct CFLit {
    PolyLit f0;
    std::vector<PolyLit> partials;
};

struct PointLit {
    ExprLit center;
    Rational radius;
};

struct BallLit {
    ExprLit center;
    Rational radius;
    bool closed = true;
};

struct WordGen {
    char kind = 'i';  // 'i', 't', 'm'
    std::vector<PolyLit> args;
};

using WordLit = std::vector<WordGen>;

ExprLit parse_expression(const std::string& text);
CFLit parse_cf(const std::string& text);
PointLit parse_point(const std::string& text);
BallLit parse_ball(const std::string& text);
WordLit parse_word(const std::string& text);
Rational parse_rational(const std::string& text);

}  // namespace pcf::grammar
