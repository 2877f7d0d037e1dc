#include "pcf/grammar.hpp"

#include <cctype>

#include "pcf/errors.hpp"

namespace pcf::grammar {

namespace {

class Cursor {
  public:
    explicit Cursor(const std::string& s) : s_(s) {}

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool done() {
        skip_ws();
        return pos_ >= s_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    bool accept_word(const std::string& w) {
        skip_ws();
        if (s_.compare(pos_, w.size(), w) == 0) {
            pos_ += w.size();
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) { throw ParseError(what, pos_); }

    std::string integer() {
        skip_ws();
        std::string out;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) out += s_[pos_++];
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
            fail("expected an integer");
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            out += s_[pos_++];
        return out;
    }

    bool at_digit() {
        skip_ws();
        return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
    }

    std::size_t pos() const { return pos_; }
    std::string rest() {
        skip_ws();
        return s_.substr(pos_);
    }

  private:
    const std::string& s_;
    std::size_t pos_ = 0;
};

Rational rational_from(Cursor& c) {
    std::string num = c.integer();
    if (c.accept('/')) {
        std::string den = c.integer();
        return Rational(mpz_class(num), mpz_class(den));
    }
    return Rational(mpz_class(num), mpz_class(1));
}

/// tpow := 't' ['^' exponent]; exponent := '(' int ['/' int] ')' | int
Rational exponent_from(Cursor& c) {
    if (!c.accept('^')) return Rational(1);
    if (c.accept('(')) {
        Rational e = rational_from(c);
        c.expect(')');
        return e;
    }
    return Rational(mpz_class(c.integer()), mpz_class(1));
}

PolyTerm term_from(Cursor& c, int sign) {
    PolyTerm t;
    t.sign = sign;
    if (c.at_digit()) {
        Number n;
        n.num = c.integer();
        if (c.accept('/')) n.den = c.integer();
        t.coef = n;
        if (c.accept('*')) {
            if (!c.accept('t')) c.fail("expected 't' after '*'");
            t.has_t = true;
            t.exp = exponent_from(c);
        }
        return t;
    }
    if (c.accept('t')) {
        t.has_t = true;
        t.exp = exponent_from(c);
        return t;
    }
    c.fail("expected a coefficient or 't'");
}

PolyLit poly_from(Cursor& c) {
    PolyLit out;
    int sign = 1;
    if (c.accept('-')) sign = -1;
    else c.accept('+');
    out.push_back(term_from(c, sign));
    while (true) {
        if (c.accept('+')) sign = 1;
        else if (c.accept('-')) sign = -1;
        else break;
        out.push_back(term_from(c, sign));
    }
    return out;
}

PolyLit poly_from_string(const std::string& s) {
    Cursor c(s);
    auto p = poly_from(c);
    if (!c.done()) c.fail("trailing input after polynomial");
    return p;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    Cursor c(text);
    Rational r = rational_from(c);
    if (!c.done()) c.fail("trailing input after rational");
    return r;
}

ExprLit parse_expression(const std::string& text) {
    for (const char* kind : {"rat", "sqrt", "cf", "e69"}) {
        Cursor c(text);
        if (c.accept_word(kind)) {
            if (std::string(kind) == "e69") {
                std::string payload;
                if (c.accept(':')) payload = c.rest();
                else if (!c.done()) c.fail("trailing input after e69");
                return StreamLit{"e69", payload};
            }
            if (c.accept(':')) return StreamLit{kind, c.rest()};
        }
    }
    Cursor c(text);
    // A parenthesized fraction (expr)/(expr); otherwise a bare polynomial.
    if (c.peek() == '(') {
        c.expect('(');
        PolyLit num = poly_from(c);
        c.expect(')');
        c.expect('/');
        c.expect('(');
        PolyLit den = poly_from(c);
        c.expect(')');
        if (!c.done()) c.fail("trailing input after fraction");
        return FracLit{std::move(num), std::move(den)};
    }
    auto p = poly_from(c);
    if (!c.done()) c.fail("trailing input after polynomial");
    return ExprLit{std::move(p)};
}

CFLit parse_cf(const std::string& text) {
    Cursor c(text);
    c.expect('[');
    CFLit out;
    out.f0 = poly_from(c);
    if (c.accept(';')) {
        out.partials.push_back(poly_from(c));
        while (c.accept(',')) out.partials.push_back(poly_from(c));
    }
    c.expect(']');
    if (!c.done()) c.fail("trailing input after continued fraction");
    return out;
}

PointLit parse_point(const std::string& text) {
    Cursor c(text);
    if (!c.accept_word("eta")) c.fail("expected 'eta('");
    c.expect('(');
    // Split on the last top-level comma: the center may itself contain commas
    // only inside stream payloads, which we do not allow in point literals.
    std::string rest = c.rest();
    // find matching closing paren from the end
    if (rest.empty() || rest.back() != ')') c.fail("expected ')'");
    rest.pop_back();
    auto comma = rest.find_last_of(',');
    if (comma == std::string::npos) c.fail("expected ',' in point literal");
    PointLit out{parse_expression(rest.substr(0, comma)),
                 parse_rational(rest.substr(comma + 1))};
    return out;
}

BallLit parse_ball(const std::string& text) {
    Cursor c(text);
    bool closed;
    if (c.accept_word("ballc")) closed = true;
    else if (c.accept_word("ballo")) closed = false;
    else c.fail("expected 'ballc(' or 'ballo('");
    c.expect('(');
    std::string rest = c.rest();
    if (rest.empty() || rest.back() != ')') c.fail("expected ')'");
    rest.pop_back();
    auto comma = rest.find_last_of(',');
    if (comma == std::string::npos) c.fail("expected ',' in ball literal");
    return BallLit{parse_expression(rest.substr(0, comma)),
                   parse_rational(rest.substr(comma + 1)), closed};
}

WordLit parse_word(const std::string& text) {
    Cursor c(text);
    WordLit out;
    while (true) {
        if (c.accept('i')) {
            out.push_back({'i', {}});
        } else if (c.accept('t')) {
            c.expect('(');
            std::string args;
            int depth = 1;
            while (depth > 0) {
                if (c.done()) c.fail("unterminated 't(...)'");
                char ch = c.peek();
                c.accept(ch);
                if (ch == '(') ++depth;
                if (ch == ')') --depth;
                if (depth > 0) args += ch;
            }
            out.push_back({'t', {poly_from_string(args)}});
        } else if (c.accept('m')) {
            c.expect('(');
            std::vector<std::string> parts{""};
            int depth = 1;
            while (depth > 0) {
                if (c.done()) c.fail("unterminated 'm(...)'");
                char ch = c.peek();
                c.accept(ch);
                if (ch == '(') ++depth;
                if (ch == ')') --depth;
                if (depth == 1 && ch == ',') {
                    parts.push_back("");
                    continue;
                }
                if (depth > 0) parts.back() += ch;
            }
            if (parts.size() != 3) c.fail("'m' takes three arguments");
            out.push_back({'m',
                           {poly_from_string(parts[0]), poly_from_string(parts[1]),
                            poly_from_string(parts[2])}});
        } else {
            c.fail("expected a generator: 'i', 't(...)' or 'm(...)'");
        }
        if (!c.accept('*')) break;
    }
    if (!c.done()) c.fail("trailing input after group word");
    return out;
}

}  // namespace pcf::grammar
