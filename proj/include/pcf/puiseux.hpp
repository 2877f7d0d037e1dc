#pragma once

/**
 * @file puiseux.hpp
 * @brief Puiseux polynomials: finite sums of c*t^r with rational r >= 0.
 *
 * Values are canonical: terms sorted by strictly decreasing exponent, no
 * zero coefficients. Equality is syntactic. The valuation is normalized by
 * nu(t) = -1, so deg(f) = -nu(f) is the largest exponent; deg(0) = -inf and
 * nu(0) = +inf are first-class ExtRat values.
 *
 * Divisibility questions are never attacked in the full ring (it is not
 * Noetherian): gcd and division substitute u = t^(1/n), with n the lcm of
 * the exponent denominators, and run the univariate Euclidean algorithm
 * in E[u].
 */

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "pcf/fields.hpp"
#include "pcf/rational.hpp"

namespace pcf {

template <CoefficientField F>
struct Term {
    Rational exp;
    typename F::Elem coef;

    friend bool operator==(const Term& a, const Term& b) {
        return a.exp == b.exp && a.coef == b.coef;
    }
};

namespace detail {

/// Sort by strictly decreasing exponent, merge equal exponents, drop zeros.
template <CoefficientField F>
std::vector<Term<F>> normalize_terms(const F& fld, std::vector<Term<F>> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term<F>& a, const Term<F>& b) { return b.exp < a.exp; });
    std::vector<Term<F>> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
        if (!out.empty() && out.back().exp == t.exp) {
            out.back().coef = fld.add(out.back().coef, t.coef);
            if (fld.is_zero(out.back().coef)) out.pop_back();
        } else if (!fld.is_zero(t.coef)) {
            out.push_back(std::move(t));
        }
    }
    return out;
}

template <CoefficientField F>
std::vector<Term<F>> add_terms(const F& fld, const std::vector<Term<F>>& a,
                               const std::vector<Term<F>>& b, bool negate_b) {
    std::vector<Term<F>> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && b[j].exp < a[i].exp)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || a[i].exp < b[j].exp) {
            auto c = negate_b ? fld.neg(b[j].coef) : b[j].coef;
            if (!fld.is_zero(c)) out.push_back({b[j].exp, c});
            ++j;
        } else {
            auto c = negate_b ? fld.sub(a[i].coef, b[j].coef)
                              : fld.add(a[i].coef, b[j].coef);
            if (!fld.is_zero(c)) out.push_back({a[i].exp, c});
            ++i;
            ++j;
        }
    }
    return out;
}

template <CoefficientField F>
std::vector<Term<F>> mul_terms(const F& fld, const std::vector<Term<F>>& a,
                               const std::vector<Term<F>>& b) {
    std::map<Rational, typename F::Elem, std::greater<Rational>> acc;
    for (const auto& x : a)
        for (const auto& y : b) {
            Rational e = x.exp + y.exp;
            auto c = fld.mul(x.coef, y.coef);
            auto it = acc.find(e);
            if (it == acc.end()) {
                acc.emplace(std::move(e), std::move(c));
            } else {
                it->second = fld.add(it->second, c);
                if (fld.is_zero(it->second)) acc.erase(it);
            }
        }
    std::vector<Term<F>> out;
    out.reserve(acc.size());
    for (auto& [e, c] : acc) out.push_back({e, std::move(c)});
    return out;
}

/// lcm of the exponent denominators; 1 for an empty list.
template <CoefficientField F>
mpz_class ramification_of(const std::vector<Term<F>>& terms) {
    mpz_class n = 1;
    for (const auto& t : terms) {
        mpz_class d = t.exp.den();
        mpz_lcm(n.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    }
    return n;
}

// --- dense univariate polynomials over F (ascending coefficients) ---

template <CoefficientField F>
using Dense = std::vector<typename F::Elem>;

template <CoefficientField F>
void dense_trim(const F& fld, Dense<F>& a) {
    while (!a.empty() && fld.is_zero(a.back())) a.pop_back();
}

template <CoefficientField F>
long dense_deg(const Dense<F>& a) {
    return static_cast<long>(a.size()) - 1;  // -1 for the zero polynomial
}

template <CoefficientField F>
Dense<F> dense_mul(const F& fld, const Dense<F>& a, const Dense<F>& b) {
    if (a.empty() || b.empty()) return {};
    Dense<F> out(a.size() + b.size() - 1, fld.zero());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = fld.add(out[i + j], fld.mul(a[i], b[j]));
    dense_trim(fld, out);
    return out;
}

/// Euclidean division a = q*b + r with deg r < deg b. Requires b != 0.
template <CoefficientField F>
std::pair<Dense<F>, Dense<F>> dense_divmod(const F& fld, Dense<F> a, const Dense<F>& b) {
    if (b.empty()) throw DivisionByZero();
    Dense<F> q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, fld.zero());
    auto lb_inv = fld.inv(b.back());
    while (a.size() >= b.size()) {
        auto c = fld.mul(a.back(), lb_inv);
        std::size_t shift = a.size() - b.size();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] = fld.sub(a[shift + i], fld.mul(c, b[i]));
        dense_trim(fld, a);
    }
    dense_trim(fld, q);
    return {std::move(q), std::move(a)};
}

/// Monic gcd; gcd(0, 0) = 0.
template <CoefficientField F>
Dense<F> dense_gcd(const F& fld, Dense<F> a, Dense<F> b) {
    while (!b.empty()) {
        auto r = dense_divmod(fld, std::move(a), b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && !fld.eq(a.back(), fld.one())) {
        auto inv = fld.inv(a.back());
        for (auto& c : a) c = fld.mul(c, inv);
    }
    return a;
}

}  // namespace detail

template <CoefficientField F>
class PuiseuxPoly {
  public:
    using Elem = typename F::Elem;

    explicit PuiseuxPoly(F fld) : fld_(std::move(fld)) {}
    PuiseuxPoly(F fld, std::vector<Term<F>> terms)
        : fld_(std::move(fld)), terms_(detail::normalize_terms(fld_, std::move(terms))) {
        for (const auto& t : terms_)
            if (t.exp.sign() < 0)
                throw DomainError("Puiseux polynomial exponents must be >= 0");
    }

    static PuiseuxPoly zero(F fld) { return PuiseuxPoly(std::move(fld)); }
    static PuiseuxPoly one(F fld) { return constant(std::move(fld), fld.one()); }
    static PuiseuxPoly constant(F fld, Elem c) {
        PuiseuxPoly p(std::move(fld));
        if (!p.fld_.is_zero(c)) p.terms_.push_back({Rational(0), std::move(c)});
        return p;
    }
    static PuiseuxPoly monomial(F fld, Elem c, Rational e) {
        PuiseuxPoly p(std::move(fld));
        if (e.sign() < 0) throw DomainError("Puiseux polynomial exponents must be >= 0");
        if (!p.fld_.is_zero(c)) p.terms_.push_back({std::move(e), std::move(c)});
        return p;
    }
    /// t^e
    static PuiseuxPoly t_power(F fld, Rational e) {
        auto c = fld.one();
        return monomial(std::move(fld), std::move(c), std::move(e));
    }

    const F& field() const { return fld_; }
    const std::vector<Term<F>>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].exp.is_zero());
    }
    bool is_one() const {
        return terms_.size() == 1 && terms_[0].exp.is_zero() &&
               fld_.eq(terms_[0].coef, fld_.one());
    }

    const Term<F>& leading() const {
        if (terms_.empty()) throw DomainError("zero polynomial has no leading term");
        return terms_.front();
    }

    ExtRat degree() const {
        return terms_.empty() ? ExtRat::neg_inf() : ExtRat(terms_.front().exp);
    }
    ExtRat valuation() const { return -degree(); }

    mpz_class ramification() const { return detail::ramification_of<F>(terms_); }

    PuiseuxPoly operator-() const {
        PuiseuxPoly r(fld_);
        r.terms_ = terms_;
        for (auto& t : r.terms_) t.coef = fld_.neg(t.coef);
        return r;
    }
    friend PuiseuxPoly operator+(const PuiseuxPoly& a, const PuiseuxPoly& b) {
        a.check_field(b);
        return from_normalized(a.fld_, detail::add_terms(a.fld_, a.terms_, b.terms_, false));
    }
    friend PuiseuxPoly operator-(const PuiseuxPoly& a, const PuiseuxPoly& b) {
        a.check_field(b);
        return from_normalized(a.fld_, detail::add_terms(a.fld_, a.terms_, b.terms_, true));
    }
    friend PuiseuxPoly operator*(const PuiseuxPoly& a, const PuiseuxPoly& b) {
        a.check_field(b);
        return from_normalized(a.fld_, detail::mul_terms(a.fld_, a.terms_, b.terms_));
    }
    PuiseuxPoly scaled(const Elem& c) const {
        std::vector<Term<F>> out;
        out.reserve(terms_.size());
        if (!fld_.is_zero(c))
            for (const auto& t : terms_) out.push_back({t.exp, fld_.mul(t.coef, c)});
        return from_normalized(fld_, std::move(out));
    }

    friend bool operator==(const PuiseuxPoly& a, const PuiseuxPoly& b) {
        if (!(a.fld_ == b.fld_) || a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].exp != b.terms_[i].exp ||
                !a.fld_.eq(a.terms_[i].coef, b.terms_[i].coef))
                return false;
        return true;
    }
    friend bool operator!=(const PuiseuxPoly& a, const PuiseuxPoly& b) { return !(a == b); }

    /// Dense coefficients in u = t^(1/n), ascending. n must be a multiple
    /// of the ramification index.
    detail::Dense<F> to_dense(unsigned long n) const {
        detail::Dense<F> out;
        for (const auto& t : terms_) {
            Rational scaled = t.exp * Rational(static_cast<long>(n));
            if (!scaled.is_integer())
                throw DomainError("exponent denominator does not divide substitution index");
            unsigned long idx = mpz_class(scaled.num()).get_ui();
            if (out.size() <= idx) out.resize(idx + 1, fld_.zero());
            out[idx] = t.coef;
        }
        return out;
    }

    static PuiseuxPoly from_dense(F fld, const detail::Dense<F>& coeffs, unsigned long n) {
        std::vector<Term<F>> terms;
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            if (!fld.is_zero(coeffs[i]))
                terms.push_back({Rational(static_cast<long>(i), static_cast<long>(n)),
                                 coeffs[i]});
        return PuiseuxPoly(std::move(fld), std::move(terms));
    }

    std::string str() const;

    void check_field(const PuiseuxPoly& o) const {
        if (!(fld_ == o.fld_)) throw DomainError("mixed coefficient fields");
    }

  private:
    static PuiseuxPoly from_normalized(F fld, std::vector<Term<F>> terms) {
        PuiseuxPoly p(std::move(fld));
        p.terms_ = std::move(terms);
        return p;
    }

    F fld_;
    std::vector<Term<F>> terms_;
};

template <CoefficientField F>
ExtRat valuation(const PuiseuxPoly<F>& f) {
    return f.valuation();
}
template <CoefficientField F>
ExtRat degree(const PuiseuxPoly<F>& f) {
    return f.degree();
}

namespace detail {

/// Renders a term list with the canonical conventions: coefficient 1
/// elided before a power of t, t^(1) written as t, exponent 0 elided.
/// Over QQ a negative coefficient folds its sign into the separator.
template <CoefficientField F>
std::string render_terms(const F& fld, const std::vector<Term<F>>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : terms) {
        auto c = t.coef;
        std::string sep;
        if constexpr (std::is_same_v<F, QQ>) {
            bool negative = c.sign() < 0;
            if (negative) c = -c;
            sep = first ? (negative ? "-" : "") : (negative ? " - " : " + ");
        } else {
            sep = first ? "" : " + ";
        }
        std::string body;
        if (t.exp.is_zero()) {
            body = fld.str(c);
        } else {
            std::string tp = t.exp == Rational(1) ? "t" : "t^(" + t.exp.str() + ")";
            bool unit_coef = fld.eq(c, fld.one());
            body = unit_coef ? tp : fld.str(c) + "*" + tp;
        }
        out += sep + body;
        first = false;
    }
    return out;
}

}  // namespace detail

template <CoefficientField F>
std::string PuiseuxPoly<F>::str() const {
    return detail::render_terms(fld_, terms_);
}

}  // namespace pcf
