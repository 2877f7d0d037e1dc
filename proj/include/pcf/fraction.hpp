#pragma once

/**
 * @file fraction.hpp
 * @brief Comaximal fractions of Puiseux polynomials.
 *
 * A RationalPuiseux is kept in the unique canonical form: numerator and
 * denominator comaximal (their gcd after the substitution u = t^(1/n) is a
 * unit) with a monic denominator. Equality is then syntactic.
 */

#include <string>
#include <utility>

#include "pcf/puiseux.hpp"

namespace pcf {

template <CoefficientField F>
class RationalPuiseux {
  public:
    using Poly = PuiseuxPoly<F>;

    explicit RationalPuiseux(Poly num)
        : num_(std::move(num)), den_(Poly::one(num_.field())) {}

    /// The unique comaximal, denominator-monic representative of p/q.
    static RationalPuiseux reduce(const Poly& p, const Poly& q) {
        p.check_field(q);
        const F& fld = p.field();
        if (q.is_zero()) throw DivisionByZero();
        if (p.is_zero()) return RationalPuiseux(Poly::zero(fld));

        mpz_class n_mpz = 1;
        mpz_lcm(n_mpz.get_mpz_t(), p.ramification().get_mpz_t(),
                q.ramification().get_mpz_t());
        unsigned long n = n_mpz.get_ui();

        auto dp = p.to_dense(n);
        auto dq = q.to_dense(n);
        auto g = detail::dense_gcd(fld, dp, dq);
        if (detail::dense_deg<F>(g) > 0) {
            dp = detail::dense_divmod(fld, std::move(dp), g).first;
            dq = detail::dense_divmod(fld, std::move(dq), g).first;
        }
        auto lead_inv = fld.inv(dq.back());
        if (!fld.eq(lead_inv, fld.one())) {
            for (auto& c : dp) c = fld.mul(c, lead_inv);
            for (auto& c : dq) c = fld.mul(c, lead_inv);
        }
        RationalPuiseux out(Poly::zero(fld));
        out.num_ = Poly::from_dense(fld, dp, n);
        out.den_ = Poly::from_dense(fld, dq, n);
        return out;
    }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    const F& field() const { return num_.field(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_one(); }

    ExtRat valuation() const {
        if (is_zero()) return ExtRat::pos_inf();
        return num_.valuation() - den_.valuation();
    }
    ExtRat degree() const { return -valuation(); }

    RationalPuiseux invert() const {
        if (is_zero()) throw DivisionByZero();
        return reduce(den_, num_);
    }
    RationalPuiseux operator-() const {
        RationalPuiseux r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend RationalPuiseux operator+(const RationalPuiseux& a, const RationalPuiseux& b) {
        return reduce(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalPuiseux operator-(const RationalPuiseux& a, const RationalPuiseux& b) {
        return reduce(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalPuiseux operator*(const RationalPuiseux& a, const RationalPuiseux& b) {
        return reduce(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalPuiseux operator/(const RationalPuiseux& a, const RationalPuiseux& b) {
        if (b.is_zero()) throw DivisionByZero();
        return reduce(a.num_ * b.den_, a.den_ * b.num_);
    }

    friend bool operator==(const RationalPuiseux& a, const RationalPuiseux& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalPuiseux& a, const RationalPuiseux& b) {
        return !(a == b);
    }

    /// The unique f in the polynomial ring with nu(z - f) > 0: the quotient
    /// of the Euclidean division num = den * f + r after substitution.
    Poly principal_part() const {
        const F& fld = field();
        if (is_zero()) return Poly::zero(fld);
        mpz_class n_mpz = 1;
        mpz_lcm(n_mpz.get_mpz_t(), num_.ramification().get_mpz_t(),
                den_.ramification().get_mpz_t());
        unsigned long n = n_mpz.get_ui();
        auto q = detail::dense_divmod(fld, num_.to_dense(n), den_.to_dense(n)).first;
        return Poly::from_dense(fld, q, n);
    }

    /// z - principal_part(z); has strictly positive valuation.
    RationalPuiseux fractional_part() const {
        return *this - RationalPuiseux(principal_part());
    }

    std::string str() const {
        if (den_.is_one()) return num_.str();
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

  private:
    Poly num_, den_;
};

template <CoefficientField F>
ExtRat valuation(const RationalPuiseux<F>& x) {
    return x.valuation();
}

/// reduce_fraction from the external surface; see RationalPuiseux::reduce.
template <CoefficientField F>
RationalPuiseux<F> reduce_fraction(const PuiseuxPoly<F>& p, const PuiseuxPoly<F>& q) {
    return RationalPuiseux<F>::reduce(p, q);
}

template <CoefficientField F>
PuiseuxPoly<F> principal_part(const RationalPuiseux<F>& z) {
    return z.principal_part();
}

}  // namespace pcf
