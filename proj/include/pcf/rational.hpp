#pragma once

/**
 * @file rational.hpp
 * @brief Exact rational numbers and their extension by the two infinities.
 *
 * Rational wraps a GMP rational and is always kept canonical: reduced to
 * lowest terms with a positive denominator, zero stored as 0/1. Equality
 * is therefore syntactic. ExtRat adds -inf and +inf as first-class values;
 * degrees and valuations use them instead of integer sentinels.
 */

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>

#include "pcf/errors.hpp"

namespace pcf {

class Rational {
  public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}  // NOLINT: implicit by design, mirrors int literals
    Rational(long n, long d) : v_(make(mpz_class(n), mpz_class(d))) {}
    Rational(mpz_class n, mpz_class d) : v_(make(std::move(n), std::move(d))) {}
    explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    /// Accepts "a" or "a/b" with optional sign.
    static Rational from_string(const std::string& s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw DomainError("bad rational literal: " + s);
        q.canonicalize();
        if (q.get_den() == 0) throw DivisionByZero();
        return Rational(std::move(q));
    }

    const mpq_class& raw() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw DivisionByZero();
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    std::string str() const {
        if (is_integer()) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

  private:
    static mpq_class make(mpz_class n, mpz_class d) {
        if (d == 0) throw DivisionByZero();
        mpq_class q(std::move(n), std::move(d));
        q.canonicalize();
        return q;
    }

    mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// A rational extended by -inf and +inf. Addition of opposite infinities
/// is a programming error and asserts via DomainError.
class ExtRat {
  public:
    ExtRat() : kind_(Kind::Finite) {}
    ExtRat(Rational v) : kind_(Kind::Finite), v_(std::move(v)) {}  // NOLINT
    ExtRat(long v) : kind_(Kind::Finite), v_(v) {}                 // NOLINT

    static ExtRat pos_inf() { return ExtRat(Kind::PosInf); }
    static ExtRat neg_inf() { return ExtRat(Kind::NegInf); }

    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    bool is_neg_inf() const { return kind_ == Kind::NegInf; }

    const Rational& value() const {
        if (!is_finite()) throw DomainError("infinite value where a rational is required");
        return v_;
    }

    ExtRat operator-() const {
        switch (kind_) {
            case Kind::PosInf: return neg_inf();
            case Kind::NegInf: return pos_inf();
            default: return ExtRat(-v_);
        }
    }

    friend ExtRat operator+(const ExtRat& a, const ExtRat& b) {
        if (a.is_finite() && b.is_finite()) return ExtRat(a.v_ + b.v_);
        if (a.is_pos_inf() || b.is_pos_inf()) {
            if (a.is_neg_inf() || b.is_neg_inf())
                throw DomainError("inf + (-inf) is undefined");
            return pos_inf();
        }
        return neg_inf();
    }
    friend ExtRat operator-(const ExtRat& a, const ExtRat& b) { return a + (-b); }

    friend bool operator==(const ExtRat& a, const ExtRat& b) {
        if (a.kind_ != b.kind_) return false;
        return a.kind_ != Kind::Finite || a.v_ == b.v_;
    }
    friend bool operator!=(const ExtRat& a, const ExtRat& b) { return !(a == b); }
    friend bool operator<(const ExtRat& a, const ExtRat& b) {
        if (a.kind_ == b.kind_) return a.kind_ == Kind::Finite && a.v_ < b.v_;
        if (a.is_neg_inf() || b.is_pos_inf()) return true;
        return false;
    }
    friend bool operator<=(const ExtRat& a, const ExtRat& b) { return !(b < a); }
    friend bool operator>(const ExtRat& a, const ExtRat& b) { return b < a; }
    friend bool operator>=(const ExtRat& a, const ExtRat& b) { return !(a < b); }

    std::string str() const {
        switch (kind_) {
            case Kind::PosInf: return "inf";
            case Kind::NegInf: return "-inf";
            default: return v_.str();
        }
    }

  private:
    enum class Kind { NegInf, Finite, PosInf };
    explicit ExtRat(Kind k) : kind_(k) {}

    Kind kind_;
    Rational v_;
};

inline ExtRat min(const ExtRat& a, const ExtRat& b) { return b < a ? b : a; }
inline ExtRat max(const ExtRat& a, const ExtRat& b) { return a < b ? b : a; }

}  // namespace pcf
