#pragma once

/**
 * @file fields.hpp
 * @brief Coefficient fields: exact rationals and prime fields.
 *
 * The library is generic over a small field object that owns the arithmetic
 * of its elements. QQ is stateless; GF carries its modulus, so values of
 * different moduli can coexist. Every container (polynomial, series, ...)
 * stores a copy of its field, which keeps values self-contained.
 */

#include <concepts>
#include <cstdint>
#include <optional>
#include <string>

#include "pcf/errors.hpp"
#include "pcf/rational.hpp"

namespace pcf {

template <typename F>
concept CoefficientField = requires(const F f, const typename F::Elem a,
                                    const typename F::Elem b) {
    { f.zero() } -> std::same_as<typename F::Elem>;
    { f.one() } -> std::same_as<typename F::Elem>;
    { f.add(a, b) } -> std::same_as<typename F::Elem>;
    { f.sub(a, b) } -> std::same_as<typename F::Elem>;
    { f.mul(a, b) } -> std::same_as<typename F::Elem>;
    { f.neg(a) } -> std::same_as<typename F::Elem>;
    { f.inv(a) } -> std::same_as<typename F::Elem>;
    { f.is_zero(a) } -> std::same_as<bool>;
    { f.eq(a, b) } -> std::same_as<bool>;
    { f.from_int(long{}) } -> std::same_as<typename F::Elem>;
    { f.str(a) } -> std::same_as<std::string>;
    { f == f } -> std::same_as<bool>;
};

/// The field of exact rationals.
struct QQ {
    using Elem = Rational;

    Elem zero() const { return Rational(0); }
    Elem one() const { return Rational(1); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem inv(const Elem& a) const {
        if (a.is_zero()) throw DivisionByZero();
        return Rational(1) / a;
    }
    bool is_zero(const Elem& a) const { return a.is_zero(); }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    Elem from_int(long n) const { return Rational(n); }
    Elem from_ratio(long n, long d) const { return Rational(n, d); }
    unsigned long characteristic() const { return 0; }

    /// Canonical square root: the positive root, defined only when both
    /// numerator and denominator are perfect squares.
    std::optional<Elem> sqrt(const Elem& a) const {
        if (a.is_zero()) return Rational(0);
        if (a.sign() < 0) return std::nullopt;
        mpz_class n = a.num(), d = a.den();
        if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
            return std::nullopt;
        mpz_class rn, rd;
        mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
        return Rational(rn, rd);
    }

    std::string str(const Elem& a) const { return a.str(); }
    std::string name() const { return "q"; }
    friend bool operator==(const QQ&, const QQ&) { return true; }
};

/// The prime field F_p for p < 2^31; elements are least nonnegative
/// representatives stored in an unsigned long.
class GF {
  public:
    using Elem = unsigned long;

    explicit GF(unsigned long p) : p_(p) {
        if (p < 2 || p >= (1ul << 31) || !is_prime(p))
            throw DomainError("fp modulus must be a prime below 2^31");
    }

    unsigned long modulus() const { return p_; }
    unsigned long characteristic() const { return p_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1 % p_; }
    Elem add(Elem a, Elem b) const { Elem s = a + b; return s >= p_ ? s - p_ : s; }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
    Elem mul(Elem a, Elem b) const {
        return static_cast<Elem>((static_cast<unsigned __int128>(a) * b) % p_);
    }
    Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
    Elem inv(Elem a) const {
        if (a == 0) throw DivisionByZero();
        return pow(a, p_ - 2);
    }
    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }
    Elem from_int(long n) const {
        long r = n % static_cast<long>(p_);
        if (r < 0) r += static_cast<long>(p_);
        return static_cast<Elem>(r);
    }
    Elem from_ratio(long n, long d) const { return mul(from_int(n), inv(from_int(d))); }

    Elem pow(Elem a, unsigned long e) const {
        Elem r = one(), base = a % p_;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    /// Canonical square root: the least nonnegative representative among
    /// the two roots, when a is a quadratic residue. Tonelli-Shanks.
    std::optional<Elem> sqrt(Elem a) const {
        a %= p_;
        if (a == 0) return 0ul;
        if (p_ == 2) return a;
        if (pow(a, (p_ - 1) / 2) != 1) return std::nullopt;
        Elem r;
        if (p_ % 4 == 3) {
            r = pow(a, (p_ + 1) / 4);
        } else {
            // Tonelli-Shanks for p = 1 mod 4.
            unsigned long q = p_ - 1, s = 0;
            while (q % 2 == 0) { q /= 2; ++s; }
            Elem z = 2;
            while (pow(z, (p_ - 1) / 2) == 1) ++z;
            Elem m = s, c = pow(z, q), t = pow(a, q);
            r = pow(a, (q + 1) / 2);
            while (t != 1) {
                Elem t2 = t;
                unsigned long i = 0;
                while (t2 != 1) { t2 = mul(t2, t2); ++i; }
                Elem b = pow(c, 1ul << (m - i - 1));
                m = i;
                c = mul(b, b);
                t = mul(t, c);
                r = mul(r, b);
            }
        }
        return std::min(r, p_ - r);
    }

    std::string str(Elem a) const { return std::to_string(a); }
    std::string name() const { return "fp:" + std::to_string(p_); }
    friend bool operator==(const GF& a, const GF& b) { return a.p_ == b.p_; }

  private:
    static bool is_prime(unsigned long n) {
        if (n < 2) return false;
        for (unsigned long d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    unsigned long p_;
};

}  // namespace pcf
