#pragma once

// Deterministic random generators shared by the property suites and the
// acceptance harness.

#include <random>
#include <vector>

#include "pcf/berkovich.hpp"
#include "pcf/cf.hpp"

namespace pcf::testsupport {

using Rng = std::mt19937_64;

inline long rand_int(Rng& rng, long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline Rational rand_rational(Rng& rng, long num_bound, long den_bound) {
    long d = rand_int(rng, 1, den_bound);
    return Rational(rand_int(rng, -num_bound, num_bound), d);
}

template <CoefficientField F>
typename F::Elem rand_coeff(const F& fld, Rng& rng) {
    if constexpr (std::is_same_v<F, QQ>) {
        (void)fld;
        return rand_rational(rng, 5, 5);
    } else {
        return static_cast<typename F::Elem>(
            rand_int(rng, 0, static_cast<long>(fld.characteristic()) - 1));
    }
}

template <CoefficientField F>
typename F::Elem rand_nonzero_coeff(const F& fld, Rng& rng) {
    auto c = rand_coeff(fld, rng);
    while (fld.is_zero(c)) c = rand_coeff(fld, rng);
    return c;
}

/// Random polynomial with exponents in (1/ram) Z, degree <= max_units/ram.
template <CoefficientField F>
PuiseuxPoly<F> rand_poly(const F& fld, Rng& rng, long ram, long max_units,
                         bool allow_zero = true) {
    std::vector<Term<F>> terms;
    for (long k = max_units; k >= 0; --k)
        if (rand_int(rng, 0, 2) == 0)
            terms.push_back({Rational(k, ram), rand_nonzero_coeff(fld, rng)});
    if (terms.empty() && !allow_zero)
        terms.push_back({Rational(rand_int(rng, 0, max_units), ram),
                         rand_nonzero_coeff(fld, rng)});
    return PuiseuxPoly<F>(fld, std::move(terms));
}

/// Random partial quotient: degree strictly positive.
template <CoefficientField F>
PuiseuxPoly<F> rand_partial(const F& fld, Rng& rng, long ram, long max_units) {
    long lead = rand_int(rng, 1, std::max(1l, max_units));
    std::vector<Term<F>> terms{{Rational(lead, ram), rand_nonzero_coeff(fld, rng)}};
    for (long k = lead - 1; k >= 0; --k)
        if (rand_int(rng, 0, 1) == 0)
            terms.push_back({Rational(k, ram), rand_nonzero_coeff(fld, rng)});
    return PuiseuxPoly<F>(fld, std::move(terms));
}

/// Random finite continued fraction; ramification <= ram, the stated
/// number of partial quotients.
template <CoefficientField F>
CFExpression<F> rand_cf(const F& fld, Rng& rng, long ram, long min_partials,
                        long max_partials, long max_units = 0) {
    long m = rand_int(rng, 1, ram);
    if (max_units == 0) max_units = 2 * m;
    auto f0 = rand_poly(fld, rng, m, max_units);
    long n = rand_int(rng, min_partials, max_partials);
    std::vector<PuiseuxPoly<F>> partials;
    for (long i = 0; i < n; ++i) partials.push_back(rand_partial(fld, rng, m, max_units));
    return CFExpression<F>(f0, std::move(partials), true);
}

template <CoefficientField F>
RationalPuiseux<F> rand_fraction(const F& fld, Rng& rng, long ram, long max_units) {
    auto p = rand_poly(fld, rng, ram, max_units);
    auto q = rand_poly(fld, rng, ram, max_units, false);
    return RationalPuiseux<F>::reduce(p, q);
}

/// Random point: short Laurent center, rational radius in [-6, 6].
template <CoefficientField F>
BerkPoint<F> rand_point(const F& fld, Rng& rng) {
    long m = rand_int(rng, 1, 4);
    std::vector<Term<F>> terms;
    for (long k = 6 * m; k >= -6 * m; --k)
        if (rand_int(rng, 0, 6) == 0)
            terms.push_back({Rational(k, m), rand_nonzero_coeff(fld, rng)});
    Rational r = rand_rational(rng, 6, 3);
    return BerkPoint<F>(fld, std::move(terms), r);
}

/// The stream of z + c*t^e: a proper merge, coefficients at a shared
/// exponent combined (a zero sum is dropped by the stream machinery).
template <CoefficientField F>
SeriesStream<F> stream_plus_term(const SeriesStream<F>& z, Rational e,
                                 typename F::Elem c) {
    struct MergeState {
        SeriesStream<F> z;
        std::size_t i = 0;
        bool emitted = false;
    };
    auto st = std::make_shared<MergeState>(MergeState{z});
    F fld = z.field();
    return SeriesStream<F>(fld, [st, fld, e, c]() -> std::optional<Term<F>> {
        auto next = st->z.term(st->i);
        if (!st->emitted && (!next || next->exp < e)) {
            st->emitted = true;
            return Term<F>{e, c};
        }
        if (!st->emitted && next && next->exp == e) {
            st->emitted = true;
            ++st->i;
            return Term<F>{e, fld.add(next->coef, c)};
        }
        if (next) ++st->i;
        return next;
    });
}

/// Random unit-determinant word over {i, t_f, m_{c,c',f}} (c, c' scalars).
template <CoefficientField F>
MobiusElt<F> rand_word(const F& fld, Rng& rng, long max_len) {
    auto g = MobiusElt<F>::identity(fld);
    long len = rand_int(rng, 1, max_len);
    for (long j = 0; j < len; ++j) {
        switch (rand_int(rng, 0, 2)) {
            case 0: g = g * MobiusElt<F>::inversion(fld); break;
            case 1:
                g = g * MobiusElt<F>::translation(rand_poly(fld, rng, 2, 4));
                break;
            default: {
                auto c1 = rand_nonzero_coeff(fld, rng);
                auto c2 = rand_nonzero_coeff(fld, rng);
                g = g * MobiusElt<F>::upper(
                            RationalPuiseux<F>(PuiseuxPoly<F>::constant(fld, c1)),
                            RationalPuiseux<F>(PuiseuxPoly<F>::constant(fld, c2)),
                            RationalPuiseux<F>(rand_poly(fld, rng, 2, 4)));
            }
        }
    }
    return g;
}

}  // namespace pcf::testsupport
