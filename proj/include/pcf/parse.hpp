#pragma once

/**
 * @file parse.hpp
 * @brief Typed builders: untyped literals -> library values over a field.
 */

#include <variant>

#include "pcf/berkovich.hpp"
#include "pcf/cf.hpp"
#include "pcf/grammar.hpp"
#include "pcf/series.hpp"
#include "pcf/typeiv.hpp"

namespace pcf {

namespace detail {

template <CoefficientField F>
typename F::Elem coef_value(const F& fld, const grammar::Number& n, int sign) {
    Rational r(mpz_class(n.num), mpz_class(n.den));
    if (sign < 0) r = -r;
    if constexpr (std::is_same_v<F, QQ>) {
        return r;
    } else {
        mpz_class p(static_cast<long>(fld.characteristic()));
        mpz_class num = r.num() % p, den = r.den() % p;
        if (num < 0) num += p;
        if (den == 0) throw DomainError("coefficient denominator vanishes in the field");
        return fld.mul(static_cast<typename F::Elem>(num.get_ui()),
                       fld.inv(static_cast<typename F::Elem>(den.get_ui())));
    }
}

template <CoefficientField F>
std::vector<Term<F>> build_terms(const F& fld, const grammar::PolyLit& lit) {
    std::vector<Term<F>> out;
    for (const auto& t : lit) {
        auto c = t.coef ? coef_value(fld, *t.coef, t.sign)
                        : (t.sign < 0 ? fld.neg(fld.one()) : fld.one());
        out.push_back({t.has_t ? t.exp : Rational(0), std::move(c)});
    }
    return out;
}

}  // namespace detail

/// A polynomial literal; exponents must be >= 0.
template <CoefficientField F>
PuiseuxPoly<F> build_poly(const F& fld, const grammar::PolyLit& lit) {
    return PuiseuxPoly<F>(fld, detail::build_terms(fld, lit));
}

/// The value-level view: exact fraction or stream.
template <CoefficientField F>
using ParsedValue = std::variant<RationalPuiseux<F>, SeriesStream<F>>;

template <CoefficientField F>
CFExpression<F> build_cf(const F& fld, const grammar::CFLit& lit) {
    std::vector<PuiseuxPoly<F>> partials;
    partials.reserve(lit.partials.size());
    for (const auto& p : lit.partials) partials.push_back(build_poly(fld, p));
    return CFExpression<F>(build_poly(fld, lit.f0), std::move(partials), true);
}

/// The e69 center stream: sum of t^{r(i)} for a strictly decreasing
/// schedule; the default harmonic schedule never ends.
template <CoefficientField F>
SeriesStream<F> e69_center_stream(const F& fld, const std::string& schedule) {
    if (schedule.empty()) {
        auto i = std::make_shared<long>(0);
        return SeriesStream<F>(fld, [fld, i]() -> std::optional<Term<F>> {
            ++*i;
            return Term<F>{Rational(1, *i), fld.one()};
        });
    }
    std::vector<Term<F>> terms;
    std::size_t start = 0;
    while (start <= schedule.size()) {
        auto comma = schedule.find(',', start);
        std::string part = schedule.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        terms.push_back({grammar::parse_rational(part), fld.one()});
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return SeriesStream<F>::from_terms(fld, std::move(terms));
}

template <CoefficientField F>
ParsedValue<F> build_value(const F& fld, const grammar::ExprLit& lit) {
    if (std::holds_alternative<grammar::PolyLit>(lit)) {
        const auto& pl = std::get<grammar::PolyLit>(lit);
        auto terms = detail::build_terms(fld, pl);
        bool nonneg = true;
        for (const auto& t : terms)
            if (t.exp.sign() < 0) nonneg = false;
        if (nonneg) return RationalPuiseux<F>(PuiseuxPoly<F>(fld, std::move(terms)));
        // Laurent-style literal: exact series value.
        return TruncatedSeries<F>(fld, std::move(terms), ExtRat::neg_inf()).as_fraction();
    }
    if (std::holds_alternative<grammar::FracLit>(lit)) {
        const auto& fr = std::get<grammar::FracLit>(lit);
        return RationalPuiseux<F>::reduce(build_poly(fld, fr.num), build_poly(fld, fr.den));
    }
    const auto& sl = std::get<grammar::StreamLit>(lit);
    if (sl.kind == "rat") {
        auto inner = build_value(fld, grammar::parse_expression(sl.payload));
        if (std::holds_alternative<SeriesStream<F>>(inner))
            throw DomainError("rat: expects an exact expression");
        return from_rational(std::get<RationalPuiseux<F>>(inner));
    }
    if (sl.kind == "sqrt") {
        auto inner = build_value(fld, grammar::parse_expression(sl.payload));
        if (std::holds_alternative<SeriesStream<F>>(inner))
            return sqrt_stream(std::get<SeriesStream<F>>(inner));
        return sqrt_stream(std::get<RationalPuiseux<F>>(inner));
    }
    if (sl.kind == "cf") {
        auto cf = build_cf(fld, grammar::parse_cf(sl.payload));
        return from_rational(evaluate_exact(cf));
    }
    return e69_center_stream(fld, sl.payload);
}

template <CoefficientField F>
SeriesStream<F> build_stream(const F& fld, const grammar::ExprLit& lit) {
    auto v = build_value(fld, lit);
    if (std::holds_alternative<SeriesStream<F>>(v)) return std::get<SeriesStream<F>>(v);
    return from_rational(std::get<RationalPuiseux<F>>(v));
}

template <CoefficientField F>
BerkPoint<F> build_point(const F& fld, const grammar::PointLit& lit) {
    return BerkPoint<F>::from_stream(build_stream(fld, lit.center), lit.radius);
}

template <CoefficientField F>
Ball<F> build_ball(const F& fld, const grammar::BallLit& lit) {
    auto s = build_stream(fld, lit.center);
    if (lit.closed)
        return Ball<F>(fld, s.truncate(-lit.radius).terms(), lit.radius, true);
    return Ball<F>(fld, s.pull_down_to(-lit.radius).first, lit.radius, false);
}

template <CoefficientField F>
MobiusElt<F> build_word(const F& fld, const grammar::WordLit& lit) {
    MobiusElt<F> g = MobiusElt<F>::identity(fld);
    for (const auto& gen : lit) {
        if (gen.kind == 'i') {
            g = g * MobiusElt<F>::inversion(fld);
        } else if (gen.kind == 't') {
            g = g * MobiusElt<F>::translation(build_poly(fld, gen.args[0]));
        } else {
            g = g * MobiusElt<F>::upper(
                        RationalPuiseux<F>(build_poly(fld, gen.args[0])),
                        RationalPuiseux<F>(build_poly(fld, gen.args[1])),
                        RationalPuiseux<F>(build_poly(fld, gen.args[2])));
        }
    }
    return g;
}

}  // namespace pcf
