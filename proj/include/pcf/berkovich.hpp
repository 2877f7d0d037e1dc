#pragma once

/**
 * @file berkovich.hpp
 * @brief The half-plane of type II points, its metric, the modular-group
 *        action, reduction to the modular ray, and promenades.
 *
 * A point eta_{a,r} is stored canonically: radius an exact rational,
 * center reduced modulo the equivalence nu(a - a') >= r, i.e. only the
 * terms with exponent > -r are kept. Equality, the metric and the group
 * action are then exact rational computations.
 *
 * The action is implemented through the two generator families (the
 * inversion and the upper-triangular maps); a general invertible matrix is
 * first factored into them.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pcf/cf.hpp"
#include "pcf/series.hpp"

namespace pcf {

namespace detail {

/// Terms of 1/a with exponent > bound, by Laurent long division. a must be
/// a nonzero finite term list.
template <CoefficientField F>
std::vector<Term<F>> invert_terms(const F& fld, const std::vector<Term<F>>& a,
                                  const Rational& bound) {
    std::vector<Term<F>> rem{{Rational(0), fld.one()}};
    std::vector<Term<F>> out;
    while (!rem.empty() && rem.front().exp - a.front().exp > bound) {
        auto t = division_step(fld, rem, a);
        out.push_back(std::move(*t));
    }
    return out;
}

/// Terms of (p/q) with exponent > bound (resp. >= bound when inclusive).
template <CoefficientField F>
std::vector<Term<F>> fraction_terms_above(const RationalPuiseux<F>& x, const Rational& bound,
                                          bool inclusive) {
    const F& fld = x.field();
    std::vector<Term<F>> rem = x.num().terms();
    const std::vector<Term<F>>& den = x.den().terms();
    std::vector<Term<F>> out;
    while (!rem.empty()) {
        Rational e = rem.front().exp - den.front().exp;
        if (e < bound || (!inclusive && e == bound)) break;
        out.push_back(*division_step(fld, rem, den));
    }
    return out;
}

}  // namespace detail

template <CoefficientField F>
class BerkPoint {
  public:
    /// Canonical class representative: keeps the center terms with
    /// exponent > -radius.
    BerkPoint(F fld, std::vector<Term<F>> center, Rational radius)
        : fld_(std::move(fld)), center_(detail::normalize_terms(fld_, std::move(center))),
          radius_(std::move(radius)) {
        std::erase_if(center_, [&](const Term<F>& t) { return !(t.exp > -radius_); });
    }

    /// The truncation must certify every term above -radius.
    static BerkPoint from_series(const TruncatedSeries<F>& center, Rational radius) {
        if (!center.is_exact() && !(center.cutoff() <= ExtRat(-radius)))
            throw PrecisionExhausted("center precision does not reach the radius");
        return BerkPoint(center.field(), center.terms(), std::move(radius));
    }

    static BerkPoint from_stream(const SeriesStream<F>& center, Rational radius) {
        auto ts = center.truncate(-radius);
        return from_series(ts, std::move(radius));
    }

    static BerkPoint origin(F fld, Rational radius) {
        return BerkPoint(std::move(fld), {}, std::move(radius));
    }

    const F& field() const { return fld_; }
    const std::vector<Term<F>>& center_terms() const { return center_; }
    const Rational& radius() const { return radius_; }
    /// nu(eta) in the notation eta_{a,r}.
    const Rational& nu() const { return radius_; }

    bool center_is_zero() const { return center_.empty(); }

    /// A representative of the center as a truncated series (knowledge
    /// exactly down to the radius).
    TruncatedSeries<F> center_series() const {
        return TruncatedSeries<F>(fld_, center_, ExtRat(-radius_));
    }

    /// nu(a - a') decided against the canonical data: either the exact
    /// value (when < min(r, r')) or +inf standing for ">= min(r, r')".
    ExtRat center_separation(const BerkPoint& o) const {
        auto diff = detail::add_terms(fld_, center_, o.center_, true);
        Rational floor = -pcf::min(radius_, o.radius_);
        for (const auto& t : diff)
            if (t.exp > floor) return ExtRat(-t.exp);
        return ExtRat::pos_inf();
    }

    friend bool operator==(const BerkPoint& a, const BerkPoint& b) {
        if (!(a.fld_ == b.fld_) || a.radius_ != b.radius_ ||
            a.center_.size() != b.center_.size())
            return false;
        for (std::size_t i = 0; i < a.center_.size(); ++i)
            if (a.center_[i].exp != b.center_[i].exp ||
                !a.fld_.eq(a.center_[i].coef, b.center_[i].coef))
                return false;
        return true;
    }
    friend bool operator!=(const BerkPoint& a, const BerkPoint& b) { return !(a == b); }

    std::string str() const {
        return "eta(" + detail::render_terms(fld_, center_) + ", " + radius_.str() + ")";
    }

  private:
    F fld_;
    std::vector<Term<F>> center_;
    Rational radius_;
};

/// d(eta, eta') = |r - r'| when the centers agree to min(r, r'), and
/// r + r' - 2 nu(a - a') otherwise.
template <CoefficientField F>
Rational distance(const BerkPoint<F>& x, const BerkPoint<F>& y) {
    ExtRat sep = x.center_separation(y);
    if (sep.is_pos_inf() || !(sep < ExtRat(pcf::min(x.radius(), y.radius()))))
        return abs(x.radius() - y.radius());
    return x.radius() + y.radius() - sep.value() - sep.value();
}

/// eta v eta': the lowest point above both; radius min{r, r', nu(a - a')}.
template <CoefficientField F>
BerkPoint<F> join(const BerkPoint<F>& x, const BerkPoint<F>& y) {
    ExtRat sep = x.center_separation(y);
    Rational rr = pcf::min(x.radius(), y.radius());
    if (sep < ExtRat(rr)) rr = sep.value();
    return BerkPoint<F>(x.field(), x.center_terms(), rr);
}

/// eta lies above eta' iff r exceeds neither r' nor nu(a - a').
template <CoefficientField F>
bool lies_above(const BerkPoint<F>& x, const BerkPoint<F>& y) {
    if (!(x.radius() <= y.radius())) return false;
    ExtRat sep = x.center_separation(y);
    return !(sep < ExtRat(x.radius()));
}

template <CoefficientField F>
class MobiusElt {
  public:
    struct GenInv {};
    struct GenUpper {
        RationalPuiseux<F> d1, d2, f;  // [[d1, f], [0, d2]]
    };
    using Generator = std::variant<GenInv, GenUpper>;

    struct Mat2 {
        RationalPuiseux<F> a, b, c, d;  // [[a, b], [c, d]]
    };

    static MobiusElt identity(F fld) {
        MobiusElt g;
        auto one = RationalPuiseux<F>(PuiseuxPoly<F>::one(fld));
        auto zero = RationalPuiseux<F>(PuiseuxPoly<F>::zero(fld));
        g.mat_ = std::make_shared<Mat2>(Mat2{one, zero, zero, one});
        return g;
    }

    static MobiusElt inversion(F fld) {
        MobiusElt g = identity(fld);
        auto one = RationalPuiseux<F>(PuiseuxPoly<F>::one(fld));
        auto zero = RationalPuiseux<F>(PuiseuxPoly<F>::zero(fld));
        g.word_.push_back(GenInv{});
        g.mat_ = std::make_shared<Mat2>(Mat2{zero, one, one, zero});
        return g;
    }

    static MobiusElt translation(const PuiseuxPoly<F>& f) {
        const F& fld = f.field();
        auto one = RationalPuiseux<F>(PuiseuxPoly<F>::one(fld));
        return upper(one, one, RationalPuiseux<F>(f));
    }

    static MobiusElt upper(const RationalPuiseux<F>& d1, const RationalPuiseux<F>& d2,
                           const RationalPuiseux<F>& f) {
        if (d1.is_zero() || d2.is_zero())
            throw DomainError("upper-triangular generator needs invertible diagonal");
        const F& fld = d1.field();
        MobiusElt g;
        g.word_.push_back(GenUpper{d1, d2, f});
        g.mat_ = std::make_shared<Mat2>(
            Mat2{d1, f, RationalPuiseux<F>(PuiseuxPoly<F>::zero(fld)), d2});
        return g;
    }

    /// Factors a matrix into the generator families: upper-triangular
    /// directly, otherwise t_{a/c} . i . m_{c, -det/c, d}.
    static MobiusElt from_matrix(const Mat2& m) {
        auto det = m.a * m.d - m.b * m.c;
        if (!is_unit(det)) throw DomainError("matrix is not invertible over the base ring");
        const F& fld = m.a.field();
        if (m.c.is_zero()) {
            MobiusElt g = upper(m.a, m.d, m.b);
            g.mat_ = std::make_shared<Mat2>(m);
            return g;
        }
        MobiusElt g = upper(RationalPuiseux<F>(PuiseuxPoly<F>::one(fld)),
                            RationalPuiseux<F>(PuiseuxPoly<F>::one(fld)), m.a / m.c) *
                      inversion(fld) * upper(m.c, -(det / m.c), m.d);
        g.mat_ = std::make_shared<Mat2>(m);
        return g;
    }

    const std::vector<Generator>& word() const { return word_; }
    const Mat2& matrix() const { return *mat_; }

    RationalPuiseux<F> det() const { return mat_->a * mat_->d - mat_->b * mat_->c; }

    friend MobiusElt operator*(const MobiusElt& g, const MobiusElt& h) {
        MobiusElt out;
        out.word_ = g.word_;
        out.word_.insert(out.word_.end(), h.word_.begin(), h.word_.end());
        const Mat2 &A = *g.mat_, &B = *h.mat_;
        out.mat_ = std::make_shared<Mat2>(Mat2{A.a * B.a + A.b * B.c, A.a * B.b + A.b * B.d,
                                               A.c * B.a + A.d * B.c, A.c * B.b + A.d * B.d});
        return out;
    }

    /// Applies the word to a point, rightmost generator first.
    BerkPoint<F> act(const BerkPoint<F>& pt) const {
        BerkPoint<F> cur = pt;
        for (auto it = word_.rbegin(); it != word_.rend(); ++it)
            cur = std::visit([&](const auto& gen) { return apply(gen, cur); }, *it);
        return cur;
    }

    std::string str() const {
        if (word_.empty()) return "id";
        std::string out;
        for (std::size_t i = 0; i < word_.size(); ++i) {
            if (i) out += "*";
            const auto& g = word_[i];
            if (std::holds_alternative<GenInv>(g)) {
                out += "i";
            } else {
                const auto& u = std::get<GenUpper>(g);
                bool translation = u.d1 == RationalPuiseux<F>(PuiseuxPoly<F>::one(u.d1.field())) &&
                                   u.d2 == u.d1;
                if (translation)
                    out += "t(" + u.f.str() + ")";
                else
                    out += "m(" + u.d1.str() + "," + u.d2.str() + "," + u.f.str() + ")";
            }
        }
        return out;
    }

  private:
    MobiusElt() = default;

    static bool is_unit(const RationalPuiseux<F>& x) {
        return !x.is_zero() && x.num().is_constant() && x.den().is_constant();
    }

    /// i * eta_{a,r} = eta_{1/a, r - 2 nu(a)} when nu(a) < r, else eta_{0,-r}.
    static BerkPoint<F> apply(GenInv, const BerkPoint<F>& pt) {
        const F& fld = pt.field();
        if (pt.center_is_zero())
            return BerkPoint<F>(fld, {}, -pt.radius());
        Rational nu_a = -pt.center_terms().front().exp;
        if (!(nu_a < pt.radius()))
            return BerkPoint<F>(fld, {}, -pt.radius());
        Rational new_r = pt.radius() - nu_a - nu_a;
        auto inv = detail::invert_terms(fld, pt.center_terms(), -new_r);
        return BerkPoint<F>(fld, std::move(inv), std::move(new_r));
    }

    /// m_{d1,d2,f} * eta_{a,r} = eta_{(d1 a + f)/d2, r + nu(d1/d2)}.
    static BerkPoint<F> apply(const GenUpper& g, const BerkPoint<F>& pt) {
        const F& fld = pt.field();
        Rational shift =
            (g.d1.valuation() - g.d2.valuation()).value();
        Rational new_r = pt.radius() + shift;
        // (d1*a + f)/d2 as one exact fraction of term lists.
        auto num_poly = g.d1.num() * g.f.den() * g.d2.den();
        std::vector<Term<F>> num =
            detail::mul_terms(fld, num_poly.terms(), pt.center_terms());
        num = detail::add_terms(fld, num,
                                (g.f.num() * g.d1.den() * g.d2.den()).terms(), false);
        auto den = (g.d1.den() * g.f.den() * g.d2.num()).terms();
        std::vector<Term<F>> rem = detail::normalize_terms(fld, std::move(num));
        std::vector<Term<F>> out;
        while (!rem.empty() && rem.front().exp - den.front().exp > -new_r)
            out.push_back(*detail::division_step(fld, rem, den));
        return BerkPoint<F>(fld, std::move(out), std::move(new_r));
    }

    std::vector<Generator> word_;
    std::shared_ptr<Mat2> mat_;
};

template <CoefficientField F>
BerkPoint<F> act(const MobiusElt<F>& g, const BerkPoint<F>& pt) {
    return g.act(pt);
}

template <CoefficientField F>
struct RayReduction {
    Rational v;            // act(witness, eta) = eta_{0, -v}
    MobiusElt<F> witness;  // a word in the modular group
    std::vector<PuiseuxPoly<F>> quotients;  // CF quotients consumed on the way
};

namespace detail {

/// Shared descent: applies sigma = i . t_{-f} steps while the radius stays
/// positive. Collects the consumed quotients; the final radius is <= 0.
template <CoefficientField F>
struct Descent {
    BerkPoint<F> point;
    MobiusElt<F> word;
    std::vector<PuiseuxPoly<F>> quotients;
};

template <CoefficientField F>
Descent<F> descend_to_ray(const BerkPoint<F>& start, std::size_t budget) {
    const F& fld = start.field();
    Descent<F> d{start, MobiusElt<F>::identity(fld), {}};
    while (d.point.radius() > Rational(0)) {
        if (d.quotients.size() >= budget)
            throw BudgetExhausted("ray reduction budget exhausted");
        std::vector<Term<F>> integral;
        for (const auto& t : d.point.center_terms())
            if (t.exp.sign() >= 0) integral.push_back(t);
        PuiseuxPoly<F> f(fld, integral);
        auto step = MobiusElt<F>::inversion(fld) * MobiusElt<F>::translation(-f);
        d.point = step.act(d.point);
        d.word = step * d.word;
        d.quotients.push_back(std::move(f));
    }
    return d;
}

}  // namespace detail

/// Reduction to the fundamental ray: v >= 0 and a group word g with
/// act(g, eta) = eta_{0,-v}, built from the expansion of the center.
template <CoefficientField F>
RayReduction<F> reduce_to_ray(const BerkPoint<F>& pt, std::size_t budget = 4096) {
    const F& fld = pt.field();
    auto d = detail::descend_to_ray(pt, budget);
    // Final translate kills what is left of the center.
    std::vector<Term<F>> integral;
    for (const auto& t : d.point.center_terms())
        if (t.exp.sign() >= 0) integral.push_back(t);
    if (!integral.empty()) {
        PuiseuxPoly<F> f(fld, integral);
        auto step = MobiusElt<F>::translation(-f);
        d.point = step.act(d.point);
        d.word = step * d.word;
    }
    if (!d.point.center_is_zero())
        throw Error("ray reduction failed to reach the modular ray");
    return {-d.point.radius(), d.word, d.quotients};
}

/// Closed form for the reduced value from the expansion degrees of the
/// center: the triangle-wave schedule with zeros at T_n = 2 sum deg(f_i)
/// and maxima deg(f_{n+1}) at T_n + deg(f_{n+1}).
inline Rational ray_value_closed_form(const std::vector<Rational>& degrees,
                                      bool expansion_ended, const Rational& r) {
    if (!(r > Rational(0))) return -r;
    Rational T(0);
    std::size_t idx = 0;
    while (idx < degrees.size() && T + degrees[idx] + degrees[idx] <= r) {
        T += degrees[idx] + degrees[idx];
        ++idx;
    }
    if (T == r) return Rational(0);
    if (idx < degrees.size()) {
        const Rational& D = degrees[idx];
        return D - abs(r - T - D);
    }
    if (expansion_ended) return r - T;
    throw PrecisionExhausted("not enough expansion degrees for the closed form");
}

enum class PromenadeTail {
    AscendsForever,
    TruncatedAtBudget,
    TruncatedAtPrecision,
    Accumulates,
};

inline std::string to_string(PromenadeTail t) {
    switch (t) {
        case PromenadeTail::AscendsForever: return "ascends-forever";
        case PromenadeTail::TruncatedAtBudget: return "truncated-at-budget";
        case PromenadeTail::TruncatedAtPrecision: return "truncated-at-precision";
        default: return "accumulates";
    }
}

/// The projected trajectory on the ray: w(t) = -t for t <= 0, then a
/// triangle wave with zeros at T_n and maxima D_{n+1} at T_n + D_{n+1},
/// slopes exactly +-1 between breakpoints.
struct Promenade {
    struct Breakpoint {
        Rational t, v;
    };
    std::vector<Breakpoint> points;  // starts at (0, 0); zeros and maxima alternate
    PromenadeTail tail;

    Rational domain_end() const { return points.back().t; }

    Rational value_at(const Rational& t) const {
        if (t.sign() <= 0) return -t;
        for (std::size_t i = 0; i + 1 < points.size(); ++i) {
            if (t <= points[i + 1].t) {
                const auto& l = points[i];
                const auto& r = points[i + 1];
                return r.v > l.v ? l.v + (t - l.t) : l.v - (t - l.t);
            }
        }
        if (tail == PromenadeTail::AscendsForever) return t - points.back().t;
        throw DomainError("parameter beyond the computed promenade domain");
    }
};

inline Promenade promenade_from_degrees(const std::vector<Rational>& degrees,
                                        PromenadeTail tail, const Rational& t_max) {
    Promenade out;
    out.tail = tail;
    out.points.push_back({Rational(0), Rational(0)});
    Rational T(0);
    for (const auto& D : degrees) {
        if (T > t_max) break;
        out.points.push_back({T + D, D});
        T += D + D;
        out.points.push_back({T, Rational(0)});
    }
    return out;
}

/// Promenade of a type I point given (a prefix of) its expansion.
template <CoefficientField F>
Promenade promenade_of_expansion(const CFExpression<F>& cf, ExpandStatus status,
                                 const Rational& t_max) {
    PromenadeTail tail = PromenadeTail::AscendsForever;
    if (status == ExpandStatus::BudgetExhausted) tail = PromenadeTail::TruncatedAtBudget;
    if (status == ExpandStatus::PrecisionExhausted)
        tail = PromenadeTail::TruncatedAtPrecision;
    return promenade_from_degrees(cf.partial_degrees(), tail, t_max);
}

template <CoefficientField F>
class Ball {
  public:
    /// Canonical center: exponents > -r for a closed ball, >= -r for an
    /// open one (matching the respective equivalences).
    Ball(F fld, std::vector<Term<F>> center, Rational radius, bool closed)
        : fld_(std::move(fld)), center_(detail::normalize_terms(fld_, std::move(center))),
          radius_(std::move(radius)), closed_(closed) {
        std::erase_if(center_, [&](const Term<F>& t) {
            return closed_ ? !(t.exp > -radius_) : !(t.exp >= -radius_);
        });
    }

    static Ball closed_ball(const RationalPuiseux<F>& center, Rational radius) {
        auto terms = detail::fraction_terms_above(center, -radius, false);
        return Ball(center.field(), std::move(terms), std::move(radius), true);
    }
    static Ball open_ball(const RationalPuiseux<F>& center, Rational radius) {
        auto terms = detail::fraction_terms_above(center, -radius, true);
        return Ball(center.field(), std::move(terms), std::move(radius), false);
    }

    const F& field() const { return fld_; }
    const std::vector<Term<F>>& center_terms() const { return center_; }
    const Rational& radius() const { return radius_; }
    bool is_closed() const { return closed_; }

    BerkPoint<F> point() const {
        if (!closed_) throw DomainError("only closed balls correspond to points");
        return BerkPoint<F>(fld_, center_, radius_);
    }

    static Ball of_point(const BerkPoint<F>& pt) {
        return Ball(pt.field(), pt.center_terms(), pt.radius(), true);
    }

    /// Membership of a stream-backed element: exact, pulls as needed.
    bool contains(const SeriesStream<F>& z) const {
        auto zt = closed_ ? z.truncate(-radius_).terms()
                          : z.pull_down_to(-radius_).first;
        auto diff = detail::add_terms(fld_, zt, center_, true);
        for (const auto& t : diff) {
            if (closed_ ? t.exp > -radius_ : t.exp >= -radius_) return false;
        }
        return true;
    }

    /// Membership of a truncation; needs the truncation to certify the
    /// comparison region.
    bool contains(const TruncatedSeries<F>& z) const {
        if (!z.is_exact()) {
            bool deep_enough = closed_ ? z.cutoff() <= ExtRat(-radius_)
                                       : z.cutoff() < ExtRat(-radius_);
            if (!deep_enough)
                throw PrecisionExhausted("membership undecidable at this precision");
        }
        auto diff = detail::add_terms(fld_, z.terms(), center_, true);
        for (const auto& t : diff) {
            if (closed_ ? t.exp > -radius_ : t.exp >= -radius_) return false;
        }
        return true;
    }

    friend bool operator==(const Ball& a, const Ball& b) {
        if (!(a.fld_ == b.fld_) || a.closed_ != b.closed_ || a.radius_ != b.radius_ ||
            a.center_.size() != b.center_.size())
            return false;
        for (std::size_t i = 0; i < a.center_.size(); ++i)
            if (a.center_[i].exp != b.center_[i].exp ||
                !a.fld_.eq(a.center_[i].coef, b.center_[i].coef))
                return false;
        return true;
    }

    std::string str() const {
        return std::string(closed_ ? "ballc(" : "ballo(") +
               detail::render_terms(fld_, center_) + ", " + radius_.str() + ")";
    }

  private:
    F fld_;
    std::vector<Term<F>> center_;
    Rational radius_;
    bool closed_;
};

/// The set of elements whose expansion starts with the finite expression:
/// the open ball around its value of radius 2 sum deg(f_i).
template <CoefficientField F>
Ball<F> ball_of_prefix(const CFExpression<F>& cf) {
    if (!cf.finite()) throw DomainError("prefix ball needs a finite expression");
    Rational r(0);
    for (const auto& d : cf.partial_degrees()) r += d + d;
    return Ball<F>::open_ball(evaluate_exact(cf), r);
}

template <CoefficientField F>
struct PrefixRepresentation {
    std::vector<PuiseuxPoly<F>> prefix;        // f_0 ... f_n; may be empty
    std::optional<PuiseuxPoly<F>> f0_shift;    // set in the degenerate r <= 0 case
    Ball<F> residual;                          // D, a ball with nu(eta_D) <= 0
    MobiusElt<F> word;                         // maps B onto D
};

/// Writes a closed ball as (prefix, D): the quotients consumed while the
/// radius stays positive, and the image ball under their Moebius word. For
/// r <= 0 the prefix is empty and D is the ball translated by -f0.
template <CoefficientField F>
PrefixRepresentation<F> prefix_representation(const Ball<F>& b, std::size_t budget = 4096) {
    if (!b.is_closed()) throw DomainError("prefix representation expects a closed ball");
    const F& fld = b.field();
    if (!(b.radius() > Rational(0))) {
        std::vector<Term<F>> integral;
        for (const auto& t : b.center_terms())
            if (t.exp.sign() >= 0) integral.push_back(t);
        PuiseuxPoly<F> f0(fld, integral);
        auto word = MobiusElt<F>::translation(-f0);
        auto shifted = word.act(b.point());
        return {{}, f0, Ball<F>::of_point(shifted), word};
    }
    auto d = detail::descend_to_ray(b.point(), budget);
    return {std::move(d.quotients), std::nullopt, Ball<F>::of_point(d.point),
            std::move(d.word)};
}

}  // namespace pcf
