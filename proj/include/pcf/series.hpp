#pragma once

/**
 * @file series.hpp
 * @brief Desk-scale elements of the completed Puiseux field.
 *
 * A TruncatedSeries is a finite list of terms plus a cutoff: every term
 * with exponent strictly above the cutoff is present and exact, nothing is
 * known at or below it. A cutoff of -inf means the value is exact. All
 * arithmetic is exact on the known parts and propagates cutoffs
 * conservatively, so a term in a result is always trustworthy.
 *
 * A SeriesStream is a pull-based generator of terms with strictly
 * decreasing exponents and a memoized prefix. End-of-stream means the
 * element equals the finite sum produced; nothing else ever implies
 * exactness. Memoization is guarded by a mutex so concurrent readers see
 * one consistent append-only prefix.
 *
 * Exponent divergence is deliberately not enforced: streams whose
 * exponents converge (and so denote no element of the field) are useful
 * as type IV material.
 */

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcf/fraction.hpp"
#include "pcf/puiseux.hpp"

namespace pcf {

namespace detail {

template <CoefficientField F>
std::vector<Term<F>> scale_shift(const F& fld, const std::vector<Term<F>>& a,
                                 const typename F::Elem& c, const Rational& e) {
    std::vector<Term<F>> out;
    if (fld.is_zero(c)) return out;
    out.reserve(a.size());
    for (const auto& t : a) out.push_back({t.exp + e, fld.mul(t.coef, c)});
    return out;
}

/// One step of Laurent long division: peel the leading term of rem/den.
template <CoefficientField F>
std::optional<Term<F>> division_step(const F& fld, std::vector<Term<F>>& rem,
                                     const std::vector<Term<F>>& den) {
    if (rem.empty()) return std::nullopt;
    Rational e = rem.front().exp - den.front().exp;
    auto c = fld.mul(rem.front().coef, fld.inv(den.front().coef));
    rem = add_terms(fld, rem, scale_shift(fld, den, c, e), true);
    return Term<F>{std::move(e), std::move(c)};
}

}  // namespace detail

template <CoefficientField F>
class TruncatedSeries {
  public:
    using Elem = typename F::Elem;

    explicit TruncatedSeries(F fld)
        : fld_(std::move(fld)), cutoff_(ExtRat::neg_inf()) {}

    /// Terms at or below the cutoff are dropped; what remains is canonical.
    TruncatedSeries(F fld, std::vector<Term<F>> terms, ExtRat cutoff)
        : fld_(std::move(fld)), cutoff_(std::move(cutoff)) {
        if (cutoff_.is_pos_inf()) throw DomainError("cutoff cannot be +inf");
        terms_ = detail::normalize_terms(fld_, std::move(terms));
        std::erase_if(terms_, [&](const Term<F>& t) { return !(cutoff_ < ExtRat(t.exp)); });
    }

    static TruncatedSeries exact(const PuiseuxPoly<F>& p) {
        return TruncatedSeries(p.field(), p.terms(), ExtRat::neg_inf());
    }

    const F& field() const { return fld_; }
    const std::vector<Term<F>>& terms() const { return terms_; }
    const ExtRat& cutoff() const { return cutoff_; }
    bool is_exact() const { return cutoff_.is_neg_inf(); }
    bool known_zero() const { return terms_.empty() && is_exact(); }

    std::optional<Term<F>> leading() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.front();
    }

    /// Degree of the known part; -inf when no term is known.
    ExtRat known_degree() const {
        return terms_.empty() ? ExtRat::neg_inf() : ExtRat(terms_.front().exp);
    }

    /// The valuation when the available precision decides it.
    std::optional<ExtRat> valuation_if_decidable() const {
        if (!terms_.empty()) return ExtRat(-terms_.front().exp);
        if (is_exact()) return ExtRat::pos_inf();
        return std::nullopt;
    }

    TruncatedSeries operator-() const {
        std::vector<Term<F>> out = terms_;
        for (auto& t : out) t.coef = fld_.neg(t.coef);
        return TruncatedSeries(fld_, std::move(out), cutoff_);
    }

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check_field(b);
        return TruncatedSeries(a.fld_, detail::add_terms(a.fld_, a.terms_, b.terms_, false),
                               max(a.cutoff_, b.cutoff_));
    }
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check_field(b);
        return TruncatedSeries(a.fld_, detail::add_terms(a.fld_, a.terms_, b.terms_, true),
                               max(a.cutoff_, b.cutoff_));
    }

    /// Product cutoff: the tightest exponent at which either unknown tail
    /// can contaminate the result.
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check_field(b);
        ExtRat c = max(max(a.known_degree() + b.cutoff_, b.known_degree() + a.cutoff_),
                       a.cutoff_ + b.cutoff_);
        return TruncatedSeries(a.fld_, detail::mul_terms(a.fld_, a.terms_, b.terms_), c);
    }

    /// 1/a computed by long division of the known part, down to the
    /// requested cutoff (or to the intrinsic precision limit, whichever is
    /// weaker). Needs at least one known term.
    TruncatedSeries invert(const Rational& target_cutoff) const {
        if (terms_.empty()) {
            if (is_exact()) throw DivisionByZero();
            throw PrecisionExhausted("cannot invert: no known nonzero term");
        }
        ExtRat intrinsic = is_exact() ? ExtRat::neg_inf()
                                      : cutoff_ - ExtRat(terms_.front().exp) -
                                            ExtRat(terms_.front().exp);
        ExtRat bound = max(ExtRat(target_cutoff), intrinsic);
        std::vector<Term<F>> rem{{Rational(0), fld_.one()}};
        std::vector<Term<F>> out;
        while (true) {
            if (!rem.empty() && !(bound < ExtRat(rem.front().exp - terms_.front().exp)))
                break;
            auto t = detail::division_step(fld_, rem, terms_);
            if (!t) break;
            out.push_back(std::move(*t));
        }
        return TruncatedSeries(fld_, std::move(out), bound);
    }

    /// Weakens the precision to the given cutoff. Exactness survives when
    /// nothing is dropped (the full value is still represented).
    TruncatedSeries truncate_to(const Rational& c) const {
        if (!(cutoff_ < ExtRat(c))) return *this;
        bool drops = !terms_.empty() && !(ExtRat(c) < ExtRat(terms_.back().exp));
        if (is_exact() && !drops) return *this;
        return TruncatedSeries(fld_, terms_, ExtRat(c));
    }

    /// Unique f in the polynomial ring with nu(z - f) > 0. All exponents
    /// >= 0 must be known, i.e. the cutoff must be negative (or the value
    /// exact).
    PuiseuxPoly<F> principal_part() const {
        if (!is_exact() && !(cutoff_ < ExtRat(Rational(0))))
            throw PrecisionExhausted("principal part needs all exponents >= 0");
        std::vector<Term<F>> keep;
        for (const auto& t : terms_)
            if (t.exp.sign() >= 0) keep.push_back(t);
        return PuiseuxPoly<F>(fld_, std::move(keep));
    }

    /// Exact values convert to a comaximal fraction (poly)/(t^m).
    RationalPuiseux<F> as_fraction() const {
        if (!is_exact()) throw PrecisionExhausted("series is not exact");
        if (terms_.empty()) return RationalPuiseux<F>(PuiseuxPoly<F>::zero(fld_));
        Rational m = terms_.back().exp.sign() < 0 ? -terms_.back().exp : Rational(0);
        std::vector<Term<F>> shifted = terms_;
        for (auto& t : shifted) t.exp += m;
        return RationalPuiseux<F>::reduce(PuiseuxPoly<F>(fld_, std::move(shifted)),
                                          PuiseuxPoly<F>::t_power(fld_, m));
    }

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        if (!(a.fld_ == b.fld_) || a.cutoff_ != b.cutoff_ ||
            a.terms_.size() != b.terms_.size())
            return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].exp != b.terms_[i].exp ||
                !a.fld_.eq(a.terms_[i].coef, b.terms_[i].coef))
                return false;
        return true;
    }

    std::string str() const {
        std::string body = detail::render_terms(fld_, terms_);
        if (is_exact()) return body;
        std::string tail = "O(t^(" + cutoff_.value().str() + "))";
        if (terms_.empty()) return tail;
        return body + " + " + tail;
    }

    void check_field(const TruncatedSeries& o) const {
        if (!(fld_ == o.fld_)) throw DomainError("mixed coefficient fields");
    }

  private:
    F fld_;
    std::vector<Term<F>> terms_;
    ExtRat cutoff_;
};

template <CoefficientField F>
TruncatedSeries<F> series_add(const TruncatedSeries<F>& a, const TruncatedSeries<F>& b) {
    return a + b;
}
template <CoefficientField F>
TruncatedSeries<F> series_mul(const TruncatedSeries<F>& a, const TruncatedSeries<F>& b) {
    return a * b;
}
template <CoefficientField F>
TruncatedSeries<F> series_invert(const TruncatedSeries<F>& a, const Rational& cutoff) {
    return a.invert(cutoff);
}
template <CoefficientField F>
PuiseuxPoly<F> principal_part(const TruncatedSeries<F>& z) {
    return z.principal_part();
}

template <CoefficientField F>
class SeriesStream {
  public:
    using Gen = std::function<std::optional<Term<F>>()>;

    /// Guard against pulling forever from a stream whose exponents fail to
    /// diverge (such streams are legal type IV material).
    static constexpr std::size_t kMaxPullsPerCall = 65536;

    SeriesStream(F fld, Gen gen)
        : st_(std::make_shared<State>(std::move(fld), std::move(gen))) {}

    static SeriesStream from_terms(F fld, std::vector<Term<F>> terms) {
        terms = detail::normalize_terms(fld, std::move(terms));
        auto idx = std::make_shared<std::size_t>(0);
        auto data = std::make_shared<std::vector<Term<F>>>(std::move(terms));
        return SeriesStream(std::move(fld), [idx, data]() -> std::optional<Term<F>> {
            if (*idx >= data->size()) return std::nullopt;
            return (*data)[(*idx)++];
        });
    }

    const F& field() const { return st_->fld; }

    /// i-th term of the stream, pulling and memoizing as needed.
    std::optional<Term<F>> term(std::size_t i) const {
        std::lock_guard<std::mutex> lk(st_->mu);
        while (!st_->ended && st_->memo.size() <= i) pull_locked();
        if (i < st_->memo.size()) return st_->memo[i];
        return std::nullopt;
    }

    /// Memoized prefix and whether the stream has ended, as one snapshot.
    std::pair<std::vector<Term<F>>, bool> snapshot() const {
        std::lock_guard<std::mutex> lk(st_->mu);
        return {st_->memo, st_->ended};
    }

    /// Pulls one more term; false once the stream has ended.
    bool advance() const {
        std::lock_guard<std::mutex> lk(st_->mu);
        if (st_->ended) return false;
        pull_locked();
        return !st_->ended || !st_->memo.empty();
    }

    /// Pulls until a term falls at or below the cutoff (excluded) or the
    /// stream ends (result exact).
    TruncatedSeries<F> truncate(const Rational& cutoff) const {
        std::lock_guard<std::mutex> lk(st_->mu);
        std::size_t pulls = 0;
        while (!st_->ended &&
               (st_->memo.empty() || st_->memo.back().exp > cutoff)) {
            if (++pulls > kMaxPullsPerCall)
                throw BudgetExhausted("stream did not reach the cutoff");
            pull_locked();
        }
        bool exact = st_->ended && (st_->memo.empty() || st_->memo.back().exp > cutoff);
        std::vector<Term<F>> keep;
        for (const auto& t : st_->memo)
            if (t.exp > cutoff) keep.push_back(t);
        return TruncatedSeries<F>(st_->fld, std::move(keep),
                                  exact ? ExtRat::neg_inf() : ExtRat(cutoff));
    }

    /// All terms with exponent >= bound; second component true when the
    /// stream ended within that range (so the list is the whole value).
    std::pair<std::vector<Term<F>>, bool> pull_down_to(const Rational& bound) const {
        std::lock_guard<std::mutex> lk(st_->mu);
        std::size_t pulls = 0;
        while (!st_->ended && (st_->memo.empty() || st_->memo.back().exp >= bound)) {
            if (++pulls > kMaxPullsPerCall)
                throw BudgetExhausted("stream did not reach the bound");
            pull_locked();
        }
        std::vector<Term<F>> keep;
        for (const auto& t : st_->memo)
            if (t.exp >= bound) keep.push_back(t);
        return {std::move(keep), st_->ended};
    }

  private:
    struct State {
        State(F f, Gen g) : fld(std::move(f)), gen(std::move(g)) {}
        F fld;
        mutable std::mutex mu;
        std::vector<Term<F>> memo;
        bool ended = false;
        Gen gen;
    };

    void pull_locked() const {
        while (true) {
            auto t = st_->gen();
            if (!t) {
                st_->ended = true;
                return;
            }
            if (!st_->memo.empty() && !(t->exp < st_->memo.back().exp))
                throw StreamInvariantViolation();
            if (st_->fld.is_zero(t->coef)) continue;
            st_->memo.push_back(std::move(*t));
            return;
        }
    }

    std::shared_ptr<State> st_;
};

template <CoefficientField F>
TruncatedSeries<F> truncate(const SeriesStream<F>& s, const Rational& cutoff) {
    return s.truncate(cutoff);
}

/// Laurent-type expansion of a fraction in descending exponents.
template <CoefficientField F>
SeriesStream<F> from_rational(const RationalPuiseux<F>& x) {
    F fld = x.field();
    auto rem = std::make_shared<std::vector<Term<F>>>(x.num().terms());
    auto den = std::make_shared<const std::vector<Term<F>>>(x.den().terms());
    return SeriesStream<F>(fld, [fld, rem, den]() {
        return detail::division_step(fld, *rem, *den);
    });
}

/// Square root by the term-by-term recurrence from (sum s_i)^2 = x.
/// The branch takes the canonical square root of the leading coefficient.
template <CoefficientField F>
SeriesStream<F> sqrt_stream(const SeriesStream<F>& x) {
    F fld = x.field();
    if (fld.characteristic() == 2)
        throw NoSquareRoot("square roots need characteristic != 2");

    struct SqrtState {
        SeriesStream<F> x;
        std::vector<Term<F>> root;  // terms emitted so far
        bool started = false;
        Rational half_exp;
        typename F::Elem two_lead;
        explicit SqrtState(SeriesStream<F> xs)
            : x(std::move(xs)), two_lead(x.field().zero()) {}
    };
    auto st = std::make_shared<SqrtState>(x);

    return SeriesStream<F>(fld, [fld, st]() -> std::optional<Term<F>> {
        if (!st->started) {
            st->started = true;
            auto t0 = st->x.term(0);
            if (!t0) return std::nullopt;  // sqrt(0) = 0
            auto r = fld.sqrt(t0->coef);
            if (!r) throw NoSquareRoot("leading coefficient is not a square");
            st->half_exp = t0->exp / Rational(2);
            st->two_lead = fld.add(*r, *r);
            st->root.push_back({st->half_exp, *r});
            return st->root.back();
        }
        while (true) {
            auto [known, ended] = st->x.snapshot();
            auto residue =
                detail::add_terms(fld, known, detail::mul_terms(fld, st->root, st->root), true);
            if (!residue.empty()) {
                // The residue's leading term is final once the unpulled part
                // of x sits strictly below it.
                if (ended ||
                    (!known.empty() && !(residue.front().exp < known.back().exp))) {
                    Term<F> next{residue.front().exp - st->half_exp,
                                 fld.mul(residue.front().coef, fld.inv(st->two_lead))};
                    st->root = detail::add_terms(fld, st->root, {next}, false);
                    return next;
                }
            } else if (ended) {
                return std::nullopt;  // exact square
            }
            st->x.advance();
        }
    });
}

template <CoefficientField F>
SeriesStream<F> sqrt_stream(const RationalPuiseux<F>& x) {
    return sqrt_stream(from_rational(x));
}

}  // namespace pcf
