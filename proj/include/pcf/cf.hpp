#pragma once

/**
 * @file cf.hpp
 * @brief Continued fractions with Puiseux-polynomial partial quotients.
 *
 * The expansion loop is the recursive scheme: f_n is the principal part of
 * z_n and z_{n+1} = 1/(z_n - f_n). On exact fractions it always terminates.
 * On truncated input the engine never guesses: when the precision cannot
 * certify the next quotient (in particular, it can never certify that
 * z_n - f_n is exactly zero), it stops with precision-exhausted. Every
 * quotient it does emit is a true prefix of the unique expansion, because
 * the cutoff bookkeeping of the series layer reproduces the prefix
 * agreement bound exactly.
 */

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pcf/series.hpp"

namespace pcf {

template <CoefficientField F>
class CFExpression {
  public:
    /// finite = true means the expression is complete and evaluates in the
    /// fraction field; false marks a prefix of a longer expansion.
    CFExpression(PuiseuxPoly<F> f0, std::vector<PuiseuxPoly<F>> partials, bool finite)
        : f0_(std::move(f0)), partials_(std::move(partials)), finite_(finite) {
        for (const auto& f : partials_)
            if (!(ExtRat(Rational(0)) < f.degree()))
                throw DomainError("partial quotients must have positive degree");
    }

    const F& field() const { return f0_.field(); }
    const PuiseuxPoly<F>& f0() const { return f0_; }
    const std::vector<PuiseuxPoly<F>>& partials() const { return partials_; }
    bool finite() const { return finite_; }

    /// Number of quotients including f0.
    std::size_t total_quotients() const { return partials_.size() + 1; }
    /// The i-th quotient, i = 0 being f0.
    const PuiseuxPoly<F>& quotient(std::size_t i) const {
        return i == 0 ? f0_ : partials_.at(i - 1);
    }
    /// Length l: the index of the last quotient.
    std::size_t length() const { return partials_.size(); }

    /// The truncated expression [f0, ..., fn], a finite CF by definition.
    CFExpression prefix(std::size_t n) const {
        if (n >= total_quotients()) throw DomainError("prefix index out of range");
        return CFExpression(f0_,
                            std::vector<PuiseuxPoly<F>>(partials_.begin(),
                                                        partials_.begin() + n),
                            true);
    }

    /// deg f_i for i >= 1.
    std::vector<Rational> partial_degrees() const {
        std::vector<Rational> out;
        out.reserve(partials_.size());
        for (const auto& f : partials_) out.push_back(f.degree().value());
        return out;
    }

    friend bool operator==(const CFExpression& a, const CFExpression& b) {
        return a.finite_ == b.finite_ && a.f0_ == b.f0_ && a.partials_ == b.partials_;
    }
    friend bool operator!=(const CFExpression& a, const CFExpression& b) { return !(a == b); }

    std::string str() const {
        std::string out = "[" + f0_.str();
        if (!partials_.empty()) {
            out += "; ";
            for (std::size_t i = 0; i < partials_.size(); ++i) {
                if (i) out += ", ";
                out += partials_[i].str();
            }
            if (!finite_) out += ", ...";
        } else if (!finite_) {
            out += "; ...";
        }
        return out + "]";
    }

  private:
    PuiseuxPoly<F> f0_;
    std::vector<PuiseuxPoly<F>> partials_;
    bool finite_;
};

enum class ExpandStatus { Ended, BudgetExhausted, PrecisionExhausted };

inline std::string to_string(ExpandStatus s) {
    switch (s) {
        case ExpandStatus::Ended: return "ended";
        case ExpandStatus::BudgetExhausted: return "budget-exhausted";
        default: return "precision-exhausted";
    }
}

/// The state z_i lives either in the fraction field (exact input) or as a
/// truncated series.
template <CoefficientField F>
using ZState = std::variant<RationalPuiseux<F>, TruncatedSeries<F>>;

template <CoefficientField F>
struct ExpansionState {
    std::vector<std::pair<PuiseuxPoly<F>, ZState<F>>> pairs;  // (f_i, z_i)
    ExpandStatus status = ExpandStatus::Ended;

    CFExpression<F> expression() const {
        if (pairs.empty()) throw DomainError("empty expansion");
        std::vector<PuiseuxPoly<F>> partials;
        partials.reserve(pairs.size() - 1);
        for (std::size_t i = 1; i < pairs.size(); ++i) partials.push_back(pairs[i].first);
        return CFExpression<F>(pairs[0].first, std::move(partials),
                               status == ExpandStatus::Ended);
    }
};

/// Expansion of an exact fraction; terminates by the Euclidean descent of
/// the denominator degree. max_partials bounds the number of f_i, i >= 1.
template <CoefficientField F>
ExpansionState<F> expand_exact_state(const RationalPuiseux<F>& z,
                                     std::size_t max_partials = SIZE_MAX) {
    ExpansionState<F> out;
    RationalPuiseux<F> cur = z;
    for (std::size_t i = 0;; ++i) {
        auto f = cur.principal_part();
        out.pairs.push_back({f, ZState<F>(cur)});
        auto rem = cur - RationalPuiseux<F>(f);
        if (rem.is_zero()) {
            out.status = ExpandStatus::Ended;
            return out;
        }
        if (i >= max_partials) {
            out.status = ExpandStatus::BudgetExhausted;
            return out;
        }
        cur = rem.invert();
    }
}

template <CoefficientField F>
CFExpression<F> expand_exact(const RationalPuiseux<F>& z) {
    return expand_exact_state(z).expression();
}

/// Expansion of a truncated series. Exact series delegate to the exact
/// loop; otherwise quotients are emitted while the cutoff certifies them.
template <CoefficientField F>
ExpansionState<F> expand_truncated(const TruncatedSeries<F>& z,
                                   std::size_t max_partials) {
    if (z.is_exact()) return expand_exact_state(z.as_fraction(), max_partials);

    ExpansionState<F> out;
    TruncatedSeries<F> cur = z;
    for (std::size_t i = 0;; ++i) {
        if (!(cur.cutoff() < ExtRat(Rational(0)))) {
            out.status = ExpandStatus::PrecisionExhausted;
            return out;
        }
        auto f = cur.principal_part();
        out.pairs.push_back({f, ZState<F>(cur)});
        auto rem = cur - TruncatedSeries<F>::exact(f);
        if (rem.terms().empty()) {
            // Cannot distinguish "expansion ends here" from a tail below
            // the cutoff.
            out.status = ExpandStatus::PrecisionExhausted;
            return out;
        }
        if (i >= max_partials) {
            out.status = ExpandStatus::BudgetExhausted;
            return out;
        }
        Rational intrinsic =
            rem.cutoff().value() - rem.terms().front().exp - rem.terms().front().exp;
        cur = rem.invert(intrinsic);
    }
}

/// max_partials counts the partial quotients f_1, ..., so up to
/// max_partials + 1 quotients including f0 may be produced.
template <CoefficientField F>
ExpansionState<F> expand_stream(const SeriesStream<F>& z, std::size_t max_partials,
                                const Rational& cutoff) {
    return expand_truncated(z.truncate(cutoff), max_partials);
}

/// Bottom-up exact evaluation of a finite expression. Intermediate tails
/// have positive degree, hence never vanish.
template <CoefficientField F>
RationalPuiseux<F> evaluate_exact(const CFExpression<F>& cf) {
    if (!cf.finite()) throw DomainError("cannot evaluate an incomplete expansion");
    const auto& partials = cf.partials();
    if (partials.empty()) return RationalPuiseux<F>(cf.f0());
    RationalPuiseux<F> acc(partials.back());
    for (std::size_t i = partials.size() - 1; i-- > 0;)
        acc = RationalPuiseux<F>(partials[i]) + acc.invert();
    return RationalPuiseux<F>(cf.f0()) + acc.invert();
}

template <CoefficientField F>
struct ApproximantPair {
    std::size_t index;
    PuiseuxPoly<F> p, q;

    /// Canonical comaximal, denominator-monic view; equals the exact
    /// evaluation of the truncated expression.
    RationalPuiseux<F> value() const { return RationalPuiseux<F>::reduce(p, q); }
};

/// p_k = f_k p_{k-1} + p_{k-2}, q_k = f_k q_{k-1} + q_{k-2} with seeds
/// p_{-1} = 1, q_{-1} = 0, p_0 = f0, q_0 = 1. The determinant
/// p_k q_{k-1} - p_{k-1} q_k = (-1)^{k-1} certifies comaximality.
template <CoefficientField F>
std::vector<ApproximantPair<F>> approximants(const CFExpression<F>& cf, std::size_t n) {
    if (n >= cf.total_quotients()) throw DomainError("approximant index out of range");
    const F& fld = cf.field();
    std::vector<ApproximantPair<F>> out;
    out.reserve(n + 1);
    PuiseuxPoly<F> p_prev = PuiseuxPoly<F>::one(fld), q_prev = PuiseuxPoly<F>::zero(fld);
    PuiseuxPoly<F> p_cur = cf.f0(), q_cur = PuiseuxPoly<F>::one(fld);
    out.push_back({0, p_cur, q_cur});
    for (std::size_t k = 1; k <= n; ++k) {
        const auto& fk = cf.quotient(k);
        PuiseuxPoly<F> p_next = fk * p_cur + p_prev;
        PuiseuxPoly<F> q_next = fk * q_cur + q_prev;
        p_prev = std::move(p_cur);
        q_prev = std::move(q_cur);
        p_cur = std::move(p_next);
        q_cur = std::move(q_next);
        out.push_back({k, p_cur, q_cur});
    }
    return out;
}

namespace detail {

template <CoefficientField F>
Rational closed_form_error(const CFExpression<F>& cf, std::size_t n) {
    Rational sum(0);
    for (std::size_t i = 1; i <= n; ++i) sum += cf.quotient(i).degree().value();
    return cf.quotient(n + 1).degree().value() + sum + sum;
}

}  // namespace detail

/// nu(z - p_n/q_n) computed two independent ways: exact subtraction and
/// the closed form deg(f_{n+1}) + 2 deg(q_n). They must agree.
template <CoefficientField F>
Rational error_valuation(const RationalPuiseux<F>& z, std::size_t n) {
    auto cf = expand_exact(z);
    if (cf.partials().size() < n + 1)
        throw DomainError("expansion ends before f_{n+1}");
    Rational closed = detail::closed_form_error(cf, n);
    auto xn = approximants(cf, n).back().value();
    auto diff = z - xn;
    if (diff.is_zero()) throw DomainError("z equals its approximant");
    Rational direct = diff.valuation().value();
    if (direct != closed)
        throw Error("error identity violated: direct " + direct.str() + " vs closed " +
                    closed.str());
    return closed;
}

/// Stream variant: the direct route subtracts truncations, so the cutoff
/// must reach below -(closed form).
template <CoefficientField F>
Rational error_valuation(const SeriesStream<F>& z, std::size_t n, const Rational& cutoff) {
    auto st = expand_stream(z, n + 1, cutoff);
    auto cf = st.expression();
    if (cf.partials().size() < n + 1) {
        if (st.status == ExpandStatus::PrecisionExhausted)
            throw PrecisionExhausted("expansion too short for f_{n+1}");
        throw DomainError("expansion ends before f_{n+1}");
    }
    Rational closed = detail::closed_form_error(cf, n);
    auto xn = approximants(cf, n).back().value();
    auto diff = z.truncate(cutoff) - from_rational(xn).truncate(cutoff);
    auto lead = diff.leading();
    if (!lead) throw PrecisionExhausted("cutoff cannot see z - x_n");
    Rational direct = -lead->exp;
    if (direct != closed)
        throw Error("error identity violated: direct " + direct.str() + " vs closed " +
                    closed.str());
    return closed;
}

struct PrefixAgreement {
    /// Largest index m with guaranteed agreement; -1 when nothing is
    /// guaranteed; nullopt when the streams are exactly identical.
    std::optional<long> m;
    ExtRat separation;  // nu(z - z'), or a certified lower bound for it
    bool separation_is_lower_bound = false;
};

/// The guarantee: expansions agree through m whenever
/// nu(z - z') > 2 * sum_{i<=m} deg(f_i). When the truncations agree to the
/// full cutoff, -cutoff serves as a certified lower bound for nu(z - z').
template <CoefficientField F>
PrefixAgreement prefix_agreement_bound(const SeriesStream<F>& z, const SeriesStream<F>& zp,
                                       const Rational& cutoff,
                                       std::size_t max_partials = 512) {
    auto diff = z.truncate(cutoff) - zp.truncate(cutoff);
    ExtRat nu = ExtRat(Rational(0));
    bool lower_bound = false;
    if (auto lead = diff.leading()) {
        nu = ExtRat(-lead->exp);
    } else if (diff.is_exact()) {
        return {std::nullopt, ExtRat::pos_inf(), false};
    } else {
        nu = -diff.cutoff();
        lower_bound = true;
        if (!(ExtRat(Rational(0)) < nu))
            throw PrecisionExhausted("cannot decide nu(z - z')");
    }
    if (!(ExtRat(Rational(0)) < nu)) return {-1L, nu, lower_bound};

    auto st = expand_stream(z, max_partials, cutoff);
    auto cf = st.expression();
    Rational twice_sum(0);
    long m = 0;
    for (std::size_t i = 1; i < cf.total_quotients(); ++i) {
        Rational d = cf.quotient(i).degree().value();
        if (!(ExtRat(twice_sum + d + d) < nu)) return {m, nu, lower_bound};
        twice_sum += d + d;
        m = static_cast<long>(i);
    }
    if (st.status == ExpandStatus::Ended) return {m, nu, lower_bound};
    // Precision stop with the sums still below nu: the next degree, if it
    // exists at all, satisfies deg f_{N+1} >= -(cutoff + 2 sum), which
    // already pushes 2 sum past nu. So the available m is definitive.
    if (st.status == ExpandStatus::PrecisionExhausted) return {m, nu, lower_bound};
    throw BudgetExhausted("expansion budget too small for the agreement bound");
}

enum class ConvergenceVerdict { DivergesCertified, ConvergesCertified, Inconclusive };

struct ConvergenceResult {
    ConvergenceVerdict verdict;
    Rational partial_sum;
    std::size_t terms_used;
};

/// Summability of an arbitrary degree stream is undecidable, so a caller
/// may certify convergence with an analytic bound; divergence is certified
/// once partial sums pass the threshold.
inline ConvergenceResult classify_convergence(
    const std::function<Rational(std::size_t)>& degree_at /*1-based*/, std::size_t budget,
    const std::optional<Rational>& analytic_bound, const Rational& threshold) {
    Rational sum(0);
    for (std::size_t i = 1; i <= budget; ++i) {
        Rational d = degree_at(i);
        if (!(d > Rational(0))) throw DomainError("degrees must be positive");
        sum += d;
        if (analytic_bound && sum > *analytic_bound)
            throw DomainError("bad certificate: partial sums exceed the supplied bound");
        if (!analytic_bound && sum > threshold)
            return {ConvergenceVerdict::DivergesCertified, sum, i};
    }
    if (analytic_bound) return {ConvergenceVerdict::ConvergesCertified, sum, budget};
    return {ConvergenceVerdict::Inconclusive, sum, budget};
}

struct BestApproxOutcome {
    bool is_approximant;
    std::size_t index;  // meaningful when is_approximant
};

/// Decides nu(z - p/q) > 2 deg q at the available precision; when the
/// hypothesis holds, locates p/q among the approximants (it must be one).
template <CoefficientField F>
BestApproxOutcome best_approximation_check(const SeriesStream<F>& z,
                                           const PuiseuxPoly<F>& p, const PuiseuxPoly<F>& q,
                                           const Rational& cutoff) {
    if (q.is_zero()) throw DivisionByZero();
    auto target = RationalPuiseux<F>::reduce(p, q);
    Rational bar = q.degree().value() + q.degree().value();

    auto diff = z.truncate(cutoff) - from_rational(target).truncate(cutoff);
    bool exact_match = diff.known_zero();
    if (!exact_match) {
        if (auto lead = diff.leading()) {
            if (!(-lead->exp > bar)) return {false, 0};
        } else if (!(diff.cutoff() < ExtRat(-bar))) {
            throw PrecisionExhausted("cannot decide the best-approximation hypothesis");
        }
    }

    Rational q_deg = target.den().degree().value();
    auto st = expand_stream(z, 4096, cutoff);
    auto cf = st.expression();
    auto aps = approximants(cf, cf.total_quotients() - 1);
    bool scanned_past = false;
    for (const auto& ap : aps) {
        if (ap.value() == target) return {true, ap.index};
        if (ap.q.degree().value() > q_deg) {
            scanned_past = true;
            break;
        }
    }
    if (!scanned_past && st.status == ExpandStatus::PrecisionExhausted)
        throw PrecisionExhausted("expansion too short to locate the approximant");
    if (!scanned_past && st.status == ExpandStatus::BudgetExhausted)
        throw BudgetExhausted("expansion budget too small to locate the approximant");
    throw Error("hypothesis held but p/q is not an approximant");
}

/// A truncation of the value of an expression, certified through the error
/// identity: x_n agrees with the value above -(deg f_{n+1} + 2 sum deg f_i).
template <CoefficientField F>
TruncatedSeries<F> cf_truncation(const CFExpression<F>& cf, const Rational& cutoff) {
    if (cf.finite())
        return from_rational(evaluate_exact(cf)).truncate(cutoff);
    if (cf.partials().empty())
        throw DomainError("prefix too short to certify a truncation");
    std::size_t n = cf.total_quotients() - 2;  // keep f_{n+1} for the certificate
    Rational certified = -detail::closed_form_error(cf, n);
    Rational eff = max(cutoff, certified);
    auto xn = approximants(cf, n).back().value();
    return from_rational(xn).truncate(eff);
}

template <CoefficientField F>
struct PeriodicityResult {
    explicit PeriodicityResult(const F& fld)
        : A(PuiseuxPoly<F>::zero(fld)),
          B(PuiseuxPoly<F>::zero(fld)),
          C(PuiseuxPoly<F>::zero(fld)) {}

    std::size_t preperiod = 0;
    std::size_t period = 0;
    bool verified = false;
    /// Certified lower bound for nu(A z^2 + B z + C); exact when a nonzero
    /// residual term was actually seen (which refutes the match).
    ExtRat residual_floor = ExtRat(Rational(0));
    bool residual_term_seen = false;
    PuiseuxPoly<F> A, B, C;
};

/// Scans for the smallest period (then smallest preperiod) consistent with
/// the prefix, requiring two full repetitions of evidence, and verifies the
/// match through the fixed-point quadratic of the period's Moebius map.
template <CoefficientField F>
std::optional<PeriodicityResult<F>> detect_periodicity(
    const CFExpression<F>& prefix, std::size_t max_period, const Rational& cutoff,
    std::optional<Rational> threshold = std::nullopt) {
    const F& fld = prefix.field();
    std::size_t total = prefix.total_quotients();

    std::optional<std::pair<std::size_t, std::size_t>> found;
    for (std::size_t period = 1; period <= max_period && !found; ++period) {
        for (std::size_t s = 0; s + 2 * period <= total && !found; ++s) {
            bool ok = true;
            for (std::size_t i = s; i + period < total && ok; ++i)
                if (prefix.quotient(i) != prefix.quotient(i + period)) ok = false;
            if (ok) found = {s, period};
        }
    }
    if (!found) return std::nullopt;
    auto [s, period] = *found;

    // Fixed point of the period block: y = (a y + b)/(c y + d) gives
    // c y^2 + (d - a) y - b = 0 with [[a,b],[c,d]] the block's matrix.
    PuiseuxPoly<F> a = PuiseuxPoly<F>::one(fld), b = PuiseuxPoly<F>::zero(fld);
    PuiseuxPoly<F> c = PuiseuxPoly<F>::zero(fld), d = PuiseuxPoly<F>::one(fld);
    for (std::size_t j = s; j < s + period; ++j) {
        const auto& f = prefix.quotient(j);
        // [[a,b],[c,d]] * [[f,1],[1,0]]
        PuiseuxPoly<F> na = a * f + b, nb = a;
        PuiseuxPoly<F> nc = c * f + d, nd = c;
        a = std::move(na);
        b = std::move(nb);
        c = std::move(nc);
        d = std::move(nd);
    }

    // Transport to z through z = (P y + p')/(Q y + q'), the preperiod part.
    PuiseuxPoly<F> P = PuiseuxPoly<F>::one(fld), Pp = PuiseuxPoly<F>::zero(fld);
    PuiseuxPoly<F> Q = PuiseuxPoly<F>::zero(fld), Qp = PuiseuxPoly<F>::one(fld);
    if (s > 0) {
        auto aps = approximants(prefix, s - 1);
        P = aps[s - 1].p;
        Q = aps[s - 1].q;
        Pp = s >= 2 ? aps[s - 2].p : PuiseuxPoly<F>::one(fld);
        Qp = s >= 2 ? aps[s - 2].q : PuiseuxPoly<F>::zero(fld);
    }
    // y = (alpha z + beta)/(gamma z + delta)
    PuiseuxPoly<F> alpha = Qp, beta = -Pp, gamma = -Q, delta = P;

    auto dma = d - a;
    PeriodicityResult<F> res(fld);
    res.preperiod = s;
    res.period = period;
    res.A = c * alpha * alpha + dma * alpha * gamma - b * gamma * gamma;
    res.B = (c * alpha * beta).scaled(fld.from_int(2)) + dma * (alpha * delta + beta * gamma) -
            (b * gamma * delta).scaled(fld.from_int(2));
    res.C = c * beta * beta + dma * beta * delta - b * delta * delta;

    Rational thr;
    if (threshold) {
        thr = *threshold;
    } else {
        ExtRat dd = max(max(res.A.degree(), res.B.degree()), res.C.degree());
        thr = (dd.is_neg_inf() ? Rational(0) : dd.value() + dd.value()) + Rational(10);
    }

    auto zhat = cf_truncation(prefix, cutoff);
    auto residual = TruncatedSeries<F>::exact(res.A) * zhat * zhat +
                    TruncatedSeries<F>::exact(res.B) * zhat +
                    TruncatedSeries<F>::exact(res.C);
    if (auto lead = residual.leading()) {
        res.residual_term_seen = true;
        res.residual_floor = ExtRat(-lead->exp);
        res.verified = -lead->exp > thr;
    } else if (residual.is_exact()) {
        res.residual_term_seen = false;
        res.residual_floor = ExtRat::pos_inf();
        res.verified = true;
    } else {
        res.residual_term_seen = false;
        res.residual_floor = -residual.cutoff();
        res.verified = res.residual_floor > ExtRat(thr);
    }
    return res;
}

}  // namespace pcf
