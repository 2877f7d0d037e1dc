#pragma once

/**
 * @file typeiv.hpp
 * @brief Nested ball sequences with empty intersection.
 *
 * Emptiness over the completed field is not finitely checkable, so a
 * sequence carries the reason it is empty: a degree-convergent expansion
 * schedule (the prefix balls of a continued fraction whose degree sum
 * stays below a supplied bound) or the explicit family of partial-sum
 * centers with shrinking negative radii. Nesting of every produced
 * consecutive pair is machine-checked, and sampled points can be excluded
 * at a concrete index.
 */

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pcf/berkovich.hpp"

namespace pcf {

enum class TypeIVCertificate { CfConvergent, E69Family, Raw };

inline std::string to_string(TypeIVCertificate c) {
    switch (c) {
        case TypeIVCertificate::CfConvergent: return "cf-convergent";
        case TypeIVCertificate::E69Family: return "e69-family";
        default: return "raw";
    }
}

template <CoefficientField F>
class NestedBallSeq {
  public:
    NestedBallSeq(TypeIVCertificate cert, std::vector<Ball<F>> balls,
                  Rational radius_limit)
        : cert_(cert), balls_(std::move(balls)), radius_limit_(std::move(radius_limit)) {
        if (balls_.empty()) throw DomainError("a nested sequence needs at least one ball");
        for (std::size_t i = 0; i + 1 < balls_.size(); ++i)
            if (!lies_above(balls_[i].point(), balls_[i + 1].point()))
                throw Error("nesting violated at index " + std::to_string(i + 1));
    }

    TypeIVCertificate certificate() const { return cert_; }
    const std::vector<Ball<F>>& balls() const { return balls_; }
    const Ball<F>& ball(std::size_t n) const { return balls_.at(n); }  // 0-based
    std::size_t count() const { return balls_.size(); }
    const Rational& radius_limit() const { return radius_limit_; }

  private:
    TypeIVCertificate cert_;
    std::vector<Ball<F>> balls_;
    Rational radius_limit_;
};

/// Prefix balls of a continued fraction whose degree sum is certified to
/// stay below the supplied bound. The limit of the (increasing) radius
/// parameters is at most twice the bound.
template <CoefficientField F>
NestedBallSeq<F> from_convergent_cf(const PuiseuxPoly<F>& f0,
                                    const std::function<PuiseuxPoly<F>(std::size_t)>& partial,
                                    const Rational& bound, std::size_t count) {
    if (count == 0) throw DomainError("need at least one prefix ball");
    std::vector<PuiseuxPoly<F>> partials;
    Rational sum(0);
    std::vector<Ball<F>> balls;
    for (std::size_t n = 1; n <= count; ++n) {
        auto f = partial(n);
        if (!(ExtRat(Rational(0)) < f.degree()))
            throw DomainError("partial quotients must have positive degree");
        sum += f.degree().value();
        if (sum > bound)
            throw DomainError("bad certificate: degree sums exceed the supplied bound");
        partials.push_back(std::move(f));
        CFExpression<F> prefix(f0, partials, true);
        Rational r = sum + sum;
        balls.push_back(Ball<F>::closed_ball(evaluate_exact(prefix), r));
    }
    return NestedBallSeq<F>(TypeIVCertificate::CfConvergent, std::move(balls),
                            bound + bound);
}

/// The partial-sum family: centers b_n = sum_{i<=n} t^{r(i)} and closed
/// balls of radius parameter -r(n+1), for a strictly decreasing positive
/// schedule. Every radius parameter is negative, so the associated
/// promenade never bounces: the limit has type IVb.
template <CoefficientField F>
NestedBallSeq<F> e69_sequence(F fld, const std::function<Rational(std::size_t)>& schedule,
                              std::size_t count) {
    if (count == 0) throw DomainError("need at least one ball");
    std::vector<Ball<F>> balls;
    std::vector<Term<F>> center;
    Rational prev;
    for (std::size_t n = 1; n <= count + 1; ++n) {
        Rational r = schedule(n);
        if (!(r > Rational(0)) || (n > 1 && !(r < prev)))
            throw DomainError("schedule must be strictly decreasing and positive");
        if (n <= count) center.push_back({r, fld.one()});
        if (n >= 2)
            balls.push_back(Ball<F>(
                fld, std::vector<Term<F>>(center.begin(), center.begin() + (n - 1)), -r,
                true));
        prev = r;
    }
    return NestedBallSeq<F>(TypeIVCertificate::E69Family, std::move(balls), Rational(0));
}

struct Exclusion {
    bool excluded;
    std::size_t index;  // 1-based index of the first excluding ball
};

/// First n <= depth with z outside the n-th ball; certifies that z is not
/// in the intersection.
template <CoefficientField F>
Exclusion exclude_point(const NestedBallSeq<F>& seq, const SeriesStream<F>& z,
                        std::size_t depth) {
    std::size_t limit = std::min(depth, seq.count());
    for (std::size_t n = 1; n <= limit; ++n)
        if (!seq.ball(n - 1).contains(z)) return {true, n};
    return {false, 0};
}

template <CoefficientField F>
struct IvbWitness {
    bool stabilized = false;                    // false: prefixes grow (type IVa data)
    std::vector<PuiseuxPoly<F>> prefix;         // the stabilized expression
    std::vector<std::optional<PuiseuxPoly<F>>> shifts;  // per-ball f0 shifts
    std::vector<Ball<F>> tails;                 // the D_n, radius parameter <= 0
    std::size_t stable_from = 0;                // first index with the final prefix
};

/// Runs the prefix representation over the sequence. Stabilizing prefixes
/// give the longest-expression witness; growing prefixes are the type IVa
/// signature and reported as such.
template <CoefficientField F>
IvbWitness<F> ivb_witness(const NestedBallSeq<F>& seq, std::size_t budget = 64) {
    IvbWitness<F> out;
    std::size_t limit = std::min(budget, seq.count());
    std::vector<std::vector<PuiseuxPoly<F>>> prefixes;
    for (std::size_t n = 0; n < limit; ++n) {
        auto rep = prefix_representation(seq.ball(n));
        prefixes.push_back(rep.prefix);
        out.shifts.push_back(rep.f0_shift);
        out.tails.push_back(rep.residual);
    }
    const auto& last = prefixes.back();
    std::size_t from = prefixes.size() - 1;
    while (from > 0 && prefixes[from - 1] == last) --from;
    out.stabilized = prefixes.size() == 1 || from + 1 < prefixes.size();
    out.prefix = last;
    out.stable_from = from;
    return out;
}

}  // namespace pcf
