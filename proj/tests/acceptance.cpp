// Acceptance suite: one binary, one pass/fail line per criterion. Every
// check is exact (tolerance zero); the stated runtime budgets are part of
// the criteria and enforced.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "pcf/parallel.hpp"
#include "pcf/parse.hpp"
#include "pcf/scan.hpp"
#include "pcf/typeiv.hpp"
#include "support.hpp"

using namespace pcf;
using testsupport::Rng;

namespace {

QQ qq;
const auto t1 = PuiseuxPoly<QQ>::t_power(qq, Rational(1));
const auto th = PuiseuxPoly<QQ>::t_power(qq, Rational(1, 2));
const auto one_q = PuiseuxPoly<QQ>::one(qq);

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail << what;
        } else if (!cond) {
            detail << "; " << what;
        }
    }
};

SeriesStream<QQ> sqrt_t_plus_1() {
    return sqrt_stream(RationalPuiseux<QQ>::reduce(t1 + one_q, one_q));
}

// ---------------------------------------------------------------- 1
void criterion_sqrt_expansion(Check& c) {
    auto st = expand_stream(sqrt_t_plus_1(), 12, Rational(-40));
    auto cf = st.expression();
    c.require(cf.f0() == th, "f0 != t^(1/2)");
    c.require(cf.partials().size() == 12, "expected 12 partial quotients");
    auto two_sqrt_t = th.scaled(Rational(2));
    for (std::size_t i = 0; i < cf.partials().size(); ++i)
        c.require(cf.partials()[i] == two_sqrt_t,
                  "f_" + std::to_string(i + 1) + " != 2*t^(1/2)");
    c.detail << "f0 and f_1..f_12 exact";
}

// shared corpus for criteria 2 and 3
template <CoefficientField F>
struct Theorem1Case {
    CFExpression<F> cf;
    RationalPuiseux<F> z;
    std::vector<ApproximantPair<F>> aps;
};

template <CoefficientField F>
std::vector<Theorem1Case<F>> theorem1_corpus(const F& fld, Rng& rng, int count) {
    std::vector<Theorem1Case<F>> out;
    for (int i = 0; i < count; ++i) {
        auto cf = testsupport::rand_cf(fld, rng, 6, 3, 8);
        auto z = evaluate_exact(cf);
        auto aps = approximants(cf, cf.total_quotients() - 1);
        out.push_back({std::move(cf), std::move(z), std::move(aps)});
    }
    return out;
}

template <CoefficientField F>
bool error_identity_holds(const Theorem1Case<F>& tc) {
    // direct exact valuation of z - p_n/q_n against the closed form, all n
    Rational twice_sum(0);
    for (std::size_t n = 0; n + 1 < tc.cf.total_quotients(); ++n) {
        auto num = tc.z.num() * tc.aps[n].q - tc.z.den() * tc.aps[n].p;
        auto den_val = (tc.z.den() * tc.aps[n].q).valuation();
        if (num.is_zero()) return false;
        Rational direct = (num.valuation() - den_val).value();
        Rational closed = tc.cf.quotient(n + 1).degree().value() + twice_sum;
        if (direct != closed) return false;
        auto d = tc.cf.quotient(n + 1).degree().value();
        twice_sum += d + d;
    }
    return true;
}

template <CoefficientField F>
bool degree_sum_and_determinant_hold(const F& fld, const Theorem1Case<F>& tc) {
    Rational sum(0);
    for (std::size_t k = 0; k < tc.aps.size(); ++k) {
        auto prev_p = k == 0 ? PuiseuxPoly<F>::one(fld) : tc.aps[k - 1].p;
        auto prev_q = k == 0 ? PuiseuxPoly<F>::zero(fld) : tc.aps[k - 1].q;
        auto det = tc.aps[k].p * prev_q - prev_p * tc.aps[k].q;
        auto expect =
            k % 2 == 1 ? PuiseuxPoly<F>::one(fld) : -PuiseuxPoly<F>::one(fld);
        if (det != expect) return false;
        if (k >= 1) sum += tc.cf.quotient(k).degree().value();
        if (tc.aps[k].q.degree() != ExtRat(sum)) return false;
    }
    return true;
}

std::vector<Theorem1Case<QQ>>& corpus_q() {
    static auto c = [] {
        Rng rng(1001);
        return theorem1_corpus(QQ{}, rng, 100);
    }();
    return c;
}
std::vector<Theorem1Case<GF>>& corpus_f5() {
    static auto c = [] {
        Rng rng(1002);
        return theorem1_corpus(GF(5), rng, 100);
    }();
    return c;
}

// ---------------------------------------------------------------- 2
void criterion_error_identity(Check& c) {
    auto& cq = corpus_q();
    auto& c5 = corpus_f5();
    std::size_t bad = par::count_failures(
        cq.size(), [&](std::size_t i) { return error_identity_holds(cq[i]); });
    bad += par::count_failures(c5.size(),
                               [&](std::size_t i) { return error_identity_holds(c5[i]); });
    c.require(bad == 0, std::to_string(bad) + " corpus failures");
    c.detail << "200 random CFs, all n, exact equality";
}

// ---------------------------------------------------------------- 3
void criterion_degree_determinant(Check& c) {
    auto& cq = corpus_q();
    auto& c5 = corpus_f5();
    std::size_t bad = par::count_failures(cq.size(), [&](std::size_t i) {
        return degree_sum_and_determinant_hold(QQ{}, cq[i]);
    });
    bad += par::count_failures(c5.size(), [&](std::size_t i) {
        return degree_sum_and_determinant_hold(GF(5), c5[i]);
    });
    c.require(bad == 0, std::to_string(bad) + " corpus failures");
    c.detail << "degree sums and determinants exact on the same corpus";
}

// ---------------------------------------------------------------- 4
void criterion_roundtrip(Check& c) {
    Rng rng(1004);
    std::vector<CFExpression<QQ>> cfs;
    std::vector<RationalPuiseux<QQ>> fracs;
    for (int i = 0; i < 250; ++i) cfs.push_back(testsupport::rand_cf(QQ{}, rng, 5, 1, 6));
    for (int i = 0; i < 250; ++i) fracs.push_back(testsupport::rand_fraction(QQ{}, rng, 4, 7));
    std::size_t bad = par::count_failures(cfs.size(), [&](std::size_t i) {
        return expand_exact(evaluate_exact(cfs[i])) == cfs[i];
    });
    bad += par::count_failures(fracs.size(), [&](std::size_t i) {
        return evaluate_exact(expand_exact(fracs[i])) == fracs[i];
    });
    c.require(bad == 0, std::to_string(bad) + " roundtrip failures");
    c.detail << "500 roundtrips exact";
}

// ---------------------------------------------------------------- 5
template <CoefficientField F>
bool brute_force_target(const F& fld, Rng& rng, std::string& why) {
    auto cf = testsupport::rand_cf(fld, rng, 2, 2, 4, 2);
    auto z = evaluate_exact(cf);
    long dz_units = z.degree().is_neg_inf()
                        ? 0
                        : static_cast<long>(
                              mpz_class((z.degree().value() * Rational(2)).num()).get_si());
    long dp = std::max(0l, dz_units) + 3;  // beyond this the hypothesis provably fails
    auto task = scan::make_task(fld, z.num(), z.den(), 2, dp, 3);
    auto res = scan::scan_parallel(task);

    auto aps = approximants(cf, cf.total_quotients() - 1);
    // (a) every comaximal hit is an approximant
    for (const auto& h : res.hits) {
        auto v = RationalPuiseux<F>::reduce(scan::to_poly(fld, h.p, 2),
                                            scan::to_poly(fld, h.q, 2));
        bool found = false;
        for (const auto& ap : aps)
            if (ap.value() == v) found = true;
        if (!found) {
            why = "hit is not an approximant";
            return false;
        }
    }
    // (b) no approximant within the bounds is missed
    for (const auto& ap : aps) {
        auto v = ap.value();
        if (!(v.den().degree() <= ExtRat(Rational(3, 2)))) continue;
        if (!(v.num().degree() <= ExtRat(Rational(dp, 2)))) continue;
        bool found = false;
        for (const auto& h : res.hits) {
            if (RationalPuiseux<F>::reduce(scan::to_poly(fld, h.p, 2),
                                           scan::to_poly(fld, h.q, 2)) == v)
                found = true;
        }
        if (!found) {
            why = "approximant missed by the scan";
            return false;
        }
    }
    return true;
}

void criterion_best_approx_brute_force(Check& c) {
    Rng rng3(1005), rng5(1006);
    GF f3(3), f5(5);
    std::string why;
    for (int i = 0; i < 10; ++i) {
        if (!brute_force_target(f3, rng3, why)) {
            c.require(false, "F_3 target " + std::to_string(i) + ": " + why);
            return;
        }
        if (!brute_force_target(f5, rng5, why)) {
            c.require(false, "F_5 target " + std::to_string(i) + ": " + why);
            return;
        }
    }
    c.detail << "20 targets, zero counterexamples in either direction";
}

// ---------------------------------------------------------------- 6
void criterion_prefix_agreement(Check& c) {
    Rng rng(1007);
    int done = 0;
    for (int i = 0; i < 200; ++i) {
        SeriesStream<QQ> z = i % 2 == 0
                                 ? from_rational(testsupport::rand_fraction(QQ{}, rng, 3, 5))
                                 : sqrt_t_plus_1();
        long k = testsupport::rand_int(rng, 3, 15);
        auto zp = testsupport::stream_plus_term(z, Rational(-k), Rational(1));
        Rational cutoff(-k - 20);
        auto pa = prefix_agreement_bound(z, zp, cutoff);
        if (!pa.m.has_value()) {
            c.require(false, "identical verdict on distinct streams");
            return;
        }
        if (pa.separation != ExtRat(Rational(k))) {
            c.require(false, "separation mismatch");
            return;
        }
        if (*pa.m < 0) continue;  // cannot happen here: nu = k > 0
        auto a = expand_stream(z, static_cast<std::size_t>(*pa.m), cutoff).expression();
        auto b = expand_stream(zp, static_cast<std::size_t>(*pa.m), cutoff).expression();
        bool agree = a.f0() == b.f0() &&
                     a.partials().size() >= static_cast<std::size_t>(*pa.m) &&
                     b.partials().size() >= static_cast<std::size_t>(*pa.m);
        for (long j = 0; agree && j < *pa.m; ++j)
            agree = a.partials()[j] == b.partials()[j];
        if (!agree) {
            c.require(false, "expansions disagree within the guaranteed bound");
            return;
        }
        ++done;
    }
    c.detail << done << "/200 pairs achieved the guaranteed m";
}

// ---------------------------------------------------------------- 7
void criterion_metric_action(Check& c) {
    Rng rng(1008);
    std::vector<BerkPoint<QQ>> pts;
    for (int i = 0; i < 3000; ++i) pts.push_back(testsupport::rand_point(QQ{}, rng));
    std::size_t bad = par::count_failures(1000, [&](std::size_t i) {
        const auto &a = pts[3 * i], &b = pts[3 * i + 1], &d = pts[3 * i + 2];
        if (distance(a, b) != distance(b, a)) return false;
        if (distance(a, a) != Rational(0)) return false;
        if (a != b && !(distance(a, b) > Rational(0))) return false;
        return distance(a, d) <= distance(a, b) + distance(b, d);
    });
    c.require(bad == 0, std::to_string(bad) + " triangle failures");

    std::vector<MobiusElt<QQ>> words;
    std::vector<BerkPoint<QQ>> xs, ys;
    for (int i = 0; i < 500; ++i) {
        words.push_back(testsupport::rand_word(QQ{}, rng, 6));
        xs.push_back(testsupport::rand_point(QQ{}, rng));
        ys.push_back(testsupport::rand_point(QQ{}, rng));
    }
    std::size_t bad2 = par::count_failures(500, [&](std::size_t i) {
        auto gx = words[i].act(xs[i]);
        auto gy = words[i].act(ys[i]);
        if (distance(gx, gy) != distance(xs[i], ys[i])) return false;  // isometry
        auto r1 = reduce_to_ray(xs[i]);
        auto r2 = reduce_to_ray(gx);
        if (r1.v != r2.v) return false;  // pi_0 invariance
        // witness soundness for both reductions
        if (!(r1.witness.act(xs[i]) == BerkPoint<QQ>(qq, {}, -r1.v))) return false;
        return r2.witness.act(gx) == BerkPoint<QQ>(qq, {}, -r2.v);
    });
    c.require(bad2 == 0, std::to_string(bad2) + " action failures");
    c.detail << "1000 triples, 500 words, all exact";
}

// ---------------------------------------------------------------- 8
void criterion_promenade(Check& c) {
    Rng rng(1009);
    std::size_t bad = 0;
    for (int i = 0; i < 100 && bad == 0; ++i) {
        auto cf = testsupport::rand_cf(QQ{}, rng, 4, 2, 6);
        auto prom = promenade_of_expansion(cf, ExpandStatus::Ended, Rational(1000));
        Rational twice_sum(0);
        for (std::size_t n = 1; n < cf.total_quotients(); ++n) {
            Rational d = cf.quotient(n).degree().value();
            const auto& peak = prom.points[2 * n - 1];
            if (peak.v != d) ++bad;              // maxima = degrees
            if (peak.t != d + twice_sum) ++bad;  // positions = Theorem 1 valuations
            twice_sum += d + d;
        }
    }
    c.require(bad == 0, "maxima/position failures");

    // pointwise cross-check against independent ray reductions
    auto s = sqrt_t_plus_1();
    auto st = expand_stream(s, 12, Rational(-40));
    auto prom = promenade_of_expansion(st.expression(), st.status, Rational(10));
    int checked = 0;
    for (int i = 0; checked < 20; ++i) {
        Rational tau(2 * i + 1, 4);  // sample strictly inside the computed domain
        if (tau > prom.domain_end()) break;
        auto point = BerkPoint<QQ>::from_stream(s, tau);
        if (reduce_to_ray(point).v != prom.value_at(tau)) {
            c.require(false, "promenade value disagrees with reduce_to_ray");
            return;
        }
        ++checked;
    }
    c.require(checked == 20, "only " + std::to_string(checked) + " pointwise samples");
    c.detail << "100 expansions + 20 pointwise reductions";
}

// ---------------------------------------------------------------- 9
bool ball_prefix_case(std::size_t seed) {
    Rng rng(3000 + seed);
    auto cf = testsupport::rand_cf(QQ{}, rng, 3, 1, 4);
    auto ball = ball_of_prefix(cf);
    for (int probe = 0; probe < 5; ++probe) {
        auto ext_partials = cf.partials();
        ext_partials.push_back(testsupport::rand_partial(QQ{}, rng, 3, 6));
        CFExpression<QQ> ext(cf.f0(), ext_partials, true);
        auto zin = evaluate_exact(ext);
        if (!ball.contains(from_rational(zin))) return false;
        auto got = expand_exact(zin);
        bool pref = got.f0() == cf.f0();
        for (std::size_t k = 0; pref && k < cf.partials().size(); ++k)
            pref = got.partials()[k] == cf.partials()[k];
        if (!pref) return false;
    }
    for (int probe = 0; probe < 5; ++probe) {
        Rational s = ball.radius() - Rational(testsupport::rand_int(rng, 0, 4));
        if (s.sign() < 0) s = Rational(0);
        auto zout = evaluate_exact(cf) -
                    RationalPuiseux<QQ>::reduce(
                        PuiseuxPoly<QQ>::constant(qq, Rational(probe + 1)),
                        PuiseuxPoly<QQ>::t_power(qq, s));
        if (ball.contains(from_rational(zout))) return false;
        auto got = expand_exact(zout);
        bool pref =
            got.f0() == cf.f0() && got.partials().size() >= cf.partials().size();
        for (std::size_t k = 0; pref && k < cf.partials().size(); ++k)
            pref = got.partials()[k] == cf.partials()[k];
        if (pref) return false;
    }
    return true;
}

void criterion_ball_prefix(Check& c) {
    std::size_t bad = par::count_failures(100, ball_prefix_case);
    c.require(bad == 0, std::to_string(bad) + " prefix/membership failures");
    c.detail << "100 prefixes x 10 probes, both directions";
}

// ---------------------------------------------------------------- 10
void criterion_typeiv(Check& c) {
    // IVa family: D_i = 2^-i, bound 1, radii -> 2
    auto seq = from_convergent_cf<QQ>(
        PuiseuxPoly<QQ>::zero(qq),
        [](std::size_t i) { return PuiseuxPoly<QQ>::t_power(QQ{}, Rational(1, 1l << i)); },
        Rational(1), 12);
    c.require(seq.radius_limit() == Rational(2), "radius limit != 2");
    for (std::size_t n = 1; n <= 12; ++n) {
        Rational expect = Rational(2) - Rational(2, 1l << n);
        if (seq.ball(n - 1).radius() != expect) {
            c.require(false, "radius schedule mismatch at " + std::to_string(n));
            return;
        }
    }
    std::size_t not_excluded = par::count_failures(50, [&](std::size_t i) {
        Rng local(2000 + i);
        auto z = testsupport::rand_fraction(QQ{}, local, 2, 4);
        return exclude_point(seq, from_rational(z), 12).excluded;
    });
    c.require(not_excluded == 0,
              std::to_string(not_excluded) + " sampled points not excluded");

    // e69 default: radii -1/2, -1/3, ... -> 0 from below; stabilized witness
    auto e69 = e69_sequence(qq, [](std::size_t i) { return Rational(1, (long)i); }, 10);
    for (std::size_t n = 1; n <= 10; ++n) {
        if (e69.ball(n - 1).radius() != Rational(-1, (long)(n + 1))) {
            c.require(false, "e69 radius mismatch");
            return;
        }
    }
    c.require(e69.ball(9).radius() < Rational(0), "radii must stay below 0");
    auto w = ivb_witness(e69);
    c.require(w.stabilized, "e69 witness did not stabilize");
    c.require(w.prefix.empty(), "e69 stabilized prefix should be the f0 stage");
    auto w2 = ivb_witness(seq);
    c.require(!w2.stabilized, "convergent-cf witness must keep growing");
    c.detail << "nesting verified, radii exact, 50 exclusions, witness stabilized";
}

// ---------------------------------------------------------------- 11
void criterion_periodicity(Check& c) {
    const Rational cutoff(-40);
    const Rational threshold = -cutoff - Rational(5);

    // sqrt(t+1): (preperiod 1, period 1), explicit residual z^2 - (t+1)
    auto st = expand_stream(sqrt_t_plus_1(), 60, cutoff);
    auto res = detect_periodicity(st.expression(), 6, cutoff, threshold);
    c.require(res.has_value(), "no periodicity found for sqrt(t+1)");
    if (!res) return;
    c.require(res->preperiod == 1 && res->period == 1, "wrong (preperiod, period)");
    c.require(res->verified, "derived quadratic not verified at threshold");

    auto zhat = sqrt_t_plus_1().truncate(cutoff);
    auto direct = zhat * zhat - TruncatedSeries<QQ>::exact(t1 + one_q);
    c.require(direct.terms().empty(), "z^2 - (t+1) has a visible term");
    c.require(-direct.cutoff() > ExtRat(threshold), "explicit residual below threshold");

    // a random 3-periodic CF verified against its derived quadratic
    Rng rng(1012);
    auto f0 = testsupport::rand_poly(QQ{}, rng, 1, 1, false);
    std::vector<PuiseuxPoly<QQ>> block;
    for (int i = 0; i < 3; ++i) block.push_back(testsupport::rand_partial(QQ{}, rng, 2, 2));
    std::vector<PuiseuxPoly<QQ>> partials;
    for (int rep = 0; rep < 30; ++rep)
        for (const auto& f : block) partials.push_back(f);
    CFExpression<QQ> periodic(f0, partials, false);
    auto res2 = detect_periodicity(periodic, 5, cutoff, threshold);
    c.require(res2.has_value(), "no periodicity found for the 3-periodic CF");
    if (!res2) return;
    c.require(res2->period == 3 || (res2->period < 3),
              "period exceeds the construction");
    c.require(res2->verified, "3-periodic quadratic not verified");
    c.detail << "residual floors " << res->residual_floor.str() << " and "
             << res2->residual_floor.str() << " > " << threshold.str();
}

struct Criterion {
    int id;
    std::string title;
    double budget_sec;
    std::function<void(Check&)> fn;
};

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "sqrt(t+1) expansion: f0 = t^(1/2), f_i = 2*t^(1/2) for i <= 12", 1.0,
         criterion_sqrt_expansion},
        {2, "error identity nu(z - p_n/q_n) = deg f_{n+1} + 2 deg q_n", 30.0,
         criterion_error_identity},
        {3, "degree sums and determinants of approximants", 30.0,
         criterion_degree_determinant},
        {4, "expand/evaluate roundtrips on 500 random inputs", 30.0, criterion_roundtrip},
        {5, "exhaustive best-approximation scan over F_3 and F_5", 120.0,
         criterion_best_approx_brute_force},
        {6, "prefix agreement bound achieved on 200 pairs", 60.0,
         criterion_prefix_agreement},
        {7, "metric axioms, isometry, pi_0 invariance, witnesses", 60.0,
         criterion_metric_action},
        {8, "promenade maxima equal degrees at the error valuations", 60.0,
         criterion_promenade},
        {9, "ball membership iff expansion prefix", 60.0, criterion_ball_prefix},
        {10, "type IV families: nesting, radii, exclusions, witness", 30.0,
         criterion_typeiv},
        {11, "periodicity detected and verified against quadratics", 60.0,
         criterion_periodicity},
    };

    int failures = 0;
    for (auto& cr : criteria) {
        Check check;
        auto start = std::chrono::steady_clock::now();
        try {
            cr.fn(check);
        } catch (const std::exception& e) {
            check.require(false, std::string("exception: ") + e.what());
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > cr.budget_sec)
            check.require(false, "runtime " + std::to_string(secs) + "s over budget");
        std::printf("[%s] criterion %2d: %s (%s; %.2fs)\n", check.ok ? "PASS" : "FAIL",
                    cr.id, cr.title.c_str(), check.detail.str().c_str(), secs);
        if (!check.ok) ++failures;
    }
    if (failures)
        std::printf("%d criterion(s) FAILED\n", failures);
    else
        std::printf("all %zu criteria passed\n", criteria.size());
    return failures == 0 ? 0 : 1;
}
