#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pcf/typeiv.hpp"
#include "support.hpp"

using namespace pcf;
using testsupport::Rng;

namespace {

QQ q;
const auto one = PuiseuxPoly<QQ>::one(q);

NestedBallSeq<QQ> geometric_seq(std::size_t count, long base = 2) {
    return from_convergent_cf<QQ>(
        PuiseuxPoly<QQ>::zero(q),
        [base](std::size_t i) {
            long den = 1;
            for (std::size_t k = 0; k < i; ++k) den *= base;
            return PuiseuxPoly<QQ>::t_power(QQ{}, Rational(1, den));
        },
        Rational(1, base - 1), count);
}

}  // namespace

TEST_CASE("from_convergent_cf: geometric degrees") {
    auto seq = geometric_seq(8);
    CHECK(seq.certificate() == TypeIVCertificate::CfConvergent);
    CHECK(seq.count() == 8);
    // radii 2 sum_{i<=n} 2^-i -> 2
    Rational expect(0);
    for (std::size_t n = 0; n < 8; ++n) {
        expect += Rational(2, 1l << (n + 1));
        CHECK(seq.ball(n).radius() == expect);
    }
    CHECK(seq.radius_limit() == Rational(2));

    // base 3, bound 1/2: radii -> 1
    auto seq3 = geometric_seq(6, 3);
    CHECK(seq3.radius_limit() == Rational(1));
    CHECK(seq3.ball(5).radius() < Rational(1));
}

TEST_CASE("from_convergent_cf rejects divergent input") {
    auto th = PuiseuxPoly<QQ>::t_power(q, Rational(1, 2));
    CHECK_THROWS_AS(from_convergent_cf<QQ>(
                        PuiseuxPoly<QQ>::zero(q), [&](std::size_t) { return th; },
                        Rational(10), 50),
                    DomainError);
}

TEST_CASE("e69 family: spec schedule") {
    auto seq = e69_sequence(q, [](std::size_t i) { return Rational(1, (long)i); }, 4);
    CHECK(seq.certificate() == TypeIVCertificate::E69Family);
    REQUIRE(seq.count() == 4);
    CHECK(seq.ball(0).radius() == Rational(-1, 2));
    CHECK(seq.ball(1).radius() == Rational(-1, 3));
    CHECK(seq.ball(2).radius() == Rational(-1, 4));
    CHECK(seq.ball(3).radius() == Rational(-1, 5));
    CHECK(seq.ball(3).center_terms().size() == 4);

    // alternative schedule
    auto seq2 = e69_sequence(q, [](std::size_t i) { return Rational(1, 1l << i); }, 3);
    CHECK(seq2.ball(0).radius() == Rational(-1, 4));

    // single ball is trivially nested
    CHECK_NOTHROW(e69_sequence(q, [](std::size_t i) { return Rational(1, (long)i); }, 1));

    // non-decreasing schedules are rejected
    CHECK_THROWS_AS(e69_sequence(q, [](std::size_t) { return Rational(1, 2); }, 3),
                    DomainError);
}

TEST_CASE("exclusion of sampled points") {
    auto seq = e69_sequence(q, [](std::size_t i) { return Rational(1, (long)i); }, 8);
    // z = t + t^(1/2): first failure at n = 3
    auto z = SeriesStream<QQ>::from_terms(
        q, {{Rational(1), Rational(1)}, {Rational(1, 2), Rational(1)}});
    auto r = exclude_point(seq, z, 8);
    CHECK(r.excluded);
    CHECK(r.index == 3);

    // a center b_n is excluded once the next schedule term bites
    auto b2 = SeriesStream<QQ>::from_terms(
        q, {{Rational(1), Rational(1)}, {Rational(1, 2), Rational(1)}});
    CHECK(exclude_point(seq, b2, 8).excluded);

    // far-away point: excluded at 1
    auto far = SeriesStream<QQ>::from_terms(q, {{Rational(3), Rational(1)}});
    auto rf = exclude_point(seq, far, 8);
    CHECK(rf.excluded);
    CHECK(rf.index == 1);

    // the partial-sum stream itself survives every ball
    auto center = SeriesStream<QQ>(q, [i = std::make_shared<long>(0)]() mutable {
        ++*i;
        return std::optional<Term<QQ>>(Term<QQ>{Rational(1, *i), Rational(1)});
    });
    auto rc = exclude_point(seq, center, 8);
    CHECK(!rc.excluded);
}

TEST_CASE("exclusion on the convergent-cf family") {
    Rng rng(51);
    auto seq = geometric_seq(10);
    int excluded = 0;
    for (int i = 0; i < 30; ++i) {
        auto z = testsupport::rand_fraction(QQ{}, rng, 2, 4);
        auto r = exclude_point(seq, from_rational(z), 10);
        if (r.excluded) ++excluded;
    }
    CHECK(excluded == 30);  // every bounded-height rational point falls out
}

TEST_CASE("ivb witness: stabilizing vs growing prefixes") {
    auto e69 = e69_sequence(q, [](std::size_t i) { return Rational(1, (long)i); }, 6);
    auto w = ivb_witness(e69);
    CHECK(w.stabilized);
    CHECK(w.prefix.empty());
    CHECK(w.stable_from == 0);
    for (std::size_t n = 0; n < w.tails.size(); ++n) {
        CHECK(w.tails[n].radius() < Rational(0));
        CHECK(w.tails[n].center_terms().empty());  // shifted to the origin
        REQUIRE(w.shifts[n].has_value());
    }
    // the shifted tails are themselves nested
    for (std::size_t n = 0; n + 1 < w.tails.size(); ++n)
        CHECK(lies_above(w.tails[n].point(), w.tails[n + 1].point()));

    auto iva = geometric_seq(8);
    auto w2 = ivb_witness(iva);
    CHECK(!w2.stabilized);

    auto single = e69_sequence(q, [](std::size_t i) { return Rational(1, (long)i); }, 1);
    CHECK(ivb_witness(single).stabilized);
}

TEST_CASE("nesting is verified for every produced pair") {
    // sanity on the shipped families over both fields
    GF f5(5);
    auto seq5 = e69_sequence(f5, [](std::size_t i) { return Rational(1, (long)i); }, 6);
    CHECK(seq5.count() == 6);
    auto seqq = geometric_seq(8);
    for (std::size_t n = 0; n + 1 < seqq.count(); ++n)
        CHECK(lies_above(seqq.ball(n).point(), seqq.ball(n + 1).point()));
}
