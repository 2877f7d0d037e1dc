#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pcf/fields.hpp"
#include "support.hpp"

using namespace pcf;
using testsupport::Rng;

TEST_CASE("rationals are canonical") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(0).den() == 1);
    CHECK(Rational(3, 2).str() == "3/2");
    CHECK(Rational(-4, 2).str() == "-2");
    CHECK_THROWS_AS(Rational(1, 0), DivisionByZero);
    CHECK(Rational::from_string("-3/6") == Rational(-1, 2));
}

TEST_CASE("extended rationals order and arithmetic") {
    ExtRat a(Rational(1, 2));
    CHECK(ExtRat::neg_inf() < a);
    CHECK(a < ExtRat::pos_inf());
    CHECK(ExtRat::neg_inf() < ExtRat::pos_inf());
    CHECK(-ExtRat::pos_inf() == ExtRat::neg_inf());
    CHECK((a + ExtRat::pos_inf()).is_pos_inf());
    CHECK((ExtRat::neg_inf() + a).is_neg_inf());
    CHECK_THROWS_AS(ExtRat::pos_inf() + ExtRat::neg_inf(), DomainError);
    CHECK(max(a, ExtRat::neg_inf()) == a);
    CHECK(min(a, ExtRat(Rational(1))) == a);
}

// Generic field axiom suite, run over both shipped instances.
template <CoefficientField F>
static void field_axioms(const F& fld, Rng& rng) {
    for (int i = 0; i < 200; ++i) {
        auto a = testsupport::rand_coeff(fld, rng);
        auto b = testsupport::rand_coeff(fld, rng);
        auto c = testsupport::rand_coeff(fld, rng);
        CHECK(fld.eq(fld.add(a, b), fld.add(b, a)));
        CHECK(fld.eq(fld.mul(a, b), fld.mul(b, a)));
        CHECK(fld.eq(fld.add(fld.add(a, b), c), fld.add(a, fld.add(b, c))));
        CHECK(fld.eq(fld.mul(fld.mul(a, b), c), fld.mul(a, fld.mul(b, c))));
        CHECK(fld.eq(fld.mul(a, fld.add(b, c)), fld.add(fld.mul(a, b), fld.mul(a, c))));
        CHECK(fld.eq(fld.add(a, fld.zero()), a));
        CHECK(fld.eq(fld.mul(a, fld.one()), a));
        CHECK(fld.eq(fld.add(a, fld.neg(a)), fld.zero()));
        if (!fld.is_zero(a)) CHECK(fld.eq(fld.mul(a, fld.inv(a)), fld.one()));
    }
    CHECK_THROWS_AS(fld.inv(fld.zero()), DivisionByZero);
}

TEST_CASE("field axioms hold for Q") {
    Rng rng(7);
    field_axioms(QQ{}, rng);
}

TEST_CASE("field axioms hold for F_5 and F_7") {
    Rng rng(8);
    field_axioms(GF(5), rng);
    field_axioms(GF(7), rng);
}

TEST_CASE("prime field constructor rejects non-primes") {
    CHECK_THROWS_AS(GF(1), DomainError);
    CHECK_THROWS_AS(GF(6), DomainError);
    CHECK_NOTHROW(GF(2));
}

TEST_CASE("canonical square roots") {
    QQ q;
    CHECK(*q.sqrt(Rational(4, 9)) == Rational(2, 3));
    CHECK(!q.sqrt(Rational(2)).has_value());
    CHECK(!q.sqrt(Rational(-1)).has_value());

    GF f13(13);
    for (unsigned long a = 0; a < 13; ++a) {
        auto r = f13.sqrt(a);
        if (r) {
            CHECK(f13.mul(*r, *r) == a);
            CHECK(*r <= 13 - *r);  // canonical representative
        }
    }
    int residues = 0;
    for (unsigned long a = 1; a < 13; ++a)
        if (f13.sqrt(a)) ++residues;
    CHECK(residues == 6);
}
