#include "doctest.h"

#include "cpn/real.hpp"
#include "test_util.hpp"

using namespace cpn;
using cpn::test::errc_of;

namespace {
const Surd golden(-1, 1, 5, 2);
RatInterval iv(long nlo, long nhi, long den) {
    return RatInterval(BigRat(BigInt(nlo), BigInt(den)), BigRat(BigInt(nhi), BigInt(den)));
}
}

TEST_CASE("interval sign and floor are gated") {
    CHECK(iv(1, 3, 4).sign() == 1);
    CHECK(iv(-3, -1, 4).sign() == -1);
    CHECK_FALSE(iv(-1, 1, 4).sign().has_value());
    CHECK(RatInterval(BigRat(0)).sign() == 0);

    CHECK(iv(1, 2, 5).floor() == BigInt(0));
    CHECK(iv(9, 11, 10).floor() == std::nullopt);
    CHECK(iv(-11, -9, 10).floor() == std::nullopt);
    CHECK(iv(-9, -1, 10).floor() == BigInt(-1));
}

TEST_CASE("interval arithmetic is outward-correct") {
    RatInterval prod = iv(1, 2, 1) * iv(-3, -1, 1);
    CHECK(prod.lo() == BigRat(-6));
    CHECK(prod.hi() == BigRat(-1));

    RatInterval inv = iv(1, 2, 2).inverse();  // [1/2,1] -> [1,2]
    CHECK(inv.lo() == BigRat(1));
    CHECK(inv.hi() == BigRat(2));
    CHECK(errc_of([] { (void)iv(-1, 1, 2).inverse(); }) == Errc::horizon_exceeded);

    RatInterval sum = iv(1, 2, 3) + iv(-1, 1, 3);
    CHECK(sum.lo() == BigRat(0));
    CHECK(sum.hi() == BigRat(1));
}

TEST_CASE("certified precision accounting") {
    CHECK(RatInterval(BigRat(5)).certified_bits() >= 1000000);
    CHECK(iv(0, 1, 1024).certified_bits() >= 9);
    CHECK(iv(0, 1, 2).certified_bits() <= 1);
}

TEST_CASE("exact reals stay exact through arithmetic") {
    Real g{golden};
    Real prod = g * g;
    CHECK(prod.is_exact());
    CHECK(prod.surd() == Surd(1) - golden);
    CHECK((g - g).is_zero());
    CHECK(g.sign() == 1);
    CHECK((-g).sign() == -1);
    CHECK(g.floor() == 0);
    CHECK((-g).floor() == -1);
    CHECK(Real(Surd(1, 1, 3, 2)).frac().surd() == Surd(-1, 1, 3, 2));
}

TEST_CASE("mixing exact and enclosed values keeps containment") {
    Real g{golden};
    Real e{iv(1, 2, 1000)};  // [0.001, 0.002]
    Real sum = g + e;
    CHECK_FALSE(sum.is_exact());
    RatInterval enc = sum.enclosure(64);
    CHECK(Surd(enc.lo()) <= golden + Surd(BigRat(1, 1000)));
    CHECK(golden + Surd(BigRat(2, 1000)) <= Surd(enc.hi()));
    CHECK(sum.sign() == 1);
    CHECK(sum.floor() == 0);
}

TEST_CASE("undecidable queries raise the configured error") {
    Real tiny{iv(-1, 1, 1 << 20)};
    CHECK(errc_of([&] { (void)tiny.sign(); }) == Errc::horizon_exceeded);
    CHECK(errc_of([&] { (void)tiny.sign(Errc::undecidable_at_horizon); }) ==
          Errc::undecidable_at_horizon);
    CHECK_FALSE(errc_of([&] { (void)(tiny + Real(BigInt(1))).sign(); }).has_value());
}

TEST_CASE("precision context strings") {
    CHECK(Real(golden).precision_context() == "exact");
    CHECK(Real(iv(0, 1, 1024)).precision_context().substr(0, 5) == "bits:");
}

TEST_CASE("multi-field sums decide sign exactly") {
    MultiReal m;
    m.add(Surd(0, 1, 2, 1));
    m.add(Surd(0, 1, 3, 1));
    m.add(Surd(0, -1, 10, 1));
    CHECK(m.sign() == -1);  // sqrt(2)+sqrt(3) < sqrt(10)

    MultiReal n;
    n.add(Surd(0, 1, 2, 1));
    n.add(Surd(0, 1, 3, 1));
    n.add(Surd(BigRat(-355, 113)));
    CHECK(n.sign() == 1);  // sqrt(2)+sqrt(3) > 355/113
    CHECK(n.floor(Errc::undecidable_at_horizon) == 0);

    MultiReal z;
    z.add(Surd(0, 1, 2, 1));
    z.add(Surd(0, 2, 2, 1));
    z.add(Surd(0, -3, 2, 1));
    CHECK(z.sign() == 0);  // same-field cancellation

    MultiReal f;
    f.add(Surd(0, 1, 2, 1));
    f.add(Surd(0, 1, 3, 1));
    CHECK(f.floor() == 3);  // 3.146...
}

TEST_CASE("multi-field sums with enclosures") {
    MultiReal m;
    m.add(Surd(5));
    m.add(iv(-1, 1, 10));
    CHECK(m.has_fuzz());
    CHECK(m.sign() == 1);

    MultiReal wide;
    wide.add(iv(-1, 1, 1));
    CHECK(errc_of([&] { (void)wide.sign(); }) == Errc::undecidable_at_horizon);
}

TEST_CASE("scaled accumulation matches repeated addition") {
    MultiReal a;
    a.add_scaled(Real(golden), BigInt(7));
    MultiReal b;
    for (int i = 0; i < 7; ++i) b.add(Real(golden));
    CHECK((a + (-b)).sign() == 0);
    CHECK(a.to_double() == doctest::Approx(7 * 0.6180339887).epsilon(1e-9));
}
