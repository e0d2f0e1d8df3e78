#include <gtest/gtest.h>

#include <cmath>

#include "ietx/scalar.hpp"
#include "support.hpp"

namespace ietx {
namespace {

using testing::F;
using testing::fixed_config;
using testing::Gen;
using testing::Q;
using testing::rational_config;

mpq_class pow2q(int e) {
  mpz_class p;
  mpz_setbit(p.get_mpz_t(), static_cast<mp_bitcnt_t>(e < 0 ? -e : e));
  return e < 0 ? mpq_class(1, p) : mpq_class(p, 1);
}

TEST(ModOne, IntegerShift) {
  EXPECT_EQ(mod_one(Q(3, 2)), Q(1, 2));
  EXPECT_EQ(mod_one(Q(7, 3)), Q(1, 3));
  EXPECT_EQ(mod_one(F(3, 2)), F(1, 2));
}

TEST(ModOne, NegativeWrap) {
  EXPECT_EQ(mod_one(Q(-1, 4)), Q(3, 4));
  EXPECT_EQ(mod_one(F(-1, 4)), F(3, 4));
  EXPECT_EQ(mod_one(Q(-3)), Q(0));
}

TEST(ModOne, RangeAndCongruenceProperty) {
  Gen gen(11);
  for (int i = 0; i < 500; ++i) {
    const mpq_class x = testing::ratio(gen.range(-50000, 50000), gen.range(1, 997));
    const Scalar r = mod_one(Scalar::from_rational(x));
    ASSERT_GE(r.sign(), 0);
    ASSERT_LT(r, Q(1));
    const mpq_class diff = x - r.exact();
    ASSERT_EQ(diff.get_den(), 1);
  }
}

TEST(ParseScalar, RationalText) {
  const Scalar s = parse_scalar("1/3", rational_config());
  EXPECT_TRUE(s.is_rational());
  EXPECT_EQ(s.exact(), mpq_class(1, 3));
  EXPECT_EQ(parse_scalar("-6/8", rational_config()).exact(), mpq_class(-3, 4));
  EXPECT_EQ(parse_scalar("0.125", rational_config()).exact(), mpq_class(1, 8));
  EXPECT_EQ(parse_scalar("25e-2", rational_config()).exact(), mpq_class(1, 4));
}

TEST(ParseScalar, DyadicDecimalIsExactInFixedPoint) {
  const Scalar s = parse_scalar("0.5", fixed_config(64));
  EXPECT_TRUE(s.is_fixed());
  EXPECT_EQ(s.precision_bits(), 64);
  EXPECT_EQ(s.exact(), mpq_class(1, 2));
}

TEST(ParseScalar, ZeroDenominatorIsAnError) {
  EXPECT_THROW(parse_scalar("2/0", rational_config()), ParseError);
  EXPECT_THROW(parse_scalar("2/0", fixed_config()), ParseError);
}

TEST(ParseScalar, MalformedTextIsAnError) {
  for (const char* bad : {"", "abc", "1/", "/3", "1.2.3", "0x10", "1e"}) {
    EXPECT_THROW(parse_scalar(bad, rational_config()), ParseError) << bad;
  }
}

TEST(ParseScalar, FixedPointIsCorrectlyRounded) {
  // 1/3 at 64 bits: the nearest mantissa to 2^64 / 3.
  const Scalar s = parse_scalar("1/3", fixed_config(64));
  const mpq_class err = abs(s.exact() - mpq_class(1, 3));
  EXPECT_LE(err, pow2q(-65));
}

TEST(FormatScalar, RoundTripsBothBackends) {
  Gen gen(5);
  for (int i = 0; i < 200; ++i) {
    const mpq_class q = testing::ratio(gen.range(-10000, 10000), gen.range(1, 9999));
    const Scalar r = Scalar::from_rational(q);
    EXPECT_EQ(parse_scalar(format_scalar(r), rational_config()), r);
    for (int bits : {64, 100, 256}) {
      const Scalar f = Scalar::from_ratio(q, fixed_config(bits));
      EXPECT_EQ(parse_scalar(format_scalar(f), fixed_config(bits)).mantissa(), f.mantissa());
    }
  }
  EXPECT_EQ(format_scalar(Q(2, 4)), "1/2");
  EXPECT_EQ(format_scalar(Q(3)), "3/1");
}

TEST(Arithmetic, RationalIsExact) {
  EXPECT_EQ(Q(1, 3) + Q(1, 6), Q(1, 2));
  EXPECT_EQ(Q(1, 3) * Q(3, 5), Q(1, 5));
  EXPECT_EQ(Q(1, 3) / Q(2, 3), Q(1, 2));
  EXPECT_EQ(-Q(1, 3), Q(-1, 3));
  EXPECT_THROW(Q(1) / Q(0), std::domain_error);
}

TEST(Arithmetic, FixedPointErrorBoundProperty) {
  Gen gen(7);
  const int bits = 128;
  for (int i = 0; i < 500; ++i) {
    const mpq_class a = testing::ratio(gen.range(1, 1000), gen.range(1, 1000));
    const mpq_class b = testing::ratio(gen.range(1, 1000), gen.range(1, 1000));
    const Scalar fa = Scalar::from_ratio(a, fixed_config(bits));
    const Scalar fb = Scalar::from_ratio(b, fixed_config(bits));
    // Sums are exact on the rounded inputs; products and quotients add at
    // most half an ulp each.
    EXPECT_EQ((fa + fb).exact(), fa.exact() + fb.exact());
    EXPECT_LE(abs((fa * fb).exact() - fa.exact() * fb.exact()), pow2q(-bits - 1));
    EXPECT_LE(abs((fa / fb).exact() - fa.exact() / fb.exact()), pow2q(-bits - 1));
  }
}

TEST(Arithmetic, BackendsNeverMix) {
  EXPECT_THROW(Q(1, 2) + F(1, 2), BackendMismatch);
  EXPECT_THROW((void)(F(1, 2, 64) < F(1, 2, 128)), BackendMismatch);
  EXPECT_THROW((void)(Q(1, 2) == F(1, 2)), BackendMismatch);
}

TEST(Numerics, PrecisionBelowSixtyFourRejected) {
  NumericsConfig c{Backend::fixed, 32};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_NO_THROW(fixed_config(64).validate());
}

TEST(Numerics, BackendNames) {
  EXPECT_EQ(parse_backend("rational"), Backend::rational);
  EXPECT_EQ(parse_backend("fixed"), Backend::fixed);
  EXPECT_EQ(backend_name(Backend::fixed), "fixed");
  EXPECT_THROW(parse_backend("float"), std::invalid_argument);
}

TEST(Tolerance, PerBackend) {
  EXPECT_TRUE(tolerance(rational_config()).is_zero());
  EXPECT_EQ(tolerance(fixed_config(256)).exact(), pow2q(-240));
  EXPECT_TRUE(within(F(1, 3), F(1, 3) + tolerance(fixed_config()), tolerance(fixed_config())));
}

TEST(CircleDistance, WrapsAround) {
  EXPECT_EQ(circle_distance(Q(1, 10), Q(9, 10)), Q(1, 5));
  EXPECT_EQ(circle_distance(Q(0), Q(1, 2)), Q(1, 2));
  EXPECT_EQ(circle_distance(Q(1, 4), Q(1, 4)), Q(0));
}

TEST(SqrtFixed, IsTheFloorOfTheRoot) {
  Gen gen(3);
  for (int i = 0; i < 200; ++i) {
    const mpq_class v = testing::ratio(gen.range(0, 100000), gen.range(1, 1000));
    const Scalar r = sqrt_fixed(Scalar::from_rational(v), 200);
    const mpq_class lo = r.exact();
    const mpq_class hi = lo + pow2q(-200);
    EXPECT_LE(lo * lo, v);
    EXPECT_GT(hi * hi, v);
  }
  EXPECT_THROW(sqrt_fixed(Q(-1), 64), std::domain_error);
}

TEST(Constants, GoldenConjugateSolvesItsQuadratic) {
  for (int bits : {64, 256, 512}) {
    const mpq_class g = golden_conjugate(bits).exact();
    // g^2 + g - 1 = 0 for the exact constant; rounding moves it by < 2^-P * 3.
    EXPECT_LT(abs(g * g + g - 1), 3 * pow2q(-bits)) << bits;
    EXPECT_NEAR(g.get_d(), (std::sqrt(5.0) - 1) / 2, 1e-15);
  }
  const mpq_class s = sqrt_two(256).exact();
  EXPECT_LT(abs(s * s - 2), 4 * pow2q(-256));
}

TEST(UnitToDouble, TruncatesToFiftyThreeBits) {
  EXPECT_EQ(unit_to_double(Q(1, 2)), 0.5);
  EXPECT_EQ(unit_to_double(Q(1, 3)), unit_to_double(F(1, 3)));
  const double d = unit_to_double(Q(1, 3));
  EXPECT_LE(d, 1.0 / 3.0);
  EXPECT_GT(d + std::ldexp(1.0, -53), 1.0 / 3.0);
}

TEST(Floor, RoundsTowardNegativeInfinity) {
  EXPECT_EQ(Q(-1, 3).floor(), -1);
  EXPECT_EQ(Q(7, 3).floor(), 2);
  EXPECT_EQ(F(-1, 3).floor(), -1);
}

}  // namespace
}  // namespace ietx
