#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "catent/corpus.hpp"
#include "catent/sl2z_dynamics.hpp"

using namespace catent;

namespace {

TrichotomyReport report(WordContext ctx, const char* word) { return trichotomy_report(TwistWord::parse(ctx, word)); }

}  // namespace

TEST(TwistWord, ParsingAndMerging) {
  auto w = TwistWord::parse(WordContext::A2CY3, "T1 T1 T2^-1 T2 T1^3 [2]");
  EXPECT_EQ(w.to_string(), "T1^5 [2]");
  EXPECT_EQ(w.shift(), 2);
  EXPECT_THROW(TwistWord::parse(WordContext::A2CY3, "T3"), Error);
  EXPECT_THROW(TwistWord::parse(WordContext::A2CY3, "S"), Error);
  EXPECT_THROW(TwistWord::parse(WordContext::EllipticCurve, "T1"), Error);
  EXPECT_THROW(TwistWord::parse(WordContext::A2CY3, "T1^x"), Error);
  EXPECT_THROW(TwistWord::parse(WordContext::A2CY3, ""), Error);
  EXPECT_THROW(parse_context("k3"), Error);
}

TEST(TwistWord, InverseAndPower) {
  std::mt19937_64 rng(21);
  for (int c = 0; c < 50; ++c) {
    auto w = corpus::random_a2_word(rng);
    EXPECT_EQ(word_to_matrix(w * w.inverse()), ExactMatrix::identity(2));
    EXPECT_EQ(word_to_matrix(w.power(3)), word_to_matrix(w).pow(3));
  }
}

TEST(Classify, Examples) {
  auto t1 = report(WordContext::A2CY3, "T1");
  EXPECT_EQ(t1.classification, Sl2Class::ParabolicNonCentral);
  EXPECT_EQ(t1.h_pol, 1u);
  EXPECT_EQ(t1.h_cat, 0.0);

  auto cube = report(WordContext::A2CY3, "T1 T2 T1 T2 T1 T2");
  EXPECT_EQ(cube.classification, Sl2Class::EllipticOrCentral);
  EXPECT_EQ(cube.matrix, -ExactMatrix::identity(2));

  auto hyp = report(WordContext::A2CY3, "T1 T2^-1");
  EXPECT_EQ(hyp.classification, Sl2Class::Hyperbolic);
  EXPECT_EQ(hyp.trace, 3);
  EXPECT_EQ(hyp.h_cat_exact, "log((3+sqrt(5))/2)");
  EXPECT_NEAR(hyp.h_cat, 0.962423650119206895, 1e-15);
  EXPECT_EQ(hyp.h_pol, 0u);
  EXPECT_TRUE(hyp.pseudo_anosov);

  auto s = report(WordContext::EllipticCurve, "S");
  EXPECT_EQ(s.classification, Sl2Class::EllipticOrCentral);
  EXPECT_EQ(s.h_pol, 0u);

  auto shifted = report(WordContext::EllipticCurve, "T [3]");
  EXPECT_EQ(shifted.classification, Sl2Class::ParabolicNonCentral);
  EXPECT_EQ(shifted.h_pol, 1u);
}

TEST(Classify, ShiftDoesNotChangeTheReport) {
  EXPECT_EQ(report(WordContext::A2CY3, "T1 T2^-1 [7]"), report(WordContext::A2CY3, "T1 T2^-1"));
}

TEST(Classify, NegativeTraceHyperbolic) {
  auto r = report(WordContext::EllipticCurve, "S T^3");
  // [[0,1],[-1,0]] [[1,0],[3,1]] = [[3,1],[-1,0]]
  EXPECT_EQ(r.trace, 3);
  auto neg = trichotomy_report(TwistWord::parse(WordContext::EllipticCurve, "T^-3 S"));
  EXPECT_EQ(neg.trace, -3);
  EXPECT_EQ(neg.classification, Sl2Class::Hyperbolic);
  EXPECT_NEAR(neg.h_cat, std::acosh(std::fabs(static_cast<double>(neg.trace.get_si())) / 2), 1e-14);
}

TEST(Classify, RejectsNonSl2) {
  EXPECT_THROW(classify_sl2(ExactMatrix{{2, 0}, {0, 1}}), Error);
  EXPECT_THROW(classify_sl2(ExactMatrix::identity(3)), Error);
}

TEST(Classify, GeneratorsHaveDeterminantOne) {
  for (int g : {1, 2}) {
    EXPECT_EQ(generator_matrix(WordContext::A2CY3, g).determinant(), 1);
    EXPECT_EQ(generator_matrix(WordContext::EllipticCurve, g).determinant(), 1);
  }
  // braid relation T1 T2 T1 = T2 T1 T2
  EXPECT_EQ(word_to_matrix(TwistWord::parse(WordContext::A2CY3, "T1 T2 T1")),
            word_to_matrix(TwistWord::parse(WordContext::A2CY3, "T2 T1 T2")));
  auto s = generator_matrix(WordContext::EllipticCurve, 2);
  EXPECT_EQ(s.pow(4), ExactMatrix::identity(2));
}

TEST(Classify, ExhaustiveTraceWindow) {
  // every [[a,b],[c,d]] with entries in [-3,3] and determinant 1
  int seen = 0;
  for (long a = -3; a <= 3; ++a)
    for (long b = -3; b <= 3; ++b)
      for (long c = -3; c <= 3; ++c)
        for (long d = -3; d <= 3; ++d) {
          if (a * d - b * c != 1) continue;
          ++seen;
          const long t = std::labs(a + d);
          ExactMatrix g{{a, b}, {c, d}};
          auto cls = classify_sl2(g);
          if (t < 2) {
            EXPECT_EQ(cls, Sl2Class::EllipticOrCentral);
          } else if (t > 2) {
            EXPECT_EQ(cls, Sl2Class::Hyperbolic);
          } else {
            const bool central = b == 0 && c == 0;
            EXPECT_EQ(cls, central ? Sl2Class::EllipticOrCentral : Sl2Class::ParabolicNonCentral);
          }
        }
  EXPECT_GT(seen, 100);
}

TEST(Classify, ConjugationInvariance) {
  std::mt19937_64 rng(22);
  for (int c = 0; c < 60; ++c) {
    auto w = corpus::random_a2_word(rng), g = corpus::random_a2_word(rng);
    EXPECT_EQ(trichotomy_report(g * w * g.inverse()), trichotomy_report(w));
  }
}

TEST(Classify, PowersScaleEntropy) {
  std::mt19937_64 rng(23);
  for (int c = 0; c < 40; ++c) {
    auto w = corpus::random_a2_word(rng);
    auto r = trichotomy_report(w);
    for (unsigned k : {2u, 5u}) {
      auto rk = trichotomy_report(w.power(k));
      EXPECT_NEAR(rk.h_cat, k * r.h_cat, 1e-9 * std::max(1.0, rk.h_cat));
      if (r.classification != Sl2Class::EllipticOrCentral) {
        EXPECT_EQ(rk.classification, r.classification);
      }
    }
  }
}

TEST(Crosscheck, AgreesWithLatticeSignature) {
  std::mt19937_64 rng(24);
  for (int c = 0; c < 100; ++c) {
    auto x = crosscheck_with_lattice(corpus::random_a2_word(rng));
    EXPECT_TRUE(x.consistent) << x.details;
  }
  auto x = crosscheck_with_lattice(TwistWord::parse(WordContext::A2CY3, "T1"));
  EXPECT_EQ(x.s, 1u);
  EXPECT_EQ(x.log_rho, 0.0);
}
