#include <gtest/gtest.h>

#include <random>

#include "catent/corpus.hpp"
#include "catent/quiver_hereditary.hpp"

using namespace catent;

namespace {

std::string code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

HereditaryReport report_for(const Quiver& q) { return hereditary_report(euler_form(q), coxeter_matrix(q)); }

}  // namespace

TEST(Quiver, Validation) {
  EXPECT_EQ(code_of([] { Quiver(0, {}); }), "InvalidQuiver");
  EXPECT_EQ(code_of([] { Quiver(2, {{0, 2}}); }), "InvalidQuiver");
  EXPECT_EQ(code_of([] { Quiver(2, {{1, 1}}); }), "InvalidQuiver");
  EXPECT_EQ(code_of([] { Quiver(3, {{0, 1}, {1, 2}, {2, 0}}); }), "CyclicQuiver");
  EXPECT_EQ(code_of([] { Quiver::from_one_based(2, {{0, 1}}); }), "InvalidQuiver");
  auto q = Quiver::from_one_based(3, {{1, 2}, {3, 2}});
  EXPECT_EQ(q.arrows().front(), (std::pair<unsigned, unsigned>{0, 1}));
  EXPECT_EQ(q.topological_order().size(), 3u);
}

TEST(Coxeter, SmallExamples) {
  auto a2 = Quiver(2, {{0, 1}});
  EXPECT_EQ(euler_form(a2).gram, (ExactMatrix{{1, -1}, {0, 1}}));
  EXPECT_EQ(coxeter_matrix(a2), (ExactMatrix{{-1, 1}, {-1, 0}}));
  EXPECT_EQ(coxeter_matrix(corpus::kronecker(2)), (ExactMatrix{{-1, 2}, {-2, 3}}));
  EXPECT_EQ(coxeter_matrix(corpus::kronecker(3)), (ExactMatrix{{-1, 3}, {-3, 8}}));
  EXPECT_EQ(coxeter_matrix(Quiver(1, {})), ExactMatrix{{-1}});
}

TEST(Coxeter, IsometryOfRandomQuivers) {
  std::mt19937_64 rng(41);
  for (int c = 0; c < 100; ++c) {
    auto q = corpus::random_acyclic_quiver(rng);
    auto phi = coxeter_matrix(q);
    EXPECT_TRUE(check_isometry(euler_form(q), phi));
    EXPECT_TRUE(phi.is_integer());
    EXPECT_EQ(abs(phi.determinant()), 1);
  }
}

TEST(Coxeter, DynkinTypeAHasFiniteOrder) {
  for (unsigned n = 1; n <= 6; ++n)
    for (const auto& q : corpus::a_n_orientations(n)) {
      auto phi = coxeter_matrix(q);
      EXPECT_EQ(phi.pow(n + 1), ExactMatrix::identity(n)) << "n = " << n;
      EXPECT_EQ(quasi_unipotent_order(phi), n + 1);
    }
}

TEST(CheckIsometry, Errors) {
  auto lat = euler_form(corpus::kronecker(2));
  EXPECT_EQ(code_of([&] { check_isometry(lat, ExactMatrix::identity(3)); }), "DimensionMismatch");
  EXPECT_FALSE(check_isometry(lat, ExactMatrix{{2, 1}, {1, 1}}));
  EXPECT_EQ(code_of([&] { hereditary_report(lat, ExactMatrix{{2, 1}, {1, 1}}); }), "NotAnIsometry");
  EXPECT_EQ(code_of([&] { hereditary_report(lat, ExactMatrix{{Rational(1, 2), 0}, {0, 2}}); }), "NonIntegerEntries");
}

TEST(Hereditary, DynkinA2) {
  auto r = report_for(Quiver(2, {{0, 1}}));
  EXPECT_EQ(r.h_cat, 0.0);
  EXPECT_EQ(r.h_pol, 0u);
  EXPECT_TRUE(r.crosscheck.agrees);
  EXPECT_TRUE(r.crosscheck.used_all_pairs_total);
  EXPECT_TRUE(r.crosscheck.pairs_used.empty());
  EXPECT_EQ(r.crosscheck.pairs_skipped.size(), 4u);
  EXPECT_FALSE(r.crosscheck.heuristic);
}

TEST(Hereditary, KroneckerTwoArrowsIsParabolic) {
  auto r = report_for(corpus::kronecker(2));
  EXPECT_EQ(r.h_cat, 0.0);
  EXPECT_EQ(r.h_pol, 1u);
  EXPECT_TRUE(r.crosscheck.agrees);
  EXPECT_NEAR(r.crosscheck.fit.s_hat, 1.0, 0.15);
}

TEST(Hereditary, KroneckerThreeArrowsIsHyperbolic) {
  auto r = report_for(corpus::kronecker(3));
  EXPECT_NEAR(r.h_cat, 1.92484730023841378999, 1e-14);
  EXPECT_NEAR(r.signature.rho_float, 6.85410196624968454461, 1e-13);
  EXPECT_EQ(r.h_pol, 0u);
  EXPECT_TRUE(r.crosscheck.agrees);
  EXPECT_FALSE(r.crosscheck.used_all_pairs_total);
}

TEST(Hereditary, AllTypeAOrientations) {
  for (unsigned n = 1; n <= 5; ++n)
    for (const auto& q : corpus::a_n_orientations(n)) {
      auto r = report_for(q);
      EXPECT_EQ(r.h_cat, 0.0);
      EXPECT_EQ(r.h_pol, 0u);
      EXPECT_TRUE(r.crosscheck.agrees) << "n = " << n;
    }
}

TEST(Hereditary, UserSuppliedGramIsHeuristic) {
  EulerLattice lat{ExactMatrix{{1, -3}, {0, 1}}, BasisTag::UserSupplied};
  auto r = hereditary_report(lat, ExactMatrix{{-1, 3}, {-3, 8}});
  EXPECT_TRUE(r.crosscheck.heuristic);
  EXPECT_EQ(r.notes.size(), 2u);
}

TEST(Hereditary, IdentityOnDegenerateLattice) {
  EulerLattice lat{ExactMatrix::zero(2), BasisTag::UserSupplied};
  EXPECT_EQ(code_of([&] { hereditary_report(lat, ExactMatrix::identity(2)); }), "AllPairingsDegenerate");
}
