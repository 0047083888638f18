#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "catent/corpus.hpp"
#include "catent/error.hpp"
#include "catent/exact_linalg.hpp"
#include "catent/growth_estimator.hpp"
#include "catent/quiver_hereditary.hpp"
#include "catent/sl2z_dynamics.hpp"
#include "catent/twist_zoo.hpp"
#include "catent/variety_dynamics.hpp"

namespace catent::selftest {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Check {
  std::string module;
  std::string name;
  std::function<Outcome()> run;
};

struct Result {
  std::string module;
  std::string name;
  Outcome outcome;
};

struct Options {
  std::string filter;          // module name; empty runs everything
  bool corrupt_gram = false;   // negative control: perturb one Euler form
};

namespace detail {

// Collects the first few failure messages of a check.
class Tally {
 public:
  void fail(const std::string& msg) {
    ++failures_;
    if (failures_ <= 3) detail_ += (detail_.empty() ? "" : "; ") + msg;
  }
  template <class T>
  void expect(bool ok, const T& msg) {
    if (!ok) fail(msg);
  }
  Outcome done(std::size_t cases) const {
    if (failures_ == 0) return {true, std::to_string(cases) + " cases"};
    return {false, std::to_string(failures_) + "/" + std::to_string(cases) + " failed: " + detail_};
  }

 private:
  std::size_t failures_ = 0;
  std::string detail_;
};

inline std::vector<ExactMatrix> linalg_corpus() {
  return {ExactMatrix{{1, 1}, {0, 1}},
          ExactMatrix{{2, 1}, {1, 1}},
          ExactMatrix{{0, -1}, {1, 0}},
          ExactMatrix{{-1, 3}, {-3, 8}},
          ExactMatrix{{1, 1, 0}, {0, 1, 1}, {0, 0, 1}},
          ExactMatrix{{2, 0, 0}, {0, 1, 1}, {0, 0, 1}},
          ExactMatrix{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}},
          corpus::abelian_n1_action(),
          exterior_power(corpus::abelian_h1_action(), 2)};
}

inline std::string str(const ExactMatrix& m) { return to_string(m); }

}  // namespace detail

inline std::vector<Check> checks(const Options& opts) {
  using detail::Tally;
  std::vector<Check> out;

  // ---- exact_linalg ----
  out.push_back({"exact_linalg", "conjugated cyclotomic Jordan forms give rho = 1 and s = j - 1", [] {
                   std::mt19937_64 rng(20240611);
                   Tally t;
                   const int cases = 40;
                   for (int c = 0; c < cases; ++c) {
                     auto qc = corpus::random_quasi_unipotent(rng);
                     auto g = growth_signature(qc.m);
                     t.expect(g.rho_is_one() && g.s + 1 == qc.max_repetition,
                              "case " + std::to_string(c) + " got s = " + std::to_string(g.s));
                   }
                   return t.done(cases);
                 }});
  out.push_back({"exact_linalg", "char poly divisible by min poly; both char poly routes agree", [] {
                   Tally t;
                   auto cs = detail::linalg_corpus();
                   for (const auto& m : cs) {
                     t.expect((char_poly(m) % min_poly(m)).is_zero(), "remainder for " + detail::str(m));
                     t.expect(char_poly_bareiss(m) == char_poly_faddeev(m), "routes differ for " + detail::str(m));
                   }
                   return t.done(cs.size());
                 }});
  out.push_back({"exact_linalg", "powers: s(M^m) = s(M), rho(M^m) = rho(M)^m for m <= 5", [] {
                   Tally t;
                   auto cs = detail::linalg_corpus();
                   for (const auto& m : cs) {
                     auto g = growth_signature(m);
                     for (unsigned k = 1; k <= 5; ++k) {
                       auto gk = growth_signature(m.pow(k));
                       const double want = std::pow(g.rho_float, k);
                       t.expect(gk.s == g.s && std::fabs(gk.rho_float - want) <= 1e-9 * want,
                                detail::str(m) + " power " + std::to_string(k));
                     }
                   }
                   return t.done(cs.size() * 5);
                 }});
  out.push_back({"exact_linalg", "inverse of a quasi-unipotent matrix has the same signature", [] {
                   std::mt19937_64 rng(7);
                   Tally t;
                   const int cases = 20;
                   for (int c = 0; c < cases; ++c) {
                     auto qc = corpus::random_quasi_unipotent(rng, 6);
                     auto a = growth_signature(qc.m), b = growth_signature(qc.m.inverse());
                     t.expect(a.s == b.s && a.rho_is_one() && b.rho_is_one(), "case " + std::to_string(c));
                   }
                   return t.done(cases);
                 }});
  out.push_back({"exact_linalg", "commuting quasi-unipotent maps: s(AB) <= s(A) + s(B)", [] {
                   std::mt19937_64 rng(11);
                   Tally t;
                   const int cases = 20;
                   for (int c = 0; c < cases; ++c) {
                     auto qc = corpus::random_quasi_unipotent(rng, 6);
                     // polynomials in the same matrix commute
                     const ExactMatrix a = qc.m, b = qc.m.pow(2) * qc.m.pow(c % 3 + 1);
                     const unsigned sa = growth_signature(a).s, sb = growth_signature(b).s;
                     t.expect(growth_signature(a * b).s <= sa + sb, "case " + std::to_string(c));
                   }
                   return t.done(cases);
                 }});
  out.push_back({"exact_linalg", "tensor additivity: s(A (x) B) = s(A) + s(B)", [] {
                   std::mt19937_64 rng(13);
                   Tally t;
                   const int cases = 15;
                   for (int c = 0; c < cases; ++c) {
                     auto a = corpus::random_quasi_unipotent(rng, 4), b = corpus::random_quasi_unipotent(rng, 4);
                     const unsigned s = growth_signature(tensor_product(a.m, b.m)).s;
                     t.expect(s == (a.max_repetition - 1) + (b.max_repetition - 1), "case " + std::to_string(c));
                   }
                   return t.done(cases);
                 }});
  out.push_back({"exact_linalg", "entry-sum growth fit matches the exact signature", [] {
                   Tally t;
                   auto cs = detail::linalg_corpus();
                   for (const auto& m : cs) {
                     auto g = growth_signature(m);
                     std::vector<Real> v;
                     ExactMatrix p = m;
                     for (int n = 1; n <= 400; ++n, p = p * m) {
                       Rational sum = 0;
                       for (const auto& x : p.entries()) sum += abs(x);
                       v.push_back(to_real(sum));
                     }
                     auto e = fit_growth(PositiveSequence(std::move(v)));
                     t.expect(std::fabs(e.rho_hat - g.rho_float) <= 1e-3 * g.rho_float &&
                                  std::fabs(e.s_hat - g.s) <= 0.15,
                              detail::str(m));
                   }
                   return t.done(cs.size());
                 }});

  // ---- growth_estimator ----
  out.push_back({"growth_estimator", "Ext distance is additive on disjoint unions and monotone", [] {
                   Tally t;
                   ExtTable a{{{0, 2}, {1, 3}}}, b{{{-2, 1}, {4, 5}}}, ab{{{0, 2}, {1, 3}, {-2, 1}, {4, 5}}};
                   int n = 0;
                   for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
                     ++n;
                     const Real sum = eval_ext_distance(a, x) + eval_ext_distance(b, x);
                     t.expect(std::fabs(eval_ext_distance(ab, x) - sum) <= 1e-15L * sum, "additivity");
                     ExtTable bigger = a;
                     bigger.dims[1] += 1;
                     t.expect(eval_ext_distance(bigger, x) > eval_ext_distance(a, x), "monotonicity");
                   }
                   return t.done(n);
                 }});
  out.push_back({"growth_estimator", "fit recovers rho and s of c rho^n n^s", [] {
                   Tally t;
                   int n = 0;
                   for (double rho : {1.0, 1.5, 2.618})
                     for (int s : {0, 1, 2, 3})
                       for (double c : {0.5, 1.0, 10.0}) {
                         ++n;
                         std::vector<Real> v;
                         for (int k = 1; k <= 400; ++k)
                           v.push_back(c * std::pow(static_cast<Real>(rho), k) * std::pow(static_cast<Real>(k), s));
                         auto e = fit_growth(PositiveSequence(std::move(v)));
                         t.expect(std::fabs(e.rho_hat - rho) <= 1e-3 * rho && std::fabs(e.s_hat - s) <= 0.15,
                                  "rho " + std::to_string(rho) + " s " + std::to_string(s));
                       }
                   return t.done(n);
                 }});
  out.push_back({"growth_estimator", "scaling a sequence leaves the fit unchanged", [] {
                   Tally t;
                   std::vector<Real> v, w;
                   for (int k = 1; k <= 200; ++k) {
                     v.push_back(std::pow(1.7L, k) * k * (2 + std::sin(static_cast<Real>(k))));
                     w.push_back(v.back() * 37.5L);
                   }
                   auto a = fit_growth(PositiveSequence(v)), b = fit_growth(PositiveSequence(w));
                   t.expect(std::fabs(a.rho_hat - b.rho_hat) <= 1e-6 && std::fabs(a.s_hat - b.s_hat) <= 1e-6, "drift");
                   return t.done(1);
                 }});

  // ---- sl2z_dynamics ----
  out.push_back({"sl2z_dynamics", "words land in SL(2,Z)", [] {
                   std::mt19937_64 rng(3);
                   Tally t;
                   const int cases = 200;
                   for (int c = 0; c < cases; ++c) {
                     auto w = corpus::random_a2_word(rng);
                     t.expect(word_to_matrix(w).determinant() == 1, w.to_string());
                     TwistWord e(WordContext::EllipticCurve, w.letters());
                     t.expect(word_to_matrix(e).determinant() == 1, e.to_string());
                   }
                   return t.done(2 * cases);
                 }});
  out.push_back({"sl2z_dynamics", "(T1 T2)^(3k) is central", [] {
                   Tally t;
                   const TwistWord base(WordContext::A2CY3, {{1, 1}, {2, 1}});
                   for (unsigned k = 1; k <= 5; ++k) {
                     ExactMatrix m = word_to_matrix(base.power(3 * k));
                     t.expect(m == ExactMatrix::identity(2) || m == -ExactMatrix::identity(2), std::to_string(k));
                   }
                   return t.done(5);
                 }});
  out.push_back({"sl2z_dynamics", "reports are conjugation invariant", [] {
                   std::mt19937_64 rng(5);
                   Tally t;
                   int n = 0;
                   for (int c = 0; c < 40; ++c) {
                     auto w = corpus::random_a2_word(rng);
                     auto base = trichotomy_report(w);
                     for (int g = 0; g < 5; ++g, ++n) {
                       auto h = corpus::random_a2_word(rng);
                       t.expect(trichotomy_report(h * w * h.inverse()) == base, w.to_string());
                     }
                   }
                   return t.done(n);
                 }});
  out.push_back({"sl2z_dynamics", "h_pol is unchanged under powers", [] {
                   std::mt19937_64 rng(9);
                   Tally t;
                   const int cases = 50;
                   for (int c = 0; c < cases; ++c) {
                     auto w = corpus::random_a2_word(rng, 6);
                     const unsigned h = trichotomy_report(w).h_pol;
                     for (unsigned m = 1; m <= 4; ++m) t.expect(trichotomy_report(w.power(m)).h_pol == h, w.to_string());
                   }
                   return t.done(cases * 4);
                 }});
  out.push_back({"sl2z_dynamics", "classification follows the trace rule on all small matrices", [] {
                   Tally t;
                   int n = 0;
                   for (long a = -5; a <= 5; ++a)
                     for (long b = -5; b <= 5; ++b)
                       for (long c = -5; c <= 5; ++c)
                         for (long d = -5; d <= 5; ++d) {
                           if (a * d - b * c != 1) continue;
                           ++n;
                           ExactMatrix m{{a, b}, {c, d}};
                           const long tr = std::labs(a + d);
                           const bool central = b == 0 && c == 0 && a == d;
                           Sl2Class want = tr < 2 || (tr == 2 && central) ? Sl2Class::EllipticOrCentral
                                           : tr == 2                      ? Sl2Class::ParabolicNonCentral
                                                                          : Sl2Class::Hyperbolic;
                           t.expect(classify_sl2(m) == want, detail::str(m));
                         }
                   return t.done(n);
                 }});
  out.push_back({"sl2z_dynamics", "trichotomy values match the lattice signature", [] {
                   std::mt19937_64 rng(17);
                   Tally t;
                   const int cases = 100;
                   for (int c = 0; c < cases; ++c) {
                     auto w = corpus::random_a2_word(rng);
                     t.expect(crosscheck_with_lattice(w).consistent, w.to_string());
                   }
                   return t.done(cases);
                 }});

  // ---- variety_dynamics ----
  auto endo_corpus = [] {
    std::vector<EndoAction> v;
    for (unsigned k : {2u, 3u})
      for (unsigned d : {1u, 2u, 3u}) v.push_back(corpus::power_map(k, d));
    v.push_back(corpus::identity_endo(2, {1, 3, 1}));
    v.push_back(corpus::abelian_surface_parabolic());
    return v;
  };
  out.push_back({"variety_dynamics", "h_pol equals s of the total pullback", [endo_corpus] {
                   Tally t;
                   auto cs = endo_corpus();
                   for (const auto& e : cs) {
                     auto r = pullback_entropy_report(e);
                     t.expect(r.block_s == r.h_pol, "dim " + std::to_string(e.dim));
                     for (unsigned p = r.table.plateau_lo; p <= r.table.plateau_hi; ++p)
                       t.expect(r.h_pol >= r.table.s[p], "plateau lower bound");
                   }
                   return t.done(cs.size());
                 }});
  out.push_back({"variety_dynamics", "exp of a nilpotent of index nu + 1 has rho = 1 and s = nu", [] {
                   Tally t;
                   int n = 0;
                   for (unsigned d = 0; d <= 5; ++d, ++n) {
                     auto g = growth_signature(nilpotent_exp(corpus::hyperplane_c1(d)));
                     t.expect(g.rho_is_one() && g.s == d, "shift of size " + std::to_string(d + 1));
                   }
                   ++n;
                   auto g = growth_signature(nilpotent_exp(corpus::blowup_line_bundle(8).c1_action));
                   t.expect(g.rho_is_one() && g.s == 1, "blow-up class");
                   return t.done(n);
                 }});
  out.push_back({"variety_dynamics", "self-product degrees and s follow the convolution formulas",
                 [endo_corpus] {
                   Tally t;
                   auto cs = endo_corpus();
                   for (const auto& e : cs) {
                     auto k = kuenneth_self_product(e);
                     t.expect(k.ok(), k.mismatches.empty() ? std::string() : k.mismatches.front());
                   }
                   return t.done(cs.size());
                 }});
  out.push_back({"variety_dynamics", "iterating multiplies degrees and keeps s", [endo_corpus] {
                   Tally t;
                   auto cs = endo_corpus();
                   for (const auto& e : cs) {
                     auto base = degree_table(e);
                     for (unsigned m = 2; m <= 3; ++m) {
                       EndoAction em = e;
                       for (auto& a : em.actions) a = a.pow(m);
                       auto tm = degree_table(em);
                       for (unsigned p = 0; p <= e.dim; ++p) {
                         const double want = std::pow(base.d[p], m);
                         t.expect(std::fabs(tm.d[p] - want) <= 1e-9 * want && tm.s[p] == base.s[p],
                                  "p = " + std::to_string(p));
                       }
                     }
                   }
                   return t.done(cs.size() * 2);
                 }});

  // ---- twist_zoo ----
  out.push_back({"twist_zoo", "closed forms match recurrences; geometric bounds dominate", [] {
                   Tally t;
                   int n = 0;
                   for (auto kind : {TwistKind::Spherical, TwistKind::PTwist})
                     for (unsigned d = 1; d <= 4; ++d)
                       for (Real tt : {-1.0L, -0.1L, 0.0L, 0.1L, 1.0L})
                         for (Real a : {0.5L, 1.0L, 10.0L})
                           for (Real b : {0.5L, 1.0L, 10.0L})
                             for (unsigned long k = 1; k <= 200; k += 11) {
                               ++n;
                               TwistParams p{kind, d, tt, a, b, true};
                               const Real rec = twist_recurrence(p, k), ps = twist_partial_sum(p, k);
                               const Real bound = twist_bound(p, k);
                               t.expect(std::fabs(ps - rec) <= 1e-12L * rec, "partial sum");
                               const bool linear = tt == 0 || (kind == TwistKind::Spherical && d == 1);
                               if (linear)
                                 t.expect(std::fabs(bound - rec) <= 1e-12L * rec, "linear branch");
                               else
                                 t.expect(bound >= rec * (1 - 1e-12L), "geometric bound");
                             }
                   return t.done(n);
                 }});
  out.push_back({"twist_zoo", "recurrence growth for t < 0 is e^((1-d)t)", [] {
                   Tally t;
                   int n = 0;
                   for (unsigned d = 2; d <= 4; ++d)
                     for (Real tt : {-1.0L, -0.5L, -0.1L}) {
                       ++n;
                       TwistParams p{TwistKind::Spherical, d, tt, 1, 1, true};
                       std::vector<Real> v;
                       for (unsigned long k = 1; k <= 200; ++k) v.push_back(spherical_recurrence(p, k));
                       auto e = fit_growth(PositiveSequence(std::move(v)));
                       const double want = std::exp(static_cast<double>((1 - static_cast<Real>(d)) * tt));
                       t.expect(std::fabs(e.rho_hat - want) <= 1e-3 * want && std::fabs(e.s_hat) <= 0.15,
                                "d " + std::to_string(d));
                     }
                   return t.done(n);
                 }});

  // ---- quiver_hereditary ----
  const bool corrupt = opts.corrupt_gram;
  out.push_back({"quiver_hereditary", "Coxeter matrices are isometries of the Euler form", [corrupt] {
                   std::mt19937_64 rng(23);
                   Tally t;
                   const int cases = 100;
                   bool corrupted = false;
                   for (int c = 0; c < cases; ++c) {
                     auto q = corpus::random_acyclic_quiver(rng);
                     EulerLattice lat = euler_form(q);
                     if (corrupt && !corrupted && !q.arrows().empty()) {
                       const auto [a, b] = q.arrows().front();
                       lat.gram(a, b) += 1;
                       corrupted = true;
                     }
                     t.expect(check_isometry(lat, coxeter_matrix(q)), "quiver " + std::to_string(c));
                   }
                   return t.done(cases);
                 }});
  out.push_back({"quiver_hereditary", "Euler forms are unimodular", [] {
                   std::mt19937_64 rng(29);
                   Tally t;
                   const int cases = 100;
                   for (int c = 0; c < cases; ++c)
                     t.expect(euler_form(corpus::random_acyclic_quiver(rng)).gram.determinant() == 1,
                              "quiver " + std::to_string(c));
                   return t.done(cases);
                 }});
  out.push_back({"quiver_hereditary", "Dynkin A_n Coxeter matrices have finite order up to sign", [] {
                   Tally t;
                   int n = 0;
                   for (unsigned k = 1; k <= 5; ++k)
                     for (const auto& q : corpus::a_n_orientations(k)) {
                       ++n;
                       const ExactMatrix phi = coxeter_matrix(q), p = phi.pow(k + 1);
                       const ExactMatrix id = ExactMatrix::identity(k);
                       t.expect(p == id || p == -id, "A_" + std::to_string(k));
                       auto g = growth_signature(phi);
                       t.expect(g.rho_is_one() && g.s == 0, "A_" + std::to_string(k) + " signature");
                     }
                   return t.done(n);
                 }});
  out.push_back({"quiver_hereditary", "exact values agree with the |chi| sequence fit", [] {
                   Tally t;
                   std::vector<Quiver> qs;
                   for (unsigned k = 1; k <= 5; ++k)
                     for (auto& q : corpus::a_n_orientations(k)) qs.push_back(q);
                   qs.push_back(corpus::kronecker(2));
                   qs.push_back(corpus::kronecker(3));
                   for (const auto& q : qs) {
                     auto r = hereditary_report(euler_form(q), coxeter_matrix(q));
                     t.expect(r.crosscheck.agrees, "quiver with " + std::to_string(q.vertex_count()) + " vertices");
                   }
                   return t.done(qs.size());
                 }});

  return out;
}

inline std::vector<Result> run(const Options& opts) {
  std::vector<Result> results;
  for (auto& c : checks(opts)) {
    if (!opts.filter.empty() && c.module.find(opts.filter) == std::string::npos) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    results.push_back({c.module, c.name, o});
  }
  return results;
}

inline std::vector<std::string> modules() {
  return {"exact_linalg", "growth_estimator", "sl2z_dynamics", "variety_dynamics", "twist_zoo", "quiver_hereditary"};
}

}  // namespace catent::selftest
