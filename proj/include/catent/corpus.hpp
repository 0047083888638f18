#pragma once

#include <algorithm>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "catent/exact_matrix.hpp"
#include "catent/exact_poly.hpp"
#include "catent/quiver_hereditary.hpp"
#include "catent/sl2z_dynamics.hpp"
#include "catent/variety_dynamics.hpp"

// Seeded generators for the property corpus shared by the self-test and the
// test suite.
namespace catent::corpus {

inline ExactPoly cyclotomic(unsigned k) {
  ExactPoly p = ExactPoly::monomial(k) - ExactPoly::constant(1);
  for (unsigned d = 1; d < k; ++d)
    if (k % d == 0) p = p / cyclotomic(d);
  return p;
}

inline unsigned euler_phi(unsigned k) { return static_cast<unsigned>(cyclotomic(k).degree()); }

// Companion matrix of a monic polynomial; its minimal polynomial is p itself.
inline ExactMatrix companion(const ExactPoly& p) {
  const std::size_t n = p.degree();
  ExactMatrix c(n);
  for (std::size_t i = 1; i < n; ++i) c(i, i - 1) = 1;
  for (std::size_t i = 0; i < n; ++i) c(i, n - 1) = -p.coeff(i);
  return c;
}

inline ExactPoly power(const ExactPoly& p, unsigned j) {
  ExactPoly r = ExactPoly::constant(1);
  for (unsigned i = 0; i < j; ++i) r = r * p;
  return r;
}

// Product of `steps` elementary row operations with multipliers +-1.
inline ExactMatrix random_unimodular(std::size_t n, unsigned steps, std::mt19937_64& rng) {
  ExactMatrix u = ExactMatrix::identity(n);
  if (n < 2) return rng() & 1 ? u : -u;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (unsigned s = 0; s < steps; ++s) {
    std::size_t i = pick(rng), j = pick(rng);
    while (j == i) j = pick(rng);
    const long c = rng() & 1 ? 1 : -1;
    ExactMatrix e = ExactMatrix::identity(n);
    e(i, j) = c;
    u = e * u;
  }
  return u;
}

struct QuasiUnipotentCase {
  ExactMatrix m;
  unsigned max_repetition;  // largest Jordan block size
};

// U J U^{-1} with J block diagonal in companion matrices of Phi_k^j.
inline QuasiUnipotentCase random_quasi_unipotent(std::mt19937_64& rng, std::size_t max_size = 8) {
  static const unsigned orders[] = {1, 2, 3, 4, 6, 5, 8, 10, 12};
  std::uniform_int_distribution<std::size_t> size_dist(1, max_size);
  const std::size_t target = size_dist(rng);
  std::vector<ExactMatrix> blocks;
  std::size_t used = 0;
  unsigned jmax = 0;
  while (used < target) {
    std::vector<std::pair<unsigned, unsigned>> options;  // (k, j) that fit
    for (unsigned k : orders) {
      const unsigned phi = euler_phi(k);
      for (unsigned j = 1; phi * j + used <= target; ++j) options.emplace_back(k, j);
    }
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    auto [k, j] = options[pick(rng)];
    blocks.push_back(companion(power(cyclotomic(k), j)));
    used += blocks.back().size();
    jmax = std::max(jmax, j);
  }
  ExactMatrix jordan = ExactMatrix::block_diagonal(blocks);
  ExactMatrix u = random_unimodular(target, static_cast<unsigned>(target), rng);
  return {u * jordan * u.inverse(), jmax};
}

inline TwistWord random_a2_word(std::mt19937_64& rng, unsigned max_len = 12, long max_exp = 3) {
  std::uniform_int_distribution<unsigned> len_dist(1, max_len);
  std::uniform_int_distribution<long> exp_dist(1, max_exp);
  std::vector<Letter> letters;
  const unsigned len = len_dist(rng);
  for (unsigned i = 0; i < len; ++i) {
    const long e = exp_dist(rng) * (rng() & 1 ? 1 : -1);
    letters.push_back({rng() & 1 ? 1 : 2, e});
  }
  return TwistWord(WordContext::A2CY3, letters);
}

// Acyclic: arrows only go from a lower to a higher index in a random relabelling.
inline Quiver random_acyclic_quiver(std::mt19937_64& rng, unsigned max_vertices = 6, unsigned max_parallel = 3) {
  std::uniform_int_distribution<unsigned> nv(1, max_vertices);
  const unsigned n = nv(rng);
  std::vector<unsigned> label(n);
  for (unsigned i = 0; i < n; ++i) label[i] = i;
  std::shuffle(label.begin(), label.end(), rng);
  std::uniform_int_distribution<unsigned> mult(0, max_parallel);
  std::vector<std::pair<unsigned, unsigned>> arrows;
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j)
      if (rng() % 3 == 0)
        for (unsigned m = mult(rng); m > 0; --m) arrows.emplace_back(label[i], label[j]);
  return Quiver(n, std::move(arrows));
}

// All orientations of the A_n Dynkin diagram.
inline std::vector<Quiver> a_n_orientations(unsigned n) {
  std::vector<Quiver> out;
  const unsigned edges = n - 1;
  for (unsigned mask = 0; mask < (1u << edges); ++mask) {
    std::vector<std::pair<unsigned, unsigned>> arrows;
    for (unsigned e = 0; e < edges; ++e)
      arrows.push_back(mask >> e & 1 ? std::pair{e + 1, e} : std::pair{e, e + 1});
    out.emplace_back(n, std::move(arrows));
  }
  return out;
}

inline Quiver kronecker(unsigned arrows) {
  return Quiver(2, std::vector<std::pair<unsigned, unsigned>>(arrows, {0u, 1u}));
}

// Degree-k power map on projective d-space: f* = [k^p] on N^p.
inline EndoAction power_map(unsigned long k, unsigned d) {
  EndoAction e;
  e.dim = d;
  Integer kp = 1;
  for (unsigned p = 0; p <= d; ++p, kp *= k) e.actions.push_back(ExactMatrix{{Rational(kp)}});
  return e;
}

inline EndoAction identity_endo(unsigned d, std::vector<std::size_t> ranks) {
  EndoAction e;
  e.dim = d;
  for (auto r : ranks) e.actions.push_back(ExactMatrix::identity(r));
  return e;
}

// Abelian surface automorphism acting on H^1 = <a2, a1, b2, b1> by two
// unipotent Jordan blocks of size 2.
inline ExactMatrix abelian_h1_action() {
  const ExactMatrix j2{{1, 1}, {0, 1}};
  return ExactMatrix::block_diagonal(std::vector<ExactMatrix>{j2, j2});
}

// Its action on the algebraic classes a1^b1, a2^b1 + a1^b2, a2^b2 inside
// H^2 = Lambda^2 H^1 (lexicographic basis of 2-subsets).
inline ExactMatrix abelian_n1_action() {
  auto e = [](std::initializer_list<std::size_t> idx) {
    std::vector<Rational> v(6);
    for (auto i : idx) v[i] = 1;
    return v;
  };
  // subsets: 0:{0,1} 1:{0,2} 2:{0,3} 3:{1,2} 4:{1,3} 5:{2,3}
  return restrict_to_invariant_subspace(exterior_power(abelian_h1_action(), 2), {e({4}), e({2, 3}), e({1})});
}

inline EndoAction abelian_surface_parabolic() {
  EndoAction e;
  e.dim = 2;
  e.actions = {ExactMatrix{{1}}, abelian_n1_action(), ExactMatrix{{1}}};
  return e;
}

// Hyperplane class on projective d-space: c1 shifts H^p to H^{p+1}.
inline ExactMatrix hyperplane_c1(unsigned d) {
  ExactMatrix c(d + 1);
  for (unsigned p = 0; p < d; ++p) c(p + 1, p) = 1;
  return c;
}

// h^0(O(n)) on projective d-space, n = 1..len.
inline PositiveSequence binomial_sections(unsigned d, unsigned len) {
  std::vector<Real> v;
  for (unsigned n = 1; n <= len; ++n) {
    Real c = 1;
    for (unsigned i = 1; i <= d; ++i) c = c * static_cast<Real>(n + i) / static_cast<Real>(i);
    v.push_back(c);
  }
  return PositiveSequence(std::move(v));
}

inline LineBundleData projective_hyperplane_bundle(unsigned d, unsigned len = 400) {
  LineBundleData lb;
  lb.dim = d;
  lb.c1_action = hyperplane_c1(d);
  lb.nef = NefFlag::Nef;
  lb.cohomology.emplace(0, binomial_sections(d, len));
  return lb;
}

// Blow-up of the plane at one point, D = H' + E with H' the pulled-back line
// and E the exceptional curve. Basis (1, H', E, pt); D.H' = 1, D.E = -1, D^2 = 0.
// h^0(nD) is bounded below by the (n+1)(n+2)/2 sections pulled back from nH'.
inline LineBundleData blowup_line_bundle(unsigned len = 400) {
  LineBundleData lb;
  lb.dim = 2;
  lb.c1_action = ExactMatrix{{0, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, -1, 0}};
  lb.nef = NefFlag::Unknown;
  lb.cohomology.emplace(0, binomial_sections(2, len));
  return lb;
}

}  // namespace catent::corpus
