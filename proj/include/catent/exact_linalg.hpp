#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "catent/error.hpp"
#include "catent/exact_matrix.hpp"
#include "catent/exact_poly.hpp"
#include "catent/root_moduli.hpp"

namespace catent {

// det(xI - M) by fraction-free (Bareiss) elimination over Z[x]. The pivots are
// the leading principal minors of xI - M, which are monic, so every division
// in the recurrence is exact and no pivoting is ever needed.
inline ExactPoly char_poly_bareiss(const ExactMatrix& m) {
  const std::size_t n = m.size();
  std::vector<ExactPoly> a(n * n);
  auto at = [&](std::size_t i, std::size_t j) -> ExactPoly& { return a[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      at(i, j) = i == j ? ExactPoly({-m(i, j), 1}) : ExactPoly({-m(i, j)});
  ExactPoly prev = ExactPoly::constant(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        at(i, j) = (at(k, k) * at(i, j) - at(i, k) * at(k, j)) / prev;
    prev = at(k, k);
  }
  return at(n - 1, n - 1);
}

// Faddeev-LeVerrier recurrence; used for matrices with non-integer entries.
inline ExactPoly char_poly_faddeev(const ExactMatrix& m) {
  const std::size_t n = m.size();
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  const ExactMatrix id = ExactMatrix::identity(n);
  ExactMatrix mk = ExactMatrix::zero(n);
  for (std::size_t k = 1; k <= n; ++k) {
    mk = m * mk + c[n - k + 1] * id;
    c[n - k] = -(m * mk).trace() / Rational(static_cast<unsigned long>(k));
  }
  return ExactPoly(std::move(c));
}

inline ExactPoly char_poly(const ExactMatrix& m) {
  return m.is_integer() ? char_poly_bareiss(m) : char_poly_faddeev(m);
}

// Monic annihilating polynomial of least degree, found as the first linear
// dependency among vec(I), vec(M), vec(M^2), ...
inline ExactPoly min_poly(const ExactMatrix& m) {
  const std::size_t n = m.size();
  struct Reduced {
    std::vector<Rational> vec;
    std::vector<Rational> combo;  // coefficients over the powers
    std::size_t pivot;
  };
  std::vector<Reduced> basis;
  ExactMatrix power = ExactMatrix::identity(n);
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<Rational> v(power.entries().begin(), power.entries().end());
    std::vector<Rational> combo(k + 1);
    combo[k] = 1;
    for (const auto& b : basis) {
      if (sgn(v[b.pivot]) == 0) continue;
      Rational f = v[b.pivot] / b.vec[b.pivot];
      for (std::size_t t = 0; t < v.size(); ++t)
        if (sgn(b.vec[t]) != 0) v[t] -= f * b.vec[t];
      for (std::size_t t = 0; t < b.combo.size(); ++t) combo[t] -= f * b.combo[t];
    }
    auto nz = std::find_if(v.begin(), v.end(), [](const Rational& r) { return sgn(r) != 0; });
    if (nz == v.end()) return ExactPoly(std::move(combo)).monic();
    const auto pivot = static_cast<std::size_t>(nz - v.begin());
    basis.push_back({std::move(v), std::move(combo), pivot});
    power = power * m;
  }
  throw internal_error("no dependency among the first n+1 powers (Cayley-Hamilton violated)");
}

// Smallest j with M^j = 0, or nothing when M^n != 0.
inline std::optional<unsigned> nilpotency_index(const ExactMatrix& m) {
  ExactMatrix power = m;
  for (unsigned j = 1; j <= m.size(); ++j) {
    if (power.is_zero()) return j;
    power = power * m;
  }
  return std::nullopt;
}

// Smallest k with M^k - I nilpotent, searched over k <= 2n^2 (every k with
// Euler phi(k) <= n lies in this range since phi(k) >= sqrt(k/2)).
inline std::optional<unsigned long> quasi_unipotent_order(const ExactMatrix& m) {
  if (!m.is_integer()) throw domain_error("NonIntegerEntries", "quasi-unipotence is tested on integer matrices");
  const unsigned long n = m.size();
  ExactPoly radical = squarefree_part(char_poly(m));
  return root_of_unity_order(radical, 2 * n * n);
}

// Kronecker product, row-major block layout: (A (x) B)[iB + k][jB + l] = A[i][j] B[k][l].
inline ExactMatrix tensor_product(const ExactMatrix& a, const ExactMatrix& b) {
  const std::size_t na = a.size(), nb = b.size();
  ExactMatrix t(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      if (sgn(a(i, j)) == 0) continue;
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) t(i * nb + k, j * nb + l) = a(i, j) * b(k, l);
    }
  return t;
}

namespace detail {

inline void k_subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                      std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i + (k - cur.size()) <= n; ++i) {
    cur.push_back(i);
    k_subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

// Lexicographically ordered k-subsets of {0, ..., n-1}.
inline std::vector<std::vector<std::size_t>> k_subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  detail::k_subsets(n, k, 0, cur, out);
  return out;
}

// Matrix of the k-th exterior power in the lexicographic basis of k-subsets:
// entry (I, J) is the minor det M[I, J].
inline ExactMatrix exterior_power(const ExactMatrix& m, std::size_t k) {
  if (k < 1 || k > m.size())
    throw domain_error("InvalidExteriorDegree",
                       "exterior degree " + std::to_string(k) + " outside [1, " + std::to_string(m.size()) + "]");
  const auto subsets = k_subsets(m.size(), k);
  ExactMatrix out(subsets.size());
  ExactMatrix minor(k);
  for (std::size_t r = 0; r < subsets.size(); ++r)
    for (std::size_t c = 0; c < subsets.size(); ++c) {
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) minor(i, j) = m(subsets[r][i], subsets[c][j]);
      out(r, c) = minor.determinant();
    }
  return out;
}

// Matrix R of M restricted to the span of the given columns, i.e. M B = B R.
// Throws if the columns are dependent or the span is not M-invariant.
inline ExactMatrix restrict_to_invariant_subspace(const ExactMatrix& m,
                                                  const std::vector<std::vector<Rational>>& columns) {
  const std::size_t n = m.size(), r = columns.size();
  if (r == 0) throw domain_error("EmptySubspace", "no spanning vectors given");
  for (const auto& c : columns)
    if (c.size() != n) throw domain_error("DimensionMismatch", "spanning vector length differs from matrix size");
  // Solve B R = M B column by column through an augmented elimination.
  std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(r + r));
  for (std::size_t j = 0; j < r; ++j) {
    std::vector<Rational> image = m.apply(columns[j]);
    for (std::size_t i = 0; i < n; ++i) {
      rows[i][j] = columns[j][i];
      rows[i][r + j] = image[i];
    }
  }
  std::size_t lead = 0;
  for (std::size_t c = 0; c < r; ++c) {
    std::size_t p = lead;
    while (p < n && sgn(rows[p][c]) == 0) ++p;
    if (p == n) throw domain_error("DependentColumns", "spanning vectors are linearly dependent");
    std::swap(rows[p], rows[lead]);
    Rational piv = rows[lead][c];
    for (auto& v : rows[lead]) v /= piv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == lead || sgn(rows[i][c]) == 0) continue;
      Rational f = rows[i][c];
      for (std::size_t t = 0; t < 2 * r; ++t) rows[i][t] -= f * rows[lead][t];
    }
    ++lead;
  }
  for (std::size_t i = r; i < n; ++i)
    for (std::size_t t = r; t < 2 * r; ++t)
      if (sgn(rows[i][t]) != 0) throw domain_error("NotInvariant", "span is not invariant under the matrix");
  ExactMatrix out(r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) out(i, j) = rows[i][r + j];
  return out;
}

// Exact description of the spectral radius when one is available.
struct RhoRational {
  Rational value;
};
struct RhoRootOf {
  ExactPoly factor;
  unsigned rank = 1;  // 1 = largest modulus among the factor's roots
};
using RhoExact = std::variant<RhoRational, RhoRootOf>;

struct GrowthSignature {
  ModulusInterval rho_interval;
  double rho_float = 0;
  std::optional<RhoExact> rho_exact;
  unsigned s = 0;
  // Squarefree parts of the minimal polynomial with a root of modulus rho,
  // paired with their multiplicity in the minimal polynomial.
  std::vector<std::pair<ExactPoly, unsigned>> dominant_factors;
  std::optional<unsigned long> quasi_unipotent_order;
  bool tied_moduli = false;
  std::vector<std::string> warnings;

  double log_rho() const { return std::log(rho_float); }
  bool rho_is_one() const {
    return rho_exact && std::holds_alternative<RhoRational>(*rho_exact) &&
           std::get<RhoRational>(*rho_exact).value == 1;
  }
};

struct GrowthOptions {
  unsigned precision_bits = kStartPrecisionBits;
  // Bound on rho_interval width, relative to max(1, rho).
  double tolerance = 1e-12;
};

namespace detail {

inline Rational to_rational(double d) {
  Rational r(d);
  return r;
}

// A rational root of h whose modulus lies in iv. Candidates p/q come from the
// rational root theorem: q divides the leading coefficient of the primitive
// integer multiple of h.
inline std::optional<Rational> rational_root_in(const ExactPoly& h, const ModulusInterval& iv) {
  Integer den = 1;
  for (const auto& c : h.coefficients()) den = lcm(den, Integer(c.get_den()));
  const Integer lead = abs(Integer(h.leading() * den));
  if (lead > 1000000) return std::nullopt;
  const unsigned long a = lead.get_ui();
  for (unsigned long q = 1; q <= a; ++q) {
    if (a % q) continue;
    Integer p_lo = Integer(iv.lo * q), p_hi = Integer(iv.hi * q) + 1;  // truncation toward zero
    for (Integer p = p_lo; p <= p_hi; ++p) {
      Rational v(p, q);
      v.canonicalize();
      if (v < iv.lo || v > iv.hi) continue;
      if (sgn(h(v)) == 0 || sgn(h(-v)) == 0) return v;
    }
  }
  return std::nullopt;
}

// Chooses a double inside [lo, hi] when one exists, else the nearest, and
// widens the interval to contain it.
inline double settle_float(ModulusInterval& iv) {
  Rational mid = (iv.lo + iv.hi) / 2;
  double d = mid.get_d();
  Rational dr = to_rational(d);
  if (dr < iv.lo) {
    double up = std::nextafter(d, INFINITY);
    if (to_rational(up) <= iv.hi) d = up;
  } else if (dr > iv.hi) {
    double down = std::nextafter(d, -INFINITY);
    if (to_rational(down) >= iv.lo) d = down;
  }
  dr = to_rational(d);
  if (dr < iv.lo) iv.lo = dr;
  if (dr > iv.hi) iv.hi = dr;
  return d;
}

inline ExactPoly strip_zero_roots(ExactPoly h) {
  while (!h.is_zero() && h.degree() > 0 && sgn(h.coeff(0)) == 0) h = h / ExactPoly::monomial(1);
  return h;
}

}  // namespace detail

// Spectral radius and polynomial growth rate s, where s + 1 is the largest
// Jordan block among eigenvalues of maximal modulus. Jordan sizes are read off
// the multiplicities of the squarefree parts of the minimal polynomial.
inline GrowthSignature growth_signature(const ExactMatrix& m, const GrowthOptions& opts = {}) {
  const ExactPoly mp = min_poly(m);
  auto parts = squarefree_decomposition(mp);

  // Zero eigenvalues never attain the spectral radius.
  std::vector<std::pair<ExactPoly, unsigned>> live;
  for (auto& [h, j] : parts) {
    ExactPoly stripped = detail::strip_zero_roots(h);
    if (stripped.degree() > 0) live.emplace_back(stripped, j);
  }
  if (live.empty()) throw domain_error("NilpotentInput", "growth rate is undefined for a nilpotent matrix");

  GrowthSignature sig;
  const bool integer = m.is_integer();

  if (integer) {
    sig.quasi_unipotent_order = quasi_unipotent_order(m);
    if (sig.quasi_unipotent_order) {
      ExactMatrix shifted = m.pow(*sig.quasi_unipotent_order) - ExactMatrix::identity(m.size());
      auto idx = nilpotency_index(shifted);
      if (!idx) throw internal_error("M^k - I is not nilpotent for the detected quasi-unipotent order");
      sig.s = *idx - 1;
      sig.rho_interval = {Rational(1), Rational(1)};
      sig.rho_float = 1.0;
      sig.rho_exact = RhoRational{Rational(1)};
      sig.dominant_factors = live;
      unsigned max_mult = 0;
      for (const auto& [h, j] : live) max_mult = std::max(max_mult, j);
      if (max_mult != sig.s + 1)
        throw internal_error("Jordan size from M^k - I (" + std::to_string(sig.s + 1) +
                             ") differs from minimal-polynomial multiplicity (" + std::to_string(max_mult) + ")");
      return sig;
    }
  }

  // Integer matrices with zero eigenvalues and roots of unity: Kronecker says
  // every nonzero eigenvalue of modulus <= 1 is a root of unity, so test the
  // cyclotomic property of each part exactly.
  std::vector<bool> unit_circle(live.size(), false);
  if (integer) {
    for (std::size_t i = 0; i < live.size(); ++i) {
      const unsigned long d = live[i].first.degree();
      unit_circle[i] = root_of_unity_order(live[i].first, 2 * d * d).has_value();
    }
  }

  for (unsigned prec = std::max(opts.precision_bits, 1u);; prec *= 2) {
    const bool last = prec >= kMaxPrecisionBits;
    struct PartModulus {
      ModulusInterval top;
      bool exact_one;
    };
    std::vector<PartModulus> mods;
    for (std::size_t i = 0; i < live.size(); ++i) {
      if (unit_circle[i]) {
        mods.push_back({{Rational(1), Rational(1)}, true});
        continue;
      }
      auto roots = root_moduli(live[i].first, prec);
      ModulusInterval top = roots.front().modulus;
      for (const auto& r : roots)
        if (r.modulus.hi > top.hi || (r.modulus.hi == top.hi && r.modulus.lo > top.lo)) top = r.modulus;
      // The factor's maximal modulus lies in [max lo, max hi].
      Rational best_lo = roots.front().modulus.lo;
      for (const auto& r : roots) best_lo = std::max(best_lo, r.modulus.lo);
      top.lo = best_lo;
      mods.push_back({top, false});
    }

    Rational rho_lo = mods.front().top.lo, rho_hi = mods.front().top.hi;
    for (const auto& pm : mods) {
      rho_lo = std::max(rho_lo, pm.top.lo);
      rho_hi = std::max(rho_hi, pm.top.hi);
    }
    // Parts that may attain rho.
    std::vector<std::size_t> contenders;
    for (std::size_t i = 0; i < mods.size(); ++i)
      if (mods[i].top.hi >= rho_lo) contenders.push_back(i);
    unsigned lo_mult = ~0u, hi_mult = 0;
    for (auto i : contenders) {
      lo_mult = std::min(lo_mult, live[i].second);
      hi_mult = std::max(hi_mult, live[i].second);
    }
    Rational width_bound = Rational(opts.tolerance) * std::max(Rational(1), rho_hi);
    // Also settled when a part of the largest multiplicity certainly attains rho.
    bool resolved = lo_mult == hi_mult;
    for (auto i : contenders)
      if (live[i].second == hi_mult && mods[i].top.lo >= rho_hi) resolved = true;
    const bool narrow = rho_hi - rho_lo <= width_bound;
    if ((resolved && narrow) || last) {
      sig.s = hi_mult - 1;
      sig.rho_interval = {rho_lo, rho_hi};
      for (auto i : contenders) sig.dominant_factors.push_back(live[i]);
      if (!resolved) {
        sig.tied_moduli = true;
        std::string names;
        for (auto i : contenders) names += (names.empty() ? "" : ", ") + live[i].first.to_string();
        sig.warnings.push_back("TiedModuli: moduli of {" + names + "} could not be separated at 2^-" +
                               std::to_string(prec) + "; using the larger s = " + std::to_string(sig.s));
      }
      bool all_unit = std::all_of(contenders.begin(), contenders.end(), [&](std::size_t i) { return mods[i].exact_one; });
      if (all_unit) {
        sig.rho_exact = RhoRational{Rational(1)};
        sig.rho_interval = {Rational(1), Rational(1)};
      } else {
        for (auto i : contenders) {
          if (mods[i].exact_one) continue;
          if (auto v = detail::rational_root_in(live[i].first, {rho_lo, rho_hi})) {
            sig.rho_exact = RhoRational{*v};
            sig.rho_interval = {*v, *v};
            break;
          }
        }
        if (!sig.rho_exact && contenders.size() == 1) sig.rho_exact = RhoRootOf{live[contenders.front()].first, 1};
      }
      sig.rho_float = detail::settle_float(sig.rho_interval);
      return sig;
    }
  }
}

}  // namespace catent
