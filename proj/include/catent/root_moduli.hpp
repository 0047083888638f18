#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "catent/error.hpp"
#include "catent/exact_poly.hpp"

namespace catent {

inline constexpr unsigned kStartPrecisionBits = 64;
inline constexpr unsigned kMaxPrecisionBits = 1024;

struct ModulusInterval {
  Rational lo;
  Rational hi;

  bool overlaps(const ModulusInterval& o) const { return !(hi < o.lo || o.hi < lo); }
  Rational width() const { return hi - lo; }
};

struct RootApprox {
  std::complex<double> value;
  ModulusInterval modulus;
};

namespace detail {

// Owning mpfr_t at a fixed precision.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Mpfr(mpfr_prec_t prec, double d) : Mpfr(prec) { mpfr_set_d(v_, d, MPFR_RNDN); }
  Mpfr(const Mpfr& o) : Mpfr(mpfr_get_prec(o.v_)) { mpfr_set(v_, o.v_, MPFR_RNDN); }
  Mpfr& operator=(const Mpfr& o) {
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  ~Mpfr() { mpfr_clear(v_); }

  mpfr_ptr get() noexcept { return v_; }
  mpfr_srcptr get() const noexcept { return v_; }
  mpfr_prec_t prec() const noexcept { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

struct BigComplex {
  Mpfr re, im;
  explicit BigComplex(mpfr_prec_t p) : re(p), im(p) {}
  BigComplex(mpfr_prec_t p, std::complex<double> z) : re(p, z.real()), im(p, z.imag()) {}
};

inline mpfr_prec_t prec_of(const BigComplex& z) { return z.re.prec(); }

inline BigComplex add(const BigComplex& a, const BigComplex& b) {
  BigComplex r(prec_of(a));
  mpfr_add(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  return r;
}

inline BigComplex sub(const BigComplex& a, const BigComplex& b) {
  BigComplex r(prec_of(a));
  mpfr_sub(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_sub(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  return r;
}

inline BigComplex mul(const BigComplex& a, const BigComplex& b) {
  const auto p = prec_of(a);
  BigComplex r(p);
  Mpfr t(p);
  mpfr_mul(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(t.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_sub(r.re.get(), r.re.get(), t.get(), MPFR_RNDN);
  mpfr_mul(r.im.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_mul(t.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(r.im.get(), r.im.get(), t.get(), MPFR_RNDN);
  return r;
}

inline BigComplex div(const BigComplex& a, const BigComplex& b) {
  const auto p = prec_of(a);
  Mpfr den(p), t(p);
  mpfr_sqr(den.get(), b.re.get(), MPFR_RNDN);
  mpfr_sqr(t.get(), b.im.get(), MPFR_RNDN);
  mpfr_add(den.get(), den.get(), t.get(), MPFR_RNDN);
  BigComplex conj(p);
  mpfr_set(conj.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_neg(conj.im.get(), b.im.get(), MPFR_RNDN);
  BigComplex r = mul(a, conj);
  mpfr_div(r.re.get(), r.re.get(), den.get(), MPFR_RNDN);
  mpfr_div(r.im.get(), r.im.get(), den.get(), MPFR_RNDN);
  return r;
}

inline Mpfr modulus(const BigComplex& z, mpfr_rnd_t rnd = MPFR_RNDN) {
  Mpfr r(prec_of(z));
  mpfr_hypot(r.get(), z.re.get(), z.im.get(), rnd);
  return r;
}

// Value and derivative of the polynomial with the given coefficients at z.
inline std::pair<BigComplex, BigComplex> horner(const std::vector<BigComplex>& coeffs, const BigComplex& z) {
  const auto p = prec_of(z);
  BigComplex value(p), deriv(p);
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    deriv = add(mul(deriv, z), value);
    value = add(mul(value, z), coeffs[k]);
  }
  return {value, deriv};
}

// Double-precision Aberth iteration; returns false when coefficients do not
// fit a double or the iteration fails to settle.
inline bool aberth_double(const ExactPoly& h, std::vector<std::complex<double>>& roots) {
  const std::size_t n = h.degree();
  std::vector<double> c(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    c[k] = h.coeff(k).get_d();
    if (!std::isfinite(c[k])) return false;
  }
  double radius = 0;
  for (std::size_t k = 1; k <= n; ++k)
    radius = std::max(radius, std::pow(std::abs(c[n - k] / c[n]), 1.0 / static_cast<double>(k)));
  if (!(radius > 0) || !std::isfinite(radius)) radius = 1;
  roots.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    roots[k] = std::polar(radius, 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.7);

  for (int iter = 0; iter < 500; ++iter) {
    double biggest_step = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> v = 0, d = 0;
      for (std::size_t k = n + 1; k-- > 0;) {
        d = d * roots[i] + v;
        v = v * roots[i] + c[k];
      }
      if (v == 0.0) continue;
      std::complex<double> ratio = v / d;
      std::complex<double> repulsion = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) repulsion += 1.0 / (roots[i] - roots[j]);
      std::complex<double> step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return false;
      roots[i] -= step;
      biggest_step = std::max(biggest_step, std::abs(step) / std::max(1.0, std::abs(roots[i])));
    }
    if (biggest_step < 1e-15) return true;
  }
  return true;
}

}  // namespace detail

// Approximates every complex root of the squarefree polynomial h and encloses
// each root's modulus in a rational interval of width at most 2^-precision.
// The enclosure uses inclusion disks of radius n|h(z)| / |lc * prod (z - z_j)|
// around each approximation z; disjoint disks certify one root apiece.
inline std::vector<RootApprox> root_moduli(const ExactPoly& h, unsigned precision) {
  if (h.is_zero() || h.degree() < 1)
    throw domain_error("InvalidPolynomial", "root_moduli needs a polynomial of degree at least 1");
  if (precision == 0) throw domain_error("InvalidPrecision", "precision must be positive");
  const std::size_t n = h.degree();

  Rational target;
  mpq_set_ui(target.get_mpq_t(), 1, 1);
  mpq_div_2exp(target.get_mpq_t(), target.get_mpq_t(), precision);

  if (n == 1) {
    Rational root = -h.coeff(0) / h.coeff(1);
    Rational m = abs(root);
    return {RootApprox{std::complex<double>(root.get_d(), 0.0), ModulusInterval{m, m}}};
  }

  std::vector<std::complex<double>> seeds;
  const bool seeded = detail::aberth_double(h, seeds);

  const mpfr_prec_t cap = 2 * static_cast<mpfr_prec_t>(std::max(precision, kMaxPrecisionBits)) + 64;
  for (mpfr_prec_t work = precision + 32; work <= cap; work *= 2) {
    std::vector<detail::BigComplex> coeffs;
    coeffs.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      detail::BigComplex c(work);
      mpfr_set_q(c.re.get(), h.coeff(k).get_mpq_t(), MPFR_RNDN);
      coeffs.push_back(std::move(c));
    }

    std::vector<detail::BigComplex> z;
    z.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (seeded) {
        z.emplace_back(work, seeds[k]);
      } else {
        z.emplace_back(work, std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.7));
      }
    }

    // Aberth refinement at the working precision.
    detail::Mpfr tol(work), step_mod(work), scale(work), one(work, 1.0);
    mpfr_set_ui_2exp(tol.get(), 1, -(work - 8), MPFR_RNDN);
    const int max_iter = seeded ? 200 : 2000;
    for (int iter = 0; iter < max_iter; ++iter) {
      bool settled = true;
      for (std::size_t i = 0; i < n; ++i) {
        auto [v, d] = detail::horner(coeffs, z[i]);
        if (mpfr_zero_p(v.re.get()) && mpfr_zero_p(v.im.get())) continue;
        detail::BigComplex ratio = detail::div(v, d);
        detail::BigComplex repulsion(work);
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          detail::BigComplex diff = detail::sub(z[i], z[j]);
          detail::BigComplex unit(work);
          mpfr_set_ui(unit.re.get(), 1, MPFR_RNDN);
          repulsion = detail::add(repulsion, detail::div(unit, diff));
        }
        detail::BigComplex denom = detail::mul(ratio, repulsion);
        mpfr_ui_sub(denom.re.get(), 1, denom.re.get(), MPFR_RNDN);
        mpfr_neg(denom.im.get(), denom.im.get(), MPFR_RNDN);
        detail::BigComplex step = detail::div(ratio, denom);
        if (!mpfr_number_p(step.re.get()) || !mpfr_number_p(step.im.get())) {
          settled = false;
          continue;
        }
        z[i] = detail::sub(z[i], step);
        step_mod = detail::modulus(step);
        scale = detail::modulus(z[i]);
        if (mpfr_cmp(scale.get(), one.get()) < 0) scale = one;
        mpfr_mul(scale.get(), scale.get(), tol.get(), MPFR_RNDN);
        if (mpfr_cmp(step_mod.get(), scale.get()) > 0) settled = false;
      }
      if (settled) break;
    }

    // Inclusion radii.
    detail::Mpfr lc_abs(work);
    mpfr_set_q(lc_abs.get(), h.leading().get_mpq_t(), MPFR_RNDN);
    mpfr_abs(lc_abs.get(), lc_abs.get(), MPFR_RNDN);
    std::vector<detail::Mpfr> radius;
    std::vector<detail::Mpfr> center_mod;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      auto [v, d] = detail::horner(coeffs, z[i]);
      detail::Mpfr num = detail::modulus(v, MPFR_RNDU);
      mpfr_mul_ui(num.get(), num.get(), n, MPFR_RNDU);
      detail::Mpfr den = lc_abs;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        detail::Mpfr gap = detail::modulus(detail::sub(z[i], z[j]), MPFR_RNDD);
        mpfr_mul(den.get(), den.get(), gap.get(), MPFR_RNDD);
      }
      if (mpfr_zero_p(den.get())) {
        ok = false;
        break;
      }
      detail::Mpfr r(work);
      mpfr_div(r.get(), num.get(), den.get(), MPFR_RNDU);
      // Slack for rounding in the evaluation above.
      detail::Mpfr slack = detail::modulus(z[i], MPFR_RNDU);
      mpfr_add_ui(slack.get(), slack.get(), 1, MPFR_RNDU);
      mpfr_mul_2si(slack.get(), slack.get(), -(work - 16), MPFR_RNDU);
      mpfr_add(r.get(), r.get(), slack.get(), MPFR_RNDU);
      if (!mpfr_number_p(r.get())) ok = false;
      radius.push_back(std::move(r));
      center_mod.push_back(detail::modulus(z[i]));
    }
    if (!ok) continue;

    // Disjointness certifies a one-to-one match between disks and roots.
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = i + 1; j < n && ok; ++j) {
        detail::Mpfr gap = detail::modulus(detail::sub(z[i], z[j]), MPFR_RNDD);
        detail::Mpfr reach(work);
        mpfr_add(reach.get(), radius[i].get(), radius[j].get(), MPFR_RNDU);
        if (mpfr_cmp(gap.get(), reach.get()) <= 0) ok = false;
      }
    if (!ok) continue;

    std::vector<RootApprox> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      detail::Mpfr lo(work), hi(work);
      mpfr_sub(lo.get(), center_mod[i].get(), radius[i].get(), MPFR_RNDD);
      if (mpfr_sgn(lo.get()) < 0) mpfr_set_zero(lo.get(), 1);
      mpfr_add(hi.get(), center_mod[i].get(), radius[i].get(), MPFR_RNDU);
      ModulusInterval m;
      mpfr_get_q(m.lo.get_mpq_t(), lo.get());
      mpfr_get_q(m.hi.get_mpq_t(), hi.get());
      if (m.width() > target) {
        ok = false;
        break;
      }
      out.push_back(RootApprox{{z[i].re.to_double(), z[i].im.to_double()}, std::move(m)});
    }
    if (ok) return out;
  }
  throw domain_error("PrecisionExhausted", "could not isolate the roots of " + h.to_string() +
                                               " to 2^-" + std::to_string(precision));
}

}  // namespace catent
