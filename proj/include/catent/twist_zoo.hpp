#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "catent/error.hpp"
#include "catent/exact_matrix.hpp"

namespace catent {

// h_t(F) = slope * t, h_pol = 0.
struct LinearEntropyReport {
  Rational slope;
  unsigned h_pol = 0;
};

inline LinearEntropyReport shift_report(long m) { return {Rational(m), 0}; }

// S^n = [m] gives h_t(S) = (m/n) t.
inline LinearEntropyReport fractional_cy_report(long n, long m) {
  if (n < 1) throw domain_error("InvalidPeriod", "fractional Calabi-Yau period n must be positive");
  Rational slope(m, n);
  slope.canonicalize();
  return {slope, 0};
}

enum class TwistKind { Spherical, PTwist };

inline const char* to_string(TwistKind k) { return k == TwistKind::Spherical ? "spherical" : "ptwist"; }

struct TwistParams {
  TwistKind kind = TwistKind::Spherical;
  unsigned d = 1;
  Real t = 0;
  Real A = 1;
  Real B = 1;
  bool orth_nonempty = false;

  void validate() const {
    if (d < 1) throw domain_error("InvalidTwist", "d must be at least 1");
    if (!(A > 0)) throw domain_error("InvalidTwist", "A must be positive");
    if (!(B >= 0)) throw domain_error("InvalidTwist", "B must be non-negative");
    if (!std::isfinite(t)) throw domain_error("InvalidTwist", "t must be finite");
  }
};

namespace detail {

// e^t (r^n - 1) / (r - 1) with r = e^a, accurate for a near 0.
inline Real geometric_partial_sum(Real t, Real a, unsigned long n) {
  if (a == 0) return static_cast<Real>(n) * std::exp(t);
  return std::exp(t) * std::expm1(a * static_cast<Real>(n)) / std::expm1(a);
}

inline void require(const TwistParams& p, TwistKind k) {
  p.validate();
  if (p.kind != k) throw domain_error("InvalidTwist", std::string("parameters are not for a ") + to_string(k));
}

}  // namespace detail

// Upper bound for eps_t(G', T^n G): linear for d = 1 or t = 0, otherwise the
// n-free geometric majorant of the partial sum.
inline Real spherical_bound(const TwistParams& p, unsigned long n) {
  detail::require(p, TwistKind::Spherical);
  const Real nn = static_cast<Real>(n);
  if (p.d == 1) return nn * std::exp(p.t) * p.A + p.B;
  if (p.t == 0) return nn * p.A + p.B;
  const Real a = (1 - static_cast<Real>(p.d)) * p.t;
  if (p.t < 0) return std::exp(a * nn) / std::expm1(a) * p.A + p.B;
  return std::exp(p.t) / -std::expm1(a) * p.A + p.B;
}

// B + A sum_{i=1}^n e^{((1-d)i + d)t}, term by term.
inline Real spherical_recurrence(const TwistParams& p, unsigned long n) {
  detail::require(p, TwistKind::Spherical);
  const Real d = static_cast<Real>(p.d);
  Real sum = 0;
  for (unsigned long i = 1; i <= n; ++i) sum += std::exp(((1 - d) * static_cast<Real>(i) + d) * p.t);
  return p.B + p.A * sum;
}

// Finite geometric sum of the recurrence in closed form.
inline Real spherical_partial_sum(const TwistParams& p, unsigned long n) {
  detail::require(p, TwistKind::Spherical);
  return p.B + p.A * detail::geometric_partial_sum(p.t, (1 - static_cast<Real>(p.d)) * p.t, n);
}

inline Real ptwist_bound(const TwistParams& p, unsigned long n) {
  detail::require(p, TwistKind::PTwist);
  const Real nn = static_cast<Real>(n);
  if (p.t == 0) return nn * p.A + p.B;
  const Real a = -2 * static_cast<Real>(p.d) * p.t;
  if (p.t < 0) return std::exp(a * nn) / std::expm1(a) * p.A + p.B;
  return std::exp(p.t) / -std::expm1(a) * p.A + p.B;
}

// B + A sum_{i=0}^{n-1} e^{(1-2di)t}
inline Real ptwist_recurrence(const TwistParams& p, unsigned long n) {
  detail::require(p, TwistKind::PTwist);
  const Real d = static_cast<Real>(p.d);
  Real sum = 0;
  for (unsigned long i = 0; i < n; ++i) sum += std::exp((1 - 2 * d * static_cast<Real>(i)) * p.t);
  return p.B + p.A * sum;
}

inline Real ptwist_partial_sum(const TwistParams& p, unsigned long n) {
  detail::require(p, TwistKind::PTwist);
  return p.B + p.A * detail::geometric_partial_sum(p.t, -2 * static_cast<Real>(p.d) * p.t, n);
}

inline Real twist_bound(const TwistParams& p, unsigned long n) {
  return p.kind == TwistKind::Spherical ? spherical_bound(p, n) : ptwist_bound(p, n);
}
inline Real twist_recurrence(const TwistParams& p, unsigned long n) {
  return p.kind == TwistKind::Spherical ? spherical_recurrence(p, n) : ptwist_recurrence(p, n);
}
inline Real twist_partial_sum(const TwistParams& p, unsigned long n) {
  return p.kind == TwistKind::Spherical ? spherical_partial_sum(p, n) : ptwist_partial_sum(p, n);
}

// A point value, a closed interval, or an unknown value in [lo, +inf).
struct ValueOrInterval {
  double lo = 0, hi = 0;
  bool unknown = false;

  static ValueOrInterval value(double v) { return {v, v, false}; }
  static ValueOrInterval interval(double lo, double hi) { return {lo, hi, false}; }
  static ValueOrInterval unbounded(double lo) { return {lo, std::numeric_limits<double>::infinity(), true}; }
  bool is_value() const { return !unknown && lo == hi; }
  friend bool operator==(const ValueOrInterval&, const ValueOrInterval&) = default;
};

inline constexpr Real kSnapToZero = 1e-12;

struct TwistEntropyReport {
  Real t = 0;                // after snapping
  Real h_t_slope_nonpos = 0;  // h_t = slope * t for t <= 0, and 0 for t > 0
  Real h_t = 0;
  std::string branch;
  ValueOrInterval h_pol;
  std::vector<std::string> notes;
  std::vector<std::string> warnings;
};

// quiver_context: E is one of the 3-spherical simples of the A2 quiver
// Calabi-Yau-3 category, where h_pol at t = 0 is known to be 1.
inline TwistEntropyReport twist_entropy_report(TwistParams p, bool quiver_context = false) {
  p.validate();
  TwistEntropyReport r;
  if (p.t != 0 && std::fabs(p.t) < kSnapToZero) {
    r.warnings.push_back("t = " + std::to_string(static_cast<double>(p.t)) + " is within 1e-12 of 0; treated as t = 0");
    p.t = 0;
  }
  r.t = p.t;
  const Real d = static_cast<Real>(p.d);
  const bool spherical = p.kind == TwistKind::Spherical;
  r.h_t_slope_nonpos = spherical ? 1 - d : -2 * d;
  r.h_t = p.t <= 0 ? r.h_t_slope_nonpos * p.t : 0;
  if (r.h_t == 0) r.h_t = 0;  // no -0 in reports
  if (!spherical && p.t < 0)
    r.notes.push_back("h_t = -2dt for t < 0 is the value of the bound's growth rate, not a proven equality");

  if (spherical && p.d == 1) {
    r.branch = "d=1";
    r.h_pol = ValueOrInterval::interval(0, 1);
  } else if (p.t == 0) {
    r.branch = "t=0";
    r.h_pol = ValueOrInterval::interval(0, 1);
  } else if (p.t < 0) {
    r.branch = "t<0";
    r.h_pol = ValueOrInterval::value(0);
  } else if (p.orth_nonempty) {
    r.branch = "t>0,orth";
    r.h_pol = ValueOrInterval::value(0);
  } else {
    r.branch = "t>0,no-orth";
    r.h_pol = ValueOrInterval::unbounded(0);
    r.notes.push_back("h_pol is unknown for t > 0 when the orthogonal complement of E is zero");
  }

  if (quiver_context) {
    if (!spherical || p.d != 3)
      r.warnings.push_back("quiver context applies to 3-spherical twists only; ignored");
    else if (p.t == 0)
      r.notes.push_back("A2 quiver CY3 context: the twist acts on the lattice by a parabolic matrix, so h_pol = 1 "
                        "at t = 0, while h_pol = 0 for every t < 0; h_pol is discontinuous at t = 0");
    else if (p.t < 0)
      r.notes.push_back("A2 quiver CY3 context: h_pol = 1 at t = 0, so h_pol jumps at t = 0");
  }
  return r;
}

}  // namespace catent
