#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catent/error.hpp"
#include "catent/exact_linalg.hpp"
#include "catent/exact_matrix.hpp"
#include "catent/growth_estimator.hpp"

namespace catent {

// Pullbacks f* on N^p(X), p = 0..dim.
struct EndoAction {
  unsigned dim = 0;
  std::vector<ExactMatrix> actions;
  std::vector<std::vector<std::string>> labels;  // optional, per codimension

  void validate() const {
    if (dim < 1) throw domain_error("InvalidEndoAction", "dimension must be at least 1");
    if (actions.size() != dim + 1)
      throw domain_error("InvalidEndoAction", "expected " + std::to_string(dim + 1) + " pullback matrices, got " +
                                                  std::to_string(actions.size()));
    for (std::size_t p = 0; p < actions.size(); ++p)
      if (!actions[p].is_integer())
        throw domain_error("InvalidEndoAction", "pullback on codimension " + std::to_string(p) + " is not integral");
    if (actions.front().size() != 1 || actions.front()(0, 0) != 1)
      throw domain_error("InvalidEndoAction", "pullback on codimension 0 must be [1]");
    if (actions.back().size() != 1 || sgn(actions.back()(0, 0)) <= 0)
      throw domain_error("InvalidEndoAction", "pullback on top codimension must be a positive 1x1 degree");
    if (!labels.empty()) {
      if (labels.size() != actions.size())
        throw domain_error("InvalidEndoAction", "labels must be given for every codimension");
      for (std::size_t p = 0; p < labels.size(); ++p)
        if (labels[p].size() != actions[p].size())
          throw domain_error("InvalidEndoAction", "label count differs from rank at codimension " + std::to_string(p));
    }
  }
};

struct DegreeTable {
  std::vector<GrowthSignature> signatures;
  std::vector<double> d;
  std::vector<unsigned> s;
  unsigned plateau_lo = 0, plateau_hi = 0;

  bool on_plateau(unsigned p) const { return p >= plateau_lo && p <= plateau_hi; }
};

namespace detail {

// Relative comparison for products of dynamical degrees held as doubles.
inline bool close(double a, double b, double rel = 1e-9) { return std::fabs(a - b) <= rel * std::max({1.0, a, b}); }

inline unsigned max_s_on(const DegreeTable& t) {
  unsigned m = 0;
  for (unsigned p = t.plateau_lo; p <= t.plateau_hi; ++p) m = std::max(m, t.s[p]);
  return m;
}

}  // namespace detail

inline DegreeTable degree_table(const EndoAction& e, const GrowthOptions& opts = {}) {
  e.validate();
  DegreeTable t;
  for (const auto& m : e.actions) {
    t.signatures.push_back(growth_signature(m, opts));
    t.d.push_back(t.signatures.back().rho_float);
    t.s.push_back(t.signatures.back().s);
  }
  // p sits on the plateau when its interval reaches the largest lower bound.
  Rational top = t.signatures.front().rho_interval.lo;
  for (const auto& g : t.signatures) top = std::max(top, g.rho_interval.lo);
  std::optional<unsigned> lo, hi;
  for (unsigned p = 0; p < t.signatures.size(); ++p)
    if (t.signatures[p].rho_interval.hi >= top) {
      if (!lo) lo = p;
      hi = p;
    }
  t.plateau_lo = *lo;
  t.plateau_hi = *hi;
  return t;
}

// Warnings for data that cannot come from a surjective endomorphism of a
// smooth projective variety.
inline std::vector<std::string> validate_geometric(const DegreeTable& t) {
  std::vector<std::string> warnings;
  for (std::size_t p = 1; p + 1 < t.d.size(); ++p) {
    const double lhs = t.d[p] * t.d[p], rhs = t.d[p - 1] * t.d[p + 1];
    if (lhs < rhs && !detail::close(lhs, rhs))
      warnings.push_back("log-concavity of dynamical degrees fails at p = " + std::to_string(p) + ": d_p^2 = " +
                         std::to_string(lhs) + " < d_{p-1} d_{p+1} = " + std::to_string(rhs));
  }
  const double top = t.d[t.plateau_lo];
  for (unsigned p = t.plateau_lo; p <= t.plateau_hi; ++p)
    if (!detail::close(t.d[p], top))
      warnings.push_back("maximal dynamical degree is not attained on a contiguous range (p = " + std::to_string(p) +
                         ")");
  for (unsigned p = t.plateau_lo + 1; p < t.plateau_hi; ++p)
    if (2 * t.s[p] < t.s[p - 1] + t.s[p + 1])
      warnings.push_back("concavity of polynomial dynamical degrees on the plateau fails at p = " +
                         std::to_string(p));
  return warnings;
}

struct PullbackEntropy {
  double h_cat = 0;
  unsigned h_pol = 0;
  unsigned block_s = 0;  // s of the total pullback on N*
  DegreeTable table;
  std::vector<std::string> warnings;
};

inline PullbackEntropy pullback_entropy_report(const EndoAction& e, const GrowthOptions& opts = {}) {
  PullbackEntropy r;
  r.table = degree_table(e, opts);
  r.warnings = validate_geometric(r.table);
  r.h_cat = std::log(*std::max_element(r.table.d.begin(), r.table.d.end()));
  r.h_pol = detail::max_s_on(r.table);
  r.block_s = growth_signature(ExactMatrix::block_diagonal(e.actions), opts).s;
  if (r.block_s != r.h_pol)
    throw internal_error("polynomial growth of the total pullback (" + std::to_string(r.block_s) +
                         ") differs from the plateau maximum (" + std::to_string(r.h_pol) + ")");
  return r;
}

struct KuennethResult {
  EndoAction product;
  DegreeTable table;
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
};

// Action of (f, f) on N^k(X x X) = sum_l N^l (x) N^{k-l}, checked against the
// degree and polynomial-degree convolution formulas.
inline KuennethResult kuenneth_self_product(const EndoAction& e, const GrowthOptions& opts = {}) {
  const DegreeTable base = degree_table(e, opts);
  const unsigned d = e.dim;
  KuennethResult r;
  r.product.dim = 2 * d;
  for (unsigned k = 0; k <= 2 * d; ++k) {
    std::vector<ExactMatrix> blocks;
    for (unsigned l = k > d ? k - d : 0; l <= std::min(k, d); ++l)
      blocks.push_back(tensor_product(e.actions[l], e.actions[k - l]));
    r.product.actions.push_back(ExactMatrix::block_diagonal(blocks));
  }
  r.table = degree_table(r.product, opts);
  for (unsigned k = 0; k <= 2 * d; ++k) {
    double best = 0;
    for (unsigned l = k > d ? k - d : 0; l <= std::min(k, d); ++l) best = std::max(best, base.d[l] * base.d[k - l]);
    unsigned conv = 0;
    for (unsigned l = k > d ? k - d : 0; l <= std::min(k, d); ++l)
      if (detail::close(base.d[l] * base.d[k - l], best)) conv = std::max(conv, base.s[l] + base.s[k - l]);
    if (!detail::close(r.table.d[k], best))
      r.mismatches.push_back("d_" + std::to_string(k) + " of the product is " + std::to_string(r.table.d[k]) +
                             ", expected max_l d_l d_{k-l} = " + std::to_string(best));
    if (r.table.s[k] != conv)
      r.mismatches.push_back("s_" + std::to_string(k) + " of the product is " + std::to_string(r.table.s[k]) +
                             ", expected the convolution value " + std::to_string(conv));
  }
  return r;
}

enum class NefFlag { Nef, AntiNef, Unknown };

inline const char* to_string(NefFlag f) {
  switch (f) {
    case NefFlag::Nef: return "nef";
    case NefFlag::AntiNef: return "antinef";
    case NefFlag::Unknown: return "unknown";
  }
  return "?";
}

struct LineBundleData {
  unsigned dim = 0;
  ExactMatrix c1_action;  // multiplication by c1(L) on N*(X)
  NefFlag nef = NefFlag::Unknown;
  std::map<int, PositiveSequence> cohomology;  // k -> dim H^k(X, F (x) L^n)
};

inline unsigned numerical_dimension(const LineBundleData& lb) {
  auto idx = nilpotency_index(lb.c1_action);
  if (!idx) throw domain_error("NotNilpotent", "c1 action is not nilpotent");
  if (*idx > lb.dim + 1)
    throw domain_error("NotNilpotent", "c1 action has nilpotency index " + std::to_string(*idx) +
                                           " above dim + 1 = " + std::to_string(lb.dim + 1));
  return *idx - 1;
}

// exp(N) = sum_k N^k / k!, a finite sum for nilpotent N.
inline ExactMatrix nilpotent_exp(const ExactMatrix& n) {
  ExactMatrix sum = ExactMatrix::identity(n.size());
  ExactMatrix term = sum;
  for (unsigned long k = 1; k <= n.size(); ++k) {
    term = term * n * Rational(1, k);
    if (term.is_zero()) break;
    sum = sum + term;
  }
  return sum;
}

struct LineBundleReport {
  unsigned nu = 0;
  unsigned h_pol_lower = 0, h_pol_upper = 0;
  std::optional<unsigned> h_pol_exact;
  GrowthSignature exp_signature;
  std::vector<std::pair<int, EstimatedSignature>> cohomology_fits;
  std::optional<double> h_pol_empirical;  // max s_hat over the supplied sequences
  std::vector<std::string> notes;
};

inline LineBundleReport line_bundle_report(const LineBundleData& lb, const GrowthOptions& opts = {}) {
  if (lb.dim < 1) throw domain_error("InvalidLineBundle", "dimension must be at least 1");
  LineBundleReport r;
  r.nu = numerical_dimension(lb);
  r.h_pol_lower = r.nu;
  r.h_pol_upper = lb.dim;
  if (lb.nef != NefFlag::Unknown) r.h_pol_exact = r.nu;
  r.exp_signature = growth_signature(nilpotent_exp(lb.c1_action), opts);
  if (!r.exp_signature.rho_is_one() || r.exp_signature.s != r.nu)
    throw internal_error("exp(c1) has s = " + std::to_string(r.exp_signature.s) + " but the numerical dimension is " +
                         std::to_string(r.nu));
  for (const auto& [k, seq] : lb.cohomology) {
    r.cohomology_fits.emplace_back(k, fit_growth(seq));
    const double s_hat = r.cohomology_fits.back().second.s_hat;
    r.h_pol_empirical = r.h_pol_empirical ? std::max(*r.h_pol_empirical, s_hat) : s_hat;
  }
  if (r.h_pol_empirical && *r.h_pol_empirical > r.nu + 0.5)
    r.notes.push_back("cohomology growth exceeds the numerical dimension: h_pol is strictly above nu");
  return r;
}

struct SerreFunctorReport {
  unsigned h_t_slope = 0;
  LineBundleReport canonical;
};

inline SerreFunctorReport serre_functor_report(unsigned dim, const LineBundleData& omega,
                                               const GrowthOptions& opts = {}) {
  if (omega.dim != dim) throw domain_error("DimensionMismatch", "canonical bundle data has a different dimension");
  return {dim, line_bundle_report(omega, opts)};
}

}  // namespace catent
