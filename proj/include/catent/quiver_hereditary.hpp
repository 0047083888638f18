#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "catent/error.hpp"
#include "catent/exact_linalg.hpp"
#include "catent/exact_matrix.hpp"
#include "catent/growth_estimator.hpp"

namespace catent {

// Acyclic quiver; vertices and arrow endpoints are 0-based here.
class Quiver {
 public:
  Quiver(unsigned vertices, std::vector<std::pair<unsigned, unsigned>> arrows)
      : n_(vertices), arrows_(std::move(arrows)) {
    if (n_ < 1) throw domain_error("InvalidQuiver", "a quiver needs at least one vertex");
    for (const auto& [i, j] : arrows_) {
      if (i >= n_ || j >= n_)
        throw domain_error("InvalidQuiver", "arrow endpoint out of range: " + std::to_string(i + 1) + " -> " +
                                                std::to_string(j + 1));
      if (i == j) throw domain_error("InvalidQuiver", "loop at vertex " + std::to_string(i + 1));
    }
    // Kahn's algorithm; leftover vertices lie on an oriented cycle.
    std::vector<unsigned> indeg(n_, 0);
    for (const auto& a : arrows_) ++indeg[a.second];
    std::vector<unsigned> ready;
    for (unsigned v = 0; v < n_; ++v)
      if (indeg[v] == 0) ready.push_back(v);
    while (!ready.empty()) {
      unsigned v = ready.back();
      ready.pop_back();
      order_.push_back(v);
      for (const auto& [i, j] : arrows_)
        if (i == v && --indeg[j] == 0) ready.push_back(j);
    }
    if (order_.size() != n_) throw domain_error("CyclicQuiver", "quiver has an oriented cycle");
  }

  // Endpoints given 1-based, as in quiver files.
  static Quiver from_one_based(unsigned vertices, const std::vector<std::pair<long, long>>& arrows) {
    std::vector<std::pair<unsigned, unsigned>> a;
    for (const auto& [i, j] : arrows) {
      if (i < 1 || j < 1 || i > static_cast<long>(vertices) || j > static_cast<long>(vertices))
        throw domain_error("InvalidQuiver", "arrow endpoint out of range: " + std::to_string(i) + " -> " +
                                                std::to_string(j));
      a.emplace_back(static_cast<unsigned>(i - 1), static_cast<unsigned>(j - 1));
    }
    return Quiver(vertices, std::move(a));
  }

  unsigned vertex_count() const noexcept { return n_; }
  const std::vector<std::pair<unsigned, unsigned>>& arrows() const noexcept { return arrows_; }
  const std::vector<unsigned>& topological_order() const noexcept { return order_; }

 private:
  unsigned n_;
  std::vector<std::pair<unsigned, unsigned>> arrows_;
  std::vector<unsigned> order_;
};

enum class BasisTag { Simples, Projectives, UserSupplied };

inline const char* to_string(BasisTag b) {
  switch (b) {
    case BasisTag::Simples: return "simples";
    case BasisTag::Projectives: return "projectives";
    case BasisTag::UserSupplied: return "user";
  }
  return "?";
}

struct EulerLattice {
  ExactMatrix gram;
  BasisTag basis = BasisTag::UserSupplied;
};

// chi(x, y) = sum_i x_i y_i - sum_{i->j} x_i y_j in the basis of simples.
inline EulerLattice euler_form(const Quiver& q) {
  ExactMatrix g = ExactMatrix::identity(q.vertex_count());
  for (const auto& [i, j] : q.arrows()) g(i, j) -= 1;
  return {g, BasisTag::Simples};
}

// Phi = -G^{-T} G
inline ExactMatrix coxeter_matrix(const Quiver& q) {
  const ExactMatrix g = euler_form(q).gram;
  return -(g.transpose().inverse() * g);
}

inline bool check_isometry(const EulerLattice& lat, const ExactMatrix& f) {
  if (lat.gram.size() != f.size())
    throw domain_error("DimensionMismatch", "isometry has size " + std::to_string(f.size()) + ", lattice has rank " +
                                                std::to_string(lat.gram.size()));
  return f.transpose() * lat.gram * f == lat.gram;
}

inline constexpr unsigned kCrosscheckLength = 400;
inline constexpr double kCrosscheckRhoTolerance = 1e-3;  // relative
inline constexpr double kCrosscheckSTolerance = 0.15;

struct SkippedPair {
  std::size_t i, j;
  std::string reason;
};

struct HereditaryCrosscheck {
  EstimatedSignature fit;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_used;
  std::vector<SkippedPair> pairs_skipped;
  bool used_all_pairs_total = false;
  bool heuristic = false;  // lower-bound heuristic only, basis not known to be hereditary
  bool agrees = false;
};

struct HereditaryReport {
  double h_cat = 0;
  unsigned h_pol = 0;
  GrowthSignature signature;
  HereditaryCrosscheck crosscheck;
  std::vector<std::string> notes;
};

namespace detail {

inline std::vector<Rational> basis_vector(std::size_t n, std::size_t i) {
  std::vector<Rational> v(n);
  v[i] = 1;
  return v;
}

}  // namespace detail

// Exact (log rho, s) of F, checked against the growth of the |chi(e_i, F^n e_j)|
// sequences. Pairs whose pairing vanishes somewhere in range are skipped; if
// every pair is skipped, the total over all pairs is fitted instead.
inline HereditaryReport hereditary_report(const EulerLattice& lat, const ExactMatrix& f,
                                          const GrowthOptions& opts = {}, unsigned n_max = kCrosscheckLength) {
  if (!f.is_integer()) throw domain_error("NonIntegerEntries", "isometry must have integer entries");
  if (!check_isometry(lat, f)) throw domain_error("NotAnIsometry", "F^T G F differs from G");
  HereditaryReport r;
  r.signature = growth_signature(f, opts);
  r.h_cat = r.signature.log_rho();
  r.h_pol = r.signature.s;
  if (r.h_cat == 0) r.h_cat = 0;

  const std::size_t n = f.size();
  std::vector<Real> total(n_max, 0), all_total(n_max, 0);
  auto& cc = r.crosscheck;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      // |e_i^T G F^k e_j| for k = 1..n_max, zeros kept.
      std::vector<Rational> cur = detail::basis_vector(n, j);
      std::vector<Real> vals(n_max);
      std::vector<unsigned> zeros;
      for (unsigned k = 0; k < n_max; ++k) {
        cur = f.apply(cur);
        Rational dot = 0;
        for (std::size_t t = 0; t < n; ++t) dot += lat.gram(i, t) * cur[t];
        vals[k] = to_real(abs(dot));
        if (sgn(dot) == 0) zeros.push_back(k + 1);
        all_total[k] += vals[k];
      }
      if (zeros.empty()) {
        cc.pairs_used.emplace_back(i, j);
        for (unsigned k = 0; k < n_max; ++k) total[k] += vals[k];
      } else {
        std::string where = "ZeroPairingAt n = " + std::to_string(zeros.front());
        if (zeros.size() > 1) where += " and " + std::to_string(zeros.size() - 1) + " more";
        cc.pairs_skipped.push_back({i, j, where});
      }
    }
  if (cc.pairs_used.empty()) {
    for (Real v : all_total)
      if (!(v > 0)) throw domain_error("AllPairingsDegenerate", "every pairing sequence vanishes, even in total");
    total = all_total;
    cc.used_all_pairs_total = true;
  }
  cc.fit = fit_growth(PositiveSequence(std::move(total)));
  cc.heuristic = lat.basis == BasisTag::UserSupplied;
  const double rho = r.signature.rho_float;
  cc.agrees = std::fabs(cc.fit.rho_hat - rho) <= kCrosscheckRhoTolerance * rho &&
              std::fabs(cc.fit.s_hat - static_cast<double>(r.h_pol)) <= kCrosscheckSTolerance;
  if (cc.heuristic)
    r.notes.push_back("Gram matrix supplied directly: the |chi| crosscheck is a lower-bound heuristic unless the "
                      "category is hereditary");
  r.notes.push_back("polynomial mass growth equals h_pol provided a numerical stability condition exists; "
                    "that hypothesis is not checked");
  return r;
}

}  // namespace catent
