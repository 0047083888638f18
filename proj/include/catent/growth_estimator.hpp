#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "catent/error.hpp"
#include "catent/exact_matrix.hpp"

namespace catent {

// Finitely supported k -> dim Hom(M, N[k]).
struct ExtTable {
  std::map<long, unsigned long> dims;
};

// sum_k dims[k] e^{-kt}
inline Real eval_ext_distance(const ExtTable& table, Real t) {
  Real sum = 0;
  for (const auto& [k, dim] : table.dims) sum += static_cast<Real>(dim) * std::exp(-static_cast<Real>(k) * t);
  return sum;
}

inline constexpr std::size_t kMinSequenceLength = 8;

struct PositiveSequence {
  long n_start = 1;
  std::vector<Real> values;

  PositiveSequence() = default;
  PositiveSequence(std::vector<Real> vals, long start = 1) : n_start(start), values(std::move(vals)) {
    if (n_start < 1) throw domain_error("InvalidStart", "n_start must be at least 1");
    if (values.size() < kMinSequenceLength)
      throw domain_error("WindowTooShort", "sequence has " + std::to_string(values.size()) + " values, need " +
                                               std::to_string(kMinSequenceLength));
    for (std::size_t i = 0; i < values.size(); ++i)
      if (!(values[i] > 0) || !std::isfinite(values[i]))
        throw domain_error("NonPositiveValue", "value at n = " + std::to_string(n_start + static_cast<long>(i)) +
                                                   " is not a positive finite number");
  }

  long n_end() const { return n_start + static_cast<long>(values.size()) - 1; }
  Real at(long n) const { return values[static_cast<std::size_t>(n - n_start)]; }
};

struct FitOptions {
  long n_lo = 0;  // 0: derive from drop_head_fraction
  long n_hi = 0;  // 0: last index
  double drop_head_fraction = 0.25;
};

inline constexpr double kResidualNoteThreshold = 0.1;

struct EstimatedSignature {
  double rho_hat = 0;
  double s_hat = 0;
  double intercept = 0;
  double residual = 0;  // RMS of log-space residuals
  long n_lo = 0, n_hi = 0;
  std::vector<std::string> notes;

  double h_hat() const { return std::log(rho_hat); }
};

// Least squares for log a_n = n log(rho) + s log(n) + c over the window.
inline EstimatedSignature fit_growth(const PositiveSequence& seq, const FitOptions& opts = {}) {
  for (std::size_t i = 0; i < seq.values.size(); ++i)
    if (!(seq.values[i] > 0) || !std::isfinite(seq.values[i]))
      throw domain_error("NonPositiveValue",
                         "value at n = " + std::to_string(seq.n_start + static_cast<long>(i)) + " is not positive");
  if (opts.drop_head_fraction < 0 || opts.drop_head_fraction >= 1)
    throw domain_error("InvalidWindow", "drop_head_fraction must lie in [0, 1)");
  long hi = opts.n_hi ? opts.n_hi : seq.n_end();
  long lo = opts.n_lo;
  if (!lo) {
    auto dropped = static_cast<long>(std::floor(opts.drop_head_fraction * static_cast<double>(seq.values.size())));
    lo = seq.n_start + dropped;
  }
  if (lo < seq.n_start || hi > seq.n_end() || lo > hi)
    throw domain_error("InvalidWindow", "window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                            "] is not inside the sequence");
  const long len = hi - lo + 1;
  if (len < static_cast<long>(kMinSequenceLength))
    throw domain_error("WindowTooShort", "fit window has " + std::to_string(len) + " points, need " +
                                             std::to_string(kMinSequenceLength));

  // Centering the design columns keeps the normal problem well conditioned.
  Eigen::MatrixXd x(len, 3);
  Eigen::VectorXd y(len);
  const double n_mid = 0.5 * static_cast<double>(lo + hi);
  const double log_mid = std::log(n_mid);
  for (long n = lo; n <= hi; ++n) {
    const auto r = static_cast<Eigen::Index>(n - lo);
    x(r, 0) = static_cast<double>(n) - n_mid;
    x(r, 1) = std::log(static_cast<double>(n)) - log_mid;
    x(r, 2) = 1.0;
    y(r) = static_cast<double>(std::log(seq.at(n)));
  }
  Eigen::Vector3d beta = x.colPivHouseholderQr().solve(y);
  Eigen::VectorXd resid = y - x * beta;

  EstimatedSignature est;
  est.rho_hat = std::exp(beta(0));
  est.s_hat = beta(1);
  est.intercept = beta(2) - beta(0) * n_mid - beta(1) * log_mid;
  est.residual = std::sqrt(resid.squaredNorm() / static_cast<double>(len));
  est.n_lo = lo;
  est.n_hi = hi;
  if (est.residual > kResidualNoteThreshold)
    est.notes.push_back("residual " + std::to_string(est.residual) +
                        " exceeds 0.1: the growth limit may not exist, and the fit cannot tell the upper "
                        "polynomial entropy from the lower one");
  return est;
}

struct GridEstimate {
  double t = 0;
  EstimatedSignature fit;
};

inline const std::vector<double>& default_t_grid() {
  static const std::vector<double> grid{-1.0, -0.5, 0.0, 0.5, 1.0};
  return grid;
}

// tables[i] describes n = i + 1.
inline std::vector<GridEstimate> entropy_from_ext_sequence(const std::vector<ExtTable>& tables,
                                                           const std::vector<double>& t_grid = default_t_grid(),
                                                           const FitOptions& opts = {}) {
  if (tables.size() < kMinSequenceLength)
    throw domain_error("WindowTooShort", "need at least " + std::to_string(kMinSequenceLength) + " tables");
  std::vector<GridEstimate> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    std::vector<Real> vals;
    vals.reserve(tables.size());
    for (const auto& tab : tables) vals.push_back(eval_ext_distance(tab, t));
    out.push_back({t, fit_growth(PositiveSequence(std::move(vals)), opts)});
  }
  return out;
}

// Exact |v^T G F^n w| for n = 1..n_max, handed over as reals.
inline PositiveSequence pairing_sequence(const ExactMatrix& gram, const ExactMatrix& f, const std::vector<Rational>& v,
                                         const std::vector<Rational>& w, unsigned n_max) {
  const std::size_t n = f.size();
  if (gram.size() != n || v.size() != n || w.size() != n)
    throw domain_error("DimensionMismatch", "Gram matrix, endomorphism and vectors must share one dimension");
  std::vector<Rational> row = gram.transpose().apply(v);  // (v^T G)^T
  std::vector<Rational> cur = w;
  std::vector<Real> vals;
  std::vector<unsigned> zeros;
  for (unsigned k = 1; k <= n_max; ++k) {
    cur = f.apply(cur);
    Rational dot = 0;
    for (std::size_t i = 0; i < n; ++i) dot += row[i] * cur[i];
    if (sgn(dot) == 0) zeros.push_back(k);
    vals.push_back(to_real(abs(dot)));
  }
  if (!zeros.empty()) {
    std::string list;
    for (std::size_t i = 0; i < zeros.size(); ++i) list += (i ? ", " : "") + std::to_string(zeros[i]);
    throw domain_error("ZeroPairingAt", "pairing vanishes at n = " + list);
  }
  return PositiveSequence(std::move(vals));
}

}  // namespace catent
