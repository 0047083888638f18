// One pass/fail line per acceptance criterion. Exit status 0 iff all pass.
#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "catent/catent.hpp"
#include "catent/corpus.hpp"

using namespace catent;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  int failures = 0;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (++failures <= 3) detail += (detail.empty() ? "" : "; ") + what;
    pass = false;
  }
};

std::string fmt(double x, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

// Sum of |entries| of M^n for n = 1..n_max, in exact integer arithmetic.
PositiveSequence entry_sums(const ExactMatrix& m, unsigned n_max) {
  const std::size_t n = m.size();
  std::vector<Integer> a(n * n), p(n * n), q(n * n);
  for (std::size_t i = 0; i < n * n; ++i) a[i] = p[i] = m.entries()[i].get_num();
  std::vector<Real> out;
  for (unsigned k = 1; k <= n_max; ++k) {
    Integer sum = 0;
    for (const auto& x : p) sum += abs(x);
    out.push_back(to_real(sum));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Integer acc = 0;
        for (std::size_t l = 0; l < n; ++l) acc += p[i * n + l] * a[l * n + j];
        q[i * n + j] = acc;
      }
    std::swap(p, q);
  }
  return PositiveSequence(std::move(out));
}

Verdict jordan_oracle() {
  Verdict v;
  std::mt19937_64 rng(20240601);
  double worst = 0;
  for (int c = 0; c < 200; ++c) {
    auto qc = corpus::random_quasi_unipotent(rng, 8);
    auto g = growth_signature(qc.m);
    const bool exact_one = g.rho_exact && std::holds_alternative<RhoRational>(*g.rho_exact) &&
                           std::get<RhoRational>(*g.rho_exact).value == 1;
    v.expect(exact_one && g.s + 1 == qc.max_repetition,
             "case " + std::to_string(c) + ": s = " + std::to_string(g.s) + ", j* = " + std::to_string(qc.max_repetition));
    auto est = fit_growth(entry_sums(qc.m, 400));
    const double err = std::fabs(est.s_hat - static_cast<double>(qc.max_repetition - 1));
    worst = std::max(worst, err);
    v.expect(err <= 0.15, "case " + std::to_string(c) + ": s_hat = " + fmt(est.s_hat));
  }
  if (v.pass) v.detail = "200 cases, worst |s_hat - s| = " + fmt(worst, 3);
  return v;
}

Verdict trichotomy_table() {
  Verdict v;
  const double golden = std::log((3 + std::sqrt(5.0)) / 2);
  struct Row {
    ExactMatrix m;
    double h_cat;
    unsigned h_pol;
  };
  const std::vector<Row> rows{{ExactMatrix::identity(2), 0, 0},
                              {-ExactMatrix::identity(2), 0, 0},
                              {ExactMatrix{{1, 1}, {0, 1}}, 0, 1},
                              {ExactMatrix{{1, 0}, {1, 1}}, 0, 1},
                              {ExactMatrix{{0, 1}, {-1, 0}}, 0, 0},
                              {ExactMatrix{{1, 1}, {-1, 0}}, 0, 0},
                              {ExactMatrix{{2, 1}, {1, 1}}, golden, 0},
                              {ExactMatrix{{1, -1}, {1, 0}}, 0, 0}};
  for (const auto& r : rows) {
    auto rep = trichotomy_report(r.m);
    v.expect(std::fabs(rep.h_cat - r.h_cat) <= 1e-9 && rep.h_pol == r.h_pol, to_string(r.m));
    if (r.h_cat > 0) v.expect(rep.h_cat_exact == "log((3+sqrt(5))/2)", rep.h_cat_exact);
  }
  if (v.pass) v.detail = "8 matrices";
  return v;
}

Verdict braid_consistency() {
  Verdict v;
  std::mt19937_64 rng(7);
  std::vector<TwistWord> conj;
  for (int i = 0; i < 50; ++i) conj.push_back(corpus::random_a2_word(rng));
  for (int c = 0; c < 500; ++c) {
    auto w = corpus::random_a2_word(rng, 12);
    auto rep = trichotomy_report(w);
    auto x = crosscheck_with_lattice(w);
    v.expect(x.consistent && std::fabs(rep.h_cat - x.log_rho) <= 1e-9 && rep.h_pol == x.s,
             w.to_string() + ": " + x.details);
    for (const auto& g : conj) v.expect(trichotomy_report(g * w * g.inverse()) == rep, "conjugate of " + w.to_string());
  }
  if (v.pass) v.detail = "500 words, 25000 conjugates";
  return v;
}

Verdict dynamical_degrees() {
  Verdict v;
  for (unsigned long k : {2ul, 3ul})
    for (unsigned d : {1u, 2u, 3u}) {
      const std::string tag = "k=" + std::to_string(k) + " d=" + std::to_string(d);
      auto e = corpus::power_map(k, d);
      auto r = pullback_entropy_report(e);
      Integer kp = 1;
      for (unsigned p = 0; p <= d; ++p, kp *= k) {
        const auto& ex = r.table.signatures[p].rho_exact;
        v.expect(ex && std::holds_alternative<RhoRational>(*ex) && std::get<RhoRational>(*ex).value == Rational(kp),
                 tag + " d_" + std::to_string(p));
      }
      v.expect(std::fabs(r.h_cat - d * std::log(static_cast<double>(k))) <= 1e-12 && r.h_pol == 0, tag);
      auto kn = kuenneth_self_product(e);
      v.expect(kn.ok(), tag + " self-product");
    }
  auto ab = corpus::abelian_surface_parabolic();
  auto r = pullback_entropy_report(ab);
  v.expect(r.h_cat == 0 && r.h_pol == 2, "abelian surface: (" + fmt(r.h_cat) + ", " + std::to_string(r.h_pol) + ")");
  auto kn = kuenneth_self_product(ab);
  v.expect(kn.ok(), "abelian surface self-product");
  if (v.pass) v.detail = "6 power maps and the abelian surface";
  return v;
}

Verdict line_bundles() {
  Verdict v;
  for (unsigned d = 1; d <= 4; ++d) {
    auto r = line_bundle_report(corpus::projective_hyperplane_bundle(d, 400));
    v.expect(r.h_pol_exact && *r.h_pol_exact == d, "O(1) on P^" + std::to_string(d));
    v.expect(r.h_pol_empirical && std::fabs(*r.h_pol_empirical - d) <= 0.15,
             "P^" + std::to_string(d) + " s_hat = " + fmt(r.h_pol_empirical.value_or(-1)));
  }
  auto r = line_bundle_report(corpus::blowup_line_bundle(400));
  v.expect(r.nu == 1 && r.h_pol_lower == 1 && r.h_pol_upper == 2 && !r.h_pol_exact, "blow-up nu and bounds");
  const double s_hat = r.h_pol_empirical.value_or(-1);
  v.expect(std::fabs(s_hat - 2) <= 0.15, "blow-up s_hat = " + fmt(s_hat));
  v.expect(!r.notes.empty(), "blow-up strict inequality note");
  if (v.pass) v.detail = "d = 1..4; blow-up s_hat = " + fmt(s_hat, 4) + " > nu = 1";
  return v;
}

Verdict twists() {
  Verdict v;
  int cases = 0;
  for (auto kind : {TwistKind::Spherical, TwistKind::PTwist})
    for (unsigned d = 1; d <= 4; ++d)
      for (Real t : {-1.0L, -0.1L, 0.0L, 0.1L, 1.0L})
        for (Real a : {0.5L, 1.0L, 10.0L})
          for (Real b : {0.5L, 1.0L, 10.0L})
            for (unsigned long n = 1; n <= 200; ++n) {
              ++cases;
              TwistParams p{kind, d, t, a, b, true};
              const Real rec = twist_recurrence(p, n);
              const std::string tag = std::string(to_string(kind)) + " d=" + std::to_string(d) +
                                      " t=" + fmt(static_cast<double>(t)) + " n=" + std::to_string(n);
              v.expect(std::fabs(twist_partial_sum(p, n) - rec) <= 1e-12L * rec, tag + " closed-form sum");
              const Real bound = twist_bound(p, n);
              if (t == 0 || (kind == TwistKind::Spherical && d == 1))
                v.expect(std::fabs(bound - rec) <= 1e-12L * rec, tag + " linear bound");
              else
                v.expect(bound >= rec * (1 - 1e-12L), tag + " upper bound");
            }
  for (unsigned d = 2; d <= 4; ++d)
    for (Real t : {-1.0L, -0.5L, -0.1L}) {
      std::vector<Real> seq;
      TwistParams p{TwistKind::Spherical, d, t, 1, 1, true};
      for (unsigned long n = 1; n <= 200; ++n) seq.push_back(twist_recurrence(p, n));
      auto est = fit_growth(PositiveSequence(std::move(seq)));
      const double rho = std::exp(static_cast<double>((1 - static_cast<Real>(d)) * t));
      v.expect(std::fabs(est.rho_hat - rho) <= 1e-3 * rho,
               "fit d=" + std::to_string(d) + " t=" + fmt(static_cast<double>(t)) + ": " + fmt(est.rho_hat));
    }
  if (v.pass) v.detail = std::to_string(cases) + " grid points, 9 growth fits";
  return v;
}

Verdict hereditary() {
  Verdict v;
  int quivers = 0;
  auto check = [&](const Quiver& q, const std::string& tag, unsigned h_pol, bool zero_entropy) {
    ++quivers;
    auto r = hereditary_report(euler_form(q), coxeter_matrix(q));
    v.expect(r.crosscheck.agrees, tag + " crosscheck (rho_hat " + fmt(r.crosscheck.fit.rho_hat) + ", s_hat " +
                                      fmt(r.crosscheck.fit.s_hat) + ")");
    v.expect(r.h_pol == h_pol && (r.h_cat == 0) == zero_entropy, tag + " values");
    return r;
  };
  for (unsigned n = 1; n <= 5; ++n) {
    int o = 0;
    for (const auto& q : corpus::a_n_orientations(n))
      check(q, "A" + std::to_string(n) + " orientation " + std::to_string(o++), 0, true);
  }
  check(corpus::kronecker(2), "2-Kronecker", 1, true);
  auto k3 = check(corpus::kronecker(3), "3-Kronecker", 0, false);
  const auto& ex = k3.signature.rho_exact;
  v.expect(ex && std::holds_alternative<RhoRootOf>(*ex) &&
               std::get<RhoRootOf>(*ex).factor == ExactPoly(std::vector<Rational>{1, -7, 1}),
           "3-Kronecker exact radius");
  v.expect(std::fabs(k3.h_cat - std::log((7 + 3 * std::sqrt(5.0)) / 2)) <= 1e-9, "3-Kronecker h_cat");
  if (v.pass) v.detail = std::to_string(quivers) + " quivers; 3-Kronecker h_cat = " + fmt(k3.h_cat, 12);
  return v;
}

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(CATENT_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Verdict determinism() {
  Verdict v;
  Run st = run_cli("selftest");
  v.expect(st.code == 0, "selftest exit " + std::to_string(st.code));
  for (const char* args : {"selftest", "classify T1 T2^-1 T1", "twist --kind ptwist --d 2 --t -0.5 --n 50"}) {
    Run a = run_cli(std::string("--json ") + args), b = run_cli(std::string("--json ") + args);
    v.expect(a.code == 0 && !a.out.empty() && a.out == b.out, std::string("--json ") + args + " differs between runs");
  }
  Run bad = run_cli("selftest --corrupt-gram");
  v.expect(bad.code == 1, "corrupted corpus exit " + std::to_string(bad.code));
  if (v.pass) v.detail = "selftest 0, corrupted 1, outputs identical";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"Jordan oracle equivalence", jordan_oracle},
      {"trichotomy table", trichotomy_table},
      {"braid consistency", braid_consistency},
      {"dynamical-degree suite", dynamical_degrees},
      {"line-bundle suite", line_bundles},
      {"twist suite", twists},
      {"hereditary suite", hereditary},
      {"determinism and self-test", determinism}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !v.pass;
    std::printf("criterion %zu: %s  %s  [%s] (%.1fs)\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed ? 1 : 0;
}
