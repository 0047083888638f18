#include <openssl/evp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "catent/catent.hpp"
#include "catent/io.hpp"
#include "catent/selftest.hpp"

namespace {

using catent::io::json;
using catent::io::number;

enum Exit { kOk = 0, kSelftestFailed = 1, kParse = 2, kDomain = 3, kInternal = 4 };

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw catent::internal_error("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

struct Envelope {
  std::string command;
  json inputs;
  json results = json::object();
  std::vector<std::string> warnings = {};

  json to_json() const {
    return {{"command", command},
            {"inputs_digest", sha256_hex(catent::io::canonical(inputs))},
            {"results", results},
            {"warnings", warnings},
            {"version", catent::kVersion}};
  }
};

void emit(const Envelope& env, bool as_json) {
  json j = env.to_json();
  if (as_json) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::cout << "command: " << env.command << "  (inputs " << j["inputs_digest"].get<std::string>().substr(0, 12)
            << ")\n";
  catent::io::render_text(std::cout, env.results, 2);
  for (const auto& w : env.warnings) std::cout << "warning: " << w << '\n';
}

void append(std::vector<std::string>& to, const std::vector<std::string>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

struct Globals {
  bool json_out = false;
  double tol = 1e-12;
  unsigned precision = catent::kStartPrecisionBits;

  catent::GrowthOptions growth() const { return {precision, tol}; }
  json as_json() const { return {{"tol", number(tol)}, {"precision", precision}}; }
};

json value_or_interval(const catent::ValueOrInterval& v) {
  if (v.unknown) return {{"kind", "unknown"}, {"lo", number(v.lo)}, {"hi", nullptr}};
  if (v.is_value()) return {{"kind", "value"}, {"value", number(v.lo)}};
  return {{"kind", "interval"}, {"lo", number(v.lo)}, {"hi", number(v.hi)}};
}

// ---- subcommands ----

Envelope cmd_growth(const Globals& g, const std::string& file) {
  const catent::ExactMatrix m = catent::io::matrix_from_json(catent::io::parse_json(catent::io::read_input(file), file));
  Envelope env{"growth", {{"matrix", catent::io::matrix_json(m)}, {"options", g.as_json()}}};
  const auto sig = catent::growth_signature(m, g.growth());
  env.results = catent::io::to_json(sig);
  env.results["dimension"] = m.size();
  env.results["char_poly"] = catent::char_poly(m).to_string();
  env.results["min_poly"] = catent::min_poly(m).to_string();
  append(env.warnings, sig.warnings);
  return env;
}

Envelope cmd_classify(const Globals& g, const std::string& context, const std::vector<std::string>& tokens) {
  const auto ctx = catent::parse_context(context);
  const auto word = catent::TwistWord::parse(ctx, tokens);
  Envelope env{"classify", {{"context", context}, {"word", tokens}, {"options", g.as_json()}}};
  const auto r = catent::trichotomy_report(word);
  const auto c = catent::crosscheck_with_lattice(word);
  env.results = {{"context", catent::to_string(ctx)},
                 {"reduced_word", word.to_string()},
                 {"shift", word.shift()},
                 {"matrix", catent::io::matrix_json(r.matrix)},
                 {"trace", catent::io::exact(catent::Rational(r.trace))},
                 {"classification", catent::to_string(r.classification)},
                 {"h_cat", {{"exact", r.h_cat_exact}, {"float", number(r.h_cat)}}},
                 {"h_pol", r.h_pol},
                 {"pseudo_anosov", r.pseudo_anosov},
                 {"crosscheck", {{"consistent", c.consistent}, {"log_rho", number(c.log_rho)}, {"s", c.s}}}};
  if (!c.consistent) throw catent::internal_error("lattice crosscheck failed: " + c.details);
  return env;
}

Envelope cmd_endo(const Globals& g, const std::string& file, bool kuenneth) {
  const json in = catent::io::parse_json(catent::io::read_input(file), file);
  const auto e = catent::io::endo_from_json(in);
  Envelope env{"endo", {{"endo", in}, {"kuenneth", kuenneth}, {"options", g.as_json()}}};
  const auto r = catent::pullback_entropy_report(e, g.growth());
  json d = json::array(), sigs = json::array();
  for (std::size_t p = 0; p < r.table.d.size(); ++p) {
    d.push_back(number(r.table.d[p]));
    sigs.push_back(catent::io::to_json(r.table.signatures[p]));
  }
  env.results = {{"dim", e.dim},
                 {"d", d},
                 {"s", r.table.s},
                 {"plateau", {r.table.plateau_lo, r.table.plateau_hi}},
                 {"h_cat", number(r.h_cat)},
                 {"h_pol", r.h_pol},
                 {"total_pullback_s", r.block_s},
                 {"signatures", sigs}};
  append(env.warnings, r.warnings);
  if (kuenneth) {
    const auto k = catent::kuenneth_self_product(e, g.growth());
    json kd = json::array();
    for (double x : k.table.d) kd.push_back(number(x));
    env.results["self_product"] = {
        {"d", kd}, {"s", k.table.s}, {"checks_passed", k.ok()}, {"mismatches", k.mismatches}};
    append(env.warnings, k.mismatches);
  }
  return env;
}

Envelope cmd_linebundle(const Globals& g, const std::string& file, bool serre) {
  const json in = catent::io::parse_json(catent::io::read_input(file), file);
  const auto lb = catent::io::line_bundle_from_json(in);
  Envelope env{"linebundle", {{"line_bundle", in}, {"serre", serre}, {"options", g.as_json()}}};
  const auto r = catent::line_bundle_report(lb, g.growth());
  json fits = json::object();
  for (const auto& [k, fit] : r.cohomology_fits) fits[std::to_string(k)] = catent::io::to_json(fit);
  env.results = {{"dim", lb.dim},
                 {"nef", catent::to_string(lb.nef)},
                 {"nu", r.nu},
                 {"h_cat", 0},
                 {"h_pol_bounds", {r.h_pol_lower, r.h_pol_upper}},
                 {"h_pol_exact", r.h_pol_exact ? json(*r.h_pol_exact) : json(nullptr)},
                 {"exp_signature", catent::io::to_json(r.exp_signature)},
                 {"cohomology_fits", fits},
                 {"h_pol_empirical", r.h_pol_empirical ? number(*r.h_pol_empirical) : json(nullptr)},
                 {"notes", r.notes}};
  if (serre) {
    const auto s = catent::serre_functor_report(lb.dim, lb, g.growth());
    env.results["serre"] = {{"h_t_slope", s.h_t_slope},
                            {"h_pol", s.canonical.h_pol_exact ? json(*s.canonical.h_pol_exact)
                                                              : json({s.canonical.h_pol_lower, s.canonical.h_pol_upper})}};
  }
  return env;
}

struct TwistArgs {
  std::string kind = "spherical";
  unsigned d = 1;
  double t = 0, A = 1, B = 1;
  long n = 0;
  bool orth = false;
  bool quiver_context = false;
};

Envelope cmd_twist(const Globals& g, const TwistArgs& a) {
  catent::TwistParams p;
  if (a.kind == "spherical") p.kind = catent::TwistKind::Spherical;
  else if (a.kind == "ptwist") p.kind = catent::TwistKind::PTwist;
  else throw catent::parse_error("--kind must be spherical or ptwist");
  p.d = a.d;
  p.t = a.t;
  p.A = a.A;
  p.B = a.B;
  p.orth_nonempty = a.orth;
  Envelope env{"twist",
               {{"kind", a.kind}, {"d", a.d}, {"t", a.t}, {"A", a.A}, {"B", a.B}, {"n", a.n}, {"orth", a.orth},
                {"quiver_context", a.quiver_context}, {"options", g.as_json()}}};
  const auto r = catent::twist_entropy_report(p, a.quiver_context);
  p.t = r.t;
  env.results = {{"kind", catent::to_string(p.kind)},
                 {"t", number(r.t)},
                 {"branch", r.branch},
                 {"h_t", {{"slope_for_t_le_0", number(r.h_t_slope_nonpos)}, {"slope_for_t_gt_0", 0}, {"value", number(r.h_t)}}},
                 {"h_pol", value_or_interval(r.h_pol)},
                 {"notes", r.notes}};
  if (a.n != 0) {
    if (a.n < 1) throw catent::domain_error("InvalidTwist", "--n must be positive");
    const auto n = static_cast<unsigned long>(a.n);
    env.results["n"] = a.n;
    env.results["bound"] = number(catent::twist_bound(p, n));
    env.results["recurrence"] = number(catent::twist_recurrence(p, n));
    env.results["partial_sum"] = number(catent::twist_partial_sum(p, n));
  }
  append(env.warnings, r.warnings);
  return env;
}

Envelope cmd_quiver(const Globals& g, const std::string& file, const std::string& iso_file) {
  const json in = catent::io::parse_json(catent::io::read_input(file), file);
  const auto q = catent::io::quiver_from_json(in);
  const auto lat = catent::euler_form(q);
  const auto phi = catent::coxeter_matrix(q);
  Envelope env{"quiver", {{"quiver", in}, {"options", g.as_json()}}};
  catent::ExactMatrix f = phi;
  if (!iso_file.empty()) {
    f = catent::io::matrix_from_json(catent::io::parse_json(catent::io::read_input(iso_file), iso_file));
    env.inputs["isometry"] = catent::io::matrix_json(f);
  }
  json arrows = json::array(), order = json::array();
  for (const auto& [i, j] : q.arrows()) arrows.push_back({i + 1, j + 1});
  for (unsigned v : q.topological_order()) order.push_back(v + 1);
  const bool iso = catent::check_isometry(lat, f);
  env.results = {{"vertices", q.vertex_count()},
                 {"arrows", arrows},
                 {"topological_order", order},
                 {"euler_form", catent::io::matrix_json(lat.gram)},
                 {"basis", catent::to_string(lat.basis)},
                 {"coxeter_matrix", catent::io::matrix_json(phi)},
                 {"isometry", iso_file.empty() ? json("coxeter") : json("user")},
                 {"is_isometry", iso}};
  const auto r = catent::hereditary_report(lat, f, g.growth());
  const auto& cc = r.crosscheck;
  json skipped = json::array();
  for (const auto& s : cc.pairs_skipped) skipped.push_back({{"pair", {s.i + 1, s.j + 1}}, {"reason", s.reason}});
  env.results["h_cat"] = number(r.h_cat);
  env.results["h_pol"] = r.h_pol;
  env.results["signature"] = catent::io::to_json(r.signature);
  env.results["crosscheck"] = {{"fit", catent::io::to_json(cc.fit)},
                               {"pairs_used", cc.pairs_used.size()},
                               {"pairs_skipped", skipped},
                               {"fitted_total_of_all_pairs", cc.used_all_pairs_total},
                               {"heuristic", cc.heuristic},
                               {"agrees", cc.agrees}};
  env.results["notes"] = r.notes;
  if (!cc.agrees) env.warnings.push_back("sequence crosscheck disagrees with the exact signature");
  return env;
}

struct EstimateArgs {
  long n_lo = 0, n_hi = 0;
  double drop_head = 0.25;
  std::vector<double> t_grid;
};

Envelope cmd_estimate(const Globals& g, const std::string& file, const EstimateArgs& a) {
  const std::string text = catent::io::read_input(file);
  catent::FitOptions fo{a.n_lo, a.n_hi, a.drop_head};
  json fit_opts = {{"n_lo", a.n_lo}, {"n_hi", a.n_hi}, {"drop_head", number(a.drop_head)}};
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const json in = catent::io::parse_json(text, file);
    if (in.contains("tables")) {
      const auto tables = catent::io::ext_tables_from_json(in.at("tables"));
      const auto grid = a.t_grid.empty() ? catent::default_t_grid() : a.t_grid;
      Envelope env{"estimate", {{"tables", in.at("tables")}, {"t_grid", grid}, {"fit", fit_opts}, {"options", g.as_json()}}};
      json rows = json::array();
      for (const auto& ge : catent::entropy_from_ext_sequence(tables, grid, fo)) {
        json row = catent::io::to_json(ge.fit);
        row["t"] = number(ge.t);
        rows.push_back(row);
        append(env.warnings, ge.fit.notes);
      }
      env.results = {{"grid", rows}};
      return env;
    }
  }
  const auto seq = catent::io::sequence_from_text(text, file);
  Envelope env{"estimate",
               {{"sequence", catent::io::sequence_to_canonical(seq.n_start, seq.values)},
                {"fit", fit_opts},
                {"options", g.as_json()}}};
  const auto e = catent::fit_growth(seq, fo);
  env.results = catent::io::to_json(e);
  env.results["n_start"] = seq.n_start;
  env.results["length"] = seq.values.size();
  append(env.warnings, e.notes);
  return env;
}

int cmd_selftest(const Globals& g, const std::string& filter, bool corrupt) {
  if (!filter.empty()) {
    bool known = false;
    for (const auto& m : catent::selftest::modules()) known = known || m.find(filter) != std::string::npos;
    if (!known) throw catent::parse_error("--filter '" + filter + "' matches no module");
  }
  const auto results = catent::selftest::run({filter, corrupt});
  Envelope env{"selftest", {{"filter", filter}, {"corrupt_gram", corrupt}}};
  json rows = json::array();
  std::size_t failed = 0;
  for (const auto& r : results) {
    failed += !r.outcome.pass;
    rows.push_back({{"module", r.module}, {"invariant", r.name}, {"pass", r.outcome.pass}, {"detail", r.outcome.detail}});
  }
  env.results = {{"checks", rows}, {"passed", results.size() - failed}, {"failed", failed}};
  if (g.json_out) {
    emit(env, true);
  } else {
    for (const auto& r : results)
      std::printf("%-4s  %-18s  %s  [%s]\n", r.outcome.pass ? "PASS" : "FAIL", r.module.c_str(), r.name.c_str(),
                  r.outcome.detail.c_str());
    std::printf("%zu passed, %zu failed\n", results.size() - failed, failed);
  }
  return failed ? kSelftestFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy and polynomial growth invariants of categorical and algebraic dynamical systems"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json_out, "Machine-readable output");
  app.add_option("--tol", g.tol, "Relative width bound for spectral radius intervals")->check(CLI::PositiveNumber);
  app.add_option("--precision", g.precision, "Starting precision in bits for root isolation")->check(CLI::Range(8u, 1024u));

  std::string file, file2, context = "a2cy3", filter;
  std::vector<std::string> tokens;
  bool kuenneth = false, serre = false, corrupt = false;
  TwistArgs ta;
  EstimateArgs ea;

  auto* growth = app.add_subcommand("growth", "Spectral radius and polynomial growth rate of a matrix");
  growth->add_option("matrix", file, "Matrix file ({\"rows\": ...}, '-' for stdin)")->required();

  auto* classify = app.add_subcommand("classify", "Trichotomy of a braid or elliptic-curve word");
  classify->add_option("--context", context, "a2cy3 or elliptic");
  // Word tokens are taken raw: CLI11 would read "[3]" as a list literal.
  classify->allow_extras();
  classify->footer("WORD: tokens such as T1 T2^-1 [3] (context a2cy3) or S T^2 (context elliptic)");

  auto* endo = app.add_subcommand("endo", "Dynamical degrees of a surjective endomorphism");
  endo->add_option("file", file, "Endo file")->required();
  endo->add_flag("--kuenneth", kuenneth, "Also check the self-product X x X");

  auto* linebundle = app.add_subcommand("linebundle", "Polynomial entropy of tensoring by a line bundle");
  linebundle->add_option("file", file, "Line-bundle file")->required();
  linebundle->add_flag("--serre", serre, "Treat the bundle as the canonical bundle and report the Serre functor");

  auto* twist = app.add_subcommand("twist", "Spherical twists and P-twists");
  twist->add_option("--kind", ta.kind, "spherical or ptwist")->required();
  twist->add_option("--d", ta.d, "Sphere dimension, or d for a P^d-object")->required()->check(CLI::PositiveNumber);
  twist->add_option("--t", ta.t, "Real parameter t")->required();
  twist->add_option("--A", ta.A, "A_t > 0")->check(CLI::PositiveNumber);
  twist->add_option("--B", ta.B, "B_t >= 0")->check(CLI::NonNegativeNumber);
  twist->add_option("--n", ta.n, "Evaluate bound and recurrence at this n");
  twist->add_flag("--orth", ta.orth, "The orthogonal complement of E is nonzero");
  twist->add_flag("--quiver-context", ta.quiver_context, "E is a simple of the A2 quiver CY3 category");

  auto* quiver = app.add_subcommand("quiver", "Euler form, Coxeter matrix and hereditary entropy");
  quiver->add_option("quiver", file, "Quiver file")->required();
  quiver->add_option("isometry", file2, "Matrix file of an isometry (default: the Coxeter matrix)");

  auto* estimate = app.add_subcommand("estimate", "Fit growth rates to a sequence or Ext tables");
  estimate->add_option("file", file, "Sequence or {\"tables\": ...} file")->required();
  estimate->add_option("--n-lo", ea.n_lo, "First index of the fit window");
  estimate->add_option("--n-hi", ea.n_hi, "Last index of the fit window");
  estimate->add_option("--drop-head", ea.drop_head, "Fraction of the sequence dropped before fitting");
  estimate->add_option("--t-grid", ea.t_grid, "Values of t for Ext tables");

  auto* selftest = app.add_subcommand("selftest", "Run the invariant corpus");
  selftest->add_option("--filter", filter, "Only run checks of this module");
  selftest->add_flag("--corrupt-gram", corrupt, "Negative control: perturb one Euler form")->group("Developer");

  // classify keeps its word tokens; falling through would hand them to the parent.
  for (auto* sub : app.get_subcommands({}))
    if (sub != classify) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  }

  try {
    if (*selftest) return cmd_selftest(g, filter, corrupt);
    Envelope env;
    if (*growth) env = cmd_growth(g, file);
    else if (*classify) {
      tokens = classify->remaining();
      if (tokens.empty()) throw catent::parse_error("classify: missing word");
      env = cmd_classify(g, context, tokens);
    }
    else if (*endo) env = cmd_endo(g, file, kuenneth);
    else if (*linebundle) env = cmd_linebundle(g, file, serre);
    else if (*twist) env = cmd_twist(g, ta);
    else if (*quiver) env = cmd_quiver(g, file, file2);
    else if (*estimate) env = cmd_estimate(g, file, ea);
    emit(env, g.json_out);
    return kOk;
  } catch (const catent::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case catent::ErrorKind::Parse: return kParse;
      case catent::ErrorKind::Domain: return kDomain;
      case catent::ErrorKind::Internal: return kInternal;
    }
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return kInternal;
  }
}
