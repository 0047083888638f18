#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "catent/error.hpp"
#include "catent/exact_linalg.hpp"
#include "catent/exact_matrix.hpp"
#include "catent/growth_estimator.hpp"
#include "catent/quiver_hereditary.hpp"
#include "catent/variety_dynamics.hpp"

namespace catent::io {

using json = nlohmann::json;

// Whole file, or standard input for "-".
inline std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error(what + ": invalid JSON (" + std::string(e.what()) + ")");
  }
}

// ---- input ----

inline Rational rational_from_json(const json& v, const std::string& where) {
  if (v.is_number_integer()) return v.is_number_unsigned() ? Rational(v.get<unsigned long>()) : Rational(v.get<long>());
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const Error& e) {
      throw parse_error(where + ": " + e.what());
    }
  }
  if (v.is_number_float()) throw parse_error(where + ": non-integer entries must be quoted, e.g. \"1/3\" or \"0.25\"");
  throw parse_error(where + ": expected an integer or a rational string");
}

// Either an array of rows or an object {"rows": [...]}.
inline ExactMatrix matrix_from_json(const json& j, const std::string& what = "matrix") {
  const json& rows = j.is_object() && j.contains("rows") ? j.at("rows") : j;
  if (!rows.is_array() || rows.empty()) throw parse_error(what + ": expected a nonempty array of rows");
  std::vector<std::vector<Rational>> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array()) throw parse_error(what + ": row " + std::to_string(r) + " is not an array");
    if (rows[r].size() != rows.size())
      throw parse_error(what + ": row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                        " entries, expected " + std::to_string(rows.size()));
    std::vector<Rational> row;
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      row.push_back(rational_from_json(rows[r][c], what + "[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
    out.push_back(std::move(row));
  }
  return ExactMatrix::from_rows(out);
}

inline Real real_from_json(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    char* end = nullptr;
    Real r = std::strtold(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw parse_error(where + ": bad number '" + s + "'");
    return r;
  }
  throw parse_error(where + ": expected a number");
}

inline json sequence_to_canonical(long n_start, const std::vector<Real>& values) {
  json vals = json::array();
  for (Real v : values) vals.push_back(static_cast<double>(v));
  return {{"n_start", n_start}, {"values", vals}};
}

// {"n_start": k, "values": [...]}, a bare array, or newline-separated numbers.
inline PositiveSequence sequence_from_json(const json& j, const std::string& what = "sequence") {
  long start = 1;
  const json* vals = &j;
  if (j.is_object()) {
    if (j.contains("n_start")) {
      if (!j.at("n_start").is_number_integer()) throw parse_error(what + ": n_start must be an integer");
      start = j.at("n_start").get<long>();
    }
    if (!j.contains("values")) throw parse_error(what + ": missing \"values\"");
    vals = &j.at("values");
  }
  if (!vals->is_array()) throw parse_error(what + ": values must be an array");
  std::vector<Real> v;
  for (std::size_t i = 0; i < vals->size(); ++i) v.push_back(real_from_json((*vals)[i], what + "[" + std::to_string(i) + "]"));
  return PositiveSequence(std::move(v), start);
}

inline PositiveSequence sequence_from_text(const std::string& text, const std::string& what = "sequence") {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '['))
    return sequence_from_json(parse_json(text, what), what);
  std::vector<Real> v;
  std::istringstream in(text);
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    std::string tok = line.substr(b, e - b + 1);
    char* end = nullptr;
    Real r = std::strtold(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw parse_error(what + ": line " + std::to_string(line_no) + ": bad number '" + tok + "'");
    v.push_back(r);
  }
  return PositiveSequence(std::move(v));
}

inline unsigned unsigned_field(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw parse_error(what + ": missing \"" + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long>() < 0) throw parse_error(what + ": \"" + key + "\" must be a nonnegative integer");
  return static_cast<unsigned>(v.get<long>());
}

inline EndoAction endo_from_json(const json& j) {
  if (!j.is_object()) throw parse_error("endo file: expected an object");
  EndoAction e;
  e.dim = unsigned_field(j, "dim", "endo file");
  if (!j.contains("actions") || !j.at("actions").is_object()) throw parse_error("endo file: \"actions\" must be an object");
  const json& acts = j.at("actions");
  for (unsigned p = 0; p <= e.dim; ++p) {
    const std::string key = std::to_string(p);
    if (!acts.contains(key)) throw parse_error("endo file: missing action for codimension " + key);
    e.actions.push_back(matrix_from_json(acts.at(key), "actions[" + key + "]"));
  }
  if (acts.size() != e.dim + 1) throw parse_error("endo file: actions must be keyed exactly 0..dim");
  if (j.contains("labels") && !j.at("labels").is_null()) {
    const json& labels = j.at("labels");
    for (unsigned p = 0; p <= e.dim; ++p) {
      const std::string key = std::to_string(p);
      if (!labels.contains(key) || !labels.at(key).is_array())
        throw parse_error("endo file: labels must be arrays keyed 0..dim");
      std::vector<std::string> names;
      for (const auto& n : labels.at(key)) {
        if (!n.is_string()) throw parse_error("endo file: labels must be strings");
        names.push_back(n.get<std::string>());
      }
      e.labels.push_back(std::move(names));
    }
  }
  return e;
}

inline NefFlag nef_from_string(const std::string& s) {
  if (s == "nef") return NefFlag::Nef;
  if (s == "antinef") return NefFlag::AntiNef;
  if (s == "unknown") return NefFlag::Unknown;
  throw parse_error("nef must be \"nef\", \"antinef\" or \"unknown\", got \"" + s + "\"");
}

inline LineBundleData line_bundle_from_json(const json& j) {
  if (!j.is_object()) throw parse_error("line-bundle file: expected an object");
  LineBundleData lb;
  lb.dim = unsigned_field(j, "dim", "line-bundle file");
  if (!j.contains("c1_action")) throw parse_error("line-bundle file: missing \"c1_action\"");
  lb.c1_action = matrix_from_json(j.at("c1_action"), "c1_action");
  if (j.contains("nef")) {
    if (!j.at("nef").is_string()) throw parse_error("line-bundle file: \"nef\" must be a string");
    lb.nef = nef_from_string(j.at("nef").get<std::string>());
  }
  if (j.contains("cohomology") && !j.at("cohomology").is_null()) {
    const json& coh = j.at("cohomology");
    if (!coh.is_object()) throw parse_error("line-bundle file: \"cohomology\" must be an object");
    for (const auto& [key, seq] : coh.items()) {
      int k = 0;
      try {
        std::size_t used = 0;
        k = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw parse_error("line-bundle file: cohomology key '" + key + "' is not an integer");
      }
      lb.cohomology.emplace(k, sequence_from_json(seq, "cohomology[" + key + "]"));
    }
  }
  return lb;
}

inline Quiver quiver_from_json(const json& j) {
  if (!j.is_object()) throw parse_error("quiver file: expected an object");
  const unsigned n = unsigned_field(j, "vertices", "quiver file");
  std::vector<std::pair<long, long>> arrows;
  if (j.contains("arrows")) {
    if (!j.at("arrows").is_array()) throw parse_error("quiver file: \"arrows\" must be an array");
    for (const auto& a : j.at("arrows")) {
      if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() || !a[1].is_number_integer())
        throw parse_error("quiver file: each arrow must be a pair of vertex numbers");
      arrows.emplace_back(a[0].get<long>(), a[1].get<long>());
    }
  }
  return Quiver::from_one_based(n, arrows);
}

inline std::vector<ExtTable> ext_tables_from_json(const json& j) {
  std::vector<ExtTable> tables;
  for (const auto& t : j) {
    if (!t.is_object()) throw parse_error("ext tables: each table must be an object {k: dim}");
    ExtTable tab;
    for (const auto& [key, dim] : t.items()) {
      long k = 0;
      try {
        std::size_t used = 0;
        k = std::stol(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw parse_error("ext tables: degree '" + key + "' is not an integer");
      }
      if (!dim.is_number_integer() || dim.get<long>() < 0)
        throw parse_error("ext tables: dimensions must be nonnegative integers");
      tab.dims[k] = dim.get<unsigned long>();
    }
    tables.push_back(std::move(tab));
  }
  return tables;
}

// ---- output ----

// 12 significant digits, then the shortest double that prints back the same.
inline json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  double r = std::strtod(buf, nullptr);
  if (r == 0) r = 0;  // drop the sign of -0
  if (r == std::nearbyint(r) && std::fabs(r) < 1e15) return static_cast<long long>(r);
  return r;
}

inline json number(Real v) { return number(static_cast<double>(v)); }

// Integers as JSON integers when they fit, anything else as a "p/q" string.
inline json exact(const Rational& q) {
  if (is_integral(q) && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return q.get_str();
}

inline json matrix_json(const ExactMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(exact(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline json to_json(const GrowthSignature& g) {
  json j;
  if (g.rho_exact && std::holds_alternative<RhoRational>(*g.rho_exact)) {
    const Rational& v = std::get<RhoRational>(*g.rho_exact).value;
    j["rho"] = is_integral(v) ? exact(v) : number(g.rho_float);
    j["rho_exact"] = exact(v);
  } else {
    j["rho"] = number(g.rho_float);
    if (g.rho_exact) {
      const auto& root = std::get<RhoRootOf>(*g.rho_exact);
      j["rho_exact"] = {{"largest_root_modulus_of", root.factor.to_string()}};
    }
  }
  j["rho_interval"] = {number(g.rho_interval.lo.get_d()), number(g.rho_interval.hi.get_d())};
  j["log_rho"] = number(g.log_rho());
  j["s"] = g.s;
  json factors = json::array();
  for (const auto& [f, m] : g.dominant_factors) factors.push_back({{"factor", f.to_string()}, {"multiplicity", m}});
  j["dominant_factors"] = factors;
  if (g.quasi_unipotent_order) j["quasi_unipotent_order"] = *g.quasi_unipotent_order;
  j["tied_moduli"] = g.tied_moduli;
  return j;
}

inline json to_json(const EstimatedSignature& e) {
  json j{{"rho_hat", number(e.rho_hat)},
         {"h_hat", number(e.h_hat())},
         {"s_hat", number(e.s_hat)},
         {"intercept", number(e.intercept)},
         {"residual", number(e.residual)},
         {"window", {e.n_lo, e.n_hi}}};
  if (!e.notes.empty()) j["notes"] = e.notes;
  return j;
}

// ---- canonical inputs ----

// Sorted keys, no whitespace.
inline std::string canonical(const json& j) { return j.dump(-1, ' ', true); }

// Human-readable rendering of a report: nested "key: value" lines.
inline void render_text(std::ostream& os, const json& j, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  auto scalar = [](const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  auto flat = [&](const json& v) {
    if (!v.is_array()) return false;
    for (const auto& e : v)
      if (e.is_object()) return false;
      else if (e.is_array())
        for (const auto& x : e)
          if (x.is_structured()) return false;
    return true;
  };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_object() || (v.is_array() && !flat(v))) {
        os << pad << k << ":\n";
        render_text(os, v, indent + 2);
      } else if (v.is_array()) {
        os << pad << k << ": " << v.dump() << '\n';
      } else {
        os << pad << k << ": " << scalar(v) << '\n';
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_structured() && !flat(v)) {
        os << pad << "-\n";
        render_text(os, v, indent + 2);
      } else {
        os << pad << "- " << (v.is_array() ? v.dump() : scalar(v)) << '\n';
      }
    }
  } else {
    os << pad << scalar(j) << '\n';
  }
}

}  // namespace catent::io
