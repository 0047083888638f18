#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "catent/error.hpp"
#include "catent/exact_linalg.hpp"
#include "catent/exact_matrix.hpp"

namespace catent {

enum class WordContext { A2CY3, EllipticCurve };

inline const char* to_string(WordContext c) { return c == WordContext::A2CY3 ? "a2cy3" : "elliptic"; }

inline WordContext parse_context(std::string_view s) {
  if (s == "a2cy3") return WordContext::A2CY3;
  if (s == "elliptic") return WordContext::EllipticCurve;
  throw parse_error("unknown context '" + std::string(s) + "' (expected a2cy3 or elliptic)");
}

struct Letter {
  int generator;  // 1 or 2
  long exponent;  // nonzero
  friend bool operator==(const Letter&, const Letter&) = default;
};

class TwistWord {
 public:
  explicit TwistWord(WordContext ctx, std::vector<Letter> letters = {}, long shift = 0) : ctx_(ctx), shift_(shift) {
    for (const auto& l : letters) push(l);
  }

  // Whitespace-separated tokens: T1 T2 T1^-3 in the A2 context, T S S^2 in
  // the elliptic context, and shift markers [m] in either.
  static TwistWord parse(WordContext ctx, std::string_view text) {
    std::istringstream in{std::string(text)};
    std::vector<std::string> tokens;
    for (std::string tok; in >> tok;) tokens.push_back(tok);
    return parse(ctx, tokens);
  }

  static TwistWord parse(WordContext ctx, const std::vector<std::string>& tokens) {
    if (tokens.empty()) throw parse_error("empty word");
    TwistWord w(ctx);
    for (const auto& tok : tokens) w.push_token(tok);
    return w;
  }

  WordContext context() const noexcept { return ctx_; }
  const std::vector<Letter>& letters() const noexcept { return letters_; }
  long shift() const noexcept { return shift_; }

  TwistWord inverse() const {
    TwistWord w(ctx_, {}, -shift_);
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.push({it->generator, -it->exponent});
    return w;
  }

  TwistWord power(unsigned m) const {
    TwistWord w(ctx_);
    for (unsigned i = 0; i < m; ++i) w = w * *this;
    return w;
  }

  friend TwistWord operator*(const TwistWord& a, const TwistWord& b) {
    if (a.ctx_ != b.ctx_) throw domain_error("ContextMismatch", "cannot multiply words from different contexts");
    TwistWord w = a;
    w.shift_ += b.shift_;
    for (const auto& l : b.letters_) w.push(l);
    return w;
  }

  std::string to_string() const {
    std::string out;
    for (const auto& l : letters_) {
      if (!out.empty()) out += ' ';
      out += generator_name(ctx_, l.generator);
      if (l.exponent != 1) out += "^" + std::to_string(l.exponent);
    }
    if (shift_ != 0) out += (out.empty() ? "" : " ") + ("[" + std::to_string(shift_) + "]");
    return out.empty() ? "1" : out;
  }

  static std::string generator_name(WordContext ctx, int g) {
    if (ctx == WordContext::A2CY3) return g == 1 ? "T1" : "T2";
    return g == 1 ? "T" : "S";
  }

 private:
  void push(Letter l) {
    if (l.exponent == 0) return;
    if (!letters_.empty() && letters_.back().generator == l.generator) {
      letters_.back().exponent += l.exponent;
      if (letters_.back().exponent == 0) letters_.pop_back();
      return;
    }
    letters_.push_back(l);
  }

  void push_token(const std::string& tok) {
    if (tok.size() >= 3 && tok.front() == '[' && tok.back() == ']') {
      shift_ += parse_long(tok.substr(1, tok.size() - 2), tok);
      return;
    }
    auto caret = tok.find('^');
    std::string base = tok.substr(0, caret);
    long e = caret == std::string::npos ? 1 : parse_long(tok.substr(caret + 1), tok);
    int g = 0;
    for (int cand : {1, 2})
      if (base == generator_name(ctx_, cand)) g = cand;
    if (g == 0) throw parse_error("bad token '" + tok + "' for context " + catent::to_string(ctx_));
    if (e == 0) throw parse_error("zero exponent in token '" + tok + "'");
    push({g, e});
  }

  static long parse_long(const std::string& s, const std::string& tok) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(s, &used);
    } catch (const std::exception&) {
      throw parse_error("bad integer in token '" + tok + "'");
    }
    if (used != s.size()) throw parse_error("bad integer in token '" + tok + "'");
    return v;
  }

  WordContext ctx_;
  std::vector<Letter> letters_;
  long shift_ = 0;
};

inline ExactMatrix generator_matrix(WordContext ctx, int g) {
  if (ctx == WordContext::A2CY3) return g == 1 ? ExactMatrix{{1, 1}, {0, 1}} : ExactMatrix{{1, 0}, {-1, 1}};
  return g == 1 ? ExactMatrix{{1, 0}, {1, 1}} : ExactMatrix{{0, 1}, {-1, 0}};
}

// Shift markers act trivially on the lattice.
inline ExactMatrix word_to_matrix(const TwistWord& w) {
  ExactMatrix m = ExactMatrix::identity(2);
  for (const auto& l : w.letters()) {
    ExactMatrix g = generator_matrix(w.context(), l.generator);
    if (l.exponent < 0) g = g.inverse();
    m = m * g.pow(static_cast<unsigned long>(l.exponent < 0 ? -l.exponent : l.exponent));
  }
  return m;
}

enum class Sl2Class { EllipticOrCentral, ParabolicNonCentral, Hyperbolic };

inline const char* to_string(Sl2Class c) {
  switch (c) {
    case Sl2Class::EllipticOrCentral: return "elliptic";
    case Sl2Class::ParabolicNonCentral: return "parabolic";
    case Sl2Class::Hyperbolic: return "hyperbolic";
  }
  return "?";
}

inline Sl2Class classify_sl2(const ExactMatrix& g) {
  if (g.size() != 2 || !g.is_integer() || g.determinant() != 1)
    throw domain_error("NotInSL2Z", "expected a 2x2 integer matrix of determinant 1");
  Rational t = abs(g.trace());
  if (t < 2) return Sl2Class::EllipticOrCentral;
  if (t > 2) return Sl2Class::Hyperbolic;
  const bool central = g == ExactMatrix::identity(2) || g == -ExactMatrix::identity(2);
  return central ? Sl2Class::EllipticOrCentral : Sl2Class::ParabolicNonCentral;
}

struct TrichotomyReport {
  Sl2Class classification;
  std::string h_cat_exact;
  double h_cat = 0;
  unsigned h_pol = 0;
  bool pseudo_anosov = false;
  Integer trace;
  ExactMatrix matrix{ExactMatrix::identity(2)};

  friend bool operator==(const TrichotomyReport& a, const TrichotomyReport& b) {
    return a.classification == b.classification && a.h_cat_exact == b.h_cat_exact && a.h_cat == b.h_cat &&
           a.h_pol == b.h_pol && a.pseudo_anosov == b.pseudo_anosov && a.trace == b.trace;
  }
};

// pseudo_anosov marks hyperbolic classes; it applies to the braid-group action.
inline TrichotomyReport trichotomy_report(const ExactMatrix& g, bool braid_context = false) {
  TrichotomyReport r;
  r.matrix = g;
  r.classification = classify_sl2(r.matrix);
  r.trace = r.matrix.trace().get_num();
  switch (r.classification) {
    case Sl2Class::EllipticOrCentral:
      r.h_cat_exact = "0";
      break;
    case Sl2Class::ParabolicNonCentral:
      r.h_cat_exact = "0";
      r.h_pol = 1;
      break;
    case Sl2Class::Hyperbolic: {
      Integer t = abs(r.trace);
      Integer disc = t * t - 4;
      r.h_cat_exact = "log((" + t.get_str() + "+sqrt(" + disc.get_str() + "))/2)";
      // log((t + sqrt(t^2 - 4))/2) = acosh(t/2)
      r.h_cat = static_cast<double>(std::acosh(to_real(Rational(t)) / 2));
      r.pseudo_anosov = braid_context;
      break;
    }
  }
  return r;
}

inline TrichotomyReport trichotomy_report(const TwistWord& w) {
  return trichotomy_report(word_to_matrix(w), w.context() == WordContext::A2CY3);
}

struct LatticeCrosscheck {
  bool consistent = false;
  double log_rho = 0;
  unsigned s = 0;
  std::string details;
};

inline constexpr double kCrosscheckTolerance = 1e-9;

// Compares the trichotomy values with the spectral data of the lattice action.
inline LatticeCrosscheck crosscheck_with_lattice(const TwistWord& w) {
  TrichotomyReport r = trichotomy_report(w);
  GrowthSignature sig = growth_signature(r.matrix);
  LatticeCrosscheck c;
  c.log_rho = sig.log_rho();
  c.s = sig.s;
  const double diff = std::fabs(r.h_cat - c.log_rho);
  c.consistent = diff <= kCrosscheckTolerance && r.h_pol == c.s;
  std::ostringstream os;
  os << "h_cat " << r.h_cat << " vs log rho " << c.log_rho << " (diff " << diff << "); h_pol " << r.h_pol
     << " vs s " << c.s;
  c.details = os.str();
  return c;
}

}  // namespace catent
