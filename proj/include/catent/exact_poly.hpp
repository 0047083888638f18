#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "catent/error.hpp"
#include "catent/exact_matrix.hpp"

namespace catent {

// Univariate polynomial over Q, coefficients lowest degree first.
// The coefficient vector never carries trailing zeros; the zero polynomial
// has an empty vector and reports degree 0.
class ExactPoly {
 public:
  ExactPoly() = default;
  ExactPoly(std::initializer_list<Rational> coeffs) : c_(coeffs) { trim(); }
  explicit ExactPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static ExactPoly constant(const Rational& v) { return ExactPoly({v}); }
  static ExactPoly monomial(std::size_t degree, const Rational& coeff = 1) {
    std::vector<Rational> c(degree + 1);
    c[degree] = coeff;
    return ExactPoly(std::move(c));
  }
  // x - root
  static ExactPoly linear(const Rational& root) { return ExactPoly({-root, 1}); }

  bool is_zero() const noexcept { return c_.empty(); }
  std::size_t degree() const noexcept { return c_.empty() ? 0 : c_.size() - 1; }
  const std::vector<Rational>& coefficients() const noexcept { return c_; }
  Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  bool is_integer() const {
    for (const auto& v : c_)
      if (!is_integral(v)) return false;
    return true;
  }

  ExactPoly monic() const {
    if (is_zero()) return *this;
    ExactPoly p = *this;
    Rational lc = c_.back();
    for (auto& v : p.c_) v /= lc;
    return p;
  }

  ExactPoly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<unsigned long>(k);
    return ExactPoly(std::move(d));
  }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  // Horner evaluation at a square matrix.
  ExactMatrix operator()(const ExactMatrix& m) const {
    ExactMatrix acc = ExactMatrix::zero(m.size());
    const ExactMatrix id = ExactMatrix::identity(m.size());
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * m + *it * id;
    return acc;
  }

  ExactPoly& operator+=(const ExactPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  ExactPoly& operator-=(const ExactPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  ExactPoly& operator*=(const Rational& s) {
    for (auto& v : c_) v *= s;
    trim();
    return *this;
  }

  friend ExactPoly operator+(ExactPoly a, const ExactPoly& b) { return a += b; }
  friend ExactPoly operator-(ExactPoly a, const ExactPoly& b) { return a -= b; }
  friend ExactPoly operator*(ExactPoly a, const Rational& s) { return a *= s; }
  friend ExactPoly operator-(ExactPoly a) { return a *= Rational(-1); }
  friend ExactPoly operator*(const ExactPoly& a, const ExactPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (sgn(a.c_[i]) == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return ExactPoly(std::move(r));
  }

  // Euclidean division: *this = q * d + r with deg r < deg d.
  std::pair<ExactPoly, ExactPoly> divmod(const ExactPoly& d) const {
    if (d.is_zero()) throw domain_error("DivisionByZero", "polynomial division by zero");
    if (c_.size() < d.c_.size()) return {ExactPoly{}, *this};
    std::vector<Rational> rem = c_;
    std::vector<Rational> q(c_.size() - d.c_.size() + 1);
    const Rational& lc = d.c_.back();
    for (std::size_t k = q.size(); k-- > 0;) {
      Rational f = rem[k + d.c_.size() - 1] / lc;
      q[k] = f;
      if (sgn(f) == 0) continue;
      for (std::size_t j = 0; j < d.c_.size(); ++j) rem[k + j] -= f * d.c_[j];
    }
    rem.resize(d.c_.size() - 1);
    return {ExactPoly(std::move(q)), ExactPoly(std::move(rem))};
  }

  friend ExactPoly operator/(const ExactPoly& a, const ExactPoly& b) { return a.divmod(b).first; }
  friend ExactPoly operator%(const ExactPoly& a, const ExactPoly& b) { return a.divmod(b).second; }

  friend bool operator==(const ExactPoly& a, const ExactPoly& b) { return a.c_ == b.c_; }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = c_.size(); k-- > 0;) {
      const Rational& v = c_[k];
      if (sgn(v) == 0) continue;
      Rational mag = abs(v);
      if (first) {
        if (sgn(v) < 0) os << '-';
      } else {
        os << (sgn(v) < 0 ? " - " : " + ");
      }
      first = false;
      bool unit = mag == 1;
      if (k == 0 || !unit) os << mag;
      if (k > 0) {
        if (!unit) os << '*';
        os << 'x';
        if (k > 1) os << '^' << k;
      }
    }
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const ExactPoly& p) { return os << p.to_string(); }

 private:
  void trim() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
  }

  std::vector<Rational> c_;
};

// Monic gcd over Q; gcd(0, 0) = 0.
inline ExactPoly gcd(ExactPoly a, ExactPoly b) {
  while (!b.is_zero()) {
    ExactPoly r = a % b;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

// Pairwise coprime squarefree parts h_j with p = lc(p) * prod h_j^j, ordered
// by increasing multiplicity (Yun's algorithm).
inline std::vector<std::pair<ExactPoly, unsigned>> squarefree_decomposition(const ExactPoly& p) {
  if (p.is_zero()) throw domain_error("ZeroPolynomial", "squarefree decomposition of the zero polynomial");
  std::vector<std::pair<ExactPoly, unsigned>> parts;
  if (p.degree() == 0) return parts;
  ExactPoly f = p.monic();
  ExactPoly df = f.derivative();
  ExactPoly a = gcd(f, df);
  ExactPoly b = f / a;
  ExactPoly c = df / a;
  ExactPoly d = c - b.derivative();
  for (unsigned i = 1; b.degree() > 0; ++i) {
    ExactPoly g = gcd(b, d);
    b = b / g;
    c = d / g;
    d = c - b.derivative();
    if (g.degree() > 0) parts.emplace_back(g, i);
  }
  return parts;
}

// Product of the distinct monic irreducible factors.
inline ExactPoly squarefree_part(const ExactPoly& p) {
  if (p.is_zero()) throw domain_error("ZeroPolynomial", "squarefree part of the zero polynomial");
  return (p / gcd(p, p.derivative())).monic();
}

// Smallest k in [1, bound] with x^k = 1 modulo h, if any. Such a k exists
// exactly when every root of h is a k-th root of unity.
inline std::optional<unsigned long> root_of_unity_order(const ExactPoly& h, unsigned long bound) {
  if (h.degree() == 0) return std::nullopt;
  const ExactPoly one = ExactPoly::constant(1);
  const ExactPoly x = ExactPoly::monomial(1);
  ExactPoly power = x % h;
  for (unsigned long k = 1; k <= bound; ++k) {
    if (power == one % h) return k;
    power = (power * x) % h;
  }
  return std::nullopt;
}

}  // namespace catent
