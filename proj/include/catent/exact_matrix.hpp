#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "catent/error.hpp"

namespace catent {

using Integer = mpz_class;
using Rational = mpq_class;

// Parses "7", "-3", "1/3", "0.25", "-1.5e2" as an exact rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw parse_error("empty number");

  auto is_digits = [](std::string_view v) {
    return !v.empty() && std::all_of(v.begin(), v.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  auto signed_digits = [&](std::string_view v) {
    if (!v.empty() && (v[0] == '-' || v[0] == '+')) v.remove_prefix(1);
    return is_digits(v);
  };

  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!signed_digits(num) || !is_digits(den)) throw parse_error("malformed fraction '" + s + "'");
    if (num[0] == '+') num.erase(0, 1);
    Integer d(den, 10);
    if (d == 0) throw parse_error("zero denominator in '" + s + "'");
    Rational r(Integer(num, 10), d);
    r.canonicalize();
    return r;
  }

  std::string_view v = s;
  bool negative = false;
  if (v[0] == '-' || v[0] == '+') {
    negative = v[0] == '-';
    v.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = v.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view ex = v.substr(e + 1);
    if (!signed_digits(ex) || ex.size() > 6) throw parse_error("malformed exponent in '" + s + "'");
    exponent = std::stol(std::string(ex));
    v = v.substr(0, e);
  }
  std::string digits;
  if (auto dot = v.find('.'); dot != std::string_view::npos) {
    std::string_view ip = v.substr(0, dot), fp = v.substr(dot + 1);
    if ((!ip.empty() && !is_digits(ip)) || (!fp.empty() && !is_digits(fp)) || (ip.empty() && fp.empty()))
      throw parse_error("malformed decimal '" + s + "'");
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!is_digits(v)) throw parse_error("malformed number '" + s + "'");
    digits = std::string(v);
  }
  Integer mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational r = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
  r.canonicalize();
  return r;
}

// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline bool is_integral(const Rational& r) { return r.get_den() == 1; }

// long double keeps about 4900 decades of exponent, which the twist and
// Kronecker sequences need well before n = 400.
using Real = long double;

inline Real to_real(const Integer& z) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::ldexp(static_cast<Real>(mant), static_cast<int>(exp));
}

inline Real to_real(const Rational& q) {
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  return std::ldexp(static_cast<Real>(mn) / static_cast<Real>(md), static_cast<int>(en - ed));
}

// Dense square matrix over the rationals. Entries are stored row-major.
class ExactMatrix {
 public:
  explicit ExactMatrix(std::size_t n = 1) : n_(n), a_(n * n) {
    if (n == 0) throw domain_error("EmptyMatrix", "matrix dimension must be at least 1");
  }

  ExactMatrix(std::initializer_list<std::initializer_list<Rational>> rows) : ExactMatrix(rows.size()) {
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != n_) throw domain_error("NotSquare", "ragged or non-square initializer");
      std::size_t j = 0;
      for (const auto& v : row) (*this)(i, j++) = v;
      ++i;
    }
  }

  static ExactMatrix from_rows(const std::vector<std::vector<Rational>>& rows) {
    if (rows.empty()) throw domain_error("EmptyMatrix", "matrix has no rows");
    ExactMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size())
        throw domain_error("NotSquare", "row " + std::to_string(i) + " has " +
                                            std::to_string(rows[i].size()) + " entries, expected " +
                                            std::to_string(rows.size()));
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static ExactMatrix zero(std::size_t n) { return ExactMatrix(n); }

  static ExactMatrix diagonal(std::span<const Rational> d) {
    ExactMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static ExactMatrix block_diagonal(std::span<const ExactMatrix> blocks) {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.size();
    ExactMatrix m(n);
    std::size_t off = 0;
    for (const auto& b : blocks) {
      for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) m(off + i, off + j) = b(i, j);
      off += b.size();
    }
    return m;
  }

  std::size_t size() const noexcept { return n_; }

  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  std::span<const Rational> entries() const noexcept { return a_; }

  bool is_integer() const {
    return std::all_of(a_.begin(), a_.end(), [](const Rational& r) { return is_integral(r); });
  }
  bool is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Rational& r) { return sgn(r) == 0; });
  }
  bool is_identity() const { return *this == identity(n_); }

  Rational trace() const {
    Rational t = 0;
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  ExactMatrix transpose() const {
    ExactMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  ExactMatrix& operator+=(const ExactMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  ExactMatrix& operator-=(const ExactMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  ExactMatrix& operator*=(const Rational& c) {
    for (auto& v : a_) v *= c;
    return *this;
  }

  friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b) { return a += b; }
  friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix& b) { return a -= b; }
  friend ExactMatrix operator*(ExactMatrix a, const Rational& c) { return a *= c; }
  friend ExactMatrix operator*(const Rational& c, ExactMatrix a) { return a *= c; }
  friend ExactMatrix operator-(ExactMatrix a) {
    for (auto& v : a.a_) v = -v;
    return a;
  }

  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
    a.check_same(b);
    const std::size_t n = a.n_;
    ExactMatrix c(n);
    if (a.is_integer() && b.is_integer()) {
      // Integer fast path: skip rational canonicalization on every product.
      Integer acc;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          acc = 0;
          for (std::size_t k = 0; k < n; ++k)
            mpz_addmul(acc.get_mpz_t(), a(i, k).get_num_mpz_t(), b(k, j).get_num_mpz_t());
          c(i, j) = Rational(acc);
        }
      return c;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Rational acc = 0;
        for (std::size_t k = 0; k < n; ++k)
          if (sgn(a(i, k)) != 0 && sgn(b(k, j)) != 0) acc += a(i, k) * b(k, j);
        c(i, j) = acc;
      }
    return c;
  }

  std::vector<Rational> apply(std::span<const Rational> v) const {
    if (v.size() != n_) throw domain_error("DimensionMismatch", "vector length differs from matrix size");
    std::vector<Rational> out(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  ExactMatrix pow(unsigned long e) const {
    ExactMatrix result = identity(n_), base = *this;
    while (e) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  Rational determinant() const {
    ExactMatrix m = *this;
    Rational det = 1;
    for (std::size_t c = 0; c < n_; ++c) {
      std::size_t p = c;
      while (p < n_ && sgn(m(p, c)) == 0) ++p;
      if (p == n_) return 0;
      if (p != c) {
        m.swap_rows(p, c);
        det = -det;
      }
      det *= m(c, c);
      for (std::size_t r = c + 1; r < n_; ++r) {
        if (sgn(m(r, c)) == 0) continue;
        Rational f = m(r, c) / m(c, c);
        for (std::size_t k = c; k < n_; ++k) m(r, k) -= f * m(c, k);
      }
    }
    return det;
  }

  ExactMatrix inverse() const {
    ExactMatrix m = *this, inv = identity(n_);
    for (std::size_t c = 0; c < n_; ++c) {
      std::size_t p = c;
      while (p < n_ && sgn(m(p, c)) == 0) ++p;
      if (p == n_) throw domain_error("SingularMatrix", "matrix is not invertible");
      m.swap_rows(p, c);
      inv.swap_rows(p, c);
      Rational piv = m(c, c);
      for (std::size_t k = 0; k < n_; ++k) {
        m(c, k) /= piv;
        inv(c, k) /= piv;
      }
      for (std::size_t r = 0; r < n_; ++r) {
        if (r == c || sgn(m(r, c)) == 0) continue;
        Rational f = m(r, c);
        for (std::size_t k = 0; k < n_; ++k) {
          m(r, k) -= f * m(c, k);
          inv(r, k) -= f * inv(c, k);
        }
      }
    }
    return inv;
  }

  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.n_ == b.n_ && a.a_ == b.a_;
  }

  std::vector<std::vector<std::string>> to_strings() const {
    std::vector<std::vector<std::string>> rows(n_, std::vector<std::string>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) rows[i][j] = (*this)(i, j).get_str();
    return rows;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExactMatrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.n_; ++i) {
      os << (i ? ", [" : "[");
      for (std::size_t j = 0; j < m.n_; ++j) os << (j ? ", " : "") << m(i, j);
      os << ']';
    }
    return os << ']';
  }

 private:
  void check_same(const ExactMatrix& o) const {
    if (o.n_ != n_)
      throw domain_error("DimensionMismatch",
                         std::to_string(n_) + "x" + std::to_string(n_) + " vs " + std::to_string(o.n_) +
                             "x" + std::to_string(o.n_));
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t k = 0; k < n_; ++k) std::swap((*this)(a, k), (*this)(b, k));
  }

  std::size_t n_;
  std::vector<Rational> a_;
};

inline std::string to_string(const ExactMatrix& m) {
  std::ostringstream os;
  os << m;
  return os.str();
}

}  // namespace catent
