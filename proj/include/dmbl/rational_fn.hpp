#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dmbl/error.hpp"
#include "dmbl/rational.hpp"

namespace dmbl {

/// Univariate polynomial in the smoothing parameter e with rational
/// coefficients, lowest degree first. The zero polynomial has no coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) coeffs_.push_back(c);
  }
  explicit Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  /// The polynomial e.
  static Polynomial variable() { return Polynomial(std::vector<Rational>{Rational(0), Rational(1)}); }

  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }

  Rational coefficient(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rational(0); }
  const Rational& leading() const { return coeffs_.back(); }

  /// Order of vanishing at 0 (index of the lowest nonzero coefficient).
  std::size_t order_at_zero() const {
    if (is_zero()) throw Error("order of vanishing of the zero polynomial");
    std::size_t i = 0;
    while (coeffs_[i] == 0) ++i;
    return i;
  }

  Rational evaluate(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) {
    for (auto& c : a.coeffs_) c = -c;
    return a;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(out));
  }

  Polynomial scaled(const Rational& k) const {
    if (k == 0) return {};
    Polynomial out = *this;
    for (auto& c : out.coeffs_) c *= k;
    return out;
  }

  /// Euclidean division: *this = q * d + r with deg r < deg d.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
    if (d.is_zero()) throw Error("polynomial division by zero");
    if (degree() < d.degree()) return {Polynomial{}, *this};
    std::vector<Rational> rem = coeffs_;
    std::vector<Rational> quot(coeffs_.size() - d.coeffs_.size() + 1, Rational(0));
    const Rational lead_inv = 1 / d.leading();
    for (std::size_t k = quot.size(); k-- > 0;) {
      const Rational c = rem[k + d.coeffs_.size() - 1] * lead_inv;
      quot[k] = c;
      if (c == 0) continue;
      for (std::size_t j = 0; j < d.coeffs_.size(); ++j) rem[k + j] -= c * d.coeffs_[j];
    }
    rem.resize(d.coeffs_.size() - 1);
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
  }

  Polynomial monic() const {
    if (is_zero()) return {};
    return scaled(1 / leading());
  }

  friend Polynomial gcd(Polynomial a, Polynomial b) {
    while (!b.is_zero()) {
      auto r = a.divmod(b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i] == 0) continue;
      if (!out.empty()) out += " + ";
      out += "(" + dmbl::to_string(coeffs_[i]) + ")";
      if (i == 1) out += "e";
      if (i > 1) out += "e^" + std::to_string(i);
    }
    return out;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<Rational> coeffs_;
};

/// Ratio of polynomials in e, kept reduced with a monic denominator.
class RationalFn {
 public:
  RationalFn() : den_(Rational(1)) {}
  RationalFn(const Rational& c) : num_(c), den_(Rational(1)) {}  // NOLINT(google-explicit-constructor)
  RationalFn(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw Error("rational function with zero denominator");
    normalize();
  }

  static RationalFn variable() { return RationalFn(Polynomial::variable(), Polynomial(Rational(1))); }

  const Polynomial& numerator() const noexcept { return num_; }
  const Polynomial& denominator() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }

  friend RationalFn operator+(const RationalFn& a, const RationalFn& b) {
    if (a.den_ == b.den_) return RationalFn(a.num_ + b.num_, a.den_);
    return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFn operator-(const RationalFn& a, const RationalFn& b) {
    if (a.den_ == b.den_) return RationalFn(a.num_ - b.num_, a.den_);
    return RationalFn(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFn operator*(const RationalFn& a, const RationalFn& b) {
    return RationalFn(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFn operator/(const RationalFn& a, const RationalFn& b) {
    if (b.is_zero()) throw Error("rational function division by zero");
    return RationalFn(a.num_ * b.den_, a.den_ * b.num_);
  }
  RationalFn& operator+=(const RationalFn& o) { return *this = *this + o; }

  friend bool operator==(const RationalFn& a, const RationalFn& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  Rational evaluate(const Rational& x) const {
    const Rational d = den_.evaluate(x);
    if (d == 0) throw Error("rational function has a pole at the evaluation point");
    return num_.evaluate(x) / d;
  }

  std::string to_string() const { return "[" + num_.to_string() + "] / [" + den_.to_string() + "]"; }

 private:
  void normalize() {
    if (num_.is_zero()) {
      den_ = Polynomial(Rational(1));
      return;
    }
    const Polynomial g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = num_.divmod(g).first;
      den_ = den_.divmod(g).first;
    }
    const Rational lead = den_.leading();
    if (lead != 1) {
      num_ = num_.scaled(1 / lead);
      den_ = den_.scaled(1 / lead);
    }
  }

  Polynomial num_;
  Polynomial den_;
};

/// lim_{e -> 0+} r(e) for a function bounded near 0.
inline Rational limit_at_zero(const RationalFn& r) {
  if (r.is_zero()) return 0;
  const std::size_t num_order = r.numerator().order_at_zero();
  const std::size_t den_order = r.denominator().order_at_zero();
  if (num_order < den_order)
    throw Error("rational function is unbounded at 0: " + r.to_string());
  if (num_order > den_order) return 0;
  return r.numerator().coefficient(num_order) / r.denominator().coefficient(den_order);
}

}  // namespace dmbl
