#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "backus/common.hpp"

namespace backus {

/// Multivariate polynomial in (x1, x2, x3) with double coefficients, stored
/// as a sparse exponent-triple -> coefficient map. This is the exact-algebra
/// carrier for harmonic extensions and the brute-force oracle behind the
/// test suite: derivatives, Laplacians and antiderivatives are computed on
/// coefficients, never by finite differences.
class Polynomial {
 public:
  using Key = std::array<int, 3>;

  Polynomial() = default;

  static Polynomial constant(double c) {
    Polynomial p;
    if (c != 0.0) p.terms_[{0, 0, 0}] = c;
    return p;
  }

  /// The coordinate monomial x_{i+1}, i in {0,1,2}.
  static Polynomial variable(int i) {
    if (i < 0 || i > 2) throw std::invalid_argument("variable index out of range");
    Polynomial p;
    Key k{0, 0, 0};
    k[static_cast<std::size_t>(i)] = 1;
    p.terms_[k] = 1.0;
    return p;
  }

  static Polynomial monomial(int i, int j, int k, double c) {
    if (i < 0 || j < 0 || k < 0) throw std::invalid_argument("negative exponent");
    Polynomial p;
    if (c != 0.0) p.terms_[{i, j, k}] = c;
    return p;
  }

  const std::map<Key, double>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add_term(const Key& k, double c) {
    auto [it, fresh] = terms_.try_emplace(k, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  Polynomial& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(double s, Polynomial p) { return p *= s; }
  friend Polynomial operator*(Polynomial p, double s) { return p *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_)
        r.add_term({ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]}, ca * cb);
    return r;
  }

  /// d/dx_{i+1}, exact on coefficients.
  Polynomial derivative(int i) const {
    const auto ui = static_cast<std::size_t>(i);
    Polynomial r;
    for (const auto& [k, c] : terms_) {
      if (k[ui] == 0) continue;
      Key kk = k;
      kk[ui] -= 1;
      r.add_term(kk, c * k[ui]);
    }
    return r;
  }

  Polynomial laplacian() const {
    return derivative(0).derivative(0) + derivative(1).derivative(1) +
           derivative(2).derivative(2);
  }

  std::array<Polynomial, 3> gradient() const {
    return {derivative(0), derivative(1), derivative(2)};
  }

  /// Antiderivative in x3 vanishing at x3 = 0: p -> integral_0^{x3} p(x', t) dt.
  Polynomial integrate_x3_from_0() const {
    Polynomial r;
    for (const auto& [k, c] : terms_) r.add_term({k[0], k[1], k[2] + 1}, c / (k[2] + 1));
    return r;
  }

  /// Substitution x3 = 0 (the equatorial-plane trace).
  Polynomial at_x3_zero() const {
    Polynomial r;
    for (const auto& [k, c] : terms_)
      if (k[2] == 0) r.add_term(k, c);
    return r;
  }

  /// Exact division by x3; requires every term to carry a positive x3 power.
  Polynomial divide_by_x3() const {
    Polynomial r;
    for (const auto& [k, c] : terms_) {
      if (k[2] == 0) throw std::domain_error("divide_by_x3: term without x3 factor");
      r.add_term({k[0], k[1], k[2] - 1}, c);
    }
    return r;
  }

  /// p(x', -x3), the vertical reflection.
  Polynomial reflect_x3() const {
    Polynomial r;
    for (const auto& [k, c] : terms_) r.add_term(k, (k[2] % 2 == 0) ? c : -c);
    return r;
  }

  int degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k[0] + k[1] + k[2]);
    return d;
  }

  int max_degree(int axis) const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k[static_cast<std::size_t>(axis)]);
    return d;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  Polynomial pruned(double eps) const {
    Polynomial r;
    for (const auto& [k, c] : terms_)
      if (std::abs(c) > eps) r.terms_[k] = c;
    return r;
  }

  bool is_zero(double eps = 0.0) const { return max_abs_coeff() <= eps; }

  /// Deterministic evaluation: fixed term order, precomputed coordinate powers.
  double evaluate(const Vec3& x) const {
    if (terms_.empty()) return 0.0;
    int d0 = 0, d1 = 0, d2 = 0;
    for (const auto& [k, c] : terms_) {
      d0 = std::max(d0, k[0]);
      d1 = std::max(d1, k[1]);
      d2 = std::max(d2, k[2]);
    }
    const auto powers = [](double v, int d) {
      std::vector<double> p(static_cast<std::size_t>(d) + 1, 1.0);
      for (int i = 1; i <= d; ++i) p[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i - 1)] * v;
      return p;
    };
    const auto p0 = powers(x[0], d0), p1 = powers(x[1], d1), p2 = powers(x[2], d2);
    std::vector<double> contrib;
    contrib.reserve(terms_.size());
    for (const auto& [k, c] : terms_)
      contrib.push_back(c * p0[static_cast<std::size_t>(k[0])] *
                        p1[static_cast<std::size_t>(k[1])] *
                        p2[static_cast<std::size_t>(k[2])]);
    return pairwise_sum(contrib);
  }

  Vec3 evaluate_gradient(const Vec3& x) const {
    return {derivative(0).evaluate(x), derivative(1).evaluate(x), derivative(2).evaluate(x)};
  }

 private:
  std::map<Key, double> terms_;
};

/// Harmonic-tagged polynomial: construction checks the Laplacian vanishes on
/// coefficients to the given budget.
struct HarmonicPoly {
  Polynomial poly;
  bool harmonic_flag = false;

  HarmonicPoly() = default;
  explicit HarmonicPoly(Polynomial p, double tol = 1e-12) : poly(std::move(p)) {
    harmonic_flag = poly.laplacian().max_abs_coeff() <= tol * std::max(1.0, poly.max_abs_coeff());
  }
};

}  // namespace backus
