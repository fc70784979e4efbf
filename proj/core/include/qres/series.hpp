#pragma once

// Truncated power series in the counting field s.
//
// A Series of order K stores the Taylor coefficients a_0..a_K of
// f(s) = sum_k a_k s^k. Arithmetic drops every term above s^K, so products,
// reciprocals, exp and log of series are exact to floating-point rounding up
// to the kept order. Storage is inline and fixed, which keeps the jet ODE
// right-hand side free of allocations.

#include <array>
#include <cstddef>
#include <span>

namespace qres {

class Series {
 public:
  static constexpr int kMaxOrder = 32;

  Series() = default;
  explicit Series(int order);

  static Series constant(int order, double value);
  /// f(s) = s
  static Series identity(int order);
  /// f(s) = e^{sign s} - 1 (sign = +1 or -1)
  static Series exp_minus_one(int order, int sign);
  static Series from_coefficients(std::span<const double> coefficients);

  int order() const { return order_; }
  double operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  double& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
  std::span<const double> coefficients() const { return {c_.data(), static_cast<std::size_t>(order_ + 1)}; }

  /// k-th derivative at s = 0, i.e. k! a_k.
  double derivative(int k) const;

  /// f(-s)
  Series reflected() const;

  Series& operator+=(const Series& rhs);
  Series& operator-=(const Series& rhs);
  Series& operator*=(double scalar);
  Series& operator+=(double scalar);

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(Series a, double s) { return a *= s; }
  friend Series operator*(double s, Series a) { return a *= s; }
  friend Series operator+(Series a, double s) { return a += s; }
  friend Series operator*(const Series& a, const Series& b);

 private:
  int order_ = 0;
  std::array<double, kMaxOrder + 1> c_{};
};

/// 1/f, requires f[0] != 0.
Series reciprocal(const Series& f);
/// e^f
Series exp(const Series& f);
/// ln f, requires f[0] > 0.
Series log(const Series& f);

/// k!
double factorial(int k);
/// binomial coefficient C(n, k)
double binomial(int n, int k);

}  // namespace qres
