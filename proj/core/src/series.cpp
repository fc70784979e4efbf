#include "qres/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qres/errors.hpp"

namespace qres {

namespace {

void check_order(int order) {
  if (order < 0 || order > Series::kMaxOrder) {
    throw Error(ErrorKind::order_overflow,
                "series order " + std::to_string(order) + " outside [0, " +
                    std::to_string(Series::kMaxOrder) + "]");
  }
}

void check_same_order(const Series& a, const Series& b) {
  if (a.order() != b.order()) throw Error(ErrorKind::domain, "series order mismatch");
}

}  // namespace

Series::Series(int order) : order_(order) { check_order(order); }

Series Series::constant(int order, double value) {
  Series s(order);
  s.c_[0] = value;
  return s;
}

Series Series::identity(int order) {
  Series s(order);
  if (order >= 1) s.c_[1] = 1.0;
  return s;
}

Series Series::exp_minus_one(int order, int sign) {
  Series s(order);
  double term = 1.0;
  for (int k = 1; k <= order; ++k) {
    term *= static_cast<double>(sign) / k;
    s.c_[static_cast<std::size_t>(k)] = term;
  }
  return s;
}

Series Series::from_coefficients(std::span<const double> coefficients) {
  if (coefficients.empty()) throw Error(ErrorKind::domain, "series needs at least one coefficient");
  Series s(static_cast<int>(coefficients.size()) - 1);
  std::copy(coefficients.begin(), coefficients.end(), s.c_.begin());
  return s;
}

double Series::derivative(int k) const {
  if (k < 0 || k > order_) throw Error(ErrorKind::order_overflow, "derivative order above series order");
  return factorial(k) * c_[static_cast<std::size_t>(k)];
}

Series Series::reflected() const {
  Series r = *this;
  for (int k = 1; k <= order_; k += 2) r.c_[static_cast<std::size_t>(k)] = -r.c_[static_cast<std::size_t>(k)];
  return r;
}

Series& Series::operator+=(const Series& rhs) {
  check_same_order(*this, rhs);
  for (int k = 0; k <= order_; ++k) c_[static_cast<std::size_t>(k)] += rhs.c_[static_cast<std::size_t>(k)];
  return *this;
}

Series& Series::operator-=(const Series& rhs) {
  check_same_order(*this, rhs);
  for (int k = 0; k <= order_; ++k) c_[static_cast<std::size_t>(k)] -= rhs.c_[static_cast<std::size_t>(k)];
  return *this;
}

Series& Series::operator*=(double scalar) {
  for (int k = 0; k <= order_; ++k) c_[static_cast<std::size_t>(k)] *= scalar;
  return *this;
}

Series& Series::operator+=(double scalar) {
  c_[0] += scalar;
  return *this;
}

Series operator*(const Series& a, const Series& b) {
  check_same_order(a, b);
  Series out(a.order_);
  for (int k = 0; k <= a.order_; ++k) {
    double acc = 0.0;
    for (int i = 0; i <= k; ++i) acc += a.c_[static_cast<std::size_t>(i)] * b.c_[static_cast<std::size_t>(k - i)];
    out.c_[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

Series reciprocal(const Series& f) {
  if (f[0] == 0.0) throw Error(ErrorKind::domain, "reciprocal of a series with zero constant term");
  Series g(f.order());
  g[0] = 1.0 / f[0];
  for (int k = 1; k <= f.order(); ++k) {
    double acc = 0.0;
    for (int i = 1; i <= k; ++i) acc += f[i] * g[k - i];
    g[k] = -acc / f[0];
  }
  return g;
}

// g = e^f satisfies g' = f' g, i.e. k g_k = sum_{i=1}^k i f_i g_{k-i}.
Series exp(const Series& f) {
  Series g(f.order());
  g[0] = std::exp(f[0]);
  for (int k = 1; k <= f.order(); ++k) {
    double acc = 0.0;
    for (int i = 1; i <= k; ++i) acc += i * f[i] * g[k - i];
    g[k] = acc / k;
  }
  return g;
}

// g = ln f satisfies f g' = f', i.e. k g_k f_0 = k f_k - sum_{i=1}^{k-1} i g_i f_{k-i}.
Series log(const Series& f) {
  if (!(f[0] > 0.0)) throw Error(ErrorKind::domain, "log of a series with non-positive constant term");
  Series g(f.order());
  g[0] = std::log(f[0]);
  for (int k = 1; k <= f.order(); ++k) {
    double acc = k * f[k];
    for (int i = 1; i < k; ++i) acc -= i * g[i] * f[k - i];
    g[k] = acc / (k * f[0]);
  }
  return g;
}

double factorial(int k) {
  double out = 1.0;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace qres
