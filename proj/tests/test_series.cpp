#include <cmath>
#include <vector>

#include "doctest.h"
#include "qres/errors.hpp"
#include "qres/series.hpp"

using namespace qres;

namespace {

double eval(const Series& f, double s) {
  double acc = 0.0;
  for (int k = f.order(); k >= 0; --k) acc = acc * s + f[k];
  return acc;
}

}  // namespace

TEST_CASE("elementary series") {
  const auto e = Series::exp_minus_one(10, +1);
  const auto em = Series::exp_minus_one(10, -1);
  for (int k = 1; k <= 10; ++k) {
    CHECK(e[k] == doctest::Approx(1.0 / factorial(k)));
    CHECK(em[k] == doctest::Approx((k % 2 ? -1.0 : 1.0) / factorial(k)));
  }
  CHECK(e[0] == 0.0);
  CHECK(eval(e, 0.1) == doctest::Approx(std::expm1(0.1)).epsilon(1e-14));
  CHECK(e.reflected()[3] == doctest::Approx(em[3]));
  CHECK(Series::identity(4)[1] == 1.0);
  CHECK(Series::constant(4, 2.5)[0] == 2.5);
  CHECK(factorial(5) == 120.0);
  CHECK(binomial(6, 2) == 15.0);
  CHECK(binomial(6, 0) == 1.0);
}

TEST_CASE("series arithmetic identities") {
  const int K = 12;
  const auto x = Series::identity(K);
  const auto f = Series::constant(K, 1.5) + x * 0.7 + Series::exp_minus_one(K, +1) * 0.2;
  const auto prod = f * reciprocal(f);
  CHECK(prod[0] == doctest::Approx(1.0));
  for (int k = 1; k <= K; ++k) CHECK(std::abs(prod[k]) < 1e-14);

  const auto round = exp(log(f));
  for (int k = 0; k <= K; ++k) CHECK(round[k] == doctest::Approx(f[k]).epsilon(1e-13));

  // exp(identity) - 1 equals the precomputed e^s - 1 series
  const auto ex = exp(x);
  const auto em1 = Series::exp_minus_one(K, +1);
  for (int k = 1; k <= K; ++k) CHECK(ex[k] == doctest::Approx(em1[k]).epsilon(1e-15));

  for (double s : {-0.3, 0.05, 0.2}) {
    CHECK(eval(f * f, s) == doctest::Approx(eval(f, s) * eval(f, s)).epsilon(1e-12));
    CHECK(eval(reciprocal(f), s) == doctest::Approx(1.0 / eval(f, s)).epsilon(1e-8));
  }
  CHECK(f.derivative(3) == doctest::Approx(6.0 * f[3]));
}

TEST_CASE("series errors") {
  CHECK_THROWS_AS(Series(Series::kMaxOrder + 1), Error);
  CHECK_THROWS_AS(Series(-1), Error);
  CHECK_THROWS_AS(reciprocal(Series::identity(3)), Error);
  CHECK_THROWS_AS(log(Series::constant(3, -1.0)), Error);
  CHECK_THROWS_AS(Series::identity(3) * Series::identity(4), Error);
  const std::vector<double> c = {1.0, 2.0, 3.0};
  const auto f = Series::from_coefficients(c);
  CHECK(f.order() == 2);
  CHECK(f[2] == 3.0);
}
