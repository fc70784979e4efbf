#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qres/config.hpp"
#include "qres/errors.hpp"
#include "qres/model.hpp"

using namespace qres;

namespace {

constexpr double kTau = 2.0 * std::numbers::pi / 0.1;

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected qres::Error");
  return ErrorKind::numerical;
}

double period_mean(const DriveWaveform& d) {
  constexpr int n = 200000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += d((i + 0.5) * d.period() / n);
  return acc / n;
}

}  // namespace

TEST_CASE("bose_einstein values") {
  CHECK(bose_einstein(1.0, 4.0) == doctest::Approx(3.520811664187798).epsilon(1e-13));
  CHECK(bose_einstein(1.0, 1e-3) == 0.0);
  CHECK(bose_einstein(1.0, 1.0 / std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(kind_of([] { bose_einstein(0.0, 1.0); }) == ErrorKind::domain);
  CHECK(kind_of([] { bose_einstein(1.0, 0.0); }) == ErrorKind::domain);
  CHECK(kind_of([] { bose_einstein(-1.0, 1.0); }) == ErrorKind::domain);
}

TEST_CASE("bose_einstein detailed balance and monotonicity") {
  for (double w : {0.1, 0.5, 1.0, 2.0, 7.0}) {
    for (double T : {0.2, 1.0, 1.5, 4.0, 30.0}) {
      const double n = bose_einstein(w, T);
      CHECK(n > 0.0);
      CHECK(n / (1.0 + n) == doctest::Approx(std::exp(-w / T)).epsilon(1e-14));
      CHECK(bose_einstein(w * 1.01, T) < n);
      CHECK(bose_einstein(w, T * 1.01) > n);
      CHECK(bose_einstein_derivative(w, T) == doctest::Approx(-n * (1 + n) / T).epsilon(1e-14));
    }
  }
}

TEST_CASE("drive evaluation") {
  CHECK(DriveWaveform::harmonic(1.0, 0.1, kTau)(0.0) == 1.0);
  const auto c = DriveWaveform::constant(1.0);
  for (double t : {-5.0, 0.0, 1.0, 1e6}) CHECK(c(t) == 1.0);

  const auto sq = DriveWaveform::square(1.0, 0.7, kTau);
  for (int k = 0; k < 40; ++k) {
    const double expected = k % 2 == 0 ? 1.7 : 0.3;
    CHECK(sq((2 * k + 1) * kTau / 4) == doctest::Approx(expected).epsilon(1e-15));
  }

  const auto h = DriveWaveform::harmonic(1.0, 0.3, kTau);
  CHECK(h(kTau / 4) == doctest::Approx(1.3));
  CHECK(h.rate(0.0) == doctest::Approx(0.3 * 0.1));
  CHECK(h.angular_frequency() == doctest::Approx(0.1));
}

TEST_CASE("square and sawtooth are right-continuous at every jump") {
  const auto sq = DriveWaveform::square(1.0, 0.7, kTau);
  for (double t : sq.discontinuities(0.0, 50 * kTau)) {
    const double after = sq(t);
    const double before = sq.on_piece(t, t - 1e-6);
    CHECK(std::abs(after - before) == doctest::Approx(1.4));
    CHECK(sq.on_piece(t, t + 1e-6) == after);
  }
  const auto saw = DriveWaveform::sawtooth(1.0, 0.5, kTau);
  for (double t : saw.discontinuities(0.0, 50 * kTau)) {
    CHECK(saw(t) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(saw.on_piece(t, t - 1e-6) == doctest::Approx(1.5).epsilon(1e-12));
  }
}

TEST_CASE("discontinuities") {
  const auto sq = DriveWaveform::square(1.0, 0.7, kTau);
  const auto j = sq.discontinuities(0.0, kTau);
  REQUIRE(j.size() == 2);
  CHECK(j[0] == 0.0);
  CHECK(j[1] == doctest::Approx(kTau / 2));

  CHECK(DriveWaveform::harmonic(1.0, 0.7, kTau).discontinuities(-100.0, 1000.0).empty());
  CHECK(DriveWaveform::constant(1.0).discontinuities(0.0, 1000.0).empty());

  const auto saw = DriveWaveform::sawtooth(1.0, 0.7, kTau);
  const auto s = saw.discontinuities(0.0, 2 * kTau);
  REQUIRE(s.size() == 2);
  CHECK(s[0] == 0.0);
  CHECK(s[1] == doctest::Approx(kTau));

  // A phase offset moves the jumps to k tau / 2 - phase tau / 2pi.
  const auto shifted = DriveWaveform::square(1.0, 0.7, kTau, std::numbers::pi / 2);
  const auto js = shifted.discontinuities(0.0, kTau);
  REQUIRE(js.size() == 2);
  CHECK(js[0] == doctest::Approx(kTau / 4));
  CHECK(js[1] == doctest::Approx(3 * kTau / 4));
}

TEST_CASE("periodic drives average to omega_bar") {
  CHECK(period_mean(DriveWaveform::square(1.0, 0.7, kTau)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(period_mean(DriveWaveform::sawtooth(1.0, 0.7, kTau)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(period_mean(DriveWaveform::harmonic(1.0, 0.7, kTau)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tabulated drives") {
  const auto d = DriveWaveform::tabulated({{0.0, 1.0}, {1.0, 2.0}, {3.0, 1.0}});
  CHECK(d(0.5) == doctest::Approx(1.5));
  CHECK(d(2.0) == doctest::Approx(1.5));
  CHECK(d.rate(0.5) == doctest::Approx(1.0));
  CHECK(d.rate(2.0) == doctest::Approx(-0.5));
  CHECK(d.discontinuities(0.0, 3.0).empty());
  const auto b = d.breakpoints(0.0, 3.0);
  REQUIRE(b.size() == 1);
  CHECK(b[0] == 1.0);
  CHECK(kind_of([&] { d(3.5); }) == ErrorKind::domain);
  CHECK(kind_of([] { DriveWaveform::tabulated({{0.0, 1.0}, {0.0, 2.0}}); }) == ErrorKind::domain);
  CHECK(kind_of([] { DriveWaveform::tabulated({{0.0, 1.0}, {1.0, -2.0}}); }) == ErrorKind::domain);
  CHECK(kind_of([] { DriveWaveform::tabulated({{0.0, 1.0}}); }) == ErrorKind::domain);
}

TEST_CASE("drive validation rejects non-positive frequencies") {
  CHECK(kind_of([] { DriveWaveform::square(1.0, 1.0, kTau); }) == ErrorKind::domain);
  CHECK(kind_of([] { DriveWaveform::harmonic(1.0, 1.2, kTau); }) == ErrorKind::domain);
  CHECK(kind_of([] { DriveWaveform::harmonic(1.0, 0.5, 0.0); }) == ErrorKind::domain);
  CHECK(kind_of([] { DriveWaveform::constant(0.0); }) == ErrorKind::domain);
  CHECK_NOTHROW(DriveWaveform::sawtooth(1.0, 0.99, kTau));
}

TEST_CASE("system parameters") {
  CHECK_NOTHROW(validate(SystemParams{1.0, 0.0, 1.0}));
  CHECK(kind_of([] { validate(SystemParams{0.0, 0.1, 1.0}); }) == ErrorKind::domain);
  CHECK(kind_of([] { validate(SystemParams{1.0, -0.1, 1.0}); }) == ErrorKind::domain);
  CHECK(kind_of([] { validate(SystemParams{1.0, 0.1, 0.0}); }) == ErrorKind::domain);
  CHECK(advisories(SystemParams{1.0, 0.1, 1.0}).empty());
  CHECK(advisories(SystemParams{1.0, 1.5, 1.0}).size() == 1);
  CHECK(SystemParams{1.0, 0.1, 4.0}.x() == 0.25);
}

TEST_CASE("simulation grid") {
  SimulationGrid g{0.0, 10.0, 0.5, 11, 0};
  const auto t = g.sample_times();
  REQUIRE(t.size() == 11);
  CHECK(t.front() == 0.0);
  CHECK(t.back() == 10.0);
  CHECK(t[3] == doctest::Approx(3.0));
  CHECK(kind_of([] { validate(SimulationGrid{1.0, 1.0, 0.5, 11, 0}); }) == ErrorKind::domain);
  CHECK(kind_of([] { validate(SimulationGrid{0.0, 1.0, 0.0, 11, 0}); }) == ErrorKind::domain);
  CHECK(kind_of([] { validate(SimulationGrid{0.0, 1.0, 0.5, 1, 0}); }) == ErrorKind::domain);
}

TEST_CASE("configuration round trip") {
  RunConfig cfg;
  cfg.system = {1.0, 0.0123456789012345, 1.5};
  cfg.drive.kind = DriveKind::sawtooth;
  cfg.drive.amplitude = 0.7;
  cfg.drive.period = kTau;
  cfg.drive.phase = 0.1;
  cfg.grid = {0.1, 1234.5678, 0.25, 1001, 3};
  CHECK(parse_config(to_json(cfg)) == cfg);
  CHECK(parse_config(to_json(cfg, -1)) == cfg);

  RunConfig tab;
  tab.drive.kind = DriveKind::tabulated;
  tab.drive.knots = {{0.0, 1.0}, {0.3, 1.1}, {2.0, 0.9}};
  CHECK(parse_config(to_json(tab)) == tab);
  CHECK(tab.make_drive()(0.3) == doctest::Approx(1.1));
}

TEST_CASE("configuration schema") {
  RunConfig defaults;
  defaults.system.gamma = 0.05;
  const auto partial = parse_config(R"({"system": {"T_e": 4.0}})", defaults);
  CHECK(partial.system.T_e == 4.0);
  CHECK(partial.system.gamma == 0.05);

  const auto knots = parse_config(R"({"drive": {"kind": "tabulated", "knots": [[0, 1], [1, 1.5]]}})");
  REQUIRE(knots.drive.knots.size() == 2);
  CHECK(knots.drive.knots[1] == Knot{1.0, 1.5});

  CHECK(kind_of([] { parse_config(R"({"sytem": {}})"); }) == ErrorKind::config);
  CHECK(kind_of([] { parse_config(R"({"system": {"Te": 1}})"); }) == ErrorKind::config);
  CHECK(kind_of([] { parse_config(R"({"system": {"T_e": "hot"}})"); }) == ErrorKind::config);
  CHECK(kind_of([] { parse_config(R"({"grid": {"n_samples": 2.5}})"); }) == ErrorKind::config);
  CHECK(kind_of([] { parse_config(R"({"drive": {"kind": "triangle"}})"); }) == ErrorKind::config);
  CHECK(kind_of([] { parse_config("{not json"); }) == ErrorKind::config);
  CHECK(kind_of([] { load_config("/nonexistent/qres.json"); }) == ErrorKind::config);
}

TEST_CASE("error kinds have stable names") {
  CHECK(to_string(ErrorKind::overflow) == "overflow");
  CHECK(to_string(ErrorKind::order_overflow) == "order_overflow");
  const Error e(ErrorKind::window, "too small");
  CHECK(std::string(e.what()).find("window") != std::string::npos);
}
