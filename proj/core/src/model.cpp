#include "qres/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qres/errors.hpp"

namespace qres {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, ErrorKind kind, const std::string& message) {
  if (!ok) throw Error(kind, message);
}

// floor() that treats values within rounding of an integer as that integer,
// so jump times computed in floating point land on the post-jump side.
double cycle_floor(double v) {
  const double r = std::round(v);
  return std::abs(v - r) <= 1e-12 * std::max(1.0, std::abs(v)) ? r : std::floor(v);
}

}  // namespace

void validate(const SystemParams& params) {
  require(std::isfinite(params.omega_bar) && params.omega_bar > 0.0, ErrorKind::domain,
          "omega_bar must be positive");
  require(std::isfinite(params.gamma) && params.gamma >= 0.0, ErrorKind::domain,
          "gamma must be non-negative");
  require(std::isfinite(params.T_e) && params.T_e > 0.0, ErrorKind::domain,
          "T_e must be positive");
}

std::vector<std::string> advisories(const SystemParams& params) {
  std::vector<std::string> out;
  if (params.gamma >= params.omega_bar) {
    out.emplace_back("gamma >= omega_bar: outside the weak-coupling regime of the master equation");
  }
  return out;
}

double bose_einstein(double omega, double T) {
  require(omega > 0.0, ErrorKind::domain, "bose_einstein: omega must be positive");
  require(T > 0.0, ErrorKind::domain, "bose_einstein: T must be positive");
  return 1.0 / std::expm1(omega / T);
}

double bose_einstein_derivative(double omega, double T) {
  const double n = bose_einstein(omega, T);
  return -n * (1.0 + n) / T;
}

std::string to_string(DriveKind kind) {
  switch (kind) {
    case DriveKind::constant: return "constant";
    case DriveKind::square: return "square";
    case DriveKind::sawtooth: return "sawtooth";
    case DriveKind::harmonic: return "harmonic";
    case DriveKind::tabulated: return "tabulated";
  }
  return "constant";
}

DriveKind drive_kind_from_string(const std::string& name) {
  for (auto kind : {DriveKind::constant, DriveKind::square, DriveKind::sawtooth,
                    DriveKind::harmonic, DriveKind::tabulated}) {
    if (to_string(kind) == name) return kind;
  }
  throw Error(ErrorKind::config, "unknown drive kind '" + name + "'");
}

DriveWaveform DriveWaveform::constant(double omega_bar) {
  DriveWaveform d;
  d.kind_ = DriveKind::constant;
  d.omega_bar_ = omega_bar;
  d.validate();
  return d;
}

namespace {

DriveWaveform make_periodic(DriveWaveform d) {
  d.validate();
  return d;
}

}  // namespace

DriveWaveform DriveWaveform::square(double omega_bar, double amplitude, double period,
                                    double phase) {
  DriveWaveform d;
  d.kind_ = DriveKind::square;
  d.omega_bar_ = omega_bar;
  d.amplitude_ = amplitude;
  d.period_ = period;
  d.phase_ = phase;
  return make_periodic(d);
}

DriveWaveform DriveWaveform::sawtooth(double omega_bar, double amplitude, double period,
                                      double phase) {
  DriveWaveform d;
  d.kind_ = DriveKind::sawtooth;
  d.omega_bar_ = omega_bar;
  d.amplitude_ = amplitude;
  d.period_ = period;
  d.phase_ = phase;
  return make_periodic(d);
}

DriveWaveform DriveWaveform::harmonic(double omega_bar, double amplitude, double period,
                                      double phase) {
  DriveWaveform d;
  d.kind_ = DriveKind::harmonic;
  d.omega_bar_ = omega_bar;
  d.amplitude_ = amplitude;
  d.period_ = period;
  d.phase_ = phase;
  return make_periodic(d);
}

DriveWaveform DriveWaveform::tabulated(std::vector<Knot> knots) {
  DriveWaveform d;
  d.kind_ = DriveKind::tabulated;
  d.knots_ = std::move(knots);
  if (!d.knots_.empty()) d.omega_bar_ = d.knots_.front().omega;
  d.validate();
  return d;
}

bool DriveWaveform::is_periodic() const {
  return kind_ == DriveKind::square || kind_ == DriveKind::sawtooth ||
         kind_ == DriveKind::harmonic;
}

double DriveWaveform::angular_frequency() const {
  return is_periodic() ? kTwoPi / period_ : 0.0;
}

double DriveWaveform::cycle(double t) const {
  return (t + phase_ / kTwoPi * period_) / period_;
}

double DriveWaveform::operator()(double t) const { return on_piece(t, t); }

double DriveWaveform::rate(double t) const { return rate_on_piece(t, t); }

double DriveWaveform::on_piece(double t, double t_ref) const {
  switch (kind_) {
    case DriveKind::constant:
      return omega_bar_;
    case DriveKind::square: {
      const double half = cycle_floor(2.0 * cycle(t_ref));
      const bool upper = std::fmod(half, 2.0) == 0.0;
      return omega_bar_ + (upper ? amplitude_ : -amplitude_);
    }
    case DriveKind::sawtooth: {
      const double u = cycle(t);
      const double k = cycle_floor(cycle(t_ref));
      return omega_bar_ + amplitude_ * (-1.0 + 2.0 * (u - k));
    }
    case DriveKind::harmonic:
      return omega_bar_ + amplitude_ * std::sin(kTwoPi * cycle(t));
    case DriveKind::tabulated: {
      if (knots_.empty() || t < knots_.front().t || t > knots_.back().t) {
        // Stage evaluations may overshoot the last knot by rounding only.
        const double span = knots_.empty() ? 0.0 : knots_.back().t - knots_.front().t;
        const double slack = 1e-12 * std::max(1.0, span);
        if (knots_.empty() || t < knots_.front().t - slack || t > knots_.back().t + slack) {
          throw Error(ErrorKind::domain, "tabulated drive evaluated outside its knot range");
        }
      }
      auto it = std::upper_bound(knots_.begin(), knots_.end(), t_ref,
                                 [](double v, const Knot& k) { return v < k.t; });
      std::size_t i = static_cast<std::size_t>(std::distance(knots_.begin(), it));
      i = std::clamp<std::size_t>(i, 1, knots_.size() - 1);
      const Knot& a = knots_[i - 1];
      const Knot& b = knots_[i];
      return a.omega + (b.omega - a.omega) * (t - a.t) / (b.t - a.t);
    }
  }
  return omega_bar_;
}

double DriveWaveform::rate_on_piece(double t, double t_ref) const {
  switch (kind_) {
    case DriveKind::constant:
    case DriveKind::square:
      return 0.0;
    case DriveKind::sawtooth:
      return 2.0 * amplitude_ / period_;
    case DriveKind::harmonic:
      return amplitude_ * (kTwoPi / period_) * std::cos(kTwoPi * cycle(t));
    case DriveKind::tabulated: {
      auto it = std::upper_bound(knots_.begin(), knots_.end(), t_ref,
                                 [](double v, const Knot& k) { return v < k.t; });
      std::size_t i = static_cast<std::size_t>(std::distance(knots_.begin(), it));
      i = std::clamp<std::size_t>(i, 1, knots_.size() - 1);
      const Knot& a = knots_[i - 1];
      const Knot& b = knots_[i];
      return (b.omega - a.omega) / (b.t - a.t);
    }
  }
  return 0.0;
}

std::vector<double> DriveWaveform::discontinuities(double t0, double t1) const {
  std::vector<double> out;
  if (!(t1 > t0)) return out;
  double spacing = 0.0;
  if (kind_ == DriveKind::square) spacing = 0.5 * period_;
  if (kind_ == DriveKind::sawtooth) spacing = period_;
  if (spacing == 0.0 || amplitude_ == 0.0) return out;

  // Jumps sit at t_k = k * spacing - offset.
  const double offset = phase_ / kTwoPi * period_;
  auto jump = [&](double k) { return k * spacing - offset; };
  double k = std::ceil((t0 + offset) / spacing) - 1.0;
  while (jump(k) < t0) k += 1.0;
  for (; jump(k) < t1; k += 1.0) out.push_back(jump(k));
  return out;
}

std::vector<double> DriveWaveform::breakpoints(double t0, double t1) const {
  std::vector<double> out;
  for (double t : discontinuities(t0, t1)) {
    if (t > t0) out.push_back(t);
  }
  if (kind_ == DriveKind::tabulated) {
    for (const auto& k : knots_) {
      if (k.t > t0 && k.t < t1) out.push_back(k.t);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return out;
}

void DriveWaveform::validate() const {
  if (kind_ == DriveKind::tabulated) {
    require(knots_.size() >= 2, ErrorKind::domain, "tabulated drive needs at least two knots");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
      require(std::isfinite(knots_[i].t) && std::isfinite(knots_[i].omega), ErrorKind::domain,
              "tabulated drive knots must be finite");
      require(knots_[i].omega > 0.0, ErrorKind::domain, "tabulated drive frequency must be positive");
      if (i > 0) {
        require(knots_[i].t > knots_[i - 1].t, ErrorKind::domain,
                "tabulated drive knot times must be strictly increasing");
      }
    }
    return;
  }
  require(std::isfinite(omega_bar_) && omega_bar_ > 0.0, ErrorKind::domain,
          "drive omega_bar must be positive");
  if (kind_ == DriveKind::constant) return;
  require(std::isfinite(period_) && period_ > 0.0, ErrorKind::domain, "drive period must be positive");
  require(std::isfinite(amplitude_) && std::isfinite(phase_), ErrorKind::domain,
          "drive amplitude and phase must be finite");

  // Dense scan of one period plus both sides of every jump.
  constexpr int kScan = 4096;
  const double t0 = -phase_ / kTwoPi * period_;
  double lowest = omega_bar_;
  for (int i = 0; i <= kScan; ++i) {
    const double t = t0 + period_ * i / kScan;
    lowest = std::min(lowest, (*this)(t));
  }
  for (double tj : discontinuities(t0, t0 + period_)) {
    lowest = std::min({lowest, (*this)(tj), on_piece(tj, tj - 1e-9 * period_)});
  }
  lowest = std::min(lowest, omega_bar_ - std::abs(amplitude_));
  require(lowest > 0.0, ErrorKind::domain, "drive frequency omega_0(t) must stay positive");
}

std::vector<double> linspace(double t0, double t1, int n) {
  require(n >= 2, ErrorKind::domain, "linspace needs at least two points");
  std::vector<double> out(static_cast<std::size_t>(n));
  const double h = (t1 - t0) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = t0 + h * i;
  out.back() = t1;
  return out;
}

std::vector<double> SimulationGrid::sample_times() const {
  validate(*this);
  return linspace(t_start, t_end, n_samples);
}

void validate(const SimulationGrid& grid) {
  require(std::isfinite(grid.t_start) && std::isfinite(grid.t_end) && grid.t_end > grid.t_start,
          ErrorKind::domain, "grid requires t_end > t_start");
  require(grid.dt_max > 0.0, ErrorKind::domain, "grid requires dt_max > 0");
  require(grid.n_samples >= 2, ErrorKind::domain, "grid requires n_samples >= 2");
  require(grid.relax_periods >= 0, ErrorKind::domain, "grid requires relax_periods >= 0");
}

}  // namespace qres
