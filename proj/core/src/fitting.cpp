#include "ringqed/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "ringqed/errors.hpp"

namespace ringqed {

namespace {

using Vec = Eigen::VectorXd;
using Model = std::function<double(const Vec& x, double u)>;

struct Residuals {
  using Scalar = double;
  using InputType = Vec;
  using ValueType = Vec;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const Vec* u;
  const Vec* y;
  Model model;
  int n_params;

  int inputs() const { return n_params; }
  int values() const { return static_cast<int>(u->size()); }
  int operator()(const Vec& x, Vec& f) const {
    for (Eigen::Index i = 0; i < u->size(); ++i) f(i) = model(x, (*u)(i)) - (*y)(i);
    return 0;
  }
};

double rms(const Vec& u, const Vec& y, const Model& model, const Vec& x) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double r = model(x, u(i)) - y(i);
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(u.size()));
}

Vec least_squares(const Vec& u, const Vec& y, const Model& model, Vec x) {
  Residuals r{&u, &y, model, static_cast<int>(x.size())};
  Eigen::NumericalDiff<Residuals> diff(r);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Residuals>> lm(diff);
  lm.parameters.maxfev = 4000;
  lm.parameters.xtol = 1e-14;
  lm.parameters.ftol = 1e-14;
  lm.minimize(x);
  return x;
}

// Maps t to u in [0, 1] and y to zero mean, unit spread.
struct Normalized {
  Vec u, y;
  double t0, span, mean, scale;
};

Normalized normalize(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw FitError("time and value series differ in length");
  if (t.size() < 3) throw FitError("too few samples to fit");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(y[i])) throw FitError("series contains non-finite values");
    if (i > 0 && !(t[i] > t[i - 1])) throw FitError("times must be strictly increasing");
  }
  Normalized n;
  const auto count = static_cast<Eigen::Index>(t.size());
  n.t0 = t.front();
  n.span = t.back() - t.front();
  n.mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double spread = 0.0;
  for (double v : y) spread = std::max(spread, std::abs(v - n.mean));
  n.scale = spread;
  n.u.resize(count);
  n.y.resize(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    n.u(i) = (t[static_cast<std::size_t>(i)] - n.t0) / n.span;
    n.y(i) = spread > 0.0 ? (y[static_cast<std::size_t>(i)] - n.mean) / spread : 0.0;
  }
  return n;
}

// Best amplitude and offset for a fixed exponential, by linear least squares.
std::pair<double, double> linear_exp(const Vec& u, const Vec& y, double k) {
  Eigen::MatrixXd a(u.size(), 2);
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    a(i, 0) = std::exp(-k * u(i));
    a(i, 1) = 1.0;
  }
  const Eigen::Vector2d s = a.colPivHouseholderQr().solve(y);
  return {s(0), s(1)};
}

}  // namespace

RelaxationFit fit_relaxation(std::span<const double> t, std::span<const double> y) {
  if (t.size() < 20) throw FitError("relaxation fit needs at least 20 samples");
  const Normalized n = normalize(t, y);
  const double level = std::max(std::abs(n.mean), n.scale);
  if (n.scale <= 1e-9 * level || n.scale == 0.0) throw FitError("series does not decay");

  const Model model = [](const Vec& x, double u) { return x(0) * std::exp(-x(1) * u) + x(2); };
  double best_k = 1.0, best_err = std::numeric_limits<double>::infinity();
  for (double lk = -3.0; lk <= 3.0; lk += 0.05) {
    const double k = std::pow(10.0, lk);
    const auto [amp, off] = linear_exp(n.u, n.y, k);
    const Vec x = (Vec(3) << amp, k, off).finished();
    const double e = rms(n.u, n.y, model, x);
    if (e < best_err) {
      best_err = e;
      best_k = k;
    }
  }
  const auto [amp0, off0] = linear_exp(n.u, n.y, best_k);
  const Vec x = least_squares(n.u, n.y, model, (Vec(3) << amp0, best_k, off0).finished());

  RelaxationFit fit;
  fit.rate = x(1) / n.span;
  fit.amplitude = x(0) * n.scale * std::exp(x(1) * n.t0 / n.span);
  fit.offset = x(2) * n.scale + n.mean;
  fit.residual = rms(n.u, n.y, model, x) * n.scale;
  if (!std::isfinite(fit.rate) || fit.rate <= 0.0) throw FitError("fitted rate is not positive");
  if (std::abs(x(0)) <= 1e-9 * std::max(std::abs(x(2) + n.mean / n.scale), std::abs(x(0)))) {
    throw FitError("series does not decay");
  }
  if (x(1) < 2.0) throw FitError("series spans fewer than two decay times");
  return fit;
}

SinusoidFit fit_damped_sinusoid(std::span<const double> t, std::span<const double> y, double omega_guess) {
  const Normalized n = normalize(t, y);
  if (n.scale == 0.0) throw FitError("series is constant");
  const double w0 = omega_guess * n.span;

  // Linear start: offset plus cos and sin at the guessed frequency.
  Eigen::MatrixXd a(n.u.size(), 3);
  for (Eigen::Index i = 0; i < n.u.size(); ++i) {
    a(i, 0) = std::cos(w0 * n.u(i));
    a(i, 1) = std::sin(w0 * n.u(i));
    a(i, 2) = 1.0;
  }
  const Eigen::Vector3d lin = a.colPivHouseholderQr().solve(n.y);
  const double amp0 = std::hypot(lin(0), lin(1));
  const double phase0 = std::atan2(-lin(1), lin(0));

  const Model model = [](const Vec& x, double u) {
    return x(0) * std::exp(-x(1) * u) * std::cos(x(2) * u + x(3)) + x(4);
  };
  const Vec x = least_squares(n.u, n.y, model, (Vec(5) << amp0, 0.0, w0, phase0, lin(2)).finished());

  SinusoidFit fit;
  fit.amplitude = x(0) * n.scale;
  fit.rate = x(1) / n.span;
  fit.omega = x(2) / n.span;
  fit.phase = x(3);
  fit.offset = x(4) * n.scale + n.mean;
  if (fit.amplitude < 0.0) {
    fit.amplitude = -fit.amplitude;
    fit.phase += std::numbers::pi;
  }
  fit.phase = std::remainder(fit.phase, 2.0 * std::numbers::pi);
  fit.residual = rms(n.u, n.y, model, x) * n.scale;
  if (!std::isfinite(fit.omega) || !std::isfinite(fit.rate)) throw FitError("sinusoid fit diverged");
  return fit;
}

TwoTermFit fit_two_term(std::span<const double> t, std::span<const double> y, double omega_guess) {
  if (t.size() != y.size() || t.size() < 10) throw FitError("two-term fit needs at least 10 samples");
  const auto count = static_cast<Eigen::Index>(t.size());
  Vec u(count), z(count);
  double scale = 0.0;
  for (Eigen::Index i = 0; i < count; ++i) {
    u(i) = t[static_cast<std::size_t>(i)];
    z(i) = y[static_cast<std::size_t>(i)] - 1.0;
    scale = std::max(scale, std::abs(z(i)));
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) throw FitError("correlation series is flat");
  z /= scale;

  const Model model = [](const Vec& x, double s) {
    return x(0) * std::exp(-x(1) * s) + x(2) * std::exp(-x(3) * s) * std::sin(x(4) * s + x(5));
  };
  TwoTermFit best;
  double best_err = std::numeric_limits<double>::infinity();
  for (double phase0 : {0.0, std::numbers::pi / 2, std::numbers::pi, -std::numbers::pi / 2}) {
    const Vec x0 = (Vec(6) << z(0), 1.0, 0.5, 0.5, omega_guess, phase0).finished();
    const Vec x = least_squares(u, z, model, x0);
    const double e = rms(u, z, model, x);
    if (std::isfinite(e) && e < best_err) {
      best_err = e;
      best = {x(0) * scale, x(1), x(2) * scale, x(3), x(4), x(5), e * scale};
    }
  }
  if (!std::isfinite(best_err)) throw FitError("two-term fit diverged");
  if (best.b < 0.0) {
    best.b = -best.b;
    best.phase += std::numbers::pi;
  }
  if (best.omega < 0.0) {
    best.omega = -best.omega;
    best.phase = std::numbers::pi - best.phase;
  }
  best.phase = std::remainder(best.phase, 2.0 * std::numbers::pi);
  return best;
}

std::vector<double> peak_positions(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw FitError("time and value series differ in length");
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) {
      const double h = t[i + 1] - t[i];
      const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
      const double shift = denom != 0.0 ? 0.5 * (y[i - 1] - y[i + 1]) / denom : 0.0;
      peaks.push_back(t[i] + shift * h);
    }
  }
  return peaks;
}

double mean_peak_spacing(std::span<const double> t, std::span<const double> y) {
  const std::vector<double> peaks = peak_positions(t, y);
  if (peaks.size() < 2) throw FitError("fewer than two peaks");
  return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

}  // namespace ringqed
