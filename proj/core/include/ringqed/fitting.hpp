#pragma once

#include <span>
#include <vector>

namespace ringqed {

/// y = amplitude * exp(-rate t) + offset
struct RelaxationFit {
  double rate = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
  /// Root-mean-square residual in the units of y.
  double residual = 0.0;
};

/// y = amplitude * exp(-rate (t - t0)) * cos(omega (t - t0) + phase) + offset, t0 = t.front()
struct SinusoidFit {
  double amplitude = 0.0;
  double rate = 0.0;
  double omega = 0.0;
  double phase = 0.0;
  double offset = 0.0;
  double residual = 0.0;
};

/// y = 1 + a exp(-rate_a t) + b exp(-rate_b t) sin(omega t + phase)
struct TwoTermFit {
  double a = 0.0;
  double rate_a = 0.0;
  double b = 0.0;
  double rate_b = 0.0;
  double omega = 0.0;
  double phase = 0.0;
  double residual = 0.0;
};

/// Needs at least 20 samples spanning two decay times; throws FitError otherwise
/// or when the series does not decay.
RelaxationFit fit_relaxation(std::span<const double> t, std::span<const double> y);

SinusoidFit fit_damped_sinusoid(std::span<const double> t, std::span<const double> y,
                                double omega_guess);

TwoTermFit fit_two_term(std::span<const double> t, std::span<const double> y, double omega_guess);

/// Positions of interior local maxima, refined by parabolic interpolation.
std::vector<double> peak_positions(std::span<const double> t, std::span<const double> y);

/// Mean spacing of consecutive maxima; throws FitError with fewer than two peaks.
double mean_peak_spacing(std::span<const double> t, std::span<const double> y);

}  // namespace ringqed
