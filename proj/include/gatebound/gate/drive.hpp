#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace gatebound::gate {

using cplx = std::complex<double>;

/// Interaction-picture linear drive V_I(t) = f(t) a_dag + conj(f(t)) a.
struct LinearDrive {
  std::function<cplx(double)> f;
  /// Interior kinks or support edges handed to the quadratures.
  std::vector<double> breakpoints;
  std::string description;
};

enum class EnvelopeShape { gaussian, raised_cosine, trapezoid };

EnvelopeShape parse_envelope(const std::string& name);
std::string to_string(EnvelopeShape shape);

/// Analytic envelope on [0, duration], peak value 1.
///  - gaussian: exp(-(t - T/2)^2 / (2 sigma^2)); sigma defaults to T/10, so the
///    endpoints sit at 5 sigma and are nonzero only at the 1e-6 level.
///  - raised_cosine: (1 - cos(2 pi t / T)) / 2; exact zeros at 0 and T.
///  - trapezoid: linear ramps of length `ramp` (default T/4), flat top.
struct Envelope {
  EnvelopeShape shape = EnvelopeShape::gaussian;
  double duration = 1.0;
  double sigma = 0.0;
  double ramp = 0.0;

  double operator()(double t) const;
  /// Exact integral over [0, duration] (gaussian via erf).
  double area() const;
  std::vector<double> breakpoints() const;
};

/// f(t) = amplitude * envelope(t) * exp(-i detuning t).
LinearDrive make_drive(const Envelope& envelope, cplx amplitude, double detuning = 0.0);

} // namespace gatebound::gate
