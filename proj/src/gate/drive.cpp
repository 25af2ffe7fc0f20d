#include "gatebound/gate/drive.hpp"

#include "gatebound/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace gatebound::gate {

EnvelopeShape parse_envelope(const std::string& name) {
  if (name == "gaussian") return EnvelopeShape::gaussian;
  if (name == "raised_cosine" || name == "raised-cosine") return EnvelopeShape::raised_cosine;
  if (name == "trapezoid") return EnvelopeShape::trapezoid;
  throw ValidationError("unknown envelope '" + name + "' (gaussian|raised_cosine|trapezoid)");
}

std::string to_string(EnvelopeShape shape) {
  switch (shape) {
    case EnvelopeShape::gaussian: return "gaussian";
    case EnvelopeShape::raised_cosine: return "raised_cosine";
    case EnvelopeShape::trapezoid: return "trapezoid";
  }
  return "?";
}

namespace {
double sigma_of(const Envelope& e) { return e.sigma > 0.0 ? e.sigma : e.duration / 10.0; }
double ramp_of(const Envelope& e) { return e.ramp > 0.0 ? e.ramp : e.duration / 4.0; }
} // namespace

double Envelope::operator()(double t) const {
  if (t < 0.0 || t > duration) return 0.0;
  switch (shape) {
    case EnvelopeShape::gaussian: {
      const double s = sigma_of(*this);
      const double x = (t - 0.5 * duration) / s;
      return std::exp(-0.5 * x * x);
    }
    case EnvelopeShape::raised_cosine:
      return 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * t / duration));
    case EnvelopeShape::trapezoid: {
      const double r = ramp_of(*this);
      if (t < r) return t / r;
      if (t > duration - r) return (duration - t) / r;
      return 1.0;
    }
  }
  return 0.0;
}

double Envelope::area() const {
  switch (shape) {
    case EnvelopeShape::gaussian: {
      const double s = sigma_of(*this);
      return s * std::sqrt(2.0 * std::numbers::pi) * std::erf(0.5 * duration / (std::sqrt(2.0) * s));
    }
    case EnvelopeShape::raised_cosine:
      return 0.5 * duration;
    case EnvelopeShape::trapezoid:
      return duration - ramp_of(*this);
  }
  return 0.0;
}

std::vector<double> Envelope::breakpoints() const {
  switch (shape) {
    case EnvelopeShape::trapezoid: {
      const double r = ramp_of(*this);
      return {r, duration - r};
    }
    case EnvelopeShape::gaussian:
      return {0.5 * duration};
    case EnvelopeShape::raised_cosine:
      return {};
  }
  return {};
}

LinearDrive make_drive(const Envelope& envelope, cplx amplitude, double detuning) {
  if (!(envelope.duration > 0.0)) throw ValidationError("envelope duration must be positive");
  if (envelope.shape == EnvelopeShape::trapezoid && 2.0 * ramp_of(envelope) > envelope.duration) {
    throw ValidationError("trapezoid ramps longer than the pulse");
  }
  LinearDrive d;
  d.f = [envelope, amplitude, detuning](double t) {
    return amplitude * envelope(t) * std::polar(1.0, -detuning * t);
  };
  d.breakpoints = envelope.breakpoints();
  std::ostringstream desc;
  desc << to_string(envelope.shape) << "(T=" << envelope.duration << ", amp=" << amplitude
       << ", detuning=" << detuning << ")";
  d.description = desc.str();
  return d;
}

} // namespace gatebound::gate
