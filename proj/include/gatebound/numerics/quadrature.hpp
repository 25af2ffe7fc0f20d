#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature for real- or
// complex-valued integrands, plus the tangent map used for integrals over
// the whole real line.

#include "gatebound/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <span>
#include <vector>

namespace gatebound::numerics {

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_intervals = 5000;
};

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
};

namespace detail {

inline constexpr double kronrod_nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kronrod_weights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kronrod_nodes[1], [3], [5], [7].
inline constexpr double gauss_weights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Segment {
  double a;
  double b;
  T value;
  double error;
  double roundoff;
  bool splittable;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class T, class F>
Segment<T> gk15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kronrod_weights[7];
  T gauss = fc * gauss_weights[3];
  double abs_sum = magnitude(fc) * kronrod_weights[7];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kronrod_nodes[i];
    const T f1 = f(center - dx);
    const T f2 = f(center + dx);
    kronrod += (f1 + f2) * kronrod_weights[i];
    abs_sum += (magnitude(f1) + magnitude(f2)) * kronrod_weights[i];
    if (i % 2 == 1) {
      gauss += (f1 + f2) * gauss_weights[i / 2];
    }
  }
  kronrod *= half;
  gauss *= half;
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum * std::abs(half);
  const double err = std::max(magnitude(kronrod - gauss), roundoff);
  // An interval this narrow cannot be bisected meaningfully in double.
  const bool splittable =
      std::abs(half) > 64.0 * std::numeric_limits<double>::epsilon() *
                           std::max(std::abs(center), std::numeric_limits<double>::min());
  return {a, b, kronrod, err, roundoff, splittable};
}

} // namespace detail

/// Integrates f over [a, b], first splitting at the sorted interior
/// `breakpoints`. Throws IntegrationFailure when the interval budget runs out
/// before max(abs_tol, rel_tol*|I|) is met. A request below the rounding
/// level 50 eps int |f| is met once the error estimate reaches that level.
template <class T, class F>
QuadResult<T> integrate(const F& f, double a, double b, const QuadOptions& opts = {},
                        std::span<const double> breakpoints = {}) {
  QuadResult<T> out;
  if (a == b) {
    return out;
  }
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) {
      cuts.push_back(p);
    }
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  std::priority_queue<detail::Segment<T>> heap;
  std::vector<detail::Segment<T>> frozen;
  T total{};
  double total_err = 0.0;
  double total_roundoff = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto seg = detail::gk15<T>(f, cuts[i], cuts[i + 1]);
    out.evaluations += 15;
    total += seg.value;
    total_err += seg.error;
    total_roundoff += seg.roundoff;
    heap.push(seg);
  }

  auto target = [&] {
    return std::max({opts.abs_tol, opts.rel_tol * detail::magnitude(total), 2.0 * total_roundoff});
  };
  while (total_err > target()) {
    if (heap.empty()) {
      break;
    }
    if (heap.size() + frozen.size() >= opts.max_intervals) {
      std::ostringstream msg;
      msg << "adaptive quadrature on [" << a << ", " << b << "] exhausted " << opts.max_intervals
          << " intervals; error estimate " << total_err << " > target " << target();
      throw IntegrationFailure(msg.str());
    }
    auto worst = heap.top();
    heap.pop();
    if (!worst.splittable) {
      frozen.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gk15<T>(f, worst.a, mid);
    auto right = detail::gk15<T>(f, mid, worst.b);
    out.evaluations += 30;
    total += (left.value + right.value) - worst.value;
    total_err += (left.error + right.error) - worst.error;
    total_roundoff += (left.roundoff + right.roundoff) - worst.roundoff;
    heap.push(left);
    heap.push(right);
  }
  if (total_err > target()) {
    // Only unsplittable intervals remain; recompute sums to shed drift.
    T sum{};
    double err = 0.0, round = 0.0;
    for (const auto& s : frozen) {
      sum += s.value;
      err += s.error;
      round += s.roundoff;
    }
    while (!heap.empty()) {
      sum += heap.top().value;
      err += heap.top().error;
      round += heap.top().roundoff;
      heap.pop();
    }
    if (err > std::max({opts.abs_tol, opts.rel_tol * detail::magnitude(sum), 2.0 * round})) {
      std::ostringstream msg;
      msg << "adaptive quadrature on [" << a << ", " << b
          << "] hit the resolution floor with error " << err;
      throw IntegrationFailure(msg.str());
    }
    total = sum;
    total_err = err;
  }
  out.value = total * sign;
  out.error = total_err;
  out.intervals = heap.size() + frozen.size();
  return out;
}

template <class F>
double integrate_real(const F& f, double a, double b, const QuadOptions& opts = {},
                      std::span<const double> breakpoints = {}) {
  return integrate<double>(f, a, b, opts, breakpoints).value;
}

template <class F>
std::complex<double> integrate_complex(const F& f, double a, double b,
                                       const QuadOptions& opts = {},
                                       std::span<const double> breakpoints = {}) {
  return integrate<std::complex<double>>(f, a, b, opts, breakpoints).value;
}

/// Integral of f(y) over y in (y_lo, y_hi) after substituting y = scale*tan(theta);
/// infinite limits map to theta = -+pi/2. Nodes concentrate within a few
/// `scale` of the origin.
template <class F>
double integrate_tan_mapped(const F& f, double scale, double y_lo, double y_hi,
                            const QuadOptions& opts = {}) {
  const double th_lo = std::isinf(y_lo) ? std::copysign(std::numbers::pi / 2, y_lo)
                                        : std::atan(y_lo / scale);
  const double th_hi = std::isinf(y_hi) ? std::copysign(std::numbers::pi / 2, y_hi)
                                        : std::atan(y_hi / scale);
  auto g = [&](double th) {
    const double c = std::cos(th);
    return f(scale * std::tan(th)) * scale / (c * c);
  };
  return integrate<double>(g, th_lo, th_hi, opts).value;
}

} // namespace gatebound::numerics
