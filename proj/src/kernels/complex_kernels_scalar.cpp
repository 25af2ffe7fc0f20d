#include "gatebound/kernels/complex_kernels.hpp"

#include <algorithm>
#include <cmath>

namespace gatebound::kernels::scalar {

// Real and imaginary parts are accumulated separately so that dot(a, b) and
// dot(b, a) are exact conjugates of each other.

void matvec(const cplx* matrix, std::size_t n, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) {
    const cplx* row = matrix + i * n;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ar = row[j].real(), ai = row[j].imag();
      const double xr = x[j].real(), xi = x[j].imag();
      re += ar * xr - ai * xi;
      im += ar * xi + ai * xr;
    }
    y[i] = {re, im};
  }
}

cplx dot(const cplx* a, const cplx* b, std::size_t n) {
  double rr = 0.0, ii = 0.0, ri = 0.0, ir = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = a[k].real(), ai = a[k].imag();
    const double br = b[k].real(), bi = b[k].imag();
    rr += ar * br;
    ii += ai * bi;
    ri += ar * bi;
    ir += ai * br;
  }
  return {rr + ii, ri - ir};
}

double norm_sq(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    s += x[k].real() * x[k].real() + x[k].imag() * x[k].imag();
  }
  return s;
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t k = 0; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    y[k] = {y[k].real() + ar * xr - ai * xi, y[k].imag() + ar * xi + ai * xr};
  }
}

void combine(double c1, const cplx* a, double c2, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = {c1 * a[k].real() + c2 * b[k].real(), c1 * a[k].imag() + c2 * b[k].imag()};
  }
}

double max_abs_row_sum(const cplx* matrix, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx* row = matrix + i * n;
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      sum += std::sqrt(row[j].real() * row[j].real() + row[j].imag() * row[j].imag());
    }
    best = std::max(best, sum);
  }
  return best;
}

} // namespace gatebound::kernels::scalar
