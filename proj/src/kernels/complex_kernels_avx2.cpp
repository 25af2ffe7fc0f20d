// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher
// after CPUID confirms support.

#include "gatebound/kernels/complex_kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace gatebound::kernels::avx2 {
namespace {

inline const double* raw(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* raw(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum_even(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return lanes[0] + lanes[2];
}

inline double hsum_odd(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return lanes[1] + lanes[3];
}

} // namespace

void matvec(const cplx* matrix, std::size_t n, const cplx* x, cplx* y) {
  const double* xd = raw(x);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = raw(matrix + i * n);
    // acc_re lanes hold (ar*xr, ar*xi); acc_im lanes hold (ai*xi, ai*xr).
    __m256d acc_re0 = _mm256_setzero_pd();
    __m256d acc_im0 = _mm256_setzero_pd();
    __m256d acc_re1 = _mm256_setzero_pd();
    __m256d acc_im1 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const __m256d a0 = _mm256_loadu_pd(row + 2 * j);
      const __m256d a1 = _mm256_loadu_pd(row + 2 * j + 4);
      const __m256d x0 = _mm256_loadu_pd(xd + 2 * j);
      const __m256d x1 = _mm256_loadu_pd(xd + 2 * j + 4);
      acc_re0 = _mm256_fmadd_pd(_mm256_movedup_pd(a0), x0, acc_re0);
      acc_im0 = _mm256_fmadd_pd(_mm256_permute_pd(a0, 0xF), _mm256_permute_pd(x0, 0x5), acc_im0);
      acc_re1 = _mm256_fmadd_pd(_mm256_movedup_pd(a1), x1, acc_re1);
      acc_im1 = _mm256_fmadd_pd(_mm256_permute_pd(a1, 0xF), _mm256_permute_pd(x1, 0x5), acc_im1);
    }
    for (; j + 2 <= n; j += 2) {
      const __m256d a0 = _mm256_loadu_pd(row + 2 * j);
      const __m256d x0 = _mm256_loadu_pd(xd + 2 * j);
      acc_re0 = _mm256_fmadd_pd(_mm256_movedup_pd(a0), x0, acc_re0);
      acc_im0 = _mm256_fmadd_pd(_mm256_permute_pd(a0, 0xF), _mm256_permute_pd(x0, 0x5), acc_im0);
    }
    const __m256d prod = _mm256_addsub_pd(_mm256_add_pd(acc_re0, acc_re1),
                                          _mm256_add_pd(acc_im0, acc_im1));
    double re = hsum_even(prod);
    double im = hsum_odd(prod);
    for (; j < n; ++j) {
      const double ar = row[2 * j], ai = row[2 * j + 1];
      const double xr = xd[2 * j], xi = xd[2 * j + 1];
      re += ar * xr - ai * xi;
      im += ar * xi + ai * xr;
    }
    y[i] = {re, im};
  }
}

cplx dot(const cplx* a, const cplx* b, std::size_t n) {
  const double* ad = raw(a);
  const double* bd = raw(b);
  // direct lanes: (ar*br, ai*bi); cross lanes: (ar*bi, ai*br).
  __m256d direct = _mm256_setzero_pd();
  __m256d cross = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d va = _mm256_loadu_pd(ad + 2 * k);
    const __m256d vb = _mm256_loadu_pd(bd + 2 * k);
    direct = _mm256_fmadd_pd(va, vb, direct);
    cross = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0x5), cross);
  }
  double rr = 0.0, ii = 0.0, ri = 0.0, ir = 0.0;
  for (; k < n; ++k) {
    const double ar = ad[2 * k], ai = ad[2 * k + 1];
    const double br = bd[2 * k], bi = bd[2 * k + 1];
    rr += ar * br;
    ii += ai * bi;
    ri += ar * bi;
    ir += ai * br;
  }
  const double re = (hsum_even(direct) + rr) + (hsum_odd(direct) + ii);
  const double im = (hsum_even(cross) + ri) - (hsum_odd(cross) + ir);
  return {re, im};
}

double norm_sq(const cplx* x, std::size_t n) {
  const double* xd = raw(x);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d v0 = _mm256_loadu_pd(xd + 2 * k);
    const __m256d v1 = _mm256_loadu_pd(xd + 2 * k + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  for (; k + 2 <= n; k += 2) {
    const __m256d v0 = _mm256_loadu_pd(xd + 2 * k);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
  }
  const __m256d acc = _mm256_add_pd(acc0, acc1);
  double s = hsum_even(acc) + hsum_odd(acc);
  for (; k < n; ++k) {
    s += xd[2 * k] * xd[2 * k] + xd[2 * k + 1] * xd[2 * k + 1];
  }
  return s;
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double* xd = raw(x);
  double* yd = raw(y);
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d vx = _mm256_loadu_pd(xd + 2 * k);
    const __m256d vy = _mm256_loadu_pd(yd + 2 * k);
    // (ar*xr - ai*xi, ar*xi + ai*xr)
    const __m256d prod = _mm256_fmaddsub_pd(ar, vx, _mm256_mul_pd(ai, _mm256_permute_pd(vx, 0x5)));
    _mm256_storeu_pd(yd + 2 * k, _mm256_add_pd(vy, prod));
  }
  for (; k < n; ++k) {
    const double xr = xd[2 * k], xi = xd[2 * k + 1];
    yd[2 * k] += alpha.real() * xr - alpha.imag() * xi;
    yd[2 * k + 1] += alpha.real() * xi + alpha.imag() * xr;
  }
}

void combine(double c1, const cplx* a, double c2, const cplx* b, cplx* out, std::size_t n) {
  const double* ad = raw(a);
  const double* bd = raw(b);
  double* od = raw(out);
  const __m256d v1 = _mm256_set1_pd(c1);
  const __m256d v2 = _mm256_set1_pd(c2);
  const std::size_t len = 2 * n;
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    const __m256d va = _mm256_loadu_pd(ad + k);
    const __m256d vb = _mm256_loadu_pd(bd + k);
    _mm256_storeu_pd(od + k, _mm256_fmadd_pd(v1, va, _mm256_mul_pd(v2, vb)));
  }
  for (; k < len; ++k) od[k] = c1 * ad[k] + c2 * bd[k];
}

double max_abs_row_sum(const cplx* matrix, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = raw(matrix + i * n);
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      // squares of (re, im) pairs, summed within each pair by hadd
      const __m256d v0 = _mm256_loadu_pd(row + 2 * j);
      const __m256d v1 = _mm256_loadu_pd(row + 2 * j + 4);
      const __m256d pair_sums = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
      acc = _mm256_add_pd(acc, _mm256_sqrt_pd(pair_sums));
    }
    double sum = hsum_even(acc) + hsum_odd(acc);
    for (; j < n; ++j) {
      const double re = row[2 * j], im = row[2 * j + 1];
      sum += std::sqrt(re * re + im * im);
    }
    if (sum > best) best = sum;
  }
  return best;
}

} // namespace gatebound::kernels::avx2
