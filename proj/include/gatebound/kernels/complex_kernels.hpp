#pragma once

// Dense complex<double> inner loops used by the Fock-space propagator.
//
// Every kernel has a portable scalar reference in `scalar::` and, on x86-64
// builds with GATEBOUND_ENABLE_AVX2, an AVX2/FMA variant in `avx2::`. The
// unqualified entry points dispatch through a table chosen once at startup
// from CPUID; set GATEBOUND_KERNELS=scalar in the environment to force the
// reference path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace gatebound::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend backend);

/// True when the AVX2 variants were compiled in and the CPU supports AVX2+FMA.
bool avx2_available();

Backend active_backend();

/// Throws std::invalid_argument when asking for an unavailable backend.
void set_backend(Backend backend);

// y = M x for a row-major n x n matrix.
void matvec(std::span<const cplx> matrix, std::size_t n, std::span<const cplx> x,
            std::span<cplx> y);
// sum_i conj(a_i) b_i
cplx dot(std::span<const cplx> a, std::span<const cplx> b);
double norm_sq(std::span<const cplx> x);
// y += alpha x
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
// out = c1 a + c2 b with real coefficients
void combine(double c1, std::span<const cplx> a, double c2, std::span<const cplx> b,
             std::span<cplx> out);
// max_i sum_j |M_ij| for a row-major n x n matrix
double max_abs_row_sum(std::span<const cplx> matrix, std::size_t n);

namespace scalar {
void matvec(const cplx* matrix, std::size_t n, const cplx* x, cplx* y);
cplx dot(const cplx* a, const cplx* b, std::size_t n);
double norm_sq(const cplx* x, std::size_t n);
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
void combine(double c1, const cplx* a, double c2, const cplx* b, cplx* out, std::size_t n);
double max_abs_row_sum(const cplx* matrix, std::size_t n);
} // namespace scalar

#if defined(GATEBOUND_HAVE_AVX2)
namespace avx2 {
void matvec(const cplx* matrix, std::size_t n, const cplx* x, cplx* y);
cplx dot(const cplx* a, const cplx* b, std::size_t n);
double norm_sq(const cplx* x, std::size_t n);
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n);
void combine(double c1, const cplx* a, double c2, const cplx* b, cplx* out, std::size_t n);
double max_abs_row_sum(const cplx* matrix, std::size_t n);
} // namespace avx2
#endif

} // namespace gatebound::kernels
