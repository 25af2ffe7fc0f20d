#include "gatebound/kernels/complex_kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace gatebound::kernels {
namespace {

struct Table {
  void (*matvec)(const cplx*, std::size_t, const cplx*, cplx*);
  cplx (*dot)(const cplx*, const cplx*, std::size_t);
  double (*norm_sq)(const cplx*, std::size_t);
  void (*axpy)(cplx, const cplx*, cplx*, std::size_t);
  void (*combine)(double, const cplx*, double, const cplx*, cplx*, std::size_t);
  double (*max_abs_row_sum)(const cplx*, std::size_t);
  Backend backend;
};

constexpr Table scalar_table{scalar::matvec,  scalar::dot,
                             scalar::norm_sq, scalar::axpy,
                             scalar::combine, scalar::max_abs_row_sum,
                             Backend::scalar};
#if defined(GATEBOUND_HAVE_AVX2)
constexpr Table avx2_table{avx2::matvec,  avx2::dot,
                           avx2::norm_sq, avx2::axpy,
                           avx2::combine, avx2::max_abs_row_sum,
                           Backend::avx2};
#endif

bool cpu_has_avx2() {
#if defined(GATEBOUND_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table* initial_table() {
  const char* forced = std::getenv("GATEBOUND_KERNELS");
  if (forced != nullptr && std::string(forced) == "scalar") {
    return &scalar_table;
  }
#if defined(GATEBOUND_HAVE_AVX2)
  if (cpu_has_avx2()) {
    return &avx2_table;
  }
#endif
  return &scalar_table;
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> table{initial_table()};
  return table;
}

const Table& table() { return *current().load(std::memory_order_relaxed); }

void check_len(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string("kernels: length mismatch in ") + what);
  }
}

} // namespace

std::string_view to_string(Backend backend) {
  return backend == Backend::avx2 ? "avx2" : "scalar";
}

bool avx2_available() { return cpu_has_avx2(); }

Backend active_backend() { return table().backend; }

void set_backend(Backend backend) {
  if (backend == Backend::scalar) {
    current().store(&scalar_table);
    return;
  }
#if defined(GATEBOUND_HAVE_AVX2)
  if (cpu_has_avx2()) {
    current().store(&avx2_table);
    return;
  }
#endif
  throw std::invalid_argument("kernels: avx2 backend not available on this build/CPU");
}

void matvec(std::span<const cplx> matrix, std::size_t n, std::span<const cplx> x,
            std::span<cplx> y) {
  check_len(matrix.size(), n * n, "matvec (matrix)");
  check_len(x.size(), n, "matvec (x)");
  check_len(y.size(), n, "matvec (y)");
  table().matvec(matrix.data(), n, x.data(), y.data());
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  check_len(a.size(), b.size(), "dot");
  return table().dot(a.data(), b.data(), a.size());
}

double norm_sq(std::span<const cplx> x) { return table().norm_sq(x.data(), x.size()); }

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  check_len(x.size(), y.size(), "axpy");
  table().axpy(alpha, x.data(), y.data(), x.size());
}

void combine(double c1, std::span<const cplx> a, double c2, std::span<const cplx> b,
             std::span<cplx> out) {
  check_len(a.size(), b.size(), "combine");
  check_len(a.size(), out.size(), "combine (out)");
  table().combine(c1, a.data(), c2, b.data(), out.data(), a.size());
}

double max_abs_row_sum(std::span<const cplx> matrix, std::size_t n) {
  check_len(matrix.size(), n * n, "max_abs_row_sum");
  return table().max_abs_row_sum(matrix.data(), n);
}

} // namespace gatebound::kernels
