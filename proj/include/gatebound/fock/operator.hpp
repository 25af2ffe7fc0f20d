#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace gatebound::fock {

using cplx = std::complex<double>;

/// Dense row-major complex matrix on the truncated number basis.
class OperatorMatrix {
public:
  OperatorMatrix() = default;
  explicit OperatorMatrix(std::size_t cutoff);
  OperatorMatrix(std::size_t cutoff, std::vector<cplx> entries);

  static OperatorMatrix identity(std::size_t cutoff);
  static OperatorMatrix zero(std::size_t cutoff) { return OperatorMatrix(cutoff); }
  static OperatorMatrix diagonal(std::span<const double> values);

  std::size_t cutoff() const { return n_; }
  std::span<const cplx> entries() const { return entries_; }
  std::span<cplx> entries() { return entries_; }

  cplx& operator()(std::size_t row, std::size_t col) { return entries_[row * n_ + col]; }
  const cplx& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * n_ + col];
  }

  OperatorMatrix adjoint() const;
  /// max_{ij} |M_ij - conj(M_ji)|
  double hermitian_deviation() const;
  bool is_hermitian(double tol = 1e-12) const { return hermitian_deviation() <= tol; }
  /// Induced infinity norm (max row sum); bounds the spectral radius.
  double norm_inf() const;

  /// y = M x through the dispatched SIMD kernel.
  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  std::vector<cplx> apply(std::span<const cplx> x) const;

  OperatorMatrix& operator+=(const OperatorMatrix& rhs);
  OperatorMatrix& operator-=(const OperatorMatrix& rhs);
  OperatorMatrix& operator*=(cplx s);
  OperatorMatrix& operator*=(double s);

  friend OperatorMatrix operator+(OperatorMatrix lhs, const OperatorMatrix& rhs) {
    return lhs += rhs;
  }
  friend OperatorMatrix operator-(OperatorMatrix lhs, const OperatorMatrix& rhs) {
    return lhs -= rhs;
  }
  friend OperatorMatrix operator*(cplx s, OperatorMatrix m) { return m *= s; }
  friend OperatorMatrix operator*(OperatorMatrix m, cplx s) { return m *= s; }
  friend OperatorMatrix operator*(double s, OperatorMatrix m) { return m *= s; }
  friend OperatorMatrix operator*(OperatorMatrix m, double s) { return m *= s; }
  /// c1 A + c2 B in one pass.
  static OperatorMatrix combine(double c1, const OperatorMatrix& a, double c2, const OperatorMatrix& b);

  /// Dense product; O(n^3), intended for small matrices and tests.
  friend OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

private:
  std::size_t n_ = 0;
  std::vector<cplx> entries_;
};

/// Returns (a, a_dagger) with a|n> = sqrt(n)|n-1>. Requires cutoff >= 2.
std::pair<OperatorMatrix, OperatorMatrix> ladder_operators(std::size_t cutoff);

/// a_dagger a = diag(0, 1, ..., cutoff-1).
OperatorMatrix number_operator(std::size_t cutoff);

/// Throws ValidationError naming `role` when the matrix is not Hermitian to 1e-12.
void require_hermitian(const OperatorMatrix& m, const char* role);

} // namespace gatebound::fock
