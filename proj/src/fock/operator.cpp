#include "gatebound/fock/operator.hpp"

#include "gatebound/error.hpp"
#include "gatebound/kernels/complex_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gatebound::fock {

OperatorMatrix::OperatorMatrix(std::size_t cutoff) : n_(cutoff), entries_(cutoff * cutoff) {}

OperatorMatrix::OperatorMatrix(std::size_t cutoff, std::vector<cplx> entries)
    : n_(cutoff), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_) {
    throw DimensionError("OperatorMatrix: entry count does not match cutoff^2");
  }
}

OperatorMatrix OperatorMatrix::identity(std::size_t cutoff) {
  OperatorMatrix m(cutoff);
  for (std::size_t i = 0; i < cutoff; ++i) m(i, i) = 1.0;
  return m;
}

OperatorMatrix OperatorMatrix::diagonal(std::span<const double> values) {
  OperatorMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

OperatorMatrix OperatorMatrix::adjoint() const {
  OperatorMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

double OperatorMatrix::hermitian_deviation() const {
  double dev = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j)
      dev = std::max(dev, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return dev;
}

double OperatorMatrix::norm_inf() const { return kernels::max_abs_row_sum(entries_, n_); }

void OperatorMatrix::apply(std::span<const cplx> x, std::span<cplx> y) const {
  kernels::matvec(entries_, n_, x, y);
}

std::vector<cplx> OperatorMatrix::apply(std::span<const cplx> x) const {
  std::vector<cplx> y(n_);
  apply(x, y);
  return y;
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& rhs) {
  if (rhs.n_ != n_) throw DimensionError("OperatorMatrix: cutoff mismatch in +");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += rhs.entries_[k];
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& rhs) {
  if (rhs.n_ != n_) throw DimensionError("OperatorMatrix: cutoff mismatch in -");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= rhs.entries_[k];
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(cplx s) {
  for (auto& e : entries_) e *= s;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(double s) {
  for (auto& e : entries_) e = {e.real() * s, e.imag() * s};
  return *this;
}

OperatorMatrix OperatorMatrix::combine(double c1, const OperatorMatrix& a, double c2,
                                       const OperatorMatrix& b) {
  if (a.n_ != b.n_) throw DimensionError("OperatorMatrix: cutoff mismatch in combine");
  OperatorMatrix out(a.n_);
  kernels::combine(c1, a.entries_, c2, b.entries_, out.entries_);
  return out;
}

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  if (lhs.n_ != rhs.n_) throw DimensionError("OperatorMatrix: cutoff mismatch in *");
  const std::size_t n = lhs.n_;
  OperatorMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx a = lhs(i, k);
      if (a == cplx{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

std::pair<OperatorMatrix, OperatorMatrix> ladder_operators(std::size_t cutoff) {
  if (cutoff < 2) throw ValidationError("ladder_operators: cutoff must be >= 2");
  OperatorMatrix a(cutoff);
  for (std::size_t n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {a, a.adjoint()};
}

OperatorMatrix number_operator(std::size_t cutoff) {
  OperatorMatrix m(cutoff);
  for (std::size_t n = 0; n < cutoff; ++n) m(n, n) = static_cast<double>(n);
  return m;
}

void require_hermitian(const OperatorMatrix& m, const char* role) {
  const double dev = m.hermitian_deviation();
  if (dev > 1e-12) {
    std::ostringstream msg;
    msg << role << " is not Hermitian (max deviation " << dev << ")";
    throw ValidationError(msg.str());
  }
}

} // namespace gatebound::fock
