#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qsynth {

using Complex = std::complex<double>;

/// Tolerances used across the library. All fixed here; nothing is tuned
/// per call site.
inline constexpr double kNormTol = 1e-10;     // state norm after evolution
inline constexpr double kUnitaryTol = 1e-10;  // ||U^dag U - I||_max
inline constexpr double kOracleTol = 1e-9;    // cross-path agreement
inline constexpr std::size_t kMaxDim = 729;   // 3^6, largest Hilbert space

/// Dense row-major complex matrix for Hilbert spaces of dimension <= 729.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix from_diagonal(std::span<const Complex> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return entries_.empty(); }

  Complex& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  Complex operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<const Complex> entries() const { return entries_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double max_abs() const;  // ||.||_max entrywise

  bool is_hermitian(double tol = kUnitaryTol) const;
  bool is_unitary(double tol = kUnitaryTol) const;
  bool is_diagonal(double tol = 1e-14) const;

  /// Matrix-vector product M v.
  std::vector<Complex> apply(std::span<const Complex> v) const;

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(Complex s, const ComplexMatrix& a);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

/// Normalized pure state over num_sites sites with 2 or 3 levels each.
/// Site 0 is the most significant digit of the basis index, so the ket
/// |q0 q1 ... q_{n-1}> reads left to right.
class QuantumState {
 public:
  QuantumState(int num_sites, int levels_per_site, std::vector<Complex> amplitudes);

  static QuantumState basis_state(int num_sites, int levels_per_site, std::size_t index);

  int num_sites() const { return num_sites_; }
  int levels_per_site() const { return levels_per_site_; }
  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  Complex amplitude(std::size_t i) const { return amplitudes_[i]; }

  double norm() const;

 private:
  int num_sites_ = 0;
  int levels_per_site_ = 2;
  std::vector<Complex> amplitudes_;
};

/// Kronecker product; entry [(i1,i2),(j1,j2)] = a[i1,j1] * b[i2,j2].
/// Rejects results whose row or column count exceeds kMaxDim.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// exp(-i h t) for Hermitian h. Diagonal inputs take an exact O(d) path;
/// dense inputs go through an eigendecomposition. Throws if h is not
/// Hermitian within kUnitaryTol.
ComplexMatrix unitary_evolution(const ComplexMatrix& h, double t);

/// <psi|phi>
Complex inner_product(const QuantumState& psi, const QuantumState& phi);

/// |<psi|phi>|^2, clamped to [0,1]. Rejects dimension mismatch.
double state_fidelity(const QuantumState& psi, const QuantumState& phi);

/// |Tr(V^dag U)| / d for unitary U, V of equal dimension d.
double operator_fidelity(const ComplexMatrix& u, const ComplexMatrix& v);

/// Reduced density matrix of a qubit state on the kept sites, ordered as
/// given in `keep` (ascending order recommended). Rejects empty keep sets,
/// duplicates, and out-of-range indices.
ComplexMatrix partial_trace(const QuantumState& psi, std::span<const int> keep);

}  // namespace qsynth
