#include "qsynth/qcore.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace qsynth {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex{0.0, 0.0}) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("ComplexMatrix: zero dimension");
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("ComplexMatrix: zero dimension");
  if (entries_.size() != rows * cols)
    throw std::invalid_argument("ComplexMatrix: entries length != rows*cols");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::from_diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.at(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out.at(c, r) = std::conj(at(r, c));
  return out;
}

Complex ComplexMatrix::trace() const {
  if (rows_ != cols_) throw std::invalid_argument("trace: matrix not square");
  Complex t{0.0, 0.0};
  for (std::size_t i = 0; i < rows_; ++i) t += at(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& e : entries_) m = std::max(m, std::abs(e));
  return m;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r; c < cols_; ++c)
      if (std::abs(at(r, c) - std::conj(at(c, r))) > tol) return false;
  return true;
}

bool ComplexMatrix::is_unitary(double tol) const {
  if (rows_ != cols_) return false;
  const ComplexMatrix prod = adjoint() * (*this);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) {
      const Complex expect = (r == c) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
      if (std::abs(prod(r, c) - expect) > tol) return false;
    }
  return true;
}

bool ComplexMatrix::is_diagonal(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (r != c && std::abs(at(r, c)) > tol) return false;
  return true;
}

std::vector<Complex> ComplexMatrix::apply(std::span<const Complex> v) const {
  if (v.size() != cols_) throw std::invalid_argument("apply: dimension mismatch");
  std::vector<Complex> out(rows_, Complex{0.0, 0.0});
  for (std::size_t r = 0; r < rows_; ++r) {
    Complex acc{0.0, 0.0};
    const Complex* row = entries_.data() + r * cols_;
    for (std::size_t c = 0; c < cols_; ++c) acc += row[c] * v[c];
    out[r] = acc;
  }
  return out;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("operator*: dimension mismatch");
  ComplexMatrix out(a.rows_, b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex av = a(r, k);
      if (av == Complex{0.0, 0.0}) continue;
      const Complex* brow = b.entries_.data() + k * b.cols_;
      Complex* orow = out.entries_.data() + r * out.cols_;
      for (std::size_t c = 0; c < b.cols_; ++c) orow[c] += av * brow[c];
    }
  }
  return out;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw std::invalid_argument("operator+: dimension mismatch");
  ComplexMatrix out = a;
  for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] += b.entries_[i];
  return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw std::invalid_argument("operator-: dimension mismatch");
  ComplexMatrix out = a;
  for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] -= b.entries_[i];
  return out;
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
  ComplexMatrix out = a;
  for (Complex& e : out.entries_) e *= s;
  return out;
}

namespace {

std::size_t pow_int(int base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= static_cast<std::size_t>(base);
  return out;
}

}  // namespace

QuantumState::QuantumState(int num_sites, int levels_per_site, std::vector<Complex> amplitudes)
    : num_sites_(num_sites), levels_per_site_(levels_per_site), amplitudes_(std::move(amplitudes)) {
  if (num_sites <= 0) throw std::invalid_argument("QuantumState: num_sites must be positive");
  if (levels_per_site != 2 && levels_per_site != 3)
    throw std::invalid_argument("QuantumState: levels_per_site must be 2 or 3");
  const std::size_t expect = pow_int(levels_per_site, num_sites);
  if (expect > kMaxDim) throw std::invalid_argument("QuantumState: dimension exceeds 3^6");
  if (amplitudes_.size() != expect)
    throw std::invalid_argument("QuantumState: amplitude count != levels^sites");
  if (std::abs(norm() - 1.0) > 1e-6)
    throw std::invalid_argument("QuantumState: amplitudes not normalized");
}

QuantumState QuantumState::basis_state(int num_sites, int levels_per_site, std::size_t index) {
  std::vector<Complex> amps(pow_int(levels_per_site, num_sites), Complex{0.0, 0.0});
  if (index >= amps.size()) throw std::invalid_argument("basis_state: index out of range");
  amps[index] = 1.0;
  return QuantumState(num_sites, levels_per_site, std::move(amps));
}

double QuantumState::norm() const {
  double s = 0.0;
  for (const Complex& a : amplitudes_) s += std::norm(a);
  return std::sqrt(s);
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t rows = a.rows() * b.rows();
  const std::size_t cols = a.cols() * b.cols();
  if (rows > kMaxDim || cols > kMaxDim)
    throw std::invalid_argument("tensor_product: result dimension exceeds 3^6 = " +
                                std::to_string(kMaxDim));
  ComplexMatrix out(rows, cols);
  for (std::size_t r1 = 0; r1 < a.rows(); ++r1)
    for (std::size_t c1 = 0; c1 < a.cols(); ++c1) {
      const Complex av = a(r1, c1);
      if (av == Complex{0.0, 0.0}) continue;
      for (std::size_t r2 = 0; r2 < b.rows(); ++r2)
        for (std::size_t c2 = 0; c2 < b.cols(); ++c2)
          out.at(r1 * b.rows() + r2, c1 * b.cols() + c2) = av * b(r2, c2);
    }
  return out;
}

ComplexMatrix unitary_evolution(const ComplexMatrix& h, double t) {
  if (h.rows() != h.cols()) throw std::invalid_argument("unitary_evolution: not square");
  if (!h.is_hermitian(kUnitaryTol))
    throw std::invalid_argument("unitary_evolution: input not Hermitian");
  const std::size_t d = h.rows();

  if (h.is_diagonal()) {
    std::vector<Complex> diag(d);
    for (std::size_t i = 0; i < d; ++i)
      diag[i] = std::exp(Complex{0.0, -t * h(i, i).real()});
    return ComplexMatrix::from_diagonal(diag);
  }

  Eigen::MatrixXcd em(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) em(r, c) = h(r, c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(em);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("unitary_evolution: eigendecomposition failed");
  const Eigen::VectorXd& evals = solver.eigenvalues();
  const Eigen::MatrixXcd& evecs = solver.eigenvectors();
  Eigen::VectorXcd phases(d);
  for (std::size_t i = 0; i < d; ++i)
    phases(i) = std::exp(Complex{0.0, -t * evals(i)});
  Eigen::MatrixXcd u = evecs * phases.asDiagonal() * evecs.adjoint();

  ComplexMatrix out(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) out.at(r, c) = u(r, c);
  return out;
}

Complex inner_product(const QuantumState& psi, const QuantumState& phi) {
  if (psi.dim() != phi.dim()) throw std::invalid_argument("inner_product: dimension mismatch");
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < psi.dim(); ++i)
    acc += std::conj(psi.amplitude(i)) * phi.amplitude(i);
  return acc;
}

double state_fidelity(const QuantumState& psi, const QuantumState& phi) {
  const double f = std::norm(inner_product(psi, phi));
  return std::clamp(f, 0.0, 1.0);
}

double operator_fidelity(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.rows() != u.cols() || v.rows() != v.cols() || u.rows() != v.rows())
    throw std::invalid_argument("operator_fidelity: dimension mismatch");
  if (!u.is_unitary(kUnitaryTol) || !v.is_unitary(kUnitaryTol))
    throw std::invalid_argument("operator_fidelity: inputs must be unitary");
  const double f = std::abs((v.adjoint() * u).trace()) / static_cast<double>(u.rows());
  return std::clamp(f, 0.0, 1.0);
}

ComplexMatrix partial_trace(const QuantumState& psi, std::span<const int> keep) {
  if (psi.levels_per_site() != 2)
    throw std::invalid_argument("partial_trace: only 2-level states supported");
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  const int n = psi.num_sites();
  std::vector<bool> kept(n, false);
  for (int q : keep) {
    if (q < 0 || q >= n) throw std::invalid_argument("partial_trace: site index out of range");
    if (kept[q]) throw std::invalid_argument("partial_trace: duplicate site index");
    kept[q] = true;
  }
  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (!kept[q]) traced.push_back(q);

  const std::size_t dk = std::size_t{1} << keep.size();
  const std::size_t dt = std::size_t{1} << traced.size();
  ComplexMatrix rho(dk, dk);

  auto scatter = [&](std::size_t bits, std::span<const int> sites) {
    std::size_t idx = 0;
    for (std::size_t pos = 0; pos < sites.size(); ++pos) {
      const std::size_t bit = (bits >> (sites.size() - 1 - pos)) & 1;
      idx |= bit << (n - 1 - sites[pos]);
    }
    return idx;
  };

  for (std::size_t a = 0; a < dk; ++a) {
    const std::size_t ia0 = scatter(a, keep);
    for (std::size_t b = 0; b < dk; ++b) {
      const std::size_t ib0 = scatter(b, keep);
      Complex acc{0.0, 0.0};
      for (std::size_t tbits = 0; tbits < dt; ++tbits) {
        const std::size_t it = scatter(tbits, traced);
        acc += psi.amplitude(ia0 | it) * std::conj(psi.amplitude(ib0 | it));
      }
      rho.at(a, b) = acc;
    }
  }
  return rho;
}

}  // namespace qsynth
