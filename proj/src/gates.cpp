#include "qsynth/gates.hpp"

#include <cmath>
#include <stdexcept>

namespace qsynth {

const char* generator_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::MixX: return "mix_x";
    case GeneratorKind::ZEven: return "z_even";
    case GeneratorKind::ZOdd: return "z_odd";
    case GeneratorKind::ZZEven: return "zz_even";
    case GeneratorKind::ZZOdd: return "zz_odd";
  }
  return "?";
}

ChainLayout::ChainLayout(int n) : num_qubits(n) {
  if (n < 1 || n > 6) throw std::invalid_argument("ChainLayout: num_qubits must be in 1..6");
  for (int i = 0; 2 * i + 1 < n; ++i) even_pairs.emplace_back(2 * i, 2 * i + 1);
  for (int i = 0; 2 * i + 2 < n; ++i) odd_pairs.emplace_back(2 * i + 1, 2 * i + 2);
}

namespace {

// Z eigenvalue of site s in basis index idx: +1 for |0>, -1 for |1>.
inline double z_sign(std::size_t idx, int site, int n) {
  return ((idx >> (n - 1 - site)) & 1) ? -1.0 : 1.0;
}

}  // namespace

std::vector<double> generator_diagonal(GeneratorKind kind, const ChainLayout& layout) {
  const int n = layout.num_qubits;
  const std::size_t d = layout.dim();
  std::vector<double> diag(d, 0.0);
  switch (kind) {
    case GeneratorKind::MixX:
      throw std::invalid_argument("generator_diagonal: mixer is not diagonal");
    case GeneratorKind::ZEven:
      for (std::size_t i = 0; i < d; ++i)
        for (int s = 0; s < n; s += 2) diag[i] += z_sign(i, s, n);
      break;
    case GeneratorKind::ZOdd:
      for (std::size_t i = 0; i < d; ++i)
        for (int s = 1; s < n; s += 2) diag[i] += z_sign(i, s, n);
      break;
    case GeneratorKind::ZZEven:
      for (std::size_t i = 0; i < d; ++i)
        for (const auto& [a, b] : layout.even_pairs) diag[i] += z_sign(i, a, n) * z_sign(i, b, n);
      break;
    case GeneratorKind::ZZOdd:
      for (std::size_t i = 0; i < d; ++i)
        for (const auto& [a, b] : layout.odd_pairs) diag[i] += z_sign(i, a, n) * z_sign(i, b, n);
      break;
  }
  return diag;
}

ComplexMatrix generator_matrix(GeneratorKind kind, const ChainLayout& layout) {
  const int n = layout.num_qubits;
  const std::size_t d = layout.dim();
  if (kind != GeneratorKind::MixX) {
    const std::vector<double> diag = generator_diagonal(kind, layout);
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m.at(i, i) = diag[i];
    return m;
  }
  // sum of X_s: entry (i, i^bit) = 1 for every site flip
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (int s = 0; s < n; ++s) m.at(i, i ^ (std::size_t{1} << (n - 1 - s))) += 1.0;
  return m;
}

void apply_layer_factor(GeneratorKind kind, double angle, const ChainLayout& layout,
                        std::vector<Complex>& amps) {
  const int n = layout.num_qubits;
  const std::size_t d = layout.dim();
  if (amps.size() != d) throw std::invalid_argument("apply_layer_factor: dimension mismatch");
  if (kind != GeneratorKind::MixX) {
    const std::vector<double> diag = generator_diagonal(kind, layout);
    for (std::size_t i = 0; i < d; ++i)
      amps[i] *= std::exp(Complex{0.0, -angle * diag[i]});
    return;
  }
  // exp(-i a sum X_s) factorizes into commuting single-site rotations
  const Complex c{std::cos(angle), 0.0};
  const Complex s{0.0, -std::sin(angle)};
  for (int site = 0; site < n; ++site) {
    const std::size_t bit = std::size_t{1} << (n - 1 - site);
    for (std::size_t i = 0; i < d; ++i) {
      if (i & bit) continue;
      const Complex lo = amps[i];
      const Complex hi = amps[i | bit];
      amps[i] = c * lo + s * hi;
      amps[i | bit] = s * lo + c * hi;
    }
  }
}

ComplexMatrix layer_unitary(GeneratorKind kind, double angle, const ChainLayout& layout) {
  if (!std::isfinite(angle)) throw std::invalid_argument("layer_unitary: non-finite angle");
  const std::size_t d = layout.dim();
  if (kind != GeneratorKind::MixX) {
    const std::vector<double> diag = generator_diagonal(kind, layout);
    std::vector<Complex> phases(d);
    for (std::size_t i = 0; i < d; ++i) phases[i] = std::exp(Complex{0.0, -angle * diag[i]});
    return ComplexMatrix::from_diagonal(phases);
  }
  // tensor power of the single-qubit rotation
  const Complex c{std::cos(angle), 0.0};
  const Complex s{0.0, -std::sin(angle)};
  ComplexMatrix rot(2, 2, {c, s, s, c});
  ComplexMatrix out = ComplexMatrix::identity(1);
  for (int site = 0; site < layout.num_qubits; ++site) out = tensor_product(out, rot);
  return out;
}

ComplexMatrix pauli_x() { return ComplexMatrix(2, 2, {0, 1, 1, 0}); }
ComplexMatrix pauli_y() { return ComplexMatrix(2, 2, {0, Complex{0, -1}, Complex{0, 1}, 0}); }
ComplexMatrix pauli_z() { return ComplexMatrix(2, 2, {1, 0, 0, -1}); }

ComplexMatrix hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return ComplexMatrix(2, 2, {s, s, s, -s});
}

ComplexMatrix phase_gate(double phi) {
  return ComplexMatrix(2, 2, {1, 0, 0, std::exp(Complex{0.0, phi})});
}

ComplexMatrix embed_single(const ComplexMatrix& gate, int site, int n) {
  if (gate.rows() != 2 || gate.cols() != 2)
    throw std::invalid_argument("embed_single: gate must be 2x2");
  if (site < 0 || site >= n) throw std::invalid_argument("embed_single: site out of range");
  ComplexMatrix out = ComplexMatrix::identity(1);
  for (int s = 0; s < n; ++s)
    out = tensor_product(out, s == site ? gate : ComplexMatrix::identity(2));
  return out;
}

ComplexMatrix controlled_gate(const ComplexMatrix& base, int target,
                              std::span<const ControlSpec> controls, int n) {
  if (base.rows() != 2 || base.cols() != 2)
    throw std::invalid_argument("controlled_gate: base must be 2x2");
  std::vector<bool> used(n, false);
  auto claim = [&](int q) {
    if (q < 0 || q >= n) throw std::invalid_argument("controlled_gate: qubit out of range");
    if (used[q]) throw std::invalid_argument("controlled_gate: repeated qubit index");
    used[q] = true;
  };
  claim(target);
  for (const ControlSpec& c : controls) claim(c.qubit);

  const std::size_t d = std::size_t{1} << n;
  const std::size_t tbit = std::size_t{1} << (n - 1 - target);
  ComplexMatrix out = ComplexMatrix::identity(d);
  for (std::size_t i = 0; i < d; ++i) {
    bool active = true;
    for (const ControlSpec& c : controls) {
      const bool one = (i >> (n - 1 - c.qubit)) & 1;
      if (one != c.active_on_one) { active = false; break; }
    }
    if (!active || (i & tbit)) continue;
    const std::size_t j = i | tbit;
    out.at(i, i) = base(0, 0);
    out.at(i, j) = base(0, 1);
    out.at(j, i) = base(1, 0);
    out.at(j, j) = base(1, 1);
  }
  return out;
}

ComplexMatrix cz_gate(int a, int b, int n) { return controlled_phase(M_PI, a, b, n); }

ComplexMatrix controlled_phase(double phi, int a, int b, int n) {
  if (a == b) throw std::invalid_argument("controlled_phase: repeated qubit index");
  if (a < 0 || b < 0 || a >= n || b >= n)
    throw std::invalid_argument("controlled_phase: qubit out of range");
  const std::size_t d = std::size_t{1} << n;
  const std::size_t abit = std::size_t{1} << (n - 1 - a);
  const std::size_t bbit = std::size_t{1} << (n - 1 - b);
  ComplexMatrix out = ComplexMatrix::identity(d);
  const Complex ph = std::exp(Complex{0.0, phi});
  for (std::size_t i = 0; i < d; ++i)
    if ((i & abit) && (i & bbit)) out.at(i, i) = ph;
  return out;
}

}  // namespace qsynth
