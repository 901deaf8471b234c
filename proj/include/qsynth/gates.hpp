#pragma once

#include "qsynth/qcore.hpp"

#include <array>
#include <utility>
#include <vector>

namespace qsynth {

/// The five generator Hamiltonians of the layered ansatz: the global X
/// mixer plus the even/odd single-Z and adjacent-pair ZZ terms on an open
/// chain. One angle per kind per layer gives 5p parameters at depth p.
enum class GeneratorKind { MixX, ZEven, ZOdd, ZZEven, ZZOdd };

inline constexpr std::array<GeneratorKind, 5> kAllGeneratorKinds = {
    GeneratorKind::MixX, GeneratorKind::ZEven, GeneratorKind::ZOdd,
    GeneratorKind::ZZEven, GeneratorKind::ZZOdd};

const char* generator_name(GeneratorKind kind);

/// Open chain of qubits. Even pairs are (0,1),(2,3),...; odd pairs are
/// (1,2),(3,4),...; no wraparound. Zero-based sites, site 0 is "even".
struct ChainLayout {
  int num_qubits;
  std::vector<std::pair<int, int>> even_pairs;
  std::vector<std::pair<int, int>> odd_pairs;

  explicit ChainLayout(int n);

  std::size_t dim() const { return std::size_t{1} << num_qubits; }
};

/// Dense Hermitian matrix of the generator on the chain's 2^n space.
ComplexMatrix generator_matrix(GeneratorKind kind, const ChainLayout& layout);

/// Diagonal of a Z-type generator (O(d) representation). Throws for MixX.
std::vector<double> generator_diagonal(GeneratorKind kind, const ChainLayout& layout);

/// exp(-i angle H_kind). Diagonal for Z-type kinds.
ComplexMatrix layer_unitary(GeneratorKind kind, double angle, const ChainLayout& layout);

/// In-place fast path for exp(-i angle H_kind) |amps>; O(d) for Z-type
/// kinds and O(n d) for the mixer.
void apply_layer_factor(GeneratorKind kind, double angle, const ChainLayout& layout,
                        std::vector<Complex>& amps);

// ---- standard gate set used by target circuits ----

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix hadamard();
ComplexMatrix phase_gate(double phi);  // diag(1, e^{i phi})

/// Single-qubit gate embedded into 2^n by identity padding.
ComplexMatrix embed_single(const ComplexMatrix& gate, int site, int n);

/// Control condition: filled circle (active_on_one) triggers on |1>,
/// hollow circle triggers on |0>.
struct ControlSpec {
  int qubit;
  bool active_on_one;
};

/// `base` applied to `target` when every control is satisfied; identity
/// otherwise. Rejects repeated or out-of-range qubit indices.
ComplexMatrix controlled_gate(const ComplexMatrix& base, int target,
                              std::span<const ControlSpec> controls, int n);

/// Controlled-Z between two qubits (symmetric), embedded into 2^n.
ComplexMatrix cz_gate(int a, int b, int n);

/// diag phase e^{i phi} on |11> of qubits (a, b), embedded into 2^n.
ComplexMatrix controlled_phase(double phi, int a, int b, int n);

}  // namespace qsynth
