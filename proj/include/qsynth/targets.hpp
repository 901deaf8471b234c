#pragma once

#include "qsynth/qcore.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qsynth {

/// Simple undirected graph; vertices 0..num_vertices-1, no self-loops or
/// duplicate edges.
struct GraphSpec {
  int num_vertices;
  std::vector<std::pair<int, int>> edges;

  GraphSpec(int n, std::vector<std::pair<int, int>> e);

  std::vector<int> neighbors(int v) const;
};

GraphSpec complete_graph(int n);
GraphSpec path_graph(int n);

/// (prod over edges CZ) |+>^n.
QuantumState cluster_state(const GraphSpec& graph);

/// Per-vertex expectation of the correlation operator
/// K_a = X_a (prod over neighbors b) Z_b; a cluster state has all of them
/// at +1.
struct StabilizerReport {
  std::vector<double> eigenvalues;
  double worst_deviation = 0.0;
  bool pass = false;
};

StabilizerReport verify_cluster(const QuantumState& psi, const GraphSpec& graph);

/// (|0...0> + |1...1>)/sqrt(2), n >= 2.
QuantumState ghz_state(int n);

/// Absolutely maximally entangled representative for n = 5 or 6 qubits.
/// n=5: projector average over the five-qubit perfect code's stabilizer
/// group (with the all-Z logical) applied to |00000>. n=6: graph state of
/// the triangular prism. Both are pinned representatives; the binding
/// property is the marginal condition checked by verify_ame.
QuantumState ame_state(int n);

/// The n=6 AME graph (triangular prism), exposed for verification.
GraphSpec ame6_graph();

struct AmeReport {
  double worst_deviation = 0.0;
  bool pass = false;
};

/// True iff every floor(n/2)-site reduced density matrix is maximally
/// mixed within 1e-9 in max-entry norm.
AmeReport verify_ame(const QuantumState& psi);

/// Encoder of the five-qubit perfect error-correcting code as an explicit
/// 32x32 circuit unitary. The logical input rides on qubit 0; qubits 1-4
/// are ancillas expected in |0>.
ComplexMatrix perfect_encoder_unitary();

struct EncoderReport {
  double worst_violation = 0.0;
  bool pass = false;
};

/// Knill-Laflamme check over E in {I} u {X_i, Y_i, Z_i}: <0L|E|1L> = 0 and
/// <0L|E|0L> = <1L|E|1L>, within 1e-8. Codewords are the images of
/// |0>|0000> and |1>|0000>.
EncoderReport verify_encoder(const ComplexMatrix& u);

inline constexpr double kStabilizerTol = 1e-9;
inline constexpr double kAmeTol = 1e-9;
inline constexpr double kKnillLaflammeTol = 1e-8;

/// Registry entry for an optimization target: either a state with a
/// verification predicate or a unitary.
struct TargetSpec {
  enum class Kind { State, Unitary };

  std::string key;
  Kind kind;
  int num_qubits;
  std::optional<QuantumState> state;  // set when kind == State
  ComplexMatrix unitary;              // set when kind == Unitary
};

/// Resolve a target key. Supported keys: cluster-full-N, cluster-chain-N
/// (N in 2..6), ghz-N (N in 2..6), ame-5, ame-6, perfect-encoder.
/// Throws std::invalid_argument listing valid keys on unknown input.
TargetSpec make_target(const std::string& key);

std::vector<std::string> registered_target_keys();

}  // namespace qsynth
