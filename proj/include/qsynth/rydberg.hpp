#pragma once

#include "qsynth/ansatz.hpp"
#include "qsynth/qcore.hpp"

#include <cstdint>
#include <vector>

namespace qsynth {

/// Three-level atom ladder: |g> = 0 and |e> = 1 span the computational
/// subspace, |r> = 2 is the Rydberg level used for blockade gates.
inline constexpr int kLevelG = 0;
inline constexpr int kLevelE = 1;
inline constexpr int kLevelR = 2;

/// Line of atoms at unit index spacing with van der Waals interactions
/// V_ij = v_nn / |i-j|^6 between Rydberg populations. Frequencies are
/// angular (rad/s).
struct DeviceConfig {
  int num_atoms = 5;
  double spacing_um = 5.24;                  // metadata only; v_nn is primary
  double v_nn = 2.0 * M_PI * 24.0e6;         // nearest-neighbour interaction
  double omega_b = 2.0 * M_PI * 60.0e6;      // |g> <-> |e> drive
  double omega_r = 2.0 * M_PI * 36.0e6;      // |e> <-> |r> drive
  double omega_r_weak = 2.0 * M_PI * 2.4e6;  // reduced target drive, v_nn / 10

  double interaction(int i, int j) const;
  void validate() const;
};

enum class Transition { GE, ER };

/// Square pulse: constant Rabi drive and detuning on a set of atoms for a
/// fixed duration. Pulses in a sequence execute strictly one after
/// another.
struct Pulse {
  std::vector<int> atoms;
  Transition transition = Transition::ER;
  double rabi = 0.0;      // rad/s
  double detuning = 0.0;  // rad/s
  double duration = 0.0;  // s
};

struct PulseSequence {
  std::vector<Pulse> pulses;
  std::uint64_t schedule_hash = 0;
  DeviceConfig device;

  double total_duration() const;
};

/// Closed-form propagator of a coherently driven two-level transition at
/// detuning delta, in the frame where the generalized Rabi oscillation at
/// Omega' = sqrt(omega^2 + delta^2) carries diagonal phases e^{+-i delta
/// t/2}. Exact for any t; unitary to machine precision.
ComplexMatrix two_level_propagator(double omega, double delta, double t);

/// Detuning that makes a 2pi-pulse (duration 2pi/Omega') act as
/// -exp(-i beta Z) on the driven transition. Requires |beta| < pi; the
/// formula -beta*omega/sqrt(pi^2 - beta^2) diverges at the endpoints.
double detuning_for_phase(double beta, double omega);

/// Hamiltonian (rad/s) of the array while `active` is on: blockade terms
/// between all atom pairs plus drive and detuning on the addressed atoms
/// and transition only. Dimension 3^num_atoms.
ComplexMatrix hamiltonian_snapshot(const DeviceConfig& device, const Pulse& active);

/// Sequentially apply exp(-i H_pulse * duration) for each pulse.
QuantumState evolve_pulses(const PulseSequence& seq, const DeviceConfig& device,
                           const QuantumState& psi0);

/// Map a schedule onto the device pulse vocabulary:
///  - mixer angle alpha: one resonant global GE pulse of area 2*alpha;
///  - Z parity angle beta: one detuned ER 2pi-pulse per parity group,
///    detuning solved so the logical |e> picks up relative phase
///    e^{2 i beta} (the idle |g> turns the two-level global phase into a
///    relative one);
///  - ZZ pair angle gamma: control pi-pulse, weak detuned target
///    2pi-pulse, control pi-pulse; the target detuning is solved so the
///    perfect-blockade block matches exp(-i gamma ZZ) up to single-qubit
///    Z rotations.
/// Zero angles emit nothing. Angles at -pi (and gamma = +-pi/2, whose
/// mapped target phase hits the same singularity) are rejected with
/// std::domain_error.
PulseSequence compile_schedule(const QaoaSchedule& s, const DeviceConfig& device);

struct PhysicalResult {
  QuantumState logical;  // renormalized projection onto {g,e}^n
  double leakage = 0.0;  // 1 - projected norm^2
};

/// Embed |0>->|g>, |1>->|e>, run the compiled sequence, project back.
PhysicalResult simulate_schedule_physical(const QaoaSchedule& s, const DeviceConfig& device,
                                          const QuantumState& psi0_logical);

/// Projected physical propagator on the computational subspace (columns
/// are projected evolutions of embedded basis states). Not unitary when
/// leakage occurs.
ComplexMatrix physical_logical_propagator(const QaoaSchedule& s, const DeviceConfig& device);

}  // namespace qsynth
