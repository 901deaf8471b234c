#pragma once

#include "qsynth/gates.hpp"
#include "qsynth/qcore.hpp"

#include <cstdint>
#include <vector>

namespace qsynth {

/// Wrap an angle into the canonical range [-pi, pi).
double wrap_angle(double a);

/// One layer of Rabi angles. Application order within a layer is
/// gamma_odd, gamma_even, beta_odd, beta_even, alpha (the rightmost
/// factor of the layered product acts first).
struct ScheduleLayer {
  double alpha = 0.0;
  double beta_even = 0.0;
  double beta_odd = 0.0;
  double gamma_even = 0.0;
  double gamma_odd = 0.0;
};

/// Depth-p schedule holding 5p Rabi angles, wrapped into [-pi, pi) on
/// construction. Immutable value object.
class QaoaSchedule {
 public:
  explicit QaoaSchedule(std::vector<ScheduleLayer> layers);

  static QaoaSchedule zeros(int depth);
  /// Flat layout is layer-major: alpha, beta_even, beta_odd, gamma_even,
  /// gamma_odd per layer. Length must be a positive multiple of 5.
  static QaoaSchedule from_flat(std::span<const double> values);

  int depth() const { return static_cast<int>(layers_.size()); }
  int num_parameters() const { return 5 * depth(); }
  const std::vector<ScheduleLayer>& layers() const { return layers_; }
  std::vector<double> to_flat() const;

  /// FNV-1a over the flat angle bit patterns; identifies a schedule in
  /// exported records.
  std::uint64_t hash() const;

 private:
  std::vector<ScheduleLayer> layers_;
};

/// One e^{-i angle H_kind} factor; a depth-p schedule expands to 5p of
/// these in application order.
struct ScheduleFactor {
  GeneratorKind kind;
  double angle;
};

std::vector<ScheduleFactor> schedule_factors(const QaoaSchedule& s);

/// |+>^n, the mixer eigenstate used as the state-preparation input.
QuantumState default_initial_state(int num_qubits);

/// Apply the layered product to psi0 (2-level, layout.num_qubits sites).
QuantumState apply_schedule(const QaoaSchedule& s, const ChainLayout& layout,
                            const QuantumState& psi0);

/// Full 2^n x 2^n unitary of the same ordered product.
ComplexMatrix schedule_unitary(const QaoaSchedule& s, const ChainLayout& layout);

}  // namespace qsynth
