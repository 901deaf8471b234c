#include "qsynth/ansatz.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace qsynth {

double wrap_angle(double a) {
  if (!std::isfinite(a)) throw std::invalid_argument("wrap_angle: non-finite angle");
  if (a >= -M_PI && a < M_PI) return a;  // keep in-range values bit-identical
  double w = std::fmod(a + M_PI, 2.0 * M_PI);
  if (w < 0.0) w += 2.0 * M_PI;
  return w - M_PI;
}

QaoaSchedule::QaoaSchedule(std::vector<ScheduleLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw std::invalid_argument("QaoaSchedule: depth must be positive");
  for (ScheduleLayer& l : layers_) {
    l.alpha = wrap_angle(l.alpha);
    l.beta_even = wrap_angle(l.beta_even);
    l.beta_odd = wrap_angle(l.beta_odd);
    l.gamma_even = wrap_angle(l.gamma_even);
    l.gamma_odd = wrap_angle(l.gamma_odd);
  }
}

QaoaSchedule QaoaSchedule::zeros(int depth) {
  if (depth < 1) throw std::invalid_argument("QaoaSchedule: depth must be positive");
  return QaoaSchedule(std::vector<ScheduleLayer>(depth));
}

QaoaSchedule QaoaSchedule::from_flat(std::span<const double> values) {
  if (values.empty() || values.size() % 5 != 0)
    throw std::invalid_argument("QaoaSchedule: flat length must be a positive multiple of 5");
  std::vector<ScheduleLayer> layers(values.size() / 5);
  for (std::size_t k = 0; k < layers.size(); ++k) {
    layers[k].alpha = values[5 * k];
    layers[k].beta_even = values[5 * k + 1];
    layers[k].beta_odd = values[5 * k + 2];
    layers[k].gamma_even = values[5 * k + 3];
    layers[k].gamma_odd = values[5 * k + 4];
  }
  return QaoaSchedule(std::move(layers));
}

std::vector<double> QaoaSchedule::to_flat() const {
  std::vector<double> out;
  out.reserve(layers_.size() * 5);
  for (const ScheduleLayer& l : layers_) {
    out.push_back(l.alpha);
    out.push_back(l.beta_even);
    out.push_back(l.beta_odd);
    out.push_back(l.gamma_even);
    out.push_back(l.gamma_odd);
  }
  return out;
}

std::uint64_t QaoaSchedule::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (double v : to_flat()) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffULL;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

std::vector<ScheduleFactor> schedule_factors(const QaoaSchedule& s) {
  std::vector<ScheduleFactor> out;
  out.reserve(s.num_parameters());
  for (const ScheduleLayer& l : s.layers()) {
    out.push_back({GeneratorKind::ZZOdd, l.gamma_odd});
    out.push_back({GeneratorKind::ZZEven, l.gamma_even});
    out.push_back({GeneratorKind::ZOdd, l.beta_odd});
    out.push_back({GeneratorKind::ZEven, l.beta_even});
    out.push_back({GeneratorKind::MixX, l.alpha});
  }
  return out;
}

QuantumState default_initial_state(int num_qubits) {
  const std::size_t d = std::size_t{1} << num_qubits;
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  return QuantumState(num_qubits, 2, std::vector<Complex>(d, Complex{a, 0.0}));
}

QuantumState apply_schedule(const QaoaSchedule& s, const ChainLayout& layout,
                            const QuantumState& psi0) {
  if (psi0.levels_per_site() != 2 || psi0.num_sites() != layout.num_qubits)
    throw std::invalid_argument("apply_schedule: state does not match layout");
  std::vector<Complex> amps(psi0.amplitudes().begin(), psi0.amplitudes().end());
  for (const ScheduleFactor& f : schedule_factors(s))
    apply_layer_factor(f.kind, f.angle, layout, amps);
  return QuantumState(layout.num_qubits, 2, std::move(amps));
}

ComplexMatrix schedule_unitary(const QaoaSchedule& s, const ChainLayout& layout) {
  ComplexMatrix u = ComplexMatrix::identity(layout.dim());
  for (const ScheduleFactor& f : schedule_factors(s))
    u = layer_unitary(f.kind, f.angle, layout) * u;
  return u;
}

}  // namespace qsynth
