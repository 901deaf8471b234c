#include "qsynth/rydberg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace qsynth {

double DeviceConfig::interaction(int i, int j) const {
  const double d = std::abs(i - j);
  return v_nn / std::pow(d, 6.0);
}

void DeviceConfig::validate() const {
  if (num_atoms < 1 || num_atoms > 6)
    throw std::invalid_argument("DeviceConfig: num_atoms must be in 1..6");
  if (v_nn <= 0 || omega_b <= 0 || omega_r <= 0 || omega_r_weak <= 0)
    throw std::invalid_argument("DeviceConfig: frequencies must be positive");
}

double PulseSequence::total_duration() const {
  double t = 0.0;
  for (const Pulse& p : pulses) t += p.duration;
  return t;
}

ComplexMatrix two_level_propagator(double omega, double delta, double t) {
  if (omega < 0.0) throw std::invalid_argument("two_level_propagator: omega must be >= 0");
  const double op = std::sqrt(omega * omega + delta * delta);
  if (op == 0.0) return ComplexMatrix::identity(2);
  const double half = 0.5 * op * t;
  const double c = std::cos(half);
  const double s = std::sin(half);
  const Complex up = std::exp(Complex{0.0, 0.5 * delta * t});
  const Complex dn = std::conj(up);
  const double ro = omega / op;
  const double rd = delta / op;
  return ComplexMatrix(2, 2,
                       {up * Complex{c, -rd * s}, Complex{0.0, ro * s} * up,
                        Complex{0.0, ro * s} * dn, dn * Complex{c, rd * s}});
}

double detuning_for_phase(double beta, double omega) {
  if (!(std::abs(beta) < M_PI))
    throw std::domain_error("detuning_for_phase: |beta| must be < pi (formula singular)");
  if (omega <= 0.0) throw std::invalid_argument("detuning_for_phase: omega must be positive");
  return -beta * omega / std::sqrt(M_PI * M_PI - beta * beta);
}

namespace {

std::size_t pow3(int n) {
  std::size_t out = 1;
  for (int i = 0; i < n; ++i) out *= 3;
  return out;
}

inline int level_of(std::size_t idx, int site, int n) {
  std::size_t x = idx;
  for (int s = n - 1; s > site; --s) x /= 3;
  return static_cast<int>(x % 3);
}

}  // namespace

ComplexMatrix hamiltonian_snapshot(const DeviceConfig& device, const Pulse& active) {
  device.validate();
  const int n = device.num_atoms;
  for (int a : active.atoms)
    if (a < 0 || a >= n) throw std::invalid_argument("hamiltonian_snapshot: atom out of range");

  const std::size_t d = pow3(n);
  ComplexMatrix h(d, d);

  // blockade between every pair, present regardless of the pulse
  std::vector<std::size_t> stride(n);
  for (int s = 0; s < n; ++s) stride[s] = pow3(n - 1 - s);
  for (std::size_t idx = 0; idx < d; ++idx) {
    double diag = 0.0;
    for (int i = 0; i < n; ++i) {
      if (level_of(idx, i, n) != kLevelR) continue;
      for (int j = i + 1; j < n; ++j)
        if (level_of(idx, j, n) == kLevelR) diag += device.interaction(i, j);
    }
    h.at(idx, idx) = diag;
  }

  const int lo = active.transition == Transition::GE ? kLevelG : kLevelE;
  const int hi = active.transition == Transition::GE ? kLevelE : kLevelR;
  for (int a : active.atoms) {
    const std::size_t st = stride[a];
    for (std::size_t idx = 0; idx < d; ++idx) {
      const int lv = level_of(idx, a, n);
      if (lv == hi) h.at(idx, idx) -= active.detuning;          // -Delta n_upper
      if (lv == lo) {                                           // drive lo <-> hi
        const std::size_t jdx = idx + st * (hi - lo);
        h.at(idx, jdx) += 0.5 * active.rabi;
        h.at(jdx, idx) += 0.5 * active.rabi;
      }
    }
  }
  return h;
}

QuantumState evolve_pulses(const PulseSequence& seq, const DeviceConfig& device,
                           const QuantumState& psi0) {
  device.validate();
  if (psi0.levels_per_site() != 3 || psi0.num_sites() != device.num_atoms)
    throw std::invalid_argument("evolve_pulses: state must be 3-level on num_atoms sites");

  // propagators repeat often (e.g. the control pi-pulses of every blockade
  // block), so cache them by pulse signature
  using Key = std::tuple<std::vector<int>, int, double, double, double>;
  std::map<Key, ComplexMatrix> cache;

  std::vector<Complex> amps(psi0.amplitudes().begin(), psi0.amplitudes().end());
  for (const Pulse& p : seq.pulses) {
    if (p.duration <= 0.0) throw std::invalid_argument("evolve_pulses: duration must be > 0");
    Key key{p.atoms, static_cast<int>(p.transition), p.rabi, p.detuning, p.duration};
    auto it = cache.find(key);
    if (it == cache.end()) {
      const ComplexMatrix h = hamiltonian_snapshot(device, p);
      it = cache.emplace(key, unitary_evolution(h, p.duration)).first;
    }
    amps = it->second.apply(amps);
  }
  return QuantumState(device.num_atoms, 3, std::move(amps));
}

namespace {

void append_z_parity_pulses(std::vector<Pulse>& out, double beta, bool even_parity,
                            const DeviceConfig& device) {
  if (beta == 0.0) return;
  if (beta <= -M_PI)
    throw std::domain_error("compile_schedule: beta = -pi hits the detuning singularity");
  // ideal factor e^{-i beta Z} puts relative phase e^{2 i beta} on |1>;
  // the ER 2pi-pulse leaves diag(1, -e^{-i b}) on {g,e}, so solve
  // pi - b = 2 beta
  const double b = wrap_angle(M_PI - 2.0 * beta);
  const double delta = detuning_for_phase(b, device.omega_r);
  const double op = std::sqrt(device.omega_r * device.omega_r + delta * delta);
  Pulse p;
  for (int a = even_parity ? 0 : 1; a < device.num_atoms; a += 2) p.atoms.push_back(a);
  p.transition = Transition::ER;
  p.rabi = device.omega_r;
  p.detuning = delta;
  p.duration = 2.0 * M_PI / op;
  out.push_back(std::move(p));
}

void append_zz_pair_pulses(std::vector<Pulse>& out, double gamma, int control, int target,
                           const DeviceConfig& device) {
  if (gamma == 0.0) return;
  if (gamma <= -M_PI)
    throw std::domain_error("compile_schedule: gamma = -pi hits the detuning singularity");
  // perfect-blockade block is diag(1, e^{i(pi-b)}, -1, -1) on the pair's
  // logical basis; it matches e^{-i gamma ZZ} up to local Z rotations iff
  // the conditional phase is 4*gamma
  const double b = wrap_angle(M_PI - 4.0 * gamma);
  if (b == -M_PI)
    throw std::domain_error(
        "compile_schedule: gamma = +-pi/2 maps to the detuning singularity");
  const double delta = detuning_for_phase(b, device.omega_r_weak);
  const double op = std::sqrt(device.omega_r_weak * device.omega_r_weak + delta * delta);

  Pulse ctrl_pi;
  ctrl_pi.atoms = {control};
  ctrl_pi.transition = Transition::ER;
  ctrl_pi.rabi = device.omega_r;
  ctrl_pi.detuning = 0.0;
  ctrl_pi.duration = M_PI / device.omega_r;

  Pulse tgt;
  tgt.atoms = {target};
  tgt.transition = Transition::ER;
  tgt.rabi = device.omega_r_weak;
  tgt.detuning = delta;
  tgt.duration = 2.0 * M_PI / op;

  out.push_back(ctrl_pi);
  out.push_back(std::move(tgt));
  out.push_back(std::move(ctrl_pi));
}

void append_mixer_pulse(std::vector<Pulse>& out, double alpha, const DeviceConfig& device) {
  if (alpha == 0.0) return;
  // pulse area 2*alpha under the (omega/2) drive convention; lift negative
  // angles by the 2pi periodicity of e^{-i alpha X}
  const double lifted = alpha < 0.0 ? alpha + 2.0 * M_PI : alpha;
  Pulse p;
  for (int a = 0; a < device.num_atoms; ++a) p.atoms.push_back(a);
  p.transition = Transition::GE;
  p.rabi = device.omega_b;
  p.detuning = 0.0;
  p.duration = 2.0 * lifted / device.omega_b;
  out.push_back(std::move(p));
}

}  // namespace

PulseSequence compile_schedule(const QaoaSchedule& s, const DeviceConfig& device) {
  device.validate();
  const ChainLayout layout(device.num_atoms);
  PulseSequence seq;
  seq.schedule_hash = s.hash();
  seq.device = device;

  for (const ScheduleLayer& l : s.layers()) {
    for (const auto& [c, t] : layout.odd_pairs)
      append_zz_pair_pulses(seq.pulses, l.gamma_odd, c, t, device);
    for (const auto& [c, t] : layout.even_pairs)
      append_zz_pair_pulses(seq.pulses, l.gamma_even, c, t, device);
    append_z_parity_pulses(seq.pulses, l.beta_odd, /*even_parity=*/false, device);
    append_z_parity_pulses(seq.pulses, l.beta_even, /*even_parity=*/true, device);
    append_mixer_pulse(seq.pulses, l.alpha, device);
  }
  return seq;
}

PhysicalResult simulate_schedule_physical(const QaoaSchedule& s, const DeviceConfig& device,
                                          const QuantumState& psi0_logical) {
  device.validate();
  if (psi0_logical.levels_per_site() != 2)
    throw std::invalid_argument("simulate_schedule_physical: logical state must be 2-level");
  if (psi0_logical.num_sites() != device.num_atoms)
    throw std::invalid_argument("simulate_schedule_physical: atom count mismatch");
  const int n = device.num_atoms;
  const std::size_t dl = std::size_t{1} << n;

  // logical index -> physical index with digits in {g,e}
  std::vector<std::size_t> embed(dl);
  for (std::size_t i = 0; i < dl; ++i) {
    std::size_t j = 0;
    for (int sgl = 0; sgl < n; ++sgl) {
      j *= 3;
      j += (i >> (n - 1 - sgl)) & 1;
    }
    embed[i] = j;
  }

  std::vector<Complex> phys(pow3(n), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < dl; ++i) phys[embed[i]] = psi0_logical.amplitude(i);

  const PulseSequence seq = compile_schedule(s, device);
  const QuantumState evolved = evolve_pulses(seq, device, QuantumState(n, 3, std::move(phys)));

  std::vector<Complex> proj(dl);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < dl; ++i) {
    proj[i] = evolved.amplitude(embed[i]);
    norm2 += std::norm(proj[i]);
  }
  if (norm2 < 1e-12)
    throw std::runtime_error("simulate_schedule_physical: full leakage out of {g,e}");
  const double inv = 1.0 / std::sqrt(norm2);
  for (Complex& a : proj) a *= inv;
  return {QuantumState(n, 2, std::move(proj)), std::clamp(1.0 - norm2, 0.0, 1.0)};
}

ComplexMatrix physical_logical_propagator(const QaoaSchedule& s, const DeviceConfig& device) {
  device.validate();
  const int n = device.num_atoms;
  const std::size_t dl = std::size_t{1} << n;
  const PulseSequence seq = compile_schedule(s, device);

  using Key = std::tuple<std::vector<int>, int, double, double, double>;
  std::map<Key, ComplexMatrix> cache;
  ComplexMatrix u = ComplexMatrix::identity(pow3(n));
  for (const Pulse& p : seq.pulses) {
    Key key{p.atoms, static_cast<int>(p.transition), p.rabi, p.detuning, p.duration};
    auto it = cache.find(key);
    if (it == cache.end()) {
      const ComplexMatrix h = hamiltonian_snapshot(device, p);
      it = cache.emplace(key, unitary_evolution(h, p.duration)).first;
    }
    u = it->second * u;
  }

  // restrict to the {g,e}^n block; leakage shrinks columns, no renormalization
  std::vector<std::size_t> embed(dl);
  for (std::size_t i = 0; i < dl; ++i) {
    std::size_t j = 0;
    for (int sgl = 0; sgl < n; ++sgl) {
      j *= 3;
      j += (i >> (n - 1 - sgl)) & 1;
    }
    embed[i] = j;
  }
  ComplexMatrix m(dl, dl);
  for (std::size_t row = 0; row < dl; ++row)
    for (std::size_t col = 0; col < dl; ++col) m.at(row, col) = u(embed[row], embed[col]);
  return m;
}

}  // namespace qsynth
