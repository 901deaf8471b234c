#include "qsynth/rydberg.hpp"

#include "test_helpers.hpp"

#include "doctest.h"

#include <cmath>

using namespace qsynth;
using namespace qsynth::testing;

namespace {

// step-integration oracle for the driven two-level system: the lab frame
// Hamiltonian is H' = -(omega/2) sigma_x - delta |1><1| (drive sign pinned
// by the t->0 derivative of the closed form), and the closed form carries
// the extra frame factor diag(1, e^{-i delta t}).
ComplexMatrix integrated_propagator(double omega, double delta, double t, int steps) {
  const ComplexMatrix h(2, 2,
                        {0.0, -0.5 * omega, -0.5 * omega, -delta});
  const double dt = t / steps;
  // fourth-order series per step; error ~ steps * (|H| dt)^5
  ComplexMatrix step = ComplexMatrix::identity(2);
  ComplexMatrix term = ComplexMatrix::identity(2);
  const ComplexMatrix a = Complex{0.0, -dt} * h;
  for (int k = 1; k <= 6; ++k) {
    term = Complex{1.0 / k, 0.0} * (term * a);
    step = step + term;
  }
  ComplexMatrix u = ComplexMatrix::identity(2);
  for (int s = 0; s < steps; ++s) u = step * u;
  std::vector<Complex> frame{Complex{1.0, 0.0}, std::exp(Complex{0.0, -delta * t})};
  return ComplexMatrix::from_diagonal(frame) * u;
}

QuantumState three_level_basis(int n, std::initializer_list<int> levels) {
  std::size_t idx = 0;
  for (int l : levels) idx = idx * 3 + l;
  return QuantumState::basis_state(n, 3, idx);
}

}  // namespace

TEST_CASE("resonant pi and 2pi pulses") {
  const double omega = 2.0 * M_PI * 36e6;
  const ComplexMatrix upi = two_level_propagator(omega, 0.0, M_PI / omega);
  CHECK(std::abs(upi(0, 0)) <= 1e-12);
  CHECK(std::abs(upi(0, 1) - Complex{0.0, 1.0}) <= 1e-12);  // iX
  CHECK(std::abs(upi(1, 0) - Complex{0.0, 1.0}) <= 1e-12);

  const ComplexMatrix u2pi = two_level_propagator(omega, 0.0, 2.0 * M_PI / omega);
  CHECK(mat_max_diff(u2pi, Complex{-1.0, 0.0} * ComplexMatrix::identity(2)) <= 1e-12);
  CHECK(u2pi.is_unitary(1e-12));
}

TEST_CASE("closed form matches the step-integration oracle on a grid") {
  const double omega = 1.0;
  for (int di = 0; di < 10; ++di) {
    const double delta = -3.0 + 6.0 * di / 9.0;
    for (int ti = 1; ti <= 10; ++ti) {
      const double t = 4.0 * M_PI * ti / 10.0;
      const ComplexMatrix closed = two_level_propagator(omega, delta, t);
      const ComplexMatrix numeric = integrated_propagator(omega, delta, t, 10000);
      CHECK(mat_max_diff(closed, numeric) <= 1e-9);
      CHECK(closed.is_unitary(1e-12));
    }
  }
}

TEST_CASE("detuning formula closed cases") {
  const double omega = 2.0 * M_PI * 36e6;
  CHECK(detuning_for_phase(0.0, omega) == 0.0);
  CHECK(detuning_for_phase(M_PI / 2.0, omega) ==
        doctest::Approx(-omega / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(detuning_for_phase(-M_PI / 2.0, omega) ==
        doctest::Approx(omega / std::sqrt(3.0)).epsilon(1e-12));
  CHECK_THROWS_AS((void)detuning_for_phase(M_PI, omega), std::domain_error);
  CHECK_THROWS_AS((void)detuning_for_phase(-3.5, omega), std::domain_error);
}

TEST_CASE("detuned 2pi-pulse equals -exp(-i beta Z) for 50 beta values") {
  const double omega = 1.7;
  for (int k = 0; k < 50; ++k) {
    const double beta = -3.0 + 6.0 * k / 49.0;
    const double delta = detuning_for_phase(beta, omega);
    const double op = std::sqrt(omega * omega + delta * delta);
    const ComplexMatrix u = two_level_propagator(omega, delta, 2.0 * M_PI / op);
    const ComplexMatrix expect(
        2, 2,
        {-std::exp(Complex{0.0, -beta}), 0.0, 0.0, -std::exp(Complex{0.0, beta})});
    CHECK(mat_max_diff(u, expect) <= 1e-10);
  }
}

TEST_CASE("hamiltonian snapshot terms") {
  DeviceConfig dev;
  dev.num_atoms = 2;
  Pulse idle;
  idle.atoms = {0};
  idle.transition = Transition::ER;
  idle.rabi = 0.0;
  idle.detuning = 0.0;
  idle.duration = 1.0;
  const ComplexMatrix h2 = hamiltonian_snapshot(dev, idle);
  CHECK(h2.is_hermitian(1e-9));
  CHECK(h2(8, 8).real() == doctest::Approx(dev.v_nn));  // |rr>

  DeviceConfig dev1;
  dev1.num_atoms = 1;
  Pulse er;
  er.atoms = {0};
  er.transition = Transition::ER;
  er.rabi = 2.0 * M_PI * 36e6;
  er.detuning = 0.0;
  er.duration = 1.0;
  const ComplexMatrix h1 = hamiltonian_snapshot(dev1, er);
  CHECK(h1(2, 1).real() == doctest::Approx(er.rabi / 2.0));  // <r|H|e>
  CHECK(std::abs(h1(1, 0)) == 0.0);                          // no GE drive

  DeviceConfig dev3;
  dev3.num_atoms = 3;
  const ComplexMatrix h3 = hamiltonian_snapshot(dev3, idle);
  // atoms 0 and 2 in |r>, distance 2: v_nn / 2^6
  const std::size_t rgr = 2 * 9 + 0 * 3 + 2;
  CHECK(h3(rgr, rgr).real() == doctest::Approx(dev3.v_nn / 64.0));
}

TEST_CASE("detuning applies only to addressed atoms") {
  DeviceConfig dev;
  dev.num_atoms = 2;
  Pulse p;
  p.atoms = {1};
  p.transition = Transition::ER;
  p.rabi = 1.0;
  p.detuning = 5.0;
  p.duration = 1.0;
  const ComplexMatrix h = hamiltonian_snapshot(dev, p);
  const std::size_t gr = 0 * 3 + 2;  // |g r>: detuned
  const std::size_t rg = 2 * 3 + 0;  // |r g>: atom 0 not addressed
  CHECK(h(gr, gr).real() == doctest::Approx(-5.0));
  CHECK(h(rg, rg).real() == doctest::Approx(0.0));
}

TEST_CASE("evolve_pulses basics") {
  DeviceConfig dev;
  dev.num_atoms = 2;
  PulseSequence empty;
  const QuantumState gg = three_level_basis(2, {0, 0});
  const QuantumState out = evolve_pulses(empty, dev, gg);
  CHECK(std::abs(out.amplitude(0) - 1.0) <= 1e-14);

  // resonant GE pi-pulse on atom 0: |gg> -> -i|eg> under exp(-iHt)
  Pulse ge_pi;
  ge_pi.atoms = {0};
  ge_pi.transition = Transition::GE;
  ge_pi.rabi = dev.omega_b;
  ge_pi.detuning = 0.0;
  ge_pi.duration = M_PI / dev.omega_b;
  PulseSequence seq;
  seq.pulses = {ge_pi};
  const QuantumState evolved = evolve_pulses(seq, dev, gg);
  const std::size_t eg = 1 * 3 + 0;
  CHECK(std::abs(std::abs(evolved.amplitude(eg)) - 1.0) <= 1e-10);
  CHECK(std::abs(evolved.amplitude(eg) - Complex{0.0, -1.0}) <= 1e-10);
}

TEST_CASE("blockade suppresses the target excursion") {
  DeviceConfig dev;
  dev.num_atoms = 2;
  // control atom parked in |r>, target in |e>, resonant weak 2pi-pulse
  Pulse tgt;
  tgt.atoms = {1};
  tgt.transition = Transition::ER;
  tgt.rabi = dev.omega_r_weak;
  tgt.detuning = 0.0;
  tgt.duration = 2.0 * M_PI / dev.omega_r_weak;
  PulseSequence seq;
  seq.pulses = {tgt};
  const QuantumState re = three_level_basis(2, {2, 1});
  const QuantumState out = evolve_pulses(seq, dev, re);

  const std::size_t re_idx = 2 * 3 + 1;
  const std::size_t rr_idx = 2 * 3 + 2;
  const double ratio = dev.omega_r_weak / dev.v_nn;  // 0.1 at defaults
  CHECK(std::norm(out.amplitude(rr_idx)) <= 1.5 * ratio * ratio);
  CHECK(std::norm(out.amplitude(re_idx)) >= 1.0 - 1.5 * ratio * ratio);
}

TEST_CASE("norm preserved over 500 pulses") {
  DeviceConfig dev;
  dev.num_atoms = 3;
  Rng rng(2024);
  PulseSequence seq;
  for (int k = 0; k < 500; ++k) {
    Pulse p;
    p.atoms = {static_cast<int>(rng.below(3))};
    p.transition = rng.uniform() < 0.5 ? Transition::GE : Transition::ER;
    p.rabi = dev.omega_r * rng.uniform(0.1, 1.0);
    p.detuning = dev.omega_r * rng.uniform(-1.0, 1.0);
    p.duration = rng.uniform(0.1, 2.0) * 2.0 * M_PI / dev.omega_r;
    seq.pulses.push_back(std::move(p));
  }
  const QuantumState out = evolve_pulses(seq, dev, random_state(3, 3, 5));
  CHECK(std::abs(out.norm() - 1.0) <= 1e-9);
}

TEST_CASE("compile: zero schedule is empty, full layer on n=5 is 15 pulses") {
  DeviceConfig dev;
  dev.num_atoms = 5;
  CHECK(compile_schedule(QaoaSchedule::zeros(3), dev).pulses.empty());

  const QaoaSchedule full = QaoaSchedule::from_flat(std::vector<double>{0.3, 0.4, 0.5, 0.6, 0.7});
  const PulseSequence seq = compile_schedule(full, dev);
  // 4 chain pairs x 3 pulses + 2 parity pulses + 1 global mixer
  CHECK(seq.pulses.size() == 15);
  CHECK(seq.schedule_hash == full.hash());
}

TEST_CASE("compile: gamma-only layer on n=2 gives the three-pulse block") {
  DeviceConfig dev;
  dev.num_atoms = 2;
  const QaoaSchedule s = QaoaSchedule::from_flat(std::vector<double>{0, 0, 0, 0.37, 0});
  const PulseSequence seq = compile_schedule(s, dev);
  REQUIRE(seq.pulses.size() == 3);
  CHECK(seq.pulses[0].atoms == std::vector<int>{0});
  CHECK(seq.pulses[0].transition == Transition::ER);
  CHECK(seq.pulses[0].rabi == dev.omega_r);
  CHECK(seq.pulses[0].duration == doctest::Approx(M_PI / dev.omega_r));
  CHECK(seq.pulses[1].atoms == std::vector<int>{1});
  CHECK(seq.pulses[1].rabi == dev.omega_r_weak);
  CHECK(seq.pulses[2].atoms == std::vector<int>{0});
  // two compilations are bit-identical
  const PulseSequence again = compile_schedule(s, dev);
  REQUIRE(again.pulses.size() == seq.pulses.size());
  for (std::size_t i = 0; i < seq.pulses.size(); ++i) {
    CHECK(again.pulses[i].rabi == seq.pulses[i].rabi);
    CHECK(again.pulses[i].detuning == seq.pulses[i].detuning);
    CHECK(again.pulses[i].duration == seq.pulses[i].duration);
    CHECK(again.pulses[i].atoms == seq.pulses[i].atoms);
  }
}

TEST_CASE("compile rejects boundary angles") {
  DeviceConfig dev;
  dev.num_atoms = 2;
  // beta at the -pi wrap boundary
  CHECK_THROWS_AS(
      (void)compile_schedule(
          QaoaSchedule::from_flat(std::vector<double>{0, -M_PI, 0, 0, 0}), dev),
      std::domain_error);
  // gamma = pi/2 maps to a conditional phase of 2pi, which needs an
  // infinitely detuned target pulse
  CHECK_THROWS_AS(
      (void)compile_schedule(
          QaoaSchedule::from_flat(std::vector<double>{0, 0, 0, M_PI / 2.0, 0}), dev),
      std::domain_error);
}

TEST_CASE("physical mixer layer matches the ideal rotation") {
  DeviceConfig dev;
  dev.num_atoms = 1;
  const QaoaSchedule s = QaoaSchedule::from_flat(std::vector<double>{M_PI / 2.0, 0, 0, 0, 0});
  const PhysicalResult res =
      simulate_schedule_physical(s, dev, QuantumState::basis_state(1, 2, 0));
  CHECK(res.leakage <= 1e-9);
  // ideal e^{-i pi/2 X} |0> = -i |1>
  CHECK(std::abs(res.logical.amplitude(1) - Complex{0.0, -1.0}) <= 1e-6);
  const QuantumState ideal =
      apply_schedule(s, ChainLayout(1), QuantumState::basis_state(1, 2, 0));
  CHECK(state_fidelity(res.logical, ideal) >= 1.0 - 1e-6);
}

TEST_CASE("physical Z layer is exact on the logical subspace") {
  DeviceConfig dev;
  dev.num_atoms = 2;
  const QaoaSchedule s = QaoaSchedule::from_flat(std::vector<double>{0, 0.7, -0.4, 0, 0});
  const QuantumState psi0 = default_initial_state(2);
  const PhysicalResult res = simulate_schedule_physical(s, dev, psi0);
  const QuantumState ideal = apply_schedule(s, ChainLayout(2), psi0);
  CHECK(res.leakage <= 1e-9);
  CHECK(state_fidelity(res.logical, ideal) >= 1.0 - 1e-9);
}

namespace {

// perfect-blockade limit of the three-pulse block on the pair's logical
// basis: diag(1, e^{i(pi-b)}, -1, -1) with b = wrap(pi - 4 gamma)
ComplexMatrix ideal_cz_block(double gamma) {
  const double b = wrap_angle(M_PI - 4.0 * gamma);
  std::vector<Complex> d{1.0, -std::exp(Complex{0.0, -b}), -1.0, -1.0};
  return ComplexMatrix::from_diagonal(d);
}

struct CzBlockResult {
  double fidelity;
  double leakage;
};

CzBlockResult cz_block_on_plus(double gamma, DeviceConfig dev) {
  const QaoaSchedule s = QaoaSchedule::from_flat(std::vector<double>{0, 0, 0, gamma, 0});
  const PhysicalResult res = simulate_schedule_physical(s, dev, default_initial_state(2));
  const std::vector<Complex> ideal_amps =
      ideal_cz_block(gamma).apply(default_initial_state(2).amplitudes());
  const QuantumState ideal(2, 2, ideal_amps);
  return {state_fidelity(res.logical, ideal), res.leakage};
}

}  // namespace

TEST_CASE("physical CZ block against the perfect-blockade limit") {
  DeviceConfig dev;
  dev.num_atoms = 2;
  const double gamma = 0.4;
  const CzBlockResult at_default = cz_block_on_plus(gamma, dev);
  CHECK(at_default.fidelity >= 0.99);
  CHECK(at_default.leakage <= 0.01);
  // pinned regression values at the default device (finite-blockade error
  // depends on omega_r_weak / v_nn)
  CHECK(at_default.fidelity == doctest::Approx(0.996979785921).epsilon(1e-9));
  CHECK(at_default.leakage == doctest::Approx(0.001076263960).epsilon(1e-6));

  // blockade limit: scaling v_nn up drives the fidelity monotonically to 1
  DeviceConfig dev10 = dev;
  dev10.v_nn *= 10.0;
  DeviceConfig dev100 = dev;
  dev100.v_nn *= 100.0;
  const CzBlockResult at_10 = cz_block_on_plus(gamma, dev10);
  const CzBlockResult at_100 = cz_block_on_plus(gamma, dev100);
  CHECK(at_10.fidelity > at_default.fidelity);
  CHECK(at_100.fidelity > at_10.fidelity);
  CHECK(at_100.fidelity >= 0.9999);
}

TEST_CASE("simulate_schedule_physical zero schedule is the identity") {
  DeviceConfig dev;
  dev.num_atoms = 3;
  const QuantumState psi = random_state(3, 2, 12);
  const PhysicalResult res = simulate_schedule_physical(QaoaSchedule::zeros(2), dev, psi);
  CHECK(res.leakage == 0.0);
  CHECK(state_fidelity(res.logical, psi) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("logical propagator tracks the state simulation") {
  DeviceConfig dev;
  dev.num_atoms = 2;
  const QaoaSchedule s =
      QaoaSchedule::from_flat(std::vector<double>{0.3, 0.2, 0.0, 0.45, 0.0});
  const ComplexMatrix m = physical_logical_propagator(s, dev);
  const QuantumState psi0 = default_initial_state(2);
  const PhysicalResult res = simulate_schedule_physical(s, dev, psi0);
  const std::vector<Complex> via_m = m.apply(psi0.amplitudes());
  double norm2 = 0.0;
  for (const Complex& a : via_m) norm2 += std::norm(a);
  CHECK(1.0 - norm2 == doctest::Approx(res.leakage).epsilon(1e-9));
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(std::abs(via_m[i] / std::sqrt(norm2) - res.logical.amplitude(i)) <= 1e-9);
}
