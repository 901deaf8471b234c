#include "qsynth/targets.hpp"

#include "qsynth/gates.hpp"
#include "test_helpers.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>

using namespace qsynth;
using namespace qsynth::testing;

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(GraphSpec(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(GraphSpec(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(GraphSpec(3, {{0, 3}}), std::invalid_argument);
}

TEST_CASE("cluster state small cases") {
  const QuantumState plus = cluster_state(GraphSpec(1, {}));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(plus.amplitude(0) - s) <= 1e-14);
  CHECK(std::abs(plus.amplitude(1) - s) <= 1e-14);

  const QuantumState pair = cluster_state(GraphSpec(2, {{0, 1}}));
  CHECK(std::abs(pair.amplitude(0b00) - 0.5) <= 1e-14);
  CHECK(std::abs(pair.amplitude(0b01) - 0.5) <= 1e-14);
  CHECK(std::abs(pair.amplitude(0b10) - 0.5) <= 1e-14);
  CHECK(std::abs(pair.amplitude(0b11) + 0.5) <= 1e-14);
}

namespace {

// independent stabilizer oracle: build K_a as a dense matrix and apply it
double stabilizer_expectation(const QuantumState& psi, const GraphSpec& g, int a) {
  const int n = g.num_vertices;
  ComplexMatrix k = embed_single(pauli_x(), a, n);
  for (int b : g.neighbors(a)) k = embed_single(pauli_z(), b, n) * k;
  const std::vector<Complex> kpsi = k.apply(psi.amplitudes());
  Complex acc{0, 0};
  for (std::size_t i = 0; i < kpsi.size(); ++i)
    acc += std::conj(psi.amplitude(i)) * kpsi[i];
  return acc.real();
}

}  // namespace

TEST_CASE("fully connected 5-qubit cluster passes all stabilizers") {
  const GraphSpec g = complete_graph(5);
  const QuantumState c = cluster_state(g);
  const StabilizerReport report = verify_cluster(c, g);
  CHECK(report.pass);
  REQUIRE(report.eigenvalues.size() == 5);
  for (int a = 0; a < 5; ++a) {
    CHECK(report.eigenvalues[a] == doctest::Approx(1.0).epsilon(1e-10));
    // cross-check the report against the dense matrix oracle
    CHECK(report.eigenvalues[a] ==
          doctest::Approx(stabilizer_expectation(c, g, a)).epsilon(1e-12));
  }
}

TEST_CASE("all-zeros state has vanishing stabilizer expectations") {
  const GraphSpec g = path_graph(4);
  const StabilizerReport report = verify_cluster(QuantumState::basis_state(4, 2, 0), g);
  for (double ev : report.eigenvalues) CHECK(std::abs(ev) <= 1e-14);
  CHECK_FALSE(report.pass);
}

TEST_CASE("X corruption flips neighbour stabilizers to -1") {
  const GraphSpec g = path_graph(5);
  QuantumState c = cluster_state(g);
  // apply X on vertex 2: indexes with bit 2 flipped
  std::vector<Complex> amps(c.amplitudes().begin(), c.amplitudes().end());
  const std::size_t bit = std::size_t{1} << (5 - 1 - 2);
  for (std::size_t i = 0; i < amps.size(); ++i)
    if (!(i & bit)) std::swap(amps[i], amps[i | bit]);
  const QuantumState corrupted(5, 2, std::move(amps));
  const StabilizerReport report = verify_cluster(corrupted, g);
  // neighbours of 2 are 1 and 3: X_2 anticommutes with their Z factors
  CHECK(report.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(report.eigenvalues[3] == doctest::Approx(-1.0).epsilon(1e-10));
  // K_2 itself commutes with X_2, vertices 0 and 4 are untouched
  CHECK(report.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(report.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(report.eigenvalues[4] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_FALSE(report.pass);
}

TEST_CASE("cluster state is independent of edge ordering") {
  const GraphSpec fwd(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  const GraphSpec rev(4, {{0, 3}, {2, 3}, {1, 2}, {0, 1}});
  const QuantumState a = cluster_state(fwd);
  const QuantumState b = cluster_state(rev);
  for (std::size_t i = 0; i < a.dim(); ++i)
    CHECK(std::abs(a.amplitude(i) - b.amplitude(i)) <= 1e-12);
}

TEST_CASE("the two five-qubit cluster geometries give the same state") {
  // the fully connected graph drawn as a pentagon or as a star is the same
  // edge set, so the states must be identical amplitude by amplitude
  std::vector<std::pair<int, int>> pentagon_order = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4},
                                                     {0, 2}, {1, 3}, {2, 4}, {0, 3}, {1, 4}};
  const QuantumState a = cluster_state(GraphSpec(5, pentagon_order));
  const QuantumState b = cluster_state(complete_graph(5));
  for (std::size_t i = 0; i < a.dim(); ++i)
    CHECK(std::abs(a.amplitude(i) - b.amplitude(i)) <= 1e-12);
}

TEST_CASE("ghz states") {
  const QuantumState bell = ghz_state(2);
  const double s = 1.0 / std::sqrt(2.0);
  const QuantumState expect(2, 2, {Complex{s, 0}, 0, 0, Complex{s, 0}});
  CHECK(state_fidelity(bell, expect) == doctest::Approx(1.0).epsilon(1e-12));

  const QuantumState g3 = ghz_state(3);
  for (int q = 0; q < 3; ++q) {
    const ComplexMatrix rho = partial_trace(g3, std::vector<int>{q});
    CHECK(mat_max_diff(rho, Complex{0.5, 0.0} * ComplexMatrix::identity(2)) <= 1e-12);
  }

  const QuantumState g5 = ghz_state(5);
  int nonzero = 0;
  for (std::size_t i = 0; i < g5.dim(); ++i)
    if (std::abs(g5.amplitude(i)) > 1e-14) {
      ++nonzero;
      CHECK(std::abs(std::abs(g5.amplitude(i)) - s) <= 1e-14);
    }
  CHECK(nonzero == 2);
  CHECK_THROWS_AS((void)ghz_state(1), std::invalid_argument);
}

TEST_CASE("ame-5 marginals are maximally mixed, brute force") {
  const QuantumState ame5 = ame_state(5);
  const AmeReport report = verify_ame(ame5);
  CHECK(report.pass);
  CHECK(report.worst_deviation <= 1e-9);
  // independent check over all 10 pairs with partial_trace directly
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) {
      const ComplexMatrix rho = partial_trace(ame5, std::vector<int>{a, b});
      CHECK(mat_max_diff(rho, Complex{0.25, 0.0} * ComplexMatrix::identity(4)) <= 1e-9);
    }
  // this representative is supported on 16 basis states of equal weight
  int support = 0;
  for (std::size_t i = 0; i < 32; ++i) {
    const double w = std::norm(ame5.amplitude(i));
    if (w > 1e-12) {
      ++support;
      CHECK(w == doctest::Approx(1.0 / 16.0).epsilon(1e-9));
    }
  }
  CHECK(support == 16);
}

TEST_CASE("ame-6 marginals are maximally mixed") {
  const QuantumState ame6 = ame_state(6);
  const AmeReport report = verify_ame(ame6);
  CHECK(report.pass);
  CHECK(report.worst_deviation <= 1e-9);
  CHECK_THROWS_AS((void)ame_state(4), std::invalid_argument);
}

TEST_CASE("negative controls for the AME predicate") {
  CHECK_FALSE(verify_ame(QuantumState::basis_state(5, 2, 0)).pass);
  const AmeReport ghz_report = verify_ame(ghz_state(5));
  CHECK_FALSE(ghz_report.pass);  // GHZ two-qubit marginals are rank 2
}

TEST_CASE("perfect encoder is unitary with orthonormal codewords") {
  const ComplexMatrix u = perfect_encoder_unitary();
  CHECK(u.is_unitary(kUnitaryTol));
  CHECK(mat_max_diff(u.adjoint() * u, ComplexMatrix::identity(32)) <= 1e-10);

  std::vector<Complex> e0(32, Complex{0, 0}), e1(32, Complex{0, 0});
  e0[0] = 1.0;
  e1[16] = 1.0;
  const std::vector<Complex> c0 = u.apply(e0);
  const std::vector<Complex> c1 = u.apply(e1);
  Complex cross{0, 0};
  double n0 = 0.0, n1 = 0.0;
  for (std::size_t i = 0; i < 32; ++i) {
    cross += std::conj(c0[i]) * c1[i];
    n0 += std::norm(c0[i]);
    n1 += std::norm(c1[i]);
  }
  CHECK(std::abs(cross) <= 1e-12);
  CHECK(n0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(n1 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("encoder passes the Knill-Laflamme conditions") {
  const EncoderReport report = verify_encoder(perfect_encoder_unitary());
  CHECK(report.pass);
  CHECK(report.worst_violation <= kKnillLaflammeTol);
}

TEST_CASE("identity is not an encoder") {
  const EncoderReport report = verify_encoder(ComplexMatrix::identity(32));
  CHECK_FALSE(report.pass);  // <0|Z_0|0> != <1|Z_0|1> on the trivial embedding
}

TEST_CASE("KL conditions survive a phase on an ancilla") {
  const ComplexMatrix u = perfect_encoder_unitary();
  const ComplexMatrix phased = embed_single(phase_gate(0.77), 3, 5) * u;
  CHECK(verify_encoder(phased).pass);
}

TEST_CASE("encoder composed with its inverse is the identity") {
  const ComplexMatrix u = perfect_encoder_unitary();
  CHECK(mat_max_diff(u * u.adjoint(), ComplexMatrix::identity(32)) <= 1e-10);
}

TEST_CASE("target registry") {
  const TargetSpec cf4 = make_target("cluster-full-4");
  CHECK(cf4.kind == TargetSpec::Kind::State);
  CHECK(cf4.num_qubits == 4);
  const TargetSpec enc = make_target("perfect-encoder");
  CHECK(enc.kind == TargetSpec::Kind::Unitary);
  CHECK(enc.unitary.rows() == 32);
  CHECK_THROWS_WITH_AS((void)make_target("nope"),
                       doctest::Contains("unknown target"), std::invalid_argument);
  for (const char* key : {"cluster-full-5", "cluster-chain-4", "ghz-5", "ame-5", "ame-6"})
    CHECK(make_target(key).state.has_value());
}
