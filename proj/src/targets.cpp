#include "qsynth/targets.hpp"

#include "qsynth/gates.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qsynth {

GraphSpec::GraphSpec(int n, std::vector<std::pair<int, int>> e)
    : num_vertices(n), edges(std::move(e)) {
  if (n < 1) throw std::invalid_argument("GraphSpec: need at least one vertex");
  std::set<std::pair<int, int>> seen;
  for (auto& [a, b] : edges) {
    if (a == b) throw std::invalid_argument("GraphSpec: self-loop");
    if (a < 0 || b < 0 || a >= n || b >= n)
      throw std::invalid_argument("GraphSpec: vertex out of range");
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) throw std::invalid_argument("GraphSpec: duplicate edge");
  }
}

std::vector<int> GraphSpec::neighbors(int v) const {
  std::vector<int> out;
  for (const auto& [a, b] : edges) {
    if (a == v) out.push_back(b);
    if (b == v) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

GraphSpec complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) edges.emplace_back(a, b);
  return GraphSpec(n, std::move(edges));
}

GraphSpec path_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a + 1 < n; ++a) edges.emplace_back(a, a + 1);
  return GraphSpec(n, std::move(edges));
}

QuantumState cluster_state(const GraphSpec& graph) {
  const int n = graph.num_vertices;
  const std::size_t d = std::size_t{1} << n;
  std::vector<Complex> amps(d, Complex{1.0 / std::sqrt(static_cast<double>(d)), 0.0});
  for (const auto& [a, b] : graph.edges) {
    const std::size_t abit = std::size_t{1} << (n - 1 - a);
    const std::size_t bbit = std::size_t{1} << (n - 1 - b);
    for (std::size_t i = 0; i < d; ++i)
      if ((i & abit) && (i & bbit)) amps[i] = -amps[i];
  }
  return QuantumState(n, 2, std::move(amps));
}

StabilizerReport verify_cluster(const QuantumState& psi, const GraphSpec& graph) {
  const int n = graph.num_vertices;
  if (psi.levels_per_site() != 2 || psi.dim() != (std::size_t{1} << n))
    throw std::invalid_argument("verify_cluster: dimension mismatch");
  StabilizerReport report;
  report.eigenvalues.reserve(n);
  for (int a = 0; a < n; ++a) {
    // K_a |psi>: X on a flips the bit, neighbors contribute Z signs
    const std::size_t abit = std::size_t{1} << (n - 1 - a);
    std::vector<std::size_t> nbits;
    for (int b : graph.neighbors(a)) nbits.push_back(std::size_t{1} << (n - 1 - b));
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < psi.dim(); ++i) {
      double sign = 1.0;
      for (std::size_t nb : nbits)
        if (i & nb) sign = -sign;
      acc += std::conj(psi.amplitude(i)) * sign * psi.amplitude(i ^ abit);
    }
    report.eigenvalues.push_back(acc.real());
  }
  for (double ev : report.eigenvalues)
    report.worst_deviation = std::max(report.worst_deviation, std::abs(ev - 1.0));
  report.pass = report.worst_deviation <= kStabilizerTol;
  return report;
}

QuantumState ghz_state(int n) {
  if (n < 2) throw std::invalid_argument("ghz_state: n must be >= 2");
  const std::size_t d = std::size_t{1} << n;
  std::vector<Complex> amps(d, Complex{0.0, 0.0});
  const double a = 1.0 / std::sqrt(2.0);
  amps.front() = a;
  amps.back() = a;
  return QuantumState(n, 2, std::move(amps));
}

namespace {

// Apply an n-qubit Pauli string (letters 'I','X','Y','Z') to a raw vector.
std::vector<Complex> apply_pauli_string(const std::string& letters,
                                        std::span<const Complex> v) {
  const int n = static_cast<int>(letters.size());
  const std::size_t d = std::size_t{1} << n;
  std::vector<Complex> out(d, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t j = i;
    Complex coeff{1.0, 0.0};
    for (int q = 0; q < n; ++q) {
      const std::size_t bit = std::size_t{1} << (n - 1 - q);
      const bool one = i & bit;
      switch (letters[q]) {
        case 'I': break;
        case 'X': j ^= bit; break;
        case 'Y':
          j ^= bit;
          coeff *= one ? Complex{0.0, -1.0} : Complex{0.0, 1.0};
          break;
        case 'Z':
          if (one) coeff = -coeff;
          break;
        default: throw std::invalid_argument("apply_pauli_string: bad letter");
      }
    }
    out[j] += coeff * v[i];
  }
  return out;
}

// Stabilizer generators of the five-qubit perfect code plus the all-Z
// logical; projector-averaging this group onto |00000> yields a state
// whose two-qubit marginals are all maximally mixed.
const std::vector<std::string>& five_qubit_code_group_generators() {
  static const std::vector<std::string> kGens = {
      "XZZXI", "IXZZX", "XIXZZ", "ZXIXZ", "ZZZZZ"};
  return kGens;
}

}  // namespace

GraphSpec ame6_graph() {
  // Triangular prism: triangles (0,1,2) and (3,4,5) joined by rungs.
  return GraphSpec(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {0, 3}, {1, 4}, {2, 5}});
}

QuantumState ame_state(int n) {
  if (n == 6) return cluster_state(ame6_graph());
  if (n != 5) throw std::invalid_argument("ame_state: only n = 5 or 6 supported");

  const std::size_t d = 32;
  std::vector<Complex> acc(d, Complex{0.0, 0.0});
  const auto& gens = five_qubit_code_group_generators();
  for (std::size_t mask = 0; mask < (std::size_t{1} << gens.size()); ++mask) {
    std::vector<Complex> v(d, Complex{0.0, 0.0});
    v[0] = 1.0;
    for (std::size_t g = 0; g < gens.size(); ++g)
      if (mask & (std::size_t{1} << g)) v = apply_pauli_string(gens[g], v);
    for (std::size_t i = 0; i < d; ++i) acc[i] += v[i];
  }
  double norm2 = 0.0;
  for (const Complex& a : acc) norm2 += std::norm(a);
  const double inv = 1.0 / std::sqrt(norm2);
  for (Complex& a : acc) a *= inv;
  return QuantumState(5, 2, std::move(acc));
}

AmeReport verify_ame(const QuantumState& psi) {
  if (psi.levels_per_site() != 2)
    throw std::invalid_argument("verify_ame: only 2-level states supported");
  const int n = psi.num_sites();
  const int k = n / 2;
  AmeReport report;

  std::vector<int> subset(k);
  for (int i = 0; i < k; ++i) subset[i] = i;
  const double mixed = 1.0 / static_cast<double>(std::size_t{1} << k);
  while (true) {
    const ComplexMatrix rho = partial_trace(psi, subset);
    for (std::size_t r = 0; r < rho.rows(); ++r)
      for (std::size_t c = 0; c < rho.cols(); ++c) {
        const Complex expect = (r == c) ? Complex{mixed, 0.0} : Complex{0.0, 0.0};
        report.worst_deviation =
            std::max(report.worst_deviation, std::abs(rho(r, c) - expect));
      }
    // next k-subset in lexicographic order
    int i = k - 1;
    while (i >= 0 && subset[i] == n - k + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
  report.pass = report.worst_deviation <= kAmeTol;
  return report;
}

ComplexMatrix perfect_encoder_unitary() {
  // Conditional-gate realization of the code's stabilizer group in
  // standard form: each block puts an ancilla anchor into superposition
  // and applies the rest of its generator under that control. Anchors for
  // generators YYZIZ, XIXZZ, XZZXI, YZIZY sit on qubits 1..4; Y anchors
  // carry an extra pi/2 phase.
  const int n = 5;
  struct Step {
    enum class Op { H, S, CX, CY, CZ } op;
    int a;      // single qubit, or control
    int b = -1; // target for controlled ops
  };
  using Op = Step::Op;
  static const Step kSteps[] = {
      {Op::H, 1},  {Op::S, 1},  {Op::CY, 1, 0}, {Op::CZ, 1, 2}, {Op::CZ, 1, 4},
      {Op::H, 2},  {Op::CX, 2, 0}, {Op::CZ, 2, 3}, {Op::CZ, 2, 4},
      {Op::H, 3},  {Op::CX, 3, 0}, {Op::CZ, 3, 1}, {Op::CZ, 3, 2},
      {Op::H, 4},  {Op::S, 4},  {Op::CY, 4, 0}, {Op::CZ, 4, 1}, {Op::CZ, 4, 3},
  };

  ComplexMatrix u = ComplexMatrix::identity(32);
  for (const Step& s : kSteps) {
    ComplexMatrix g(1, 1);
    switch (s.op) {
      case Op::H: g = embed_single(hadamard(), s.a, n); break;
      case Op::S: g = embed_single(phase_gate(M_PI / 2.0), s.a, n); break;
      case Op::CX: {
        const ControlSpec c{s.a, true};
        g = controlled_gate(pauli_x(), s.b, std::span<const ControlSpec>{&c, 1}, n);
        break;
      }
      case Op::CY: {
        const ControlSpec c{s.a, true};
        g = controlled_gate(pauli_y(), s.b, std::span<const ControlSpec>{&c, 1}, n);
        break;
      }
      case Op::CZ: g = cz_gate(s.a, s.b, n); break;
    }
    u = g * u;
  }
  return u;
}

EncoderReport verify_encoder(const ComplexMatrix& u) {
  if (u.rows() != 32 || u.cols() != 32)
    throw std::invalid_argument("verify_encoder: expected a 32x32 matrix");
  if (!u.is_unitary(kUnitaryTol))
    throw std::invalid_argument("verify_encoder: input not unitary");

  // codewords: data qubit 0 carries the logical bit, ancillas in |0>
  std::vector<Complex> e0(32, Complex{0.0, 0.0});
  std::vector<Complex> e1(32, Complex{0.0, 0.0});
  e0[0] = 1.0;
  e1[16] = 1.0;
  const std::vector<Complex> c0 = u.apply(e0);
  const std::vector<Complex> c1 = u.apply(e1);

  auto overlap = [](std::span<const Complex> a, std::span<const Complex> b) {
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
  };

  EncoderReport report;
  std::vector<std::string> errors = {"IIIII"};
  for (int q = 0; q < 5; ++q)
    for (char p : {'X', 'Y', 'Z'}) {
      std::string s = "IIIII";
      s[q] = p;
      errors.push_back(s);
    }

  for (const std::string& err : errors) {
    const std::vector<Complex> ec0 = apply_pauli_string(err, c0);
    const std::vector<Complex> ec1 = apply_pauli_string(err, c1);
    const double cross = std::abs(overlap(c0, ec1));
    const double diag = std::abs(overlap(c0, ec0) - overlap(c1, ec1));
    report.worst_violation = std::max({report.worst_violation, cross, diag});
  }
  report.pass = report.worst_violation <= kKnillLaflammeTol;
  return report;
}

namespace {

bool parse_suffix_int(const std::string& key, const std::string& prefix, int& out) {
  if (key.size() <= prefix.size() || key.compare(0, prefix.size(), prefix) != 0) return false;
  const std::string tail = key.substr(prefix.size());
  if (tail.size() != 1 || tail[0] < '2' || tail[0] > '6') return false;
  out = tail[0] - '0';
  return true;
}

}  // namespace

TargetSpec make_target(const std::string& key) {
  int n = 0;
  if (parse_suffix_int(key, "cluster-full-", n))
    return {key, TargetSpec::Kind::State, n, cluster_state(complete_graph(n)), {}};
  if (parse_suffix_int(key, "cluster-chain-", n))
    return {key, TargetSpec::Kind::State, n, cluster_state(path_graph(n)), {}};
  if (parse_suffix_int(key, "ghz-", n))
    return {key, TargetSpec::Kind::State, n, ghz_state(n), {}};
  if (key == "ame-5")
    return {key, TargetSpec::Kind::State, 5, ame_state(5), {}};
  if (key == "ame-6")
    return {key, TargetSpec::Kind::State, 6, ame_state(6), {}};
  if (key == "perfect-encoder")
    return {key, TargetSpec::Kind::Unitary, 5, std::nullopt, perfect_encoder_unitary()};
  std::string msg = "unknown target '" + key + "'; expected one of:";
  for (const std::string& k : registered_target_keys()) msg += " " + k;
  throw std::invalid_argument(msg);
}

std::vector<std::string> registered_target_keys() {
  return {"cluster-full-N (N=2..6)", "cluster-chain-N (N=2..6)", "ghz-N (N=2..6)",
          "ame-5", "ame-6", "perfect-encoder"};
}

}  // namespace qsynth
