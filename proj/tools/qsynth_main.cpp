#include "qsynth/experiments.hpp"
#include "qsynth/optimize.hpp"
#include "qsynth/records.hpp"
#include "qsynth/rng.hpp"
#include "qsynth/targets.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>
#include <thread>

namespace {

using namespace qsynth;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitRuntime = 3;

int effective_jobs(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

long effective_budget(const RunConfig& rc) {
  if (rc.budget > 0) return rc.budget;
  return rc.model == "physical" ? 20000L : 200000L;
}

OptimizerConfig optimizer_config(const RunConfig& rc) {
  OptimizerConfig cfg;
  cfg.max_evaluations = effective_budget(rc);
  cfg.budget_per_parameter = rc.budget_per_param;
  cfg.restarts = rc.restarts;
  cfg.rng_seed = rc.seed;
  cfg.jobs = effective_jobs(rc.jobs);
  return cfg;
}

std::string default_out(const RunConfig& rc, const std::string& stem) {
  return rc.out_path.empty() ? stem : rc.out_path;
}

int cmd_optimize(RunConfig rc) {
  if (rc.depths.empty() || rc.depths.front() < 1) {
    std::cerr << "optimize: --depth must be >= 1\n";
    return kExitUsage;
  }
  const int depth = rc.depths.front();
  const TargetSpec target = make_target(rc.target_key);
  const SimModel model = parse_model(rc.model);
  const Objective obj(target, model, depth, rc.device(target.num_qubits));
  const OptimizerConfig cfg = optimizer_config(rc);

  OptResult res = [&] {
    if (!rc.schedule_file.empty() && model == SimModel::Physical) {
      // refine a previously optimized (typically ideal-model) schedule
      const json j = json::parse(read_file(rc.schedule_file));
      OptResult seed{schedule_from_json(j), j.value("fidelity", 0.0), 0.0, 0, {}, rc.seed, false};
      return warm_start_physical(obj, seed, cfg);
    }
    return dual_anneal(obj, cfg);
  }();

  const std::string out = default_out(
      rc, rc.target_key + "-p" + std::to_string(depth) + "-" + rc.model + ".json");
  atomic_write(out, opt_result_to_json(res, rc, target.num_qubits).dump(2) + "\n");
  std::printf("optimize %s depth=%d model=%s fidelity=%.6f evaluations=%ld -> %s\n",
              rc.target_key.c_str(), depth, rc.model.c_str(), res.best_fidelity,
              res.evaluations_used, out.c_str());
  return kExitOk;
}

int verify_target(const std::string& key) {
  const TargetSpec target = make_target(key);
  bool pass = true;

  if (key.rfind("cluster-", 0) == 0) {
    const GraphSpec graph = key.rfind("cluster-full-", 0) == 0
                                ? complete_graph(target.num_qubits)
                                : path_graph(target.num_qubits);
    const StabilizerReport report = verify_cluster(*target.state, graph);
    std::printf("stabilizer eigenvalues (expect +1):\n");
    for (std::size_t a = 0; a < report.eigenvalues.size(); ++a)
      std::printf("  K_%zu: %+.12f\n", a, report.eigenvalues[a]);
    std::printf("worst deviation %.3e -> %s\n", report.worst_deviation,
                report.pass ? "PASS" : "FAIL");
    pass = report.pass;
  } else if (key.rfind("ame-", 0) == 0) {
    const AmeReport report = verify_ame(*target.state);
    std::printf("AME marginal check: worst deviation from maximally mixed %.3e -> %s\n",
                report.worst_deviation, report.pass ? "PASS" : "FAIL");
    pass = report.pass;
  } else if (key == "perfect-encoder") {
    const EncoderReport report = verify_encoder(target.unitary);
    std::printf("Knill-Laflamme check over 16 error operators: worst violation %.3e -> %s\n",
                report.worst_violation, report.pass ? "PASS" : "FAIL");
    pass = report.pass;
  } else if (key.rfind("ghz-", 0) == 0) {
    const QuantumState& psi = *target.state;
    int support = 0;
    for (std::size_t i = 0; i < psi.dim(); ++i)
      if (std::abs(psi.amplitude(i)) > 1e-12) ++support;
    double worst = 0.0;
    for (int q = 0; q < target.num_qubits; ++q) {
      const ComplexMatrix rho = partial_trace(psi, std::vector<int>{q});
      worst = std::max(worst, (rho - (Complex{0.5, 0.0} * ComplexMatrix::identity(2))).max_abs());
    }
    pass = support == 2 && worst <= 1e-12;
    std::printf("GHZ support=%d single-qubit marginals I/2 within %.3e -> %s\n", support, worst,
                pass ? "PASS" : "FAIL");
  }
  return pass ? kExitOk : kExitVerifyFailed;
}

int verify_schedule_file(const RunConfig& rc) {
  const json j = json::parse(read_file(rc.schedule_file));
  const QaoaSchedule s = schedule_from_json(j);
  const std::string key = j.at("target").get<std::string>();
  const std::string model = j.value("model", "ideal");
  const double recorded = j.at("fidelity").get<double>();

  const TargetSpec target = make_target(key);
  const Objective obj(target, parse_model(model), s.depth(), rc.device(target.num_qubits));
  const double recomputed = 1.0 - evaluate_cost(obj, s.to_flat());
  const bool pass = std::abs(recomputed - recorded) <= 1e-9;
  std::printf("schedule %s target=%s model=%s recorded=%.12f recomputed=%.12f -> %s\n",
              rc.schedule_file.c_str(), key.c_str(), model.c_str(), recorded, recomputed,
              pass ? "PASS" : "FAIL");
  return pass ? kExitOk : kExitVerifyFailed;
}

int cmd_verify(const RunConfig& rc) {
  if (!rc.schedule_file.empty()) return verify_schedule_file(rc);
  if (rc.target_key.empty()) {
    std::cerr << "verify: need --target or --schedule\n";
    return kExitUsage;
  }
  return verify_target(rc.target_key);
}

int cmd_sweep(RunConfig rc) {
  const int jobs = effective_jobs(rc.jobs);
  SweepRecord record;

  if (rc.sweep_kind == "depth") {
    if (rc.depths.empty()) {
      std::cerr << "sweep: need --depths for a depth sweep\n";
      return kExitUsage;
    }
    const TargetSpec target = make_target(rc.target_key);
    const OptimizerConfig cfg = optimizer_config(rc);
    record = depth_sweep(target, rc.depths, rc.samples, cfg, parse_model(rc.model), jobs);
    if (record.fit)
      std::printf("fit: a=%.4f lambda=%.4f correlation=%.4f (%d points, %d excluded)\n",
                  record.fit->amplitude, record.fit->lambda, record.fit->correlation,
                  record.fit->points_used, record.fit->points_excluded);
  } else if (rc.sweep_kind == "noise") {
    if (rc.schedule_file.empty()) {
      std::cerr << "sweep: noise sweeps need --schedule with an optimized schedule\n";
      return kExitUsage;
    }
    const json j = json::parse(read_file(rc.schedule_file));
    const QaoaSchedule s = schedule_from_json(j);
    const std::string key = rc.target_key.empty() ? j.at("target").get<std::string>()
                                                  : rc.target_key;
    const TargetSpec target = make_target(key);
    record.target_key = key;
    record.model = "ideal";
    record.master_seed = rc.seed;
    record.depths = {s.depth()};
    for (std::size_t ri = 0; ri < rc.noise_r.size(); ++ri) {
      NoiseConfig noise{rc.noise_r[ri], rc.trials, derive_seed(rc.seed, ri)};
      const NoiseSweepResult res = noise_sweep(s, target, noise, jobs);
      record.noise_results.push_back(
          {noise.magnitude_r, res.mean, res.stddev, res.fidelities});
      std::printf("R=%g mean=%.6f stddev=%.6f (%d trials)\n", noise.magnitude_r, res.mean,
                  res.stddev, rc.trials);
    }
  } else {
    std::cerr << "sweep: --kind must be 'depth' or 'noise'\n";
    return kExitUsage;
  }

  const std::string out = default_out(rc, "sweep-" + record.target_key + "-" + rc.sweep_kind);
  const std::string json_path = out + ".json";
  const std::string csv_path = out + ".csv";
  atomic_write(json_path, sweep_record_to_json(record, rc).dump(2) + "\n");
  atomic_write(csv_path, sweep_record_csv(record));
  std::printf("sweep record -> %s, %s\n", json_path.c_str(), csv_path.c_str());
  return kExitOk;
}

int cmd_export_pulses(RunConfig rc) {
  const json j = json::parse(read_file(rc.schedule_file));
  const QaoaSchedule s = schedule_from_json(j);
  int num_atoms = j.value("num_qubits", 0);
  if (num_atoms == 0 && !rc.target_key.empty())
    num_atoms = make_target(rc.target_key).num_qubits;
  if (num_atoms == 0 && j.contains("target"))
    num_atoms = make_target(j["target"].get<std::string>()).num_qubits;
  if (num_atoms == 0) {
    std::cerr << "export-pulses: cannot infer atom count; pass --target\n";
    return kExitUsage;
  }

  const DeviceConfig device = rc.device(num_atoms);
  PulseSequence seq;
  try {
    seq = compile_schedule(s, device);
  } catch (const std::domain_error& e) {
    std::cerr << "export-pulses: " << e.what()
              << " (angles on the +-pi boundary are not mappable)\n";
    return kExitUsage;
  }

  const std::string out = default_out(rc, "pulses");
  atomic_write(out + ".json", pulse_sequence_to_json(seq).dump(2) + "\n");
  atomic_write(out + ".csv", pulse_staircase_csv(seq));
  std::printf("%zu pulses, total duration %.3e s -> %s.json, %s.csv\n", seq.pulses.size(),
              seq.total_duration(), out.c_str(), out.c_str());
  return kExitOk;
}

std::vector<int> parse_depth_range(const std::string& spec) {
  std::vector<int> out;
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const int a = std::stoi(spec.substr(0, colon));
    const int b = std::stoi(spec.substr(colon + 1));
    if (a < 1 || b < a) throw std::invalid_argument("bad depth range '" + spec + "'");
    for (int p = a; p <= b; ++p) out.push_back(p);
    return out;
  }
  std::size_t pos = 0;
  while (pos < spec.size()) {
    const std::size_t comma = spec.find(',', pos);
    const std::string tok = spec.substr(pos, comma == std::string::npos ? spec.npos : comma - pos);
    if (!tok.empty()) out.push_back(std::stoi(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("bad depth list '" + spec + "'");
  return out;
}

void add_common_options(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--seed", rc.seed, "master RNG seed");
  cmd->add_option("--out", rc.out_path, "output path (or prefix for multi-file outputs)");
  cmd->add_option("--jobs", rc.jobs, "worker threads (0 = available parallelism)");
  cmd->add_option("--vnn-mhz", [&rc](const CLI::results_t& r) {
    rc.vnn_mhz = std::stod(r[0]); return true; }, "nearest-neighbour interaction / 2pi, MHz");
  cmd->add_option("--omega-b-mhz", [&rc](const CLI::results_t& r) {
    rc.omega_b_mhz = std::stod(r[0]); return true; }, "GE Rabi frequency / 2pi, MHz");
  cmd->add_option("--omega-r-mhz", [&rc](const CLI::results_t& r) {
    rc.omega_r_mhz = std::stod(r[0]); return true; }, "ER Rabi frequency / 2pi, MHz");
  cmd->add_option("--omega-r-weak-mhz", [&rc](const CLI::results_t& r) {
    rc.omega_r_weak_mhz = std::stod(r[0]); return true; }, "weak target drive / 2pi, MHz");
  cmd->add_option("--spacing-um", [&rc](const CLI::results_t& r) {
    rc.spacing_um = std::stod(r[0]); return true; }, "atom spacing, micrometres (metadata)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QAOA-style quantum-control schedule synthesis on ideal and Rydberg models"};
  app.require_subcommand(1);

  RunConfig rc;
  std::string depths_spec;

  // a JSON config file may supply any flag; explicit flags win
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") {
      try {
        rc = run_config_from_json(json::parse(read_file(argv[i + 1])));
        if (!rc.depths.empty()) depths_spec = std::to_string(rc.depths.front());
      } catch (const std::exception& e) {
        std::cerr << "config: " << e.what() << "\n";
        return kExitUsage;
      }
    }
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags override it)");

  CLI::App* opt = app.add_subcommand("optimize", "anneal a schedule for a target");
  opt->add_option("--target", rc.target_key, "target key")->required(rc.target_key.empty());
  opt->add_option("--depth", depths_spec, "ansatz depth p");
  opt->add_option("--model", rc.model, "ideal | physical");
  opt->add_option("--budget", rc.budget, "cost evaluations per restart");
  opt->add_option("--restarts", rc.restarts, "independent annealing restarts");
  opt->add_option("--warm-start-from", rc.schedule_file,
                  "schedule record to refine (physical model)");
  add_common_options(opt, rc);

  CLI::App* ver = app.add_subcommand("verify", "run a target's verification predicate");
  ver->add_option("--target", rc.target_key, "target key");
  ver->add_option("--schedule", rc.schedule_file, "optimize record to re-check");
  add_common_options(ver, rc);

  CLI::App* swp = app.add_subcommand("sweep", "depth or noise sweeps with persistent records");
  swp->add_option("--kind", rc.sweep_kind, "depth | noise");
  swp->add_option("--target", rc.target_key, "target key");
  swp->add_option("--depths", depths_spec, "a:b range or comma list");
  swp->add_option("--samples", rc.samples, "independent optimizations per depth");
  swp->add_option("--model", rc.model, "ideal | physical");
  swp->add_option("--budget", rc.budget, "cost evaluations per restart");
  swp->add_option("--budget-per-param", rc.budget_per_param,
                  "cost evaluations per restart per parameter (overrides --budget)");
  swp->add_option("--restarts", rc.restarts, "restarts per optimization");
  swp->add_option("--noise-R", rc.noise_r, "noise magnitudes R")->delimiter(',');
  swp->add_option("--trials", rc.trials, "perturbation trials per R");
  swp->add_option("--schedule", rc.schedule_file, "schedule record (noise sweeps)");
  add_common_options(swp, rc);

  CLI::App* exp = app.add_subcommand("export-pulses", "compile a schedule to device pulses");
  exp->add_option("--schedule", rc.schedule_file, "schedule record")->required();
  exp->add_option("--target", rc.target_key, "target key (atom count fallback)");
  add_common_options(exp, rc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!depths_spec.empty()) rc.depths = parse_depth_range(depths_spec);
    if (opt->parsed()) {
      rc.command = "optimize";
      return cmd_optimize(rc);
    }
    if (ver->parsed()) {
      rc.command = "verify";
      return cmd_verify(rc);
    }
    if (swp->parsed()) {
      rc.command = "sweep";
      return cmd_sweep(rc);
    }
    if (exp->parsed()) {
      rc.command = "export-pulses";
      return cmd_export_pulses(rc);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
