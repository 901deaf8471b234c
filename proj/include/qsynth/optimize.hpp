#pragma once

#include "qsynth/ansatz.hpp"
#include "qsynth/rydberg.hpp"
#include "qsynth/targets.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qsynth {

enum class SimModel { Ideal, Physical };

const char* model_name(SimModel m);
SimModel parse_model(const std::string& name);

/// Cost = 1 - fidelity for a target under a simulation model. Pure and
/// deterministic in the parameter vector.
struct Objective {
  TargetSpec target;
  SimModel model = SimModel::Ideal;
  int depth = 1;
  ChainLayout layout;
  DeviceConfig device;

  Objective(TargetSpec t, SimModel m, int p, DeviceConfig dev = {});

  int dimension() const { return 5 * depth; }
};

/// 1 - fidelity in [0, 1]. State targets compare against the layered
/// evolution of |+>^n; unitary targets compare propagators by the
/// phase-invariant trace fidelity. Under the physical model leakage counts
/// as infidelity, and parameter vectors whose compilation hits a detuning
/// singularity score the maximal cost 1.
double evaluate_cost(const Objective& obj, std::span<const double> params);

struct OptimizerConfig {
  double lower_bound = -M_PI;
  double upper_bound = M_PI;
  long max_evaluations = 200000;  // per restart
  long budget_per_parameter = 0;  // when > 0, per-restart budget = this * dimension
  int restarts = 1;
  double initial_temperature = 5230.0;
  double visiting_parameter = 2.62;   // heavy-tail exponent, in (1, 3)
  double acceptance_parameter = -5.0; // generalized Metropolis exponent
  double restart_temp_ratio = 2e-5;   // reanneal when T drops below T0 * ratio
  bool local_refinement = true;
  std::uint64_t rng_seed = 0;
  int jobs = 1;
  double target_cost = 1e-13;  // stop a restart early below this

  void validate() const;
};

struct OptResult {
  QaoaSchedule best_schedule;
  double best_fidelity = 0.0;
  double best_cost = 1.0;
  long evaluations_used = 0;
  std::vector<double> restart_fidelities;
  std::uint64_t seed = 0;
  bool budget_exhausted = false;
};

/// Generalized simulated annealing: heavy-tailed visiting distribution,
/// algebraic cooling with reannealing, generalized Metropolis acceptance,
/// and periodic derivative-free coordinate refinement. Restarts run on
/// derived seeds (optionally in parallel) and merge deterministically, so
/// results are bit-reproducible for a fixed (seed, config, objective).
OptResult dual_anneal(const Objective& obj, const OptimizerConfig& cfg);

/// Bounds-restricted local refinement of a physical objective seeded at
/// the ideal optimum. Never returns a worse point than the seed.
OptResult warm_start_physical(const Objective& physical, const OptResult& ideal,
                              const OptimizerConfig& cfg);

/// Low-level single-restart annealer over an arbitrary objective;
/// exposed for direct use on scalar test problems.
struct AnnealOutcome {
  std::vector<double> best_x;
  double best_cost = 0.0;
  long evaluations = 0;
};

using CostFn = std::function<double(std::span<const double>)>;

AnnealOutcome anneal_minimize(const CostFn& fn, int dim, const OptimizerConfig& cfg,
                              std::uint64_t seed);

/// Derivative-free polish: cyclic coordinate minimization with a Brent
/// line search inside shrinking windows. Returns the refined point (never
/// worse than the start).
AnnealOutcome refine_local(const CostFn& fn, std::span<const double> start,
                           const OptimizerConfig& cfg, long eval_budget);

}  // namespace qsynth
