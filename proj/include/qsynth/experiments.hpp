#pragma once

#include "qsynth/optimize.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qsynth {

/// Parameter-noise model: every Rabi angle is shifted by an independent
/// draw from Uniform[-pi R, pi R]. R = 0 reproduces the schedule exactly;
/// R = 1 spreads every angle over a full 2pi interval.
struct NoiseConfig {
  double magnitude_r = 0.0;
  int trials = 100;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Deterministic given (rng_seed, draw_index); draws are applied to the
/// flat angle vector in layer-major order.
QaoaSchedule perturb_schedule(const QaoaSchedule& s, const NoiseConfig& noise, int draw_index);

struct NoiseSweepResult {
  double unperturbed = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> fidelities;  // per trial
};

/// Mean ideal-model fidelity of the target over `trials` independent
/// perturbations of the schedule.
NoiseSweepResult noise_sweep(const QaoaSchedule& s, const TargetSpec& target,
                             const NoiseConfig& noise, int jobs = 1);

/// a * exp(-lambda p) least-squares fit of log-infidelity against depth.
struct ExpFit {
  double amplitude = 0.0;    // a
  double lambda = 0.0;       // decay rate
  double correlation = 0.0;  // Pearson r of (p, log(1-F))
  int points_used = 0;
  int points_excluded = 0;   // infidelities <= 0 (machine-precision hits)
};

ExpFit fit_exponential(std::span<const double> depths, std::span<const double> infidelities);

struct DepthSample {
  int depth = 0;
  int sample_index = 0;
  std::uint64_t seed = 0;
  double fidelity = 0.0;
  std::vector<double> params;  // flat 5p angles of the best schedule
};

struct NoisePoint {
  double magnitude_r = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> fidelities;
};

/// Self-describing sweep output; serialized losslessly by the records
/// layer.
struct SweepRecord {
  std::string target_key;
  std::string model;
  std::uint64_t master_seed = 0;
  std::vector<int> depths;
  int samples_per_depth = 0;
  std::vector<DepthSample> samples;
  std::vector<NoisePoint> noise_results;
  std::optional<ExpFit> fit;
};

/// Independent optimizations per (depth, sample) cell; cells execute in a
/// bounded worker pool and land in deterministic order. The exponential
/// fit runs over all sample infidelities when at least two depths are
/// present.
SweepRecord depth_sweep(const TargetSpec& target, std::span<const int> depths,
                        int samples_per_depth, const OptimizerConfig& cfg, SimModel model,
                        int jobs = 1);

/// Ideal-model fidelity with the target after each of the 5p evolution
/// factors, in application order. The final entry equals the schedule's
/// overall fidelity.
std::vector<double> fidelity_trajectory(const QaoaSchedule& s, const TargetSpec& target);

}  // namespace qsynth
