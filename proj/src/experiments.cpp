#include "qsynth/experiments.hpp"

#include "qsynth/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace qsynth {

void NoiseConfig::validate() const {
  if (magnitude_r < 0.0 || magnitude_r > 1.0)
    throw std::invalid_argument("NoiseConfig: magnitude R must be in [0, 1]");
  if (trials < 1) throw std::invalid_argument("NoiseConfig: trials must be >= 1");
}

QaoaSchedule perturb_schedule(const QaoaSchedule& s, const NoiseConfig& noise, int draw_index) {
  noise.validate();
  Rng rng(derive_seed(noise.rng_seed, static_cast<std::uint64_t>(draw_index)));
  std::vector<double> flat = s.to_flat();
  const double bound = M_PI * noise.magnitude_r;
  for (double& v : flat) v += rng.uniform(-bound, bound);
  return QaoaSchedule::from_flat(flat);
}

namespace {

void run_indexed(int count, int jobs, const std::function<void(int)>& work) {
  if (jobs <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> threads;
  const int nthreads = std::min(jobs, count);
  threads.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t)
    threads.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
    });
  for (std::thread& th : threads) th.join();
}

}  // namespace

NoiseSweepResult noise_sweep(const QaoaSchedule& s, const TargetSpec& target,
                             const NoiseConfig& noise, int jobs) {
  noise.validate();
  const Objective obj(target, SimModel::Ideal, s.depth());
  const std::vector<double> base = s.to_flat();

  NoiseSweepResult result;
  result.unperturbed = 1.0 - evaluate_cost(obj, base);
  result.fidelities.assign(noise.trials, 0.0);
  run_indexed(noise.trials, jobs, [&](int i) {
    const QaoaSchedule p = perturb_schedule(s, noise, i);
    result.fidelities[i] = 1.0 - evaluate_cost(obj, p.to_flat());
  });

  const auto [lo, hi] = std::minmax_element(result.fidelities.begin(), result.fidelities.end());
  if (*lo == *hi) {
    // all trials identical (R = 0): the mean is exact and the spread zero
    result.mean = *lo;
    result.stddev = 0.0;
    return result;
  }
  double sum = 0.0;
  for (double f : result.fidelities) sum += f;
  result.mean = sum / noise.trials;
  double var = 0.0;
  for (double f : result.fidelities) var += (f - result.mean) * (f - result.mean);
  result.stddev = noise.trials > 1 ? std::sqrt(var / (noise.trials - 1)) : 0.0;
  return result;
}

ExpFit fit_exponential(std::span<const double> depths, std::span<const double> infidelities) {
  if (depths.size() != infidelities.size())
    throw std::invalid_argument("fit_exponential: mismatched lengths");
  ExpFit fit;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (infidelities[i] <= 0.0) {
      ++fit.points_excluded;
      continue;
    }
    xs.push_back(depths[i]);
    ys.push_back(std::log(infidelities[i]));
  }
  fit.points_used = static_cast<int>(xs.size());
  if (fit.points_used < 2)
    throw std::invalid_argument("fit_exponential: need at least two positive infidelities");

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_exponential: all depths identical");
  const double slope = sxy / sxx;
  fit.lambda = -slope;
  fit.amplitude = std::exp(my - slope * mx);
  fit.correlation = (syy > 0.0) ? sxy / std::sqrt(sxx * syy) : 0.0;
  return fit;
}

SweepRecord depth_sweep(const TargetSpec& target, std::span<const int> depths,
                        int samples_per_depth, const OptimizerConfig& cfg, SimModel model,
                        int jobs) {
  if (depths.empty()) throw std::invalid_argument("depth_sweep: depth list is empty");
  if (samples_per_depth < 1)
    throw std::invalid_argument("depth_sweep: samples_per_depth must be >= 1");
  cfg.validate();

  SweepRecord record;
  record.target_key = target.key;
  record.model = model_name(model);
  record.master_seed = cfg.rng_seed;
  record.depths.assign(depths.begin(), depths.end());
  record.samples_per_depth = samples_per_depth;

  const int cells = static_cast<int>(depths.size()) * samples_per_depth;
  record.samples.assign(cells, {});
  run_indexed(cells, jobs, [&](int cell) {
    const int depth = depths[cell / samples_per_depth];
    const int sample = cell % samples_per_depth;
    OptimizerConfig cell_cfg = cfg;
    cell_cfg.rng_seed = derive_seed(cfg.rng_seed, static_cast<std::uint64_t>(cell));
    cell_cfg.jobs = 1;  // parallelism lives at the cell level
    const Objective obj(target, model, depth);
    const OptResult res = dual_anneal(obj, cell_cfg);
    DepthSample& out = record.samples[cell];
    out.depth = depth;
    out.sample_index = sample;
    out.seed = cell_cfg.rng_seed;
    out.fidelity = res.best_fidelity;
    out.params = res.best_schedule.to_flat();
  });

  if (depths.size() >= 2) {
    std::vector<double> ps, infs;
    for (const DepthSample& s : record.samples) {
      ps.push_back(s.depth);
      infs.push_back(1.0 - s.fidelity);
    }
    try {
      record.fit = fit_exponential(ps, infs);
    } catch (const std::invalid_argument&) {
      // all samples at machine precision; no meaningful fit
    }
  }
  return record;
}

std::vector<double> fidelity_trajectory(const QaoaSchedule& s, const TargetSpec& target) {
  const ChainLayout layout(target.num_qubits);
  std::vector<double> out;
  out.reserve(s.num_parameters());

  if (target.kind == TargetSpec::Kind::State) {
    const QuantumState psi0 = default_initial_state(layout.num_qubits);
    std::vector<Complex> amps(psi0.amplitudes().begin(), psi0.amplitudes().end());
    for (const ScheduleFactor& f : schedule_factors(s)) {
      apply_layer_factor(f.kind, f.angle, layout, amps);
      Complex ov{0.0, 0.0};
      for (std::size_t i = 0; i < amps.size(); ++i)
        ov += std::conj(target.state->amplitude(i)) * amps[i];
      out.push_back(std::norm(ov));
    }
    return out;
  }

  ComplexMatrix u = ComplexMatrix::identity(layout.dim());
  for (const ScheduleFactor& f : schedule_factors(s)) {
    u = layer_unitary(f.kind, f.angle, layout) * u;
    out.push_back(operator_fidelity(u, target.unitary));
  }
  return out;
}

}  // namespace qsynth
