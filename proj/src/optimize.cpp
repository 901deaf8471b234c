#include "qsynth/optimize.hpp"

#include "qsynth/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>

namespace qsynth {

const char* model_name(SimModel m) { return m == SimModel::Ideal ? "ideal" : "physical"; }

SimModel parse_model(const std::string& name) {
  if (name == "ideal") return SimModel::Ideal;
  if (name == "physical") return SimModel::Physical;
  throw std::invalid_argument("model must be 'ideal' or 'physical'");
}

Objective::Objective(TargetSpec t, SimModel m, int p, DeviceConfig dev)
    : target(std::move(t)), model(m), depth(p), layout(target.num_qubits), device(dev) {
  if (p < 1) throw std::invalid_argument("Objective: depth must be >= 1");
  device.num_atoms = target.num_qubits;
}

double evaluate_cost(const Objective& obj, std::span<const double> params) {
  if (params.empty() || params.size() % 5 != 0 ||
      params.size() != static_cast<std::size_t>(obj.dimension()))
    throw std::invalid_argument("evaluate_cost: parameter count must be 5 * depth");
  const QaoaSchedule s = QaoaSchedule::from_flat(params);

  if (obj.model == SimModel::Ideal) {
    if (obj.target.kind == TargetSpec::Kind::State) {
      const QuantumState psi =
          apply_schedule(s, obj.layout, default_initial_state(obj.layout.num_qubits));
      return 1.0 - state_fidelity(psi, *obj.target.state);
    }
    return 1.0 - operator_fidelity(schedule_unitary(s, obj.layout), obj.target.unitary);
  }

  // physical model; unmappable angles (detuning singularities) cost 1
  try {
    if (obj.target.kind == TargetSpec::Kind::State) {
      const PhysicalResult res = simulate_schedule_physical(
          s, obj.device, default_initial_state(obj.layout.num_qubits));
      const double f =
          state_fidelity(res.logical, *obj.target.state) * (1.0 - res.leakage);
      return std::clamp(1.0 - f, 0.0, 1.0);
    }
    const ComplexMatrix m = physical_logical_propagator(s, obj.device);
    const double f = std::abs((obj.target.unitary.adjoint() * m).trace()) /
                     static_cast<double>(m.rows());
    return std::clamp(1.0 - f, 0.0, 1.0);
  } catch (const std::domain_error&) {
    return 1.0;
  }
}

void OptimizerConfig::validate() const {
  if (!(lower_bound < upper_bound) || !std::isfinite(lower_bound) || !std::isfinite(upper_bound))
    throw std::invalid_argument("OptimizerConfig: bounds must be finite with lower < upper");
  if (restarts < 1) throw std::invalid_argument("OptimizerConfig: restarts must be >= 1");
  if (max_evaluations < 1 && budget_per_parameter < 1)
    throw std::invalid_argument("OptimizerConfig: empty budget");
  if (visiting_parameter <= 1.0 || visiting_parameter >= 3.0)
    throw std::invalid_argument("OptimizerConfig: visiting parameter must be in (1, 3)");
  if (acceptance_parameter >= 1.0)
    throw std::invalid_argument("OptimizerConfig: acceptance parameter must be < 1");
  if (initial_temperature <= 0.0)
    throw std::invalid_argument("OptimizerConfig: temperature must be positive");
}

namespace {

struct BudgetExhausted {};

struct VectorKey {
  std::vector<std::uint64_t> bits;
  bool operator==(const VectorKey&) const = default;
};

struct VectorKeyHash {
  std::size_t operator()(const VectorKey& k) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::uint64_t b : k.bits) {
      h ^= b;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Budgeted, memoizing wrapper around the raw objective. Cache hits do not
/// consume budget; exact revisits are free.
class Evaluator {
 public:
  Evaluator(const CostFn& fn, long max_evals) : fn_(fn), max_evals_(max_evals) {}

  double operator()(const std::vector<double>& x) {
    VectorKey key;
    key.bits.resize(x.size());
    std::memcpy(key.bits.data(), x.data(), x.size() * sizeof(double));
    if (const auto it = cache_.find(key); it != cache_.end()) return it->second;
    if (used_ >= max_evals_) throw BudgetExhausted{};
    ++used_;
    const double v = fn_(x);
    if (cache_.size() < kMaxCacheEntries) cache_.emplace(std::move(key), v);
    return v;
  }

  long used() const { return used_; }
  long remaining() const { return max_evals_ - used_; }

 private:
  static constexpr std::size_t kMaxCacheEntries = 1 << 17;
  const CostFn& fn_;
  long max_evals_;
  long used_ = 0;
  std::unordered_map<VectorKey, double, VectorKeyHash> cache_;
};

struct Best {
  std::vector<double> x;
  double cost = std::numeric_limits<double>::infinity();

  bool offer(const std::vector<double>& cx, double cc) {
    if (cc < cost) {
      x = cx;
      cost = cc;
      return true;
    }
    return false;
  }
};

/// Bounded scalar minimization by Brent's method (golden section with
/// parabolic interpolation).
template <typename G>
std::pair<double, double> brent_minimize(G&& g, double a, double b, double xatol, int maxit) {
  constexpr double kGolden = 0.3819660112501051;
  double x = a + kGolden * (b - a);
  double w = x, v = x;
  double fx = g(x);
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < maxit; ++it) {
    const double m = 0.5 * (a + b);
    const double tol1 = xatol + 1e-11 * std::abs(x);
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool golden = true;
    if (std::abs(e) > tol1) {
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etmp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etmp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (m > x) ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x < m) ? b - x : a - x;
      d = kGolden * e;
    }
    const double u = (std::abs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
    const double fu = g(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return {x, fx};
}

/// Cyclic coordinate descent with Brent line searches inside a shrinking
/// window. Stops on budget exhaustion or stagnation.
void coordinate_polish(Evaluator& eval, Best& best, std::vector<double> x, double fx,
                       double lo, double hi, double xatol, long budget) {
  const std::size_t dim = x.size();
  double window = 0.35 * (hi - lo);
  const long start = eval.used();
  try {
    while (eval.used() - start < budget && window > 1e-10) {
      const double before = fx;
      for (std::size_t i = 0; i < dim; ++i) {
        if (eval.used() - start >= budget) break;
        const double a = std::max(lo, x[i] - window);
        const double b = std::min(hi, x[i] + window);
        const double xi = x[i];
        auto g = [&](double t) {
          x[i] = t;
          const double v = eval(x);
          x[i] = xi;
          return v;
        };
        const auto [tmin, fmin] = brent_minimize(g, a, b, xatol, 80);
        if (fmin < fx) {
          x[i] = tmin;
          fx = fmin;
          best.offer(x, fx);
        }
      }
      const double gain = before - fx;
      window *= 0.5;
      if (gain <= 1e-16) break;
    }
  } catch (const BudgetExhausted&) {
  }
  best.offer(x, fx);
}

double visiting_sigma(double t, double qv) {
  const double f1 = std::exp(std::log(t) / (qv - 1.0));
  const double f2 = std::exp((4.0 - qv) * std::log(qv - 1.0));
  const double f3 = std::exp((2.0 - qv) * std::log(2.0) / (qv - 1.0));
  const double f4 = std::sqrt(M_PI) * f1 * f2 / (f3 * (3.0 - qv));
  const double f5 = 1.0 / (qv - 1.0) - 0.5;
  const double d1 = 2.0 - f5;
  const double f6 = M_PI * (1.0 - f5) / std::sin(M_PI * (1.0 - f5)) / std::exp(std::lgamma(d1));
  return std::exp(-(qv - 1.0) * std::log(f6 / f4) / (3.0 - qv));
}

double visit_step(Rng& rng, double sigmax, double qv) {
  constexpr double kTailLimit = 1e8;
  const double x = sigmax * rng.normal();
  const double y = rng.normal();
  const double den = std::exp((qv - 1.0) * std::log(std::abs(y)) / (3.0 - qv));
  double visit = x / den;
  if (visit > kTailLimit) visit = kTailLimit * rng.uniform();
  else if (visit < -kTailLimit) visit = -kTailLimit * rng.uniform();
  return visit;
}

inline double wrap_into(double v, double lo, double hi) {
  const double range = hi - lo;
  double w = std::fmod(v - lo, range);
  if (w < 0.0) w += range;
  return lo + w;
}

}  // namespace

AnnealOutcome anneal_minimize(const CostFn& fn, int dim, const OptimizerConfig& cfg,
                              std::uint64_t seed) {
  cfg.validate();
  if (dim < 1) throw std::invalid_argument("anneal_minimize: dimension must be >= 1");
  const double lo = cfg.lower_bound;
  const double hi = cfg.upper_bound;
  const double qv = cfg.visiting_parameter;
  const double qa = cfg.acceptance_parameter;
  const long budget =
      cfg.budget_per_parameter > 0 ? cfg.budget_per_parameter * dim : cfg.max_evaluations;

  Evaluator eval(fn, budget);
  Rng rng(seed);
  Best best;

  // reserve part of the budget for the final refinement pass
  const long final_reserve =
      cfg.local_refinement ? std::min<long>(budget / 4, 160L * dim + 400) : 0;
  const long interim_polish_budget = std::min<long>(budget / 8, 45L * dim + 200);

  std::vector<double> x(dim);
  for (int i = 0; i < dim; ++i) x[i] = rng.uniform(lo, hi);
  double fx;
  try {
    fx = eval(x);
  } catch (const BudgetExhausted&) {
    return {x, fn(x), 1};
  }
  best.offer(x, fx);

  const double t0 = cfg.initial_temperature;
  const double tfactor = std::pow(2.0, qv - 1.0) - 1.0;
  bool improved_since_polish = false;
  long steps_since_polish = 0;

  try {
    long k = 1;
    while (eval.remaining() > final_reserve && best.cost > cfg.target_cost) {
      double t = t0 * tfactor / (std::pow(1.0 + k, qv - 1.0) - 1.0);
      if (t < t0 * cfg.restart_temp_ratio) {
        // reanneal from the incumbent optimum
        k = 1;
        t = t0;
        x = best.x;
        fx = best.cost;
      }
      const double sigmax = visiting_sigma(t, qv);
      const double t_accept = t / static_cast<double>(k);

      for (int j = 0; j < 2 * dim; ++j) {
        if (eval.remaining() <= final_reserve || best.cost <= cfg.target_cost) break;
        std::vector<double> cand = x;
        if (j < dim) {
          for (int i = 0; i < dim; ++i)
            cand[i] = wrap_into(x[i] + visit_step(rng, sigmax, qv), lo, hi);
        } else {
          const int i = j - dim;
          cand[i] = wrap_into(x[i] + visit_step(rng, sigmax, qv), lo, hi);
        }
        const double fc = eval(cand);
        if (fc < fx) {
          x = std::move(cand);
          fx = fc;
          if (best.offer(x, fx)) improved_since_polish = true;
        } else {
          const double pqv1 = 1.0 - (1.0 - qa) * (fc - fx) / t_accept;
          if (pqv1 > 0.0 && rng.uniform() <= std::exp(std::log(pqv1) / (1.0 - qa))) {
            x = std::move(cand);
            fx = fc;
          }
        }
      }

      ++steps_since_polish;
      if (cfg.local_refinement && improved_since_polish && steps_since_polish >= 20) {
        const long budget =
            std::min(interim_polish_budget, eval.remaining() - final_reserve);
        if (budget > 3 * dim) {
          coordinate_polish(eval, best, best.x, best.cost, lo, hi, 1e-5, budget);
          improved_since_polish = false;
          steps_since_polish = 0;
          x = best.x;
          fx = best.cost;
        }
      }
      ++k;
    }
  } catch (const BudgetExhausted&) {
  }

  if (cfg.local_refinement && best.cost > cfg.target_cost && eval.remaining() > 0) {
    try {
      coordinate_polish(eval, best, best.x, best.cost, lo, hi, 1e-10, eval.remaining());
    } catch (const BudgetExhausted&) {
    }
  }
  return {best.x, best.cost, eval.used()};
}

AnnealOutcome refine_local(const CostFn& fn, std::span<const double> start,
                           const OptimizerConfig& cfg, long eval_budget) {
  cfg.validate();
  Evaluator eval(fn, std::max<long>(eval_budget, 1));
  Best best;
  std::vector<double> x(start.begin(), start.end());
  double fx;
  try {
    fx = eval(x);
  } catch (const BudgetExhausted&) {
    return {x, fn(x), 1};
  }
  best.offer(x, fx);
  if (eval_budget > 1)
    coordinate_polish(eval, best, x, fx, cfg.lower_bound, cfg.upper_bound, 1e-10,
                      eval.remaining());
  return {best.x, best.cost, eval.used()};
}

namespace {

void run_indexed_parallel(int count, int jobs, const std::function<void(int)>& work) {
  if (jobs <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  const int nthreads = std::min(jobs, count);
  std::vector<std::thread> threads;
  threads.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t)
    threads.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
    });
  for (std::thread& th : threads) th.join();
}

}  // namespace

OptResult dual_anneal(const Objective& obj, const OptimizerConfig& cfg) {
  cfg.validate();
  const int dim = obj.dimension();
  const CostFn fn = [&obj](std::span<const double> p) { return evaluate_cost(obj, p); };

  std::vector<AnnealOutcome> outcomes(cfg.restarts);
  run_indexed_parallel(cfg.restarts, cfg.jobs, [&](int i) {
    outcomes[i] = anneal_minimize(fn, dim, cfg, derive_seed(cfg.rng_seed, i));
  });

  int best_idx = 0;
  for (int i = 1; i < cfg.restarts; ++i)
    if (outcomes[i].best_cost < outcomes[best_idx].best_cost) best_idx = i;

  OptResult result{QaoaSchedule::from_flat(outcomes[best_idx].best_x),
                   0.0,
                   outcomes[best_idx].best_cost,
                   0,
                   {},
                   cfg.rng_seed,
                   false};
  for (const AnnealOutcome& o : outcomes) {
    result.evaluations_used += o.evaluations;
    result.restart_fidelities.push_back(1.0 - o.best_cost);
    if (o.best_cost > cfg.target_cost) result.budget_exhausted = true;
  }
  // recompute at report time; wrapping angles must not change the cost
  result.best_fidelity = 1.0 - evaluate_cost(obj, outcomes[best_idx].best_x);
  return result;
}

OptResult warm_start_physical(const Objective& physical, const OptResult& ideal,
                              const OptimizerConfig& cfg) {
  if (physical.model != SimModel::Physical)
    throw std::invalid_argument("warm_start_physical: objective must be physical");
  if (ideal.best_schedule.depth() != physical.depth)
    throw std::invalid_argument("warm_start_physical: depth mismatch");

  const CostFn fn = [&physical](std::span<const double> p) {
    return evaluate_cost(physical, p);
  };
  const std::vector<double> start = ideal.best_schedule.to_flat();
  const AnnealOutcome refined = refine_local(fn, start, cfg, cfg.max_evaluations);

  OptResult result{QaoaSchedule::from_flat(refined.best_x),
                   1.0 - refined.best_cost,
                   refined.best_cost,
                   refined.evaluations,
                   {1.0 - refined.best_cost},
                   cfg.rng_seed,
                   false};
  return result;
}

}  // namespace qsynth
