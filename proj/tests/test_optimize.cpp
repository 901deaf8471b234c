#include "qsynth/optimize.hpp"

#include "test_helpers.hpp"

#include "doctest.h"

#include <cmath>

using namespace qsynth;
using namespace qsynth::testing;

TEST_CASE("evaluate_cost closed cases") {
  // zero schedule against the uniform state: cost 0
  {
    GraphSpec empty(5, {});
    TargetSpec plus{"plus-5", TargetSpec::Kind::State, 5, cluster_state(empty), {}};
    const Objective obj(plus, SimModel::Ideal, 1);
    CHECK(evaluate_cost(obj, std::vector<double>(5, 0.0)) <= 1e-12);
  }
  // zero schedule against GHZ_5: 1 - 1/16
  {
    const Objective obj(make_target("ghz-5"), SimModel::Ideal, 1);
    CHECK(evaluate_cost(obj, std::vector<double>(5, 0.0)) ==
          doctest::Approx(0.9375).epsilon(1e-12));
  }
  // zero schedule (identity circuit) against the encoder: 1 - |Tr U|/32
  {
    const TargetSpec enc = make_target("perfect-encoder");
    const Objective obj(enc, SimModel::Ideal, 1);
    const double expect = 1.0 - std::abs(enc.unitary.trace()) / 32.0;
    CHECK(evaluate_cost(obj, std::vector<double>(5, 0.0)) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
  // malformed length
  {
    const Objective obj(make_target("ghz-5"), SimModel::Ideal, 2);
    CHECK_THROWS_AS((void)evaluate_cost(obj, std::vector<double>(5, 0.0)),
                    std::invalid_argument);
  }
}

TEST_CASE("annealer solves the one-parameter cosine toy problem") {
  const CostFn fn = [](std::span<const double> x) {
    const double c = std::cos(x[0]);
    return c * c;
  };
  OptimizerConfig cfg;
  cfg.max_evaluations = 2000;
  const AnnealOutcome out = anneal_minimize(fn, 1, cfg, 42);
  CHECK(out.best_cost <= 1e-6);
  CHECK(std::abs(std::abs(out.best_x[0]) - M_PI / 2.0) <= 1e-3);
  CHECK(out.evaluations <= 2000);
}

TEST_CASE("bounds are respected for every evaluated candidate") {
  double worst = 0.0;
  const CostFn fn = [&worst](std::span<const double> x) {
    for (double v : x) worst = std::max({worst, v - 1.5, -1.5 - v});
    double s = 0.0;
    for (double v : x) s += (v - 0.7) * (v - 0.7);
    return s;
  };
  OptimizerConfig cfg;
  cfg.lower_bound = -1.5;
  cfg.upper_bound = 1.5;
  cfg.max_evaluations = 4000;
  const AnnealOutcome out = anneal_minimize(fn, 3, cfg, 7);
  CHECK(worst <= 0.0);
  CHECK(out.best_cost <= 1e-8);
}

TEST_CASE("Bell state preparation at depth 2") {
  const Objective obj(make_target("ghz-2"), SimModel::Ideal, 2);
  OptimizerConfig cfg;
  cfg.max_evaluations = 25000;
  cfg.restarts = 2;
  cfg.rng_seed = 3;
  const OptResult res = dual_anneal(obj, cfg);
  CHECK(res.best_fidelity >= 0.999);
  CHECK(res.evaluations_used <= 50000);
}

TEST_CASE("seeded runs are bit-reproducible and restarts are monotone") {
  const Objective obj(make_target("cluster-chain-3"), SimModel::Ideal, 2);
  OptimizerConfig cfg;
  cfg.max_evaluations = 4000;
  cfg.restarts = 3;
  cfg.rng_seed = 11;

  const OptResult a = dual_anneal(obj, cfg);
  const OptResult b = dual_anneal(obj, cfg);
  CHECK(a.best_fidelity == b.best_fidelity);
  CHECK(a.best_schedule.to_flat() == b.best_schedule.to_flat());
  CHECK(a.evaluations_used == b.evaluations_used);
  REQUIRE(a.restart_fidelities.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(a.restart_fidelities[i] == b.restart_fidelities[i]);

  // same seeds, fewer restarts: prefix property implies monotone best
  OptimizerConfig cfg2 = cfg;
  cfg2.restarts = 2;
  const OptResult c = dual_anneal(obj, cfg2);
  CHECK(c.restart_fidelities[0] == a.restart_fidelities[0]);
  CHECK(c.restart_fidelities[1] == a.restart_fidelities[1]);
  CHECK(a.best_fidelity >= c.best_fidelity);

  // parallel execution must not change the merged outcome
  OptimizerConfig cfg3 = cfg;
  cfg3.jobs = 3;
  const OptResult d = dual_anneal(obj, cfg3);
  CHECK(d.best_fidelity == a.best_fidelity);
  CHECK(d.best_schedule.to_flat() == a.best_schedule.to_flat());
}

TEST_CASE("best fidelity is recomputed consistently at report time") {
  const Objective obj(make_target("ghz-3"), SimModel::Ideal, 2);
  OptimizerConfig cfg;
  cfg.max_evaluations = 6000;
  cfg.rng_seed = 9;
  const OptResult res = dual_anneal(obj, cfg);
  const double recomputed = 1.0 - evaluate_cost(obj, res.best_schedule.to_flat());
  CHECK(std::abs(res.best_fidelity - recomputed) <= 1e-12);
}

TEST_CASE("physical mixer target refines from the ideal warm start") {
  // single-qubit target e^{-i pi/2 X}: ideal optimum alpha = pi/2 carries
  // over to the device model almost exactly
  GraphSpec empty(1, {});
  const ChainLayout layout(1);
  const QuantumState target_state = apply_schedule(
      QaoaSchedule::from_flat(std::vector<double>{M_PI / 2.0, 0, 0, 0, 0}), layout,
      default_initial_state(1));
  TargetSpec target{"mixer-rot", TargetSpec::Kind::State, 1, target_state, {}};

  const Objective ideal_obj(target, SimModel::Ideal, 1);
  OptimizerConfig cfg;
  cfg.max_evaluations = 4000;
  cfg.rng_seed = 21;
  const OptResult ideal = dual_anneal(ideal_obj, cfg);
  CHECK(ideal.best_fidelity >= 0.9999);

  const Objective phys_obj(target, SimModel::Physical, 1);
  OptimizerConfig refine_cfg;
  refine_cfg.max_evaluations = 2000;
  const OptResult refined = warm_start_physical(phys_obj, ideal, refine_cfg);
  CHECK(refined.best_fidelity >= 1.0 - 1e-4);

  // zero-budget refinement returns the warm-start evaluation itself
  OptimizerConfig zero_cfg;
  zero_cfg.max_evaluations = 1;
  const OptResult unrefined = warm_start_physical(phys_obj, ideal, zero_cfg);
  CHECK(unrefined.best_fidelity ==
        doctest::Approx(1.0 - evaluate_cost(phys_obj, ideal.best_schedule.to_flat()))
            .epsilon(1e-12));
  CHECK(refined.best_fidelity >= unrefined.best_fidelity);
}

TEST_CASE("warm start rejects depth mismatches") {
  const Objective phys(make_target("ghz-2"), SimModel::Physical, 2);
  const Objective ideal_obj(make_target("ghz-2"), SimModel::Ideal, 1);
  OptimizerConfig cfg;
  cfg.max_evaluations = 500;
  const OptResult ideal = dual_anneal(ideal_obj, cfg);
  CHECK_THROWS_AS((void)warm_start_physical(phys, ideal, cfg), std::invalid_argument);
}

TEST_CASE("physical CZ-equivalent refinement never degrades the seed") {
  // two-qubit target: the ideal layered state for a gamma-only layer
  const ChainLayout layout(2);
  const QaoaSchedule seed_schedule =
      QaoaSchedule::from_flat(std::vector<double>{0.2, 0.1, 0.0, 0.4, 0.0});
  const QuantumState target_state =
      apply_schedule(seed_schedule, layout, default_initial_state(2));
  TargetSpec target{"layer-2q", TargetSpec::Kind::State, 2, target_state, {}};

  const Objective phys(target, SimModel::Physical, 1);
  OptResult seed{seed_schedule, 0.0, 0.0, 0, {}, 0, false};
  const double warm_fid = 1.0 - evaluate_cost(phys, seed_schedule.to_flat());
  OptimizerConfig cfg;
  cfg.max_evaluations = 1500;
  const OptResult refined = warm_start_physical(phys, seed, cfg);
  CHECK(refined.best_fidelity >= warm_fid - 1e-12);
}
