// Copyright 2026 The robustbeam Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "experiments.hpp"
#include "robustbeam/analytic.hpp"
#include "robustbeam/errors.hpp"
#include "robustbeam/oracle.hpp"
#include "robustbeam/socp.hpp"

namespace {

robustbeam::Scenario scenario_for(int n, bool wishart) {
    robustbeam::ExperimentConfig cfg;
    cfg.n_antennas = n;
    cfg.cov_mode = wishart ? robustbeam::CovMode::RandomWishart : robustbeam::CovMode::Isotropic;
    cfg.seed = 99;
    return robustbeam::gen_scenario(cfg, 0);
}

void BM_SolveAnalyticIsotropic(benchmark::State& state) {
    const auto sc = scenario_for(static_cast<int>(state.range(0)), false);
    for (auto _ : state) {
        benchmark::DoNotOptimize(robustbeam::solve_p1(sc));
    }
}
BENCHMARK(BM_SolveAnalyticIsotropic)->RangeMultiplier(2)->Range(2, 32);

void BM_SolveAnalyticWishart(benchmark::State& state) {
    const auto sc = scenario_for(static_cast<int>(state.range(0)), true);
    for (auto _ : state) {
        try {
            benchmark::DoNotOptimize(robustbeam::solve_p1(sc));
        } catch (const robustbeam::NoRoot&) {
            // Root-free instances still exercise the full scan.
        }
    }
}
BENCHMARK(BM_SolveAnalyticWishart)->RangeMultiplier(2)->Range(2, 32);

void BM_SolveSocp(benchmark::State& state) {
    const auto sc = scenario_for(static_cast<int>(state.range(0)), true);
    const auto data = robustbeam::build_socp(sc);
    for (auto _ : state) {
        benchmark::DoNotOptimize(robustbeam::solve_socp(data));
    }
}
BENCHMARK(BM_SolveSocp)->RangeMultiplier(2)->Range(2, 32);

void BM_GridOracle(benchmark::State& state) {
    const auto sc = scenario_for(static_cast<int>(state.range(0)), true);
    robustbeam::OracleConfig cfg;
    cfg.beta_steps = 10000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(robustbeam::grid_oracle(sc, cfg));
    }
}
BENCHMARK(BM_GridOracle)->RangeMultiplier(2)->Range(2, 32);

void BM_WorstCaseInterference(benchmark::State& state) {
    const auto sc = scenario_for(static_cast<int>(state.range(0)), true);
    const robustbeam::Vec v = sc.hs / sc.hs.norm();
    for (auto _ : state) {
        benchmark::DoNotOptimize(robustbeam::worst_case_interference(1.0, v, sc.uncertainty));
    }
}
BENCHMARK(BM_WorstCaseInterference)->RangeMultiplier(2)->Range(2, 32);

} // namespace

BENCHMARK_MAIN();
