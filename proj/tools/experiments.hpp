// Copyright 2026 The robustbeam Authors
// SPDX-License-Identifier: Apache-2.0

// Randomized scenario generation and the rate-versus-parameter sweeps
// behind the experiment CLI, plus CSV serialization of their results.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robustbeam/channel.hpp"

namespace robustbeam {

enum class Method { Analytic, Socp, Oracle, All };

enum class CovMode { Isotropic, RandomWishart };

struct ExperimentConfig {
    int n_antennas = 3;
    double p_bar_db = 5.0; // transmit budget, dB relative to unit noise
    double p_t_db = 0.0;   // interference cap, dB
    double epsilon = 0.2;
    double l_ratio = 2.0;  // PU distance over SU distance
    double path_loss_exponent = 4.0;
    double sigma = 1.0;    // isotropic covariance scale
    int trials = 500;
    std::uint64_t seed = 1;
    Method method = Method::All;
    CovMode cov_mode = CovMode::Isotropic;
};

// Throws std::invalid_argument on out-of-range fields.
void validate(const ExperimentConfig& cfg);

double db_to_linear(double db);
double linear_to_db(double linear);
double nats_to_bits(double nats);

// Deterministic in (cfg.seed, trial_index): channel entries are unit
// circularly symmetric Gaussians, the mean channel is attenuated by
// l_ratio^(-path_loss_exponent/2), and the covariance is sigma^2 I or a
// random Wishart matrix depending on cov_mode.
Scenario gen_scenario(const ExperimentConfig& cfg, int trial_index);

struct SweepRow {
    double axis = 0.0;
    std::string method;
    double mean_rate_bits = 0.0;
    double std_rate_bits = 0.0;
    double mean_gap_to_oracle = 0.0; // bits; NaN when no oracle ran
    int trials = 0;                  // trials actually aggregated
    std::uint64_t seed = 0;
    int feasible_count = 0;          // trials whose solution re-checked feasible
};

struct SweepResult {
    std::vector<SweepRow> rows;
    int failed_trials = 0; // per-method trial failures summed over rows
    double elapsed_seconds = 0.0;
};

// Mean rate versus transmit budget; axis values in dB.
SweepResult sweep_pbar(const ExperimentConfig& cfg, const std::vector<double>& pbar_db_values);

// Mean rate versus the distance ratio scaling the mean channel.
SweepResult sweep_distance(const ExperimentConfig& cfg, const std::vector<double>& l_values);

// Single-constraint reference curves (power-only, interference-only)
// against the doubly constrained problem solved both analytically and via
// the cone program; axis values in dB.
SweepResult sweep_constraints(const ExperimentConfig& cfg,
                              const std::vector<double>& pbar_db_values);

// Fixed header plus one row per (axis point, method), floats at 12
// significant digits. Byte-identical for identical config and seed.
std::string to_csv(const SweepResult& result);

// Worker count: ROBUST_BEAM_THREADS, with 0 or unset meaning auto.
int thread_budget();

} // namespace robustbeam
