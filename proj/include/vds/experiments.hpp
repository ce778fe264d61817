// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VDS_EXPERIMENTS_HPP
#define VDS_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vds/core.hpp"

namespace vds {

// Config-driven experiment runner. Scenarios:
//   scheme-comparison  recovery error vs m for the configured sampling schemes
//   complexity-curves  L^2(alpha, m) and sample-complexity bound tables
//   toy                miss/undercount rates of the toy prior
//   noise-tail         exceedance of the noise-sensitivity tail bound
//   rip-toy            toy success comparison plus exhaustive characterization
//
// Outputs results.csv (one row per scheme/m/trial with the frozen column set),
// summary.csv (per-scenario aggregates) and manifest.json. Outputs are
// byte-identical for a fixed config and seed regardless of worker count.
struct ExperimentConfig {
  std::string scenario = "scheme-comparison";
  Index n = 1024;
  Index k = 20;
  std::vector<Index> m_grid;
  double sigma = 0.05;
  Index trials = 50;
  std::uint64_t seed = 1;
  int threads = 1;

  // Sparse prior (scheme-comparison): 2-D Haar synthesis over a 2-D DFT.
  Index height = 32;
  Index width = 32;
  int levels = 3;
  double lasso_penalty = -1.0;
  int max_iters = 1500;
  double amplitude_floor = 0.3;  // min |coefficient| of synthetic signals

  std::vector<std::string> schemes;  // defaults per scenario

  // complexity-curves / noise-tail coherence source.
  std::string alpha_pattern = "inv_index";  // inv_index | inv_sqrt | uniform | lognormal
  std::vector<double> lambda_grid;
  std::vector<double> tail_quantiles;  // noise-tail t values

  // toy / rip-toy
  Index toy_n = 2000;
  Index toy_k = 10;
  Index toy_m = 20;
};

ExperimentConfig experiment_config_from_json_file(const std::string& path);
std::string canonical_config_string(const ExperimentConfig& cfg);  // hashed into the manifest

// Deterministic per-task stream id.
std::uint64_t task_stream(const std::string& scheme, Index m, Index trial);

void run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

// Deterministic coherence pattern generators used by the scenarios.
RealVec alpha_from_pattern(const std::string& pattern, Index n, std::uint64_t seed);

}  // namespace vds

#endif  // VDS_EXPERIMENTS_HPP
