// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VDS_SAMPLING_HPP
#define VDS_SAMPLING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vds/core.hpp"
#include "vds/rng.hpp"
#include "vds/weights.hpp"

namespace vds {

enum class Scheme {
  bernoulli,
  bernoulli_conditioned,
  with_replacement,
  wor_rejection,
  wor_sequential,
};

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

// One realized sampling matrix. `indices` are distinct except never for
// with-replacement draws, where duplicates are merged into `multiplicities`
// in first-draw order. `precond` holds the diagonal of the preconditioner
// applied to the kept rows; the measurement operator folds in the sqrt(n/m)
// row scaling of the sampling matrix itself.
//
// Row conventions per scheme:
//   bernoulli / bernoulli-conditioned: ascending indices, multiplicity 1,
//     precond d_i = sqrt(m/(n w_i)).
//   with-replacement: first-draw order, multiplicities = draw counts, every
//     duplicate enters the measurement operator as its own row,
//     precond d_i = 1/sqrt(n p_i).
//   wor-rejection: acceptance order, multiplicities = total draw counts c_i,
//     rows are merged (one row per index) with the empirical preconditioner
//     sqrt(m c_i / (n N p_i)), N = total draws.
//   wor-sequential: acceptance order, multiplicity 1, heuristic
//     preconditioner sqrt(m/(n w_i)) with w_i = 1 - exp(-lambda p_i).
struct SamplingPlan {
  Scheme scheme = Scheme::bernoulli;
  Index n = 0;
  Index m = 0;   // nominal measurement count used in the row scaling
  std::vector<Index> indices;
  std::vector<Index> multiplicities;
  RealVec precond;
  RngStream rng;
  Index attempts = 1;   // conditioned-Bernoulli resampling attempts

  bool expand_multiplicities() const { return scheme == Scheme::with_replacement; }
  Index rows() const;   // counting multiplicities only where they expand
};

SamplingPlan sample_bernoulli(const WeightVector& w, RngStream rng);

// Bernoulli conditioned on the realized count equaling m: redraw until the
// count matches. Throws resource-exhausted with the attempt count when
// max_attempts redraws all miss.
SamplingPlan sample_bernoulli_conditioned(const WeightVector& w, RngStream rng,
                                          Index max_attempts = 100000);

SamplingPlan sample_with_replacement(const RealVec& p, Index m, RngStream rng);

// Draw from p until m distinct indices have been accepted, rejecting
// duplicates. The expected cost of each new acceptance is 1/(1-q) with q the
// already-selected mass; sampling aborts once the accumulated estimate
// crosses attempt_cap.
struct WorRejectionPlan {
  SamplingPlan plan;
  std::uint64_t total_draws = 0;
  std::vector<Index> draw_counts;   // per accepted index, total times drawn
};
WorRejectionPlan sample_wor_rejection(const RealVec& p, Index m, RngStream rng,
                                      double attempt_cap = 1e7);

// Sequential without-replacement draws with renormalization over the
// unselected indices; induces the same tuple law as rejection sampling.
// The optional marginal weights (heuristic, sum = m) supply the
// preconditioner without re-solving for lambda per plan.
SamplingPlan sample_wor_sequential(const RealVec& p, Index m, RngStream rng);
SamplingPlan sample_wor_sequential(const RealVec& p, Index m, RngStream rng,
                                   const RealVec& marginal_w);

// --- Preconditioners ------------------------------------------------------

enum class Preconditioner {
  bernoulli,
  regularized_bernoulli,   // d_i = sqrt(m / (n (w_i + 1e-7 m))), off by default
  with_replacement,
  heuristic,
  empirical,
};

struct PrecondParams {
  const RealVec* w = nullptr;                       // bernoulli / regularized / heuristic
  const RealVec* p = nullptr;                       // with_replacement / empirical
  const std::vector<Index>* draw_counts = nullptr;  // empirical
  std::uint64_t total_draws = 0;                    // empirical
};

// One diagonal value per stored plan row.
RealVec build_preconditioner(const SamplingPlan& plan, Preconditioner kind,
                             const PrecondParams& params);

RealVec regularized_bernoulli_preconditioner(const WeightVector& w,
                                             const std::vector<Index>& rows, Index n);

}  // namespace vds

#endif  // VDS_SAMPLING_HPP
