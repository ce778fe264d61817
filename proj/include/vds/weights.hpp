// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VDS_WEIGHTS_HPP
#define VDS_WEIGHTS_HPP

#include <vector>

#include "vds/core.hpp"

namespace vds {

// Optimized Bernoulli inclusion probabilities for a local-coherence vector.
//
// The closed form sorts the positive coherences increasingly, finds the last
// unsaturated position J of the normalizer R^2(j) = m*|alpha_[j]|^2/(j-(P-m))
// (P = number of positive entries), sets L^2 = R^2(J), and assigns
// w_i = min(m*alpha_i^2/L^2, 1). Zero-coherence rows get weight zero and do
// not participate; feasibility requires m <= P.
struct WeightVector {
  RealVec w;                      // inclusion probabilities, sum = m
  Index m = 0;                    // expected number of sampled rows
  Index unsaturated = 0;          // J: count of entries with w < 1 among positive rows
  double complexity_sq = 0.0;     // L^2(alpha, m)
  std::vector<Index> sort_perm;   // ascending-alpha order (stable), sorted pos -> original index

  double complexity() const;      // L(alpha, m)
};

WeightVector optimized_bernoulli_weights(const RealVec& alpha, Index m);

// L(alpha, m) and J without materializing the weights.
struct ComplexityValue {
  double value = 0.0;   // L
  Index unsaturated = 0;
};
ComplexityValue optimized_complexity(const RealVec& alpha, Index m);

// With-replacement optimized probability vector: p_i proportional to alpha_i^2.
RealVec with_replacement_weights(const RealVec& alpha);

// Marginal inclusion probabilities w_i = 1 - exp(-lambda p_i) with lambda
// solved so that sum w = m. Requires m < (number of positive p entries),
// otherwise no finite lambda exists.
struct HeuristicWeights {
  RealVec w;
  double lambda = 0.0;
};
HeuristicWeights heuristic_marginal_weights(const RealVec& p, Index m);

// Complexity functionals of a feasible weight vector. Saturated entries
// (w = 1) contribute nothing; w = 0 on the support of alpha is rejected.
double tight_bernoulli_complexity(const RealVec& alpha, const RealVec& w, Index m);   // gamma
double simple_bernoulli_complexity(const RealVec& alpha, const RealVec& w, Index m);  // eta

// Smallest m with m / L^2(alpha, m) >= lambda_factor, found by increasing
// scan (the scan re-validates monotonicity of the ratio as a side effect).
struct SampleComplexityBound {
  double lambda_factor = 0.0;
  bool feasible = false;
  Index m_star = 0;
  double complexity_sq_at_m_star = 0.0;
  Index wr_bound = 0;   // ceil(lambda_factor * |alpha|_2^2), the with-replacement analogue
};
SampleComplexityBound sample_complexity_bound(const RealVec& alpha, double lambda_factor);

}  // namespace vds

#endif  // VDS_WEIGHTS_HPP
