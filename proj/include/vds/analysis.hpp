// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VDS_ANALYSIS_HPP
#define VDS_ANALYSIS_HPP

#include <array>
#include <map>
#include <variant>
#include <vector>

#include "vds/core.hpp"
#include "vds/measurement.hpp"
#include "vds/sampling.hpp"
#include "vds/subspaces.hpp"
#include "vds/unitary.hpp"
#include "vds/weights.hpp"

namespace vds {

// Worst deviation of the preconditioned subsampled matrix from an isometry
// over the prior cone: max over subspaces U of
// max(sigma_max(A B_U) - 1, 1 - sigma_min(A B_U)), computed exactly from
// singular values of the M projected matrices.
double rip_deviation(const SamplingPlan& plan, const UnitaryOperator& F,
                     const UnionOfSubspaces& prior);
double rip_deviation(const SamplingPlan& plan, const UnitaryOperator& F,
                     const UnionOfSubspaces& prior, const WeightVector& w);

inline constexpr double kRipThreshold = 1.0 / 3.0;

struct WilsonInterval {
  double rate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};
WilsonInterval wilson_interval(Index successes, Index trials);

struct RipEstimate {
  Index trials = 0;
  double success_rate = 0.0;        // fraction with deviation <= threshold
  WilsonInterval success_interval;
  Index sampler_failures = 0;       // counted as RIP failures, tallied apart
  std::map<double, double> deviation_quantiles;
  Scheme scheme = Scheme::bernoulli;
  double threshold = kRipThreshold;
};

using SamplingLaw = std::variant<WeightVector, RealVec>;  // weights or probability vector

// `m` is the draw count for probability-vector schemes; weight-based schemes
// take it from the WeightVector and ignore the argument.
RipEstimate rip_success_probability(const UnitaryOperator& F, const UnionOfSubspaces& prior,
                                    const SamplingLaw& law, Scheme scheme, Index m, Index trials,
                                    RngStream base, double threshold = kRipThreshold,
                                    int threads = 1);

// --- Toy construction -------------------------------------------------------
//
// Prior {e_1} union a maximally incoherent (k-1)-dimensional subspace on
// coordinates 2..n, measured with the identity. Selecting row 1 and at least
// k-1 rows of {2..n} is exactly what makes the selection injective on the
// prior; missing either condition maps some unit prior direction to zero.

struct ToyExampleSpec {
  Index n = 0;
  Index k = 0;
  Index m = 0;
};

// (1, sqrt((k-1)/(n-1)), ..., sqrt((k-1)/(n-1)))
RealVec toy_coherences(const ToyExampleSpec& spec);

// Real Fourier basis of the coordinate subspace {2..n}, first k-1 columns,
// padded with a zero first row. Rows have equal norms whenever k-1 is odd
// (constant column plus complete cos/sin pairs), matching the stated
// coherence profile.
RealMat toy_subspace_basis(Index n, Index k);
// Orthonormalized polynomial (Vandermonde) variant: every set of k-1 rows is
// full rank, which the exhaustive injectivity characterization requires.
RealMat toy_subspace_basis_poly(Index n, Index k);

// Single k-dimensional subspace span(e_1) + U as a union-of-subspaces prior.
UnionOfSubspaces toy_prior(Index n, Index k, bool polynomial_basis = false);

// Selection counts row 1 and at least k-1 distinct rows of {2..n}.
bool toy_rip_conditions(const std::vector<Index>& selected, Index k);

// Exhaustively verifies, over every selection pattern of [n], that the
// selection is injective on the toy prior iff toy_rip_conditions holds.
bool toy_characterization_holds(Index n, Index k);

struct ToyTrialFlags {
  bool wor_miss = false;
  bool bernoulli_miss = false;
  bool bernoulli_undercount = false;
  bool bernoulli_ok = false;  // structural conditions satisfied
  bool wor_ok = false;
};
std::vector<ToyTrialFlags> toy_trial_flags(const ToyExampleSpec& spec, Index trials,
                                           RngStream base, int threads = 1);

struct ToyRates {
  Index trials = 0;
  WilsonInterval wor_miss;                 // row 1 absent from the m distinct draws
  WilsonInterval bernoulli_miss;           // row 1 absent from the Bernoulli draw
  WilsonInterval bernoulli_undercount;     // realized count below k
  double analytic_wor = 0.0;               // (1 - 1/k)^m
  WilsonInterval bernoulli_rip_success;    // structural conditions satisfied
  WilsonInterval wor_rip_success;
};
ToyRates toy_failure_probabilities(const ToyExampleSpec& spec, Index trials, RngStream base,
                                   int threads = 1);

// Fig.-1-style tables: (m, L^2(alpha, m), |alpha|^2) rows and
// (lambda, m_star_bernoulli, m_star_wr) rows.
struct ComplexityCurves {
  std::vector<std::array<double, 3>> complexity_rows;
  std::vector<std::array<double, 3>> bound_rows;
};
ComplexityCurves complexity_curves(const RealVec& alpha, const std::vector<Index>& m_grid,
                                   const std::vector<double>& lambda_grid);

}  // namespace vds

#endif  // VDS_ANALYSIS_HPP
