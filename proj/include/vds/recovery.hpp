// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VDS_RECOVERY_HPP
#define VDS_RECOVERY_HPP

#include <limits>
#include <string>
#include <vector>

#include "vds/core.hpp"
#include "vds/measurement.hpp"
#include "vds/unitary.hpp"

namespace vds {

struct SparsePriorConfig {
  const UnitaryOperator* transform = nullptr;  // analysis transform; adjoint synthesizes
  Index k = 1;
  double lasso_penalty = -1.0;  // <= 0 selects the universal-threshold default
  int max_iters = 1500;
  double tol = 1e-12;
};

struct RecoveryReport {
  double rel_error = std::numeric_limits<double>::quiet_NaN();
  double abs_error = std::numeric_limits<double>::quiet_NaN();
  double sigma = std::numeric_limits<double>::quiet_NaN();
  double eps_proxy = std::numeric_limits<double>::quiet_NaN();
  double mismatch = std::numeric_limits<double>::quiet_NaN();      // |x0 - proj_Q x0|
  double noise_factor = std::numeric_limits<double>::quiet_NaN();  // filled by the caller
  Index m_realized = 0;
  std::string scheme;
  bool ls_rank_deficient = false;
  bool converged = true;
};

struct LassoResult {
  RealVec coefficients;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  double penalty = 0.0;
  std::vector<double> objective_trace;  // nonincreasing by construction
};

// Proximal-gradient LASSO with backtracking on 0.5|A P* c - y|^2 + penalty*|c|_1,
// over real synthesis coefficients c (P = analysis transform). Monotone descent.
LassoResult lasso_synthesis(const MeasurementOperator& A, const ComplexVec& y,
                            const UnitaryOperator& prior, double penalty, int max_iters,
                            double tol);

struct SparseRecovery {
  RealVec xhat;
  RealVec coefficients;           // debiased, supported on `support`
  std::vector<Index> support;     // ascending
  RecoveryReport report;
};

// Three-stage pipeline: LASSO in the synthesis coefficients, support = top-k
// coefficients by magnitude (ties to the lower index), then a debiasing least
// squares on the support. `b` holds raw measurements; the operator must be
// preconditioned and the same diagonal is applied to b internally.
SparseRecovery recover_sparse(const MeasurementOperator& Mop, const ComplexVec& b,
                              const SparsePriorConfig& cfg, const RealVec* x0 = nullptr,
                              double sigma = 0.0);

// Least-squares fit of the preconditioned measurements over the
// preconditioned image of a fixed basis; oracle recovery when the active
// subspace is known.
ComplexVec project_subspace_ls(const MeasurementOperator& Mop, const ComplexVec& b,
                               const ComplexMat& basis, bool* rank_deficient = nullptr);

struct GeometricMeanError {
  double mean = 0.0;
  double stderr_factor = 1.0;  // multiplicative band
  bool clamped = false;        // some errors clamped at 1e-15
};
GeometricMeanError geometric_mean_error(const std::vector<double>& errors);

}  // namespace vds

#endif  // VDS_RECOVERY_HPP
