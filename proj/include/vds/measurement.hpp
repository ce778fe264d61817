// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VDS_MEASUREMENT_HPP
#define VDS_MEASUREMENT_HPP

#include "vds/core.hpp"
#include "vds/rng.hpp"
#include "vds/sampling.hpp"
#include "vds/unitary.hpp"

namespace vds {

// Subsampled unitary measurement map. Without preconditioning this is the
// sampling matrix times F (each kept row scaled by sqrt(n/m)); with
// preconditioning each row additionally carries its plan preconditioner
// value, realizing the preconditioned matrix as row-scaled F.
class MeasurementOperator {
 public:
  MeasurementOperator(const UnitaryOperator& F, SamplingPlan plan, bool apply_precond);

  Index rows() const { return Index(row_index_.size()); }
  Index n() const;
  bool preconditioned() const { return precond_; }
  const SamplingPlan& plan() const { return plan_; }
  const UnitaryOperator& transform() const { return F_; }
  // Per-row scale: sqrt(n/m) times the preconditioner value when enabled.
  const RealVec& row_scales() const { return scales_; }
  const std::vector<Index>& row_indices() const { return row_index_; }

  ComplexVec forward(const ComplexVec& x) const;
  ComplexVec forward(const RealVec& x) const;
  ComplexVec adjoint(const ComplexVec& y) const;

  // Applies the plan preconditioner diagonal to raw measurements b.
  ComplexVec precondition(const ComplexVec& b) const;

 private:
  UnitaryOperator F_;  // shared-pimpl handle, safe to copy from temporaries
  SamplingPlan plan_;
  bool precond_;
  std::vector<Index> row_index_;  // expanded with multiplicities where they expand
  RealVec scales_;
  RealVec precond_expanded_;
};

// Additive Gaussian noise sigma*g/sqrt(m); complex noise has independent
// standard-normal real and imaginary parts per entry.
ComplexVec add_noise(const ComplexVec& meas, double sigma, Index m, Field field, RngStream rng);
RealVec add_noise(const RealVec& meas, double sigma, Index m, RngStream rng);

// Unit truncation: copy entries until the running Euclidean norm reaches one,
// adjust the boundary entry so the output lands exactly on the sphere, zero
// the rest. Inputs with norm below one pass through with a degenerate flag.
struct Truncation {
  RealVec value;
  Index support = 0;        // index I of the boundary entry (1-based count)
  bool degenerate = false;  // |v| < 1, value = v unchanged
};
Truncation unit_truncate(const RealVec& v);

// |D~ T(S D alpha)|_2 for a realized plan, with d_i = sqrt(m/(n w_i)) and the
// kept rows re-ordered so the preconditioner values decrease (ties broken by
// original index) before truncation.
double noise_factor(const SamplingPlan& plan, const RealVec& alpha, const WeightVector& w);
// Same quantity driven by the plan's stored preconditioner values.
double noise_factor_preconditioned(const SamplingPlan& plan, const RealVec& alpha);

}  // namespace vds

#endif  // VDS_MEASUREMENT_HPP
