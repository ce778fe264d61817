// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#include "vds/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vds {

MeasurementOperator::MeasurementOperator(const UnitaryOperator& F, SamplingPlan plan,
                                         bool apply_precond)
    : F_(F), plan_(std::move(plan)), precond_(apply_precond) {
  require(plan_.n == F_.n(), Errc::invalid_input, "plan and transform dimension mismatch");
  require(plan_.indices.size() == plan_.multiplicities.size() &&
              Index(plan_.indices.size()) == plan_.precond.size(),
          Errc::invalid_input, "inconsistent plan arrays");
  require(plan_.m >= 1, Errc::invalid_input, "plan has no nominal count");
  for (Index i : plan_.indices) {
    require(i >= 0 && i < plan_.n, Errc::invalid_input, "plan index out of range");
  }
  const double base = std::sqrt(double(plan_.n) / double(plan_.m));
  // With-replacement duplicates each become their own row; merged schemes
  // already fold the duplicate count into the preconditioner.
  for (size_t r = 0; r < plan_.indices.size(); ++r) {
    const Index copies = plan_.expand_multiplicities() ? plan_.multiplicities[r] : 1;
    for (Index c = 0; c < copies; ++c) row_index_.push_back(plan_.indices[r]);
  }
  scales_.resize(Index(row_index_.size()));
  precond_expanded_.resize(Index(row_index_.size()));
  Index out = 0;
  for (size_t r = 0; r < plan_.indices.size(); ++r) {
    const Index copies = plan_.expand_multiplicities() ? plan_.multiplicities[r] : 1;
    for (Index c = 0; c < copies; ++c, ++out) {
      precond_expanded_[out] = plan_.precond[Index(r)];
      scales_[out] = base * (precond_ ? plan_.precond[Index(r)] : 1.0);
      require(scales_[out] > 0.0 && std::isfinite(scales_[out]), Errc::invalid_input,
              "nonpositive row scale");
    }
  }
}

Index MeasurementOperator::n() const { return F_.n(); }

ComplexVec MeasurementOperator::forward(const ComplexVec& x) const {
  require(x.size() == n(), Errc::invalid_input, "forward: dimension mismatch");
  const ComplexVec fx = F_.apply(x);
  ComplexVec y(rows());
  for (Index r = 0; r < y.size(); ++r) y[r] = scales_[r] * fx[row_index_[size_t(r)]];
  return y;
}

ComplexVec MeasurementOperator::forward(const RealVec& x) const {
  return forward(ComplexVec(x.cast<Complex>()));
}

ComplexVec MeasurementOperator::adjoint(const ComplexVec& y) const {
  require(y.size() == rows(), Errc::invalid_input, "adjoint: dimension mismatch");
  ComplexVec z = ComplexVec::Zero(n());
  for (Index r = 0; r < y.size(); ++r) z[row_index_[size_t(r)]] += scales_[r] * y[r];
  return F_.apply_adjoint(z);
}

ComplexVec MeasurementOperator::precondition(const ComplexVec& b) const {
  require(b.size() == rows(), Errc::invalid_input, "precondition: dimension mismatch");
  ComplexVec y(b.size());
  for (Index r = 0; r < y.size(); ++r) y[r] = precond_expanded_[r] * b[r];
  return y;
}

ComplexVec add_noise(const ComplexVec& meas, double sigma, Index m, Field field, RngStream rng) {
  require(sigma >= 0.0 && std::isfinite(sigma), Errc::invalid_input, "sigma must be nonnegative");
  require(m >= 1, Errc::invalid_input, "m must be positive");
  if (sigma == 0.0) return meas;
  CounterRng gen(rng);
  const double scale = sigma / std::sqrt(double(m));
  ComplexVec out = meas;
  for (Index i = 0; i < out.size(); ++i) {
    if (field == Field::cplx) {
      const double re = gen.next_gaussian();
      const double im = gen.next_gaussian();
      out[i] += scale * Complex(re, im);
    } else {
      out[i] += scale * gen.next_gaussian();
    }
  }
  return out;
}

RealVec add_noise(const RealVec& meas, double sigma, Index m, RngStream rng) {
  require(sigma >= 0.0 && std::isfinite(sigma), Errc::invalid_input, "sigma must be nonnegative");
  require(m >= 1, Errc::invalid_input, "m must be positive");
  if (sigma == 0.0) return meas;
  CounterRng gen(rng);
  const double scale = sigma / std::sqrt(double(m));
  RealVec out = meas;
  for (Index i = 0; i < out.size(); ++i) out[i] += scale * gen.next_gaussian();
  return out;
}

Truncation unit_truncate(const RealVec& v) {
  for (Index i = 0; i < v.size(); ++i) {
    require(v[i] >= 0.0, Errc::invalid_input, "unit truncation expects nonnegative entries");
  }
  Truncation t;
  double acc = 0.0;
  Index boundary = -1;
  for (Index i = 0; i < v.size(); ++i) {
    const double prev = acc;
    acc += v[i] * v[i];
    if (acc >= 1.0) {
      t.value = RealVec::Zero(v.size());
      t.value.head(i) = v.head(i);
      t.value[i] = std::sqrt(std::max(0.0, 1.0 - prev));
      boundary = i;
      break;
    }
  }
  if (boundary < 0) {
    t.value = v;
    t.support = v.size();
    t.degenerate = true;
    return t;
  }
  t.support = boundary + 1;
  return t;
}

namespace {

double noise_factor_impl(const std::vector<Index>& indices, const RealVec& d_sel,
                         const RealVec& alpha, Index n, Index m) {
  const Index rows = Index(indices.size());
  if (rows == 0) return 0.0;
  // Re-order so the preconditioner values decrease, ties by original index.
  std::vector<Index> order(static_cast<size_t>(rows));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (d_sel[a] != d_sel[b]) return d_sel[a] > d_sel[b];
    return indices[size_t(a)] < indices[size_t(b)];
  });
  const double base = std::sqrt(double(n) / double(m));
  RealVec v(rows), d_sorted(rows);
  for (Index r = 0; r < rows; ++r) {
    const Index src = order[size_t(r)];
    const double a = alpha[indices[size_t(src)]];
    require(a > 0.0, Errc::invalid_input, "zero coherence on a selected row");
    d_sorted[r] = d_sel[src];
    v[r] = base * d_sel[src] * a;
  }
  const Truncation t = unit_truncate(v);
  double acc = 0.0;
  for (Index r = 0; r < rows; ++r) {
    const double term = d_sorted[r] * t.value[r];
    acc += term * term;
  }
  return std::sqrt(acc);
}

}  // namespace

double noise_factor(const SamplingPlan& plan, const RealVec& alpha, const WeightVector& w) {
  require(alpha.size() == plan.n && w.w.size() == plan.n, Errc::invalid_input,
          "noise_factor: dimension mismatch");
  require(w.m == plan.m, Errc::invalid_input, "noise_factor: plan and weights disagree on m");
  RealVec d_sel(Index(plan.indices.size()));
  for (size_t r = 0; r < plan.indices.size(); ++r) {
    const double wi = w.w[plan.indices[r]];
    require(wi > 0.0, Errc::invalid_input, "zero weight on a selected row");
    d_sel[Index(r)] = std::sqrt(double(plan.m) / (double(plan.n) * wi));
  }
  return noise_factor_impl(plan.indices, d_sel, alpha, plan.n, plan.m);
}

double noise_factor_preconditioned(const SamplingPlan& plan, const RealVec& alpha) {
  require(alpha.size() == plan.n, Errc::invalid_input, "noise_factor: dimension mismatch");
  return noise_factor_impl(plan.indices, plan.precond, alpha, plan.n, plan.m);
}

}  // namespace vds
