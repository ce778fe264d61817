// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0
//
// Shared test fixtures and independent oracles. Everything here must stay
// implementation-independent of the code paths it checks.

#ifndef VDS_TESTS_SUPPORT_HPP
#define VDS_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "vds/core.hpp"
#include "vds/measurement.hpp"
#include "vds/rng.hpp"
#include "vds/subspaces.hpp"
#include "vds/unitary.hpp"

namespace vds::testing {

// Reference computation of the optimized Bernoulli weights, transliterated
// from the published pseudocode: positive entries only, ascending sort,
// descending scan for the last unsaturated index, per-index re-summation.
struct ReferenceWeights {
  RealVec w;
  Index J0 = 0;      // 0-based index of the last unsaturated sorted entry
  double Lsq = 0.0;  // 0.0 in the m == n branch, per the reference
};

inline ReferenceWeights appendix_reference_weights(const RealVec& loc_co, Index m) {
  std::vector<double> pos;
  for (Index i = 0; i < loc_co.size(); ++i) {
    if (loc_co[i] > 0.0) pos.push_back(loc_co[i]);
  }
  const Index n = Index(pos.size());
  if (m > n) throw std::runtime_error("Cannot sample enough measurements.");
  ReferenceWeights out;
  if (m == n) {
    out.w = RealVec::Zero(loc_co.size());
    for (Index i = 0; i < loc_co.size(); ++i) out.w[i] = loc_co[i] > 0.0 ? 1.0 : 0.0;
    out.J0 = 0;
    out.Lsq = 0.0;
    return out;
  }
  std::sort(pos.begin(), pos.end());
  const auto lsqrd = [&](Index j) {
    double acc = 0.0;
    for (Index i = 0; i <= j; ++i) acc += pos[size_t(i)] * pos[size_t(i)];
    return double(m) * acc / double(j - (n - m - 1));
  };
  Index J = -1;
  for (Index j = n - 1; j > n - m - 1; --j) {
    if (double(m) * pos[size_t(j)] * pos[size_t(j)] < lsqrd(j)) {
      J = j;
      break;
    }
  }
  if (J < 0) throw std::runtime_error("No valid J found (should never happen).");
  out.J0 = J;
  out.Lsq = lsqrd(J);
  out.w = RealVec(loc_co.size());
  for (Index i = 0; i < loc_co.size(); ++i) {
    out.w[i] = std::clamp(double(m) * loc_co[i] * loc_co[i] / out.Lsq, 0.0, 1.0);
  }
  return out;
}

// Monte-Carlo estimate of sup over unit vectors of the subspace of
// | |A (B u)| - 1 |, the quantity rip_deviation computes via singular values.
inline double mc_subspace_sup(const MeasurementOperator& op, const ComplexMat& basis,
                              Index directions, CounterRng& rng) {
  const Index l = basis.cols();
  double best = 0.0;
  ComplexVec u(l);
  for (Index d = 0; d < directions; ++d) {
    for (Index i = 0; i < l; ++i) u[i] = Complex(rng.next_gaussian(), 0.0);
    u /= u.norm();
    const double nrm = op.forward(ComplexVec(basis * u)).norm();
    best = std::max(best, std::abs(nrm - 1.0));
  }
  return best;
}

inline RealMat random_orthonormal(Index n, Index cols, CounterRng& rng) {
  RealMat g(n, cols);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = rng.next_gaussian();
  return orthonormalize(g);
}

inline RealMat random_real_unitary(Index n, CounterRng& rng) {
  return random_orthonormal(n, n, rng);
}

inline double chi_square_pvalue(double statistic, int dof) {
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

// Feasible weight vector for complexity functionals (not necessarily the
// optimized one): proportional scaling with iterative clipping at 1.
inline RealVec clipped_proportional_weights(const RealVec& base, Index m) {
  RealVec w = RealVec::Zero(base.size());
  std::vector<Index> active;
  for (Index i = 0; i < base.size(); ++i) {
    if (base[i] > 0.0) active.push_back(i);
  }
  double budget = double(m);
  while (true) {
    double mass = 0.0;
    for (Index i : active) mass += base[i];
    bool clipped = false;
    for (auto it = active.begin(); it != active.end();) {
      const double cand = base[*it] / mass * budget;
      if (cand >= 1.0) {
        w[*it] = 1.0;
        budget -= 1.0;
        it = active.erase(it);
        clipped = true;
      } else {
        ++it;
      }
    }
    if (!clipped) {
      for (Index i : active) w[i] = base[i] / mass * budget;
      break;
    }
  }
  return w;
}

}  // namespace vds::testing

#endif  // VDS_TESTS_SUPPORT_HPP
