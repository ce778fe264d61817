// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#include "vds/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vds {

double WeightVector::complexity() const { return std::sqrt(complexity_sq); }

namespace {

void validate_alpha(const RealVec& alpha) {
  require(alpha.size() >= 1, Errc::invalid_input, "empty coherence vector");
  double maxv = 0.0;
  for (Index i = 0; i < alpha.size(); ++i) {
    require(alpha[i] >= 0.0 && std::isfinite(alpha[i]), Errc::invalid_input,
            "coherences must be finite and nonnegative");
    maxv = std::max(maxv, alpha[i]);
  }
  require(maxv > 0.0, Errc::invalid_input, "coherence vector has no positive entry");
}

// Stable ascending argsort of alpha (ties by original index), zeros included
// and sorted to the front.
std::vector<Index> ascending_perm(const RealVec& alpha) {
  std::vector<Index> perm(size_t(alpha.size()));
  std::iota(perm.begin(), perm.end(), Index(0));
  std::stable_sort(perm.begin(), perm.end(),
                   [&](Index a, Index b) { return alpha[a] < alpha[b]; });
  return perm;
}

struct SortedPositive {
  std::vector<Index> perm;   // full ascending order
  Index zeros = 0;           // count of zero entries (prefix of perm)
  std::vector<double> prefix_sq;  // prefix_sq[j] = sum of first j sorted positive squares
};

SortedPositive sort_positive(const RealVec& alpha) {
  SortedPositive s;
  s.perm = ascending_perm(alpha);
  while (s.zeros < Index(s.perm.size()) && alpha[s.perm[size_t(s.zeros)]] == 0.0) ++s.zeros;
  const Index P = Index(s.perm.size()) - s.zeros;
  s.prefix_sq.resize(size_t(P) + 1, 0.0);
  for (Index j = 0; j < P; ++j) {
    const double a = alpha[s.perm[size_t(s.zeros + j)]];
    s.prefix_sq[size_t(j) + 1] = s.prefix_sq[size_t(j)] + a * a;
  }
  return s;
}

// L^2 and J on the sorted positive coherences (1-indexed j over [1, P]).
// R^2(j) = m * prefix_sq[j] / (j - (P - m)); J is the largest j with
// m * a_j^2 < R^2(j). The scan starts at j = P and is guaranteed to stop at
// or before j = P - m + 1.
struct Core {
  Index J = 0;
  double Lsq = 0.0;
};

Core solve_core(const RealVec& alpha, const SortedPositive& s, Index m) {
  const Index P = Index(s.perm.size()) - s.zeros;
  for (Index j = P; j >= P - m + 1; --j) {
    const double aj = alpha[s.perm[size_t(s.zeros + j - 1)]];
    const double rsq = m * s.prefix_sq[size_t(j)] / double(j - (P - m));
    if (m * aj * aj < rsq) return {j, rsq};
  }
  fail(Errc::invalid_input, "no unsaturated index found (unreachable for m < P)");
}

}  // namespace

WeightVector optimized_bernoulli_weights(const RealVec& alpha, Index m) {
  validate_alpha(alpha);
  require(m >= 1, Errc::invalid_input, "m must be positive");
  auto s = sort_positive(alpha);
  const Index P = Index(s.perm.size()) - s.zeros;
  require(m <= P, Errc::insufficient_measurements,
          "m exceeds the number of positive-coherence rows");

  WeightVector out;
  out.m = m;
  out.sort_perm = s.perm;
  out.w = RealVec::Zero(alpha.size());

  if (m == P) {
    // Degenerate full draw: every positive row is kept deterministically.
    // The paper leaves L undefined here; m*min(alpha_pos)^2 is the limit of
    // R^2 at the last unsaturated entry and keeps eta continuous.
    const double amin = alpha[s.perm[size_t(s.zeros)]];
    out.unsaturated = 0;
    out.complexity_sq = double(m) * amin * amin;
    for (Index i = 0; i < alpha.size(); ++i) out.w[i] = alpha[i] > 0.0 ? 1.0 : 0.0;
    return out;
  }

  const Core core = solve_core(alpha, s, m);
  out.unsaturated = core.J;
  out.complexity_sq = core.Lsq;
  for (Index i = 0; i < alpha.size(); ++i) {
    out.w[i] = std::min(double(m) * alpha[i] * alpha[i] / core.Lsq, 1.0);
  }
  return out;
}

ComplexityValue optimized_complexity(const RealVec& alpha, Index m) {
  validate_alpha(alpha);
  require(m >= 1, Errc::invalid_input, "m must be positive");
  auto s = sort_positive(alpha);
  const Index P = Index(s.perm.size()) - s.zeros;
  require(m <= P, Errc::insufficient_measurements,
          "m exceeds the number of positive-coherence rows");
  if (m == P) {
    const double amin = alpha[s.perm[size_t(s.zeros)]];
    return {std::sqrt(double(m)) * amin, 0};
  }
  const Core core = solve_core(alpha, s, m);
  return {std::sqrt(core.Lsq), core.J};
}

RealVec with_replacement_weights(const RealVec& alpha) {
  validate_alpha(alpha);
  const double norm_sq = alpha.squaredNorm();
  return (alpha.array().square() / norm_sq).matrix();
}

HeuristicWeights heuristic_marginal_weights(const RealVec& p, Index m) {
  require(p.size() >= 1, Errc::invalid_input, "empty probability vector");
  Index positive = 0;
  for (Index i = 0; i < p.size(); ++i) {
    require(p[i] >= 0.0 && std::isfinite(p[i]), Errc::invalid_input,
            "probabilities must be finite and nonnegative");
    if (p[i] > 0.0) ++positive;
  }
  require(std::abs(p.sum() - 1.0) <= 1e-9, Errc::invalid_input, "probabilities must sum to one");
  require(m >= 1, Errc::invalid_input, "m must be positive");
  // Each w_i stays strictly below 1 on the support, so sum w < #positive.
  require(m < positive, Errc::infeasible,
          "no finite lambda: m must be below the number of positive probabilities");

  const auto total = [&](double lambda) {
    double t = 0.0;
    for (Index i = 0; i < p.size(); ++i) {
      if (p[i] > 0.0) t += -std::expm1(-lambda * p[i]);
    }
    return t;
  };

  double lo = 0.0, hi = 1.0;
  while (total(hi) < double(m)) {
    hi *= 2.0;
    require(hi < 1e150, Errc::infeasible, "lambda bracket diverged");
  }
  // The derivative of the total is at most sum p = 1, so |total - m| inherits
  // the bracket width. Large roots bottom out at floating-point resolution
  // before the absolute target; the derivative is tiny there, so the sum
  // constraint is still met far tighter than required.
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (total(mid) < double(m) ? lo : hi) = mid;
  }
  const double lambda = 0.5 * (lo + hi);
  require(std::abs(total(lambda) - double(m)) <= 1e-9, Errc::infeasible,
          "lambda solve did not reach the sum constraint");

  HeuristicWeights out;
  out.lambda = lambda;
  out.w = RealVec::Zero(p.size());
  for (Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) out.w[i] = -std::expm1(-lambda * p[i]);
  }
  return out;
}

namespace {

void validate_feasible(const RealVec& alpha, const RealVec& w, Index m) {
  require(alpha.size() == w.size(), Errc::invalid_input, "alpha/w length mismatch");
  require(m >= 1, Errc::invalid_input, "m must be positive");
  for (Index i = 0; i < alpha.size(); ++i) {
    require(w[i] >= 0.0 && w[i] <= 1.0 + 1e-12, Errc::invalid_input, "weights must lie in [0,1]");
    if (alpha[i] > 0.0) {
      require(w[i] > 0.0, Errc::invalid_input,
              "zero weight on a positive-coherence row (formula undefined)");
    }
  }
  require(std::abs(w.sum() - double(m)) <= 1e-6, Errc::invalid_input, "weights must sum to m");
}

}  // namespace

double tight_bernoulli_complexity(const RealVec& alpha, const RealVec& w, Index m) {
  validate_feasible(alpha, w, m);
  double best = 0.0;
  for (Index i = 0; i < alpha.size(); ++i) {
    if (alpha[i] <= 0.0 || w[i] >= 1.0) continue;
    const double ratio = std::sqrt((1.0 - w[i]) / w[i]);
    best = std::max(best, alpha[i] * std::sqrt(double(m)) * std::max(ratio, 1.0));
  }
  return best;
}

double simple_bernoulli_complexity(const RealVec& alpha, const RealVec& w, Index m) {
  validate_feasible(alpha, w, m);
  double best = 0.0;
  for (Index i = 0; i < alpha.size(); ++i) {
    if (alpha[i] <= 0.0 || w[i] >= 1.0) continue;
    best = std::max(best, alpha[i] * std::sqrt(double(m) / w[i]));
  }
  return best;
}

SampleComplexityBound sample_complexity_bound(const RealVec& alpha, double lambda_factor) {
  validate_alpha(alpha);
  require(lambda_factor > 0.0 && std::isfinite(lambda_factor), Errc::invalid_input,
          "lambda factor must be positive");
  SampleComplexityBound out;
  out.lambda_factor = lambda_factor;
  out.wr_bound = Index(std::ceil(lambda_factor * alpha.squaredNorm()));

  Index positive = 0;
  for (Index i = 0; i < alpha.size(); ++i) positive += alpha[i] > 0.0;

  // Linear scan; the ratio m / L^2 is nondecreasing in m, which the scan
  // revalidates for free.
  double prev_ratio = -1.0;
  for (Index m = 1; m <= positive; ++m) {
    const double l = optimized_complexity(alpha, m).value;
    const double ratio = double(m) / (l * l);
    require(ratio >= prev_ratio - 1e-9, Errc::invalid_input,
            "m / L^2 failed to be nondecreasing (numerical breakdown)");
    prev_ratio = ratio;
    if (ratio >= lambda_factor) {
      out.feasible = true;
      out.m_star = m;
      out.complexity_sq_at_m_star = l * l;
      return out;
    }
  }
  return out;  // infeasible
}

}  // namespace vds
