// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#include "vds/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>

#include <Eigen/SVD>

#include "parallel.hpp"

namespace vds {

namespace {

std::uint64_t substream(RngStream base, std::string_view tag, Index trial) {
  return base.stream ^ fnv1a(std::string(tag) + ":" + std::to_string(trial));
}

}  // namespace

double rip_deviation(const SamplingPlan& plan, const UnitaryOperator& F,
                     const UnionOfSubspaces& prior) {
  require(F.n() == prior.n(), Errc::invalid_input, "transform/prior dimension mismatch");
  const MeasurementOperator op(F, plan, /*apply_precond=*/true);
  double dev = 0.0;
  for (const auto& basis : prior.bases()) {
    const Index cols = basis.cols();
    ComplexMat projected(op.rows(), cols);
    for (Index c = 0; c < cols; ++c) projected.col(c) = op.forward(ComplexVec(basis.col(c)));
    double smax = 0.0, smin = 0.0;
    if (op.rows() == 0) {
      smax = 0.0;
      smin = 0.0;
    } else {
      Eigen::JacobiSVD<ComplexMat> svd(projected);
      smax = svd.singularValues().maxCoeff();
      // Fewer rows than directions leaves a null direction.
      smin = (op.rows() < cols) ? 0.0 : svd.singularValues().minCoeff();
    }
    dev = std::max({dev, std::abs(smax - 1.0), std::abs(1.0 - smin)});
  }
  return dev;
}

double rip_deviation(const SamplingPlan& plan, const UnitaryOperator& F,
                     const UnionOfSubspaces& prior, const WeightVector& w) {
  require(w.w.size() == plan.n, Errc::invalid_input, "weights/plan dimension mismatch");
  SamplingPlan scaled = plan;
  PrecondParams params;
  params.w = &w.w;
  scaled.precond = build_preconditioner(scaled, Preconditioner::bernoulli, params);
  return rip_deviation(scaled, F, prior);
}

WilsonInterval wilson_interval(Index successes, Index trials) {
  require(trials >= 1 && successes >= 0 && successes <= trials, Errc::invalid_input,
          "bad Wilson interval inputs");
  const double z = 1.959963984540054;  // 95%
  const double nt = double(trials);
  const double phat = double(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (phat + z2 / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nt + z2 / (4.0 * nt * nt)) / denom;
  return {phat, std::max(0.0, center - half), std::min(1.0, center + half)};
}

RipEstimate rip_success_probability(const UnitaryOperator& F, const UnionOfSubspaces& prior,
                                    const SamplingLaw& law, Scheme scheme, Index m, Index trials,
                                    RngStream base, double threshold, int threads) {
  require(trials >= 1, Errc::invalid_input, "trials must be positive");
  RipEstimate est;
  est.trials = trials;
  est.scheme = scheme;
  est.threshold = threshold;
  if (const auto* wv = std::get_if<WeightVector>(&law)) m = wv->m;
  require(m >= 1, Errc::invalid_input, "rip estimate needs a positive draw count");

  // Sequential without-replacement plans share one marginal-weight solve.
  RealVec wor_marginals;
  if (scheme == Scheme::wor_sequential) {
    wor_marginals = heuristic_marginal_weights(std::get<RealVec>(law), m).w;
  }

  std::vector<double> deviations(size_t(trials), -1.0);  // -1 marks sampler failure
  detail::parallel_for(trials, threads, [&](Index t) {
    const RngStream rs{base.seed, substream(base, "rip", t)};
    try {
      SamplingPlan plan;
      switch (scheme) {
        case Scheme::bernoulli:
          plan = sample_bernoulli(std::get<WeightVector>(law), rs);
          break;
        case Scheme::bernoulli_conditioned:
          plan = sample_bernoulli_conditioned(std::get<WeightVector>(law), rs);
          break;
        case Scheme::with_replacement:
          plan = sample_with_replacement(std::get<RealVec>(law), m, rs);
          break;
        case Scheme::wor_rejection:
          plan = sample_wor_rejection(std::get<RealVec>(law), m, rs).plan;
          break;
        case Scheme::wor_sequential:
          plan = sample_wor_sequential(std::get<RealVec>(law), m, rs, wor_marginals);
          break;
      }
      deviations[size_t(t)] = rip_deviation(plan, F, prior);
    } catch (const Error&) {
      deviations[size_t(t)] = -1.0;
    }
  });

  Index successes = 0;
  std::vector<double> finite;
  finite.reserve(size_t(trials));
  for (double d : deviations) {
    if (d < 0.0) {
      ++est.sampler_failures;
      continue;
    }
    finite.push_back(d);
    if (d <= threshold) ++successes;
  }
  est.success_rate = double(successes) / double(trials);
  est.success_interval = wilson_interval(successes, trials);
  std::sort(finite.begin(), finite.end());
  for (double q : {0.5, 0.9, 0.99}) {
    if (!finite.empty()) {
      const auto pos = size_t(std::floor(q * double(finite.size() - 1)));
      est.deviation_quantiles[q] = finite[pos];
    }
  }
  return est;
}

// --- Toy example -----------------------------------------------------------

namespace {

void validate_toy(const ToyExampleSpec& s) {
  require(s.k >= 2, Errc::invalid_input, "toy k must be at least 2");
  require(s.k <= s.m, Errc::invalid_input, "toy requires k <= m");
  require(s.m < s.n, Errc::invalid_input, "toy requires m < n");
}

}  // namespace

RealVec toy_coherences(const ToyExampleSpec& spec) {
  validate_toy(spec);
  RealVec alpha(spec.n);
  const double rest = std::sqrt(double(spec.k - 1) / double(spec.n - 1));
  alpha.setConstant(rest);
  alpha[0] = 1.0;
  return alpha;
}

RealMat toy_subspace_basis(Index n, Index k) {
  require(k >= 2 && k <= n, Errc::invalid_input, "bad toy dimensions");
  const Index N = n - 1;
  const Index cols = k - 1;
  RealMat b = RealMat::Zero(n, cols);
  // Real Fourier columns on coordinates 2..n: constant, then cos/sin pairs.
  for (Index r = 0; r < N; ++r) b(r + 1, 0) = 1.0 / std::sqrt(double(N));
  for (Index c = 1; c < cols; ++c) {
    const Index j = (c + 1) / 2;
    const bool is_cos = (c % 2) == 1;
    for (Index r = 0; r < N; ++r) {
      const double arg = 2.0 * std::numbers::pi * double(j) * double(r) / double(N);
      b(r + 1, c) = std::sqrt(2.0 / double(N)) * (is_cos ? std::cos(arg) : std::sin(arg));
    }
  }
  return b;
}

RealMat toy_subspace_basis_poly(Index n, Index k) {
  require(k >= 2 && k <= n, Errc::invalid_input, "bad toy dimensions");
  const Index N = n - 1;
  const Index cols = k - 1;
  RealMat v(N, cols);
  for (Index r = 0; r < N; ++r) {
    const double x = double(r + 1) / double(N);
    double pw = 1.0;
    for (Index c = 0; c < cols; ++c) {
      v(r, c) = pw;
      pw *= x;
    }
  }
  const RealMat q = orthonormalize(v);
  RealMat b = RealMat::Zero(n, cols);
  b.bottomRows(N) = q;
  return b;
}

UnionOfSubspaces toy_prior(Index n, Index k, bool polynomial_basis) {
  RealMat u = polynomial_basis ? toy_subspace_basis_poly(n, k) : toy_subspace_basis(n, k);
  RealMat joint = RealMat::Zero(n, k);
  joint(0, 0) = 1.0;
  joint.rightCols(k - 1) = u;
  return UnionOfSubspaces::from_real_bases({joint});
}

bool toy_rip_conditions(const std::vector<Index>& selected, Index k) {
  bool has_first = false;
  Index rest = 0;
  for (Index i : selected) {
    if (i == 0) {
      has_first = true;
    } else {
      ++rest;
    }
  }
  return has_first && rest >= k - 1;
}

bool toy_characterization_holds(Index n, Index k) {
  require(n >= k + 1 && n <= 20, Errc::invalid_input, "exhaustive check needs k < n <= 20");
  const RealMat u = toy_subspace_basis_poly(n, k);
  RealMat joint = RealMat::Zero(n, k);
  joint(0, 0) = 1.0;
  joint.rightCols(k - 1) = u;

  // Selection patterns are injective on the prior exactly when row 1 is kept
  // and at least k-1 of the remaining rows are: any k-1 rows of the
  // polynomial basis are full rank, and dropping below that leaves a null
  // direction (deviation 1 for the unscaled selection).
  for (std::uint64_t pattern = 0; pattern < (std::uint64_t(1) << n); ++pattern) {
    std::vector<Index> sel;
    for (Index i = 0; i < n; ++i) {
      if (pattern & (std::uint64_t(1) << i)) sel.push_back(i);
    }
    const bool expectation = toy_rip_conditions(sel, k);
    bool injective;
    if (Index(sel.size()) < k) {
      injective = false;
    } else {
      RealMat rows(Index(sel.size()), k);
      for (size_t r = 0; r < sel.size(); ++r) rows.row(Index(r)) = joint.row(sel[r]);
      Eigen::JacobiSVD<RealMat> svd(rows);
      injective = svd.singularValues().minCoeff() > 1e-9;
    }
    if (injective != expectation) return false;
  }
  return true;
}

std::vector<ToyTrialFlags> toy_trial_flags(const ToyExampleSpec& spec, Index trials,
                                           RngStream base, int threads) {
  validate_toy(spec);
  require(trials >= 1, Errc::invalid_input, "trials must be positive");
  const Index n = spec.n, k = spec.k, m = spec.m;

  // Optimized toy laws in closed form.
  const double w_rest = double(m - 1) / double(n - 1);
  const double p_first = 1.0 / double(k);
  const double p_rest = double(k - 1) / (double(k) * double(n - 1));

  std::vector<ToyTrialFlags> flags(static_cast<size_t>(trials));
  detail::parallel_for(trials, threads, [&](Index t) {
    ToyTrialFlags f;
    // Bernoulli sweep: row 1 has weight one, the rest share w_rest.
    {
      CounterRng gen(RngStream{base.seed, substream(base, "toy-bern", t)});
      Index rest = 0;
      for (Index i = 1; i < n; ++i) {
        if (gen.next_double() < w_rest) ++rest;
      }
      const bool first = true;  // weight 1 rows are always kept
      f.bernoulli_miss = !first;
      f.bernoulli_undercount = (1 + rest) < k;
      f.bernoulli_ok = first && rest >= k - 1;
    }
    // Sequential without replacement; only the first-row/rest split matters,
    // so the renormalization runs on the two-mass aggregate.
    {
      CounterRng gen(RngStream{base.seed, substream(base, "toy-wor", t)});
      bool got_first = false;
      Index taken_rest = 0;
      double first_mass = p_first;
      double rest_mass = double(n - 1) * p_rest;
      for (Index r = 0; r < m; ++r) {
        const double u = gen.next_double() * (first_mass + rest_mass);
        if (u < first_mass) {
          got_first = true;
          first_mass = 0.0;
        } else {
          ++taken_rest;
          rest_mass -= p_rest;
        }
      }
      f.wor_miss = !got_first;
      f.wor_ok = got_first && taken_rest >= k - 1;
    }
    flags[size_t(t)] = f;
  });
  return flags;
}

ToyRates toy_failure_probabilities(const ToyExampleSpec& spec, Index trials, RngStream base,
                                   int threads) {
  const auto flags = toy_trial_flags(spec, trials, base, threads);
  Index wor_miss = 0, bern_miss = 0, bern_under = 0, bern_ok = 0, wor_ok = 0;
  for (const auto& f : flags) {
    wor_miss += f.wor_miss;
    bern_miss += f.bernoulli_miss;
    bern_under += f.bernoulli_undercount;
    bern_ok += f.bernoulli_ok;
    wor_ok += f.wor_ok;
  }
  ToyRates rates;
  rates.trials = trials;
  rates.wor_miss = wilson_interval(wor_miss, trials);
  rates.bernoulli_miss = wilson_interval(bern_miss, trials);
  rates.bernoulli_undercount = wilson_interval(bern_under, trials);
  rates.analytic_wor = std::pow(1.0 - 1.0 / double(spec.k), double(spec.m));
  rates.bernoulli_rip_success = wilson_interval(bern_ok, trials);
  rates.wor_rip_success = wilson_interval(wor_ok, trials);
  return rates;
}

ComplexityCurves complexity_curves(const RealVec& alpha, const std::vector<Index>& m_grid,
                                   const std::vector<double>& lambda_grid) {
  require(!m_grid.empty() || !lambda_grid.empty(), Errc::invalid_input, "empty grids");
  ComplexityCurves out;
  const double norm_sq = alpha.squaredNorm();
  for (Index m : m_grid) {
    const auto c = optimized_complexity(alpha, m);
    out.complexity_rows.push_back({double(m), c.value * c.value, norm_sq});
  }
  for (double lambda : lambda_grid) {
    const auto b = sample_complexity_bound(alpha, lambda);
    out.bound_rows.push_back(
        {lambda, b.feasible ? double(b.m_star) : std::nan(""), double(b.wr_bound)});
  }
  return out;
}

}  // namespace vds
