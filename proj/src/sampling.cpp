// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#include "vds/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace vds {

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::bernoulli: return "bernoulli";
    case Scheme::bernoulli_conditioned: return "bernoulli-cond";
    case Scheme::with_replacement: return "wr";
    case Scheme::wor_rejection: return "wor-reject";
    case Scheme::wor_sequential: return "wor-seq";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "bernoulli") return Scheme::bernoulli;
  if (name == "bernoulli-cond") return Scheme::bernoulli_conditioned;
  if (name == "wr") return Scheme::with_replacement;
  if (name == "wor-reject") return Scheme::wor_rejection;
  if (name == "wor-seq") return Scheme::wor_sequential;
  fail(Errc::invalid_input, "unknown scheme: " + name);
}

Index SamplingPlan::rows() const {
  if (!expand_multiplicities()) return Index(indices.size());
  Index r = 0;
  for (Index c : multiplicities) r += c;
  return r;
}

namespace {

void validate_weights(const WeightVector& w) {
  require(w.w.size() >= 1, Errc::invalid_input, "empty weight vector");
  require(w.m >= 1, Errc::invalid_input, "weight vector has no expected count");
  for (Index i = 0; i < w.w.size(); ++i) {
    require(w.w[i] >= 0.0 && w.w[i] <= 1.0, Errc::invalid_input, "weights must lie in [0,1]");
  }
  require(std::abs(w.w.sum() - double(w.m)) <= 1e-6, Errc::invalid_input,
          "weights must sum to m");
}

void validate_probabilities(const RealVec& p) {
  require(p.size() >= 1, Errc::invalid_input, "empty probability vector");
  for (Index i = 0; i < p.size(); ++i) {
    require(p[i] >= 0.0 && std::isfinite(p[i]), Errc::invalid_input,
            "probabilities must be finite and nonnegative");
  }
  require(std::abs(p.sum() - 1.0) <= 1e-9, Errc::invalid_input, "probabilities must sum to one");
}

double bernoulli_d(double m, double n, double w) { return std::sqrt(m / (n * w)); }

// Fills indices selected by one Bernoulli sweep; counters are offset so that
// redraw attempts consume disjoint counter ranges.
std::vector<Index> bernoulli_sweep(const WeightVector& w, const CounterRng& rng,
                                   std::uint64_t attempt) {
  std::vector<Index> sel;
  const Index n = w.w.size();
  for (Index i = 0; i < n; ++i) {
    const double u = rng.double_at(attempt * std::uint64_t(n) + std::uint64_t(i));
    if (u < w.w[i]) sel.push_back(i);
  }
  return sel;
}

SamplingPlan finish_bernoulli(const WeightVector& w, std::vector<Index> sel, Scheme scheme,
                              RngStream rng, Index attempts) {
  SamplingPlan plan;
  plan.scheme = scheme;
  plan.n = w.w.size();
  plan.m = w.m;
  plan.rng = rng;
  plan.attempts = attempts;
  plan.indices = std::move(sel);
  plan.multiplicities.assign(plan.indices.size(), 1);
  plan.precond.resize(Index(plan.indices.size()));
  for (size_t r = 0; r < plan.indices.size(); ++r) {
    plan.precond[Index(r)] = bernoulli_d(double(w.m), double(plan.n), w.w[plan.indices[r]]);
  }
  return plan;
}

}  // namespace

SamplingPlan sample_bernoulli(const WeightVector& w, RngStream rng) {
  validate_weights(w);
  CounterRng gen(rng);
  return finish_bernoulli(w, bernoulli_sweep(w, gen, 0), Scheme::bernoulli, rng, 1);
}

SamplingPlan sample_bernoulli_conditioned(const WeightVector& w, RngStream rng,
                                          Index max_attempts) {
  validate_weights(w);
  require(max_attempts >= 1, Errc::invalid_input, "max_attempts must be positive");
  CounterRng gen(rng);
  for (Index attempt = 0; attempt < max_attempts; ++attempt) {
    auto sel = bernoulli_sweep(w, gen, std::uint64_t(attempt));
    if (Index(sel.size()) == w.m) {
      return finish_bernoulli(w, std::move(sel), Scheme::bernoulli_conditioned, rng, attempt + 1);
    }
  }
  fail(Errc::resource_exhausted,
       "conditioned Bernoulli did not hit count m in " + std::to_string(max_attempts) +
           " attempts");
}

namespace {

// Inverse-CDF draw from the prefix sums of p; one uniform per draw.
Index draw_index(const std::vector<double>& cdf, double u) {
  const double target = u * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
  if (it == cdf.end()) --it;
  return Index(it - cdf.begin());
}

std::vector<double> prefix_cdf(const RealVec& p) {
  std::vector<double> cdf(size_t(p.size()));
  double acc = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    acc += p[i];
    cdf[size_t(i)] = acc;
  }
  return cdf;
}

}  // namespace

SamplingPlan sample_with_replacement(const RealVec& p, Index m, RngStream rng) {
  validate_probabilities(p);
  require(m >= 1, Errc::invalid_input, "m must be positive");
  const auto cdf = prefix_cdf(p);
  CounterRng gen(rng);

  SamplingPlan plan;
  plan.scheme = Scheme::with_replacement;
  plan.n = p.size();
  plan.m = m;
  plan.rng = rng;
  std::unordered_map<Index, size_t> seen;
  for (Index t = 0; t < m; ++t) {
    const Index i = draw_index(cdf, gen.next_double());
    auto it = seen.find(i);
    if (it == seen.end()) {
      seen.emplace(i, plan.indices.size());
      plan.indices.push_back(i);
      plan.multiplicities.push_back(1);
    } else {
      ++plan.multiplicities[it->second];
    }
  }
  plan.precond.resize(Index(plan.indices.size()));
  for (size_t r = 0; r < plan.indices.size(); ++r) {
    plan.precond[Index(r)] = 1.0 / std::sqrt(double(plan.n) * p[plan.indices[r]]);
  }
  return plan;
}

WorRejectionPlan sample_wor_rejection(const RealVec& p, Index m, RngStream rng,
                                      double attempt_cap) {
  validate_probabilities(p);
  require(m >= 1, Errc::invalid_input, "m must be positive");
  Index positive = 0;
  for (Index i = 0; i < p.size(); ++i) positive += p[i] > 0.0;
  require(m <= positive, Errc::invalid_input,
          "fewer positive-probability rows than requested draws");

  const auto cdf = prefix_cdf(p);
  CounterRng gen(rng);

  WorRejectionPlan out;
  out.plan.scheme = Scheme::wor_rejection;
  out.plan.n = p.size();
  out.plan.m = m;
  out.plan.rng = rng;

  std::unordered_map<Index, size_t> pos;  // accepted index -> slot
  double selected_mass = 0.0;
  double estimated_attempts = 0.0;
  while (Index(out.plan.indices.size()) < m) {
    // Expected draws until the next novel index; the run aborts when the
    // running estimate crosses the cap, mirroring the 1e7 stopping rule.
    const double q = selected_mass;
    estimated_attempts += (q >= 1.0 - 1e-15) ? attempt_cap + 1.0 : 1.0 / (1.0 - q);
    if (estimated_attempts > attempt_cap) {
      fail(Errc::resource_exhausted,
           "estimated rejection attempts exceeded cap after " +
               std::to_string(out.total_draws) + " draws and " +
               std::to_string(out.plan.indices.size()) + " acceptances");
    }
    while (true) {
      const Index i = draw_index(cdf, gen.next_double());
      ++out.total_draws;
      auto it = pos.find(i);
      if (it == pos.end()) {
        pos.emplace(i, out.plan.indices.size());
        out.plan.indices.push_back(i);
        out.draw_counts.push_back(1);
        selected_mass += p[i];
        break;
      }
      ++out.draw_counts[it->second];
    }
  }
  out.plan.multiplicities = out.draw_counts;
  PrecondParams params;
  params.p = &p;
  params.draw_counts = &out.draw_counts;
  params.total_draws = out.total_draws;
  out.plan.precond = build_preconditioner(out.plan, Preconditioner::empirical, params);
  return out;
}

SamplingPlan sample_wor_sequential(const RealVec& p, Index m, RngStream rng,
                                   const RealVec& marginal_w) {
  validate_probabilities(p);
  require(m >= 1, Errc::invalid_input, "m must be positive");
  require(marginal_w.size() == p.size(), Errc::invalid_input, "marginal weight length mismatch");
  Index positive = 0;
  for (Index i = 0; i < p.size(); ++i) positive += p[i] > 0.0;
  require(m <= positive, Errc::invalid_input,
          "fewer positive-probability rows than requested draws");

  CounterRng gen(rng);
  std::vector<double> remaining(size_t(p.size()));
  for (Index i = 0; i < p.size(); ++i) remaining[size_t(i)] = p[i];
  double total = p.sum();

  SamplingPlan plan;
  plan.scheme = Scheme::wor_sequential;
  plan.n = p.size();
  plan.m = m;
  plan.rng = rng;
  for (Index r = 0; r < m; ++r) {
    const double target = gen.next_double() * total;
    double acc = 0.0;
    Index chosen = -1;
    for (Index i = 0; i < p.size(); ++i) {
      acc += remaining[size_t(i)];
      if (acc > target && remaining[size_t(i)] > 0.0) {
        chosen = i;
        break;
      }
    }
    if (chosen < 0) {  // numerical tail: take the last positive entry
      for (Index i = p.size() - 1; i >= 0; --i) {
        if (remaining[size_t(i)] > 0.0) {
          chosen = i;
          break;
        }
      }
    }
    plan.indices.push_back(chosen);
    total -= remaining[size_t(chosen)];
    remaining[size_t(chosen)] = 0.0;
  }
  plan.multiplicities.assign(plan.indices.size(), 1);
  plan.precond.resize(Index(plan.indices.size()));
  for (size_t r = 0; r < plan.indices.size(); ++r) {
    plan.precond[Index(r)] = bernoulli_d(double(m), double(plan.n), marginal_w[plan.indices[r]]);
  }
  return plan;
}

SamplingPlan sample_wor_sequential(const RealVec& p, Index m, RngStream rng) {
  Index positive = 0;
  for (Index i = 0; i < p.size(); ++i) positive += p[i] > 0.0;
  if (m == positive) {
    // Every positive row is drawn with certainty; the marginal weights are
    // exactly one and the heuristic fit has no finite lambda.
    RealVec w = RealVec::Zero(p.size());
    for (Index i = 0; i < p.size(); ++i) w[i] = p[i] > 0.0 ? 1.0 : 0.0;
    return sample_wor_sequential(p, m, rng, w);
  }
  return sample_wor_sequential(p, m, rng, heuristic_marginal_weights(p, m).w);
}

RealVec build_preconditioner(const SamplingPlan& plan, Preconditioner kind,
                             const PrecondParams& params) {
  const Index rows = Index(plan.indices.size());
  RealVec d(rows);
  switch (kind) {
    case Preconditioner::bernoulli:
    case Preconditioner::heuristic: {
      require(params.w != nullptr, Errc::invalid_input, "preconditioner needs weights");
      require(params.w->size() == plan.n, Errc::invalid_input, "weight length mismatch");
      for (Index r = 0; r < rows; ++r) {
        const double wi = (*params.w)[plan.indices[size_t(r)]];
        require(wi > 0.0, Errc::invalid_input, "zero weight on a selected row");
        d[r] = bernoulli_d(double(plan.m), double(plan.n), wi);
      }
      return d;
    }
    case Preconditioner::regularized_bernoulli: {
      require(params.w != nullptr, Errc::invalid_input, "preconditioner needs weights");
      require(params.w->size() == plan.n, Errc::invalid_input, "weight length mismatch");
      for (Index r = 0; r < rows; ++r) {
        const double wi = (*params.w)[plan.indices[size_t(r)]];
        d[r] = std::sqrt(double(plan.m) /
                         (double(plan.n) * (wi + 1e-7 * double(plan.m))));
      }
      return d;
    }
    case Preconditioner::with_replacement: {
      require(params.p != nullptr, Errc::invalid_input, "preconditioner needs probabilities");
      require(params.p->size() == plan.n, Errc::invalid_input, "probability length mismatch");
      for (Index r = 0; r < rows; ++r) {
        const double pi = (*params.p)[plan.indices[size_t(r)]];
        require(pi > 0.0, Errc::invalid_input, "zero probability on a selected row");
        d[r] = 1.0 / std::sqrt(double(plan.n) * pi);
      }
      return d;
    }
    case Preconditioner::empirical: {
      require(params.p != nullptr, Errc::invalid_input, "empirical preconditioner needs probabilities");
      require(params.draw_counts != nullptr && params.total_draws > 0, Errc::invalid_input,
              "empirical preconditioner needs duplicate counts");
      require(Index(params.draw_counts->size()) == rows, Errc::invalid_input,
              "duplicate count length mismatch");
      // Merging the c_i duplicated with-replacement rows (each scaled
      // 1/sqrt(N p_i)) into one row scaled sqrt(c_i/(N p_i)) preserves the
      // Gram matrix of the N-draw with-replacement CS matrix exactly; the
      // sqrt(m/n) converts that net row scale into this plan's d-convention.
      for (Index r = 0; r < rows; ++r) {
        const double pi = (*params.p)[plan.indices[size_t(r)]];
        const double ci = double((*params.draw_counts)[size_t(r)]);
        require(pi > 0.0, Errc::invalid_input, "zero probability on a selected row");
        d[r] = std::sqrt(double(plan.m) * ci /
                         (double(plan.n) * double(params.total_draws) * pi));
      }
      return d;
    }
  }
  fail(Errc::invalid_input, "unknown preconditioner");
}

RealVec regularized_bernoulli_preconditioner(const WeightVector& w,
                                             const std::vector<Index>& rows, Index n) {
  SamplingPlan tmp;
  tmp.n = n;
  tmp.m = w.m;
  tmp.indices = rows;
  PrecondParams params;
  params.w = &w.w;
  return build_preconditioner(tmp, Preconditioner::regularized_bernoulli, params);
}

}  // namespace vds
