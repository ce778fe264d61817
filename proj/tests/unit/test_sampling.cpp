// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "support.hpp"
#include "vds/analysis.hpp"
#include "vds/io.hpp"
#include "vds/sampling.hpp"
#include "vds/weights.hpp"

using namespace vds;

namespace {

WeightVector uniform_weights(Index n, Index m) {
  WeightVector w;
  w.w = RealVec::Constant(n, double(m) / double(n));
  w.m = m;
  w.unsaturated = n;
  w.complexity_sq = double(n) * (double(m) / double(n)) * (double(m) / double(n));
  return w;
}

}  // namespace

TEST_CASE("all-ones weights select every row deterministically") {
  WeightVector w;
  w.w = RealVec::Ones(6);
  w.m = 6;
  const auto plan = sample_bernoulli(w, {1, 2});
  CHECK(plan.indices.size() == 6);
  for (Index i = 0; i < 6; ++i) {
    CHECK(plan.indices[size_t(i)] == i);
    CHECK(plan.precond[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("saturated toy row is always sampled") {
  const Index n = 200, k = 5, m = 12;
  const auto w = optimized_bernoulli_weights(toy_coherences({n, k, m}), m);
  for (Index t = 0; t < 1000; ++t) {
    const auto plan = sample_bernoulli(w, {9, std::uint64_t(t)});
    CHECK(plan.indices.front() == 0);
  }
}

TEST_CASE("bernoulli count matches binomial moments") {
  const Index n = 100, m = 20;
  const auto w = uniform_weights(n, m);
  const Index trials = 10000;
  double sum = 0.0, sum_sq = 0.0;
  RealVec freq = RealVec::Zero(n);
  for (Index t = 0; t < trials; ++t) {
    const auto plan = sample_bernoulli(w, {17, std::uint64_t(t)});
    const double c = double(plan.indices.size());
    sum += c;
    sum_sq += c * c;
    for (Index i : plan.indices) freq[i] += 1.0;
  }
  const double mean = sum / double(trials);
  const double var = sum_sq / double(trials) - mean * mean;
  CHECK(std::abs(mean - 20.0) <= 0.2);
  CHECK(std::abs(var - 16.0) <= 1.0);

  // Marginal inclusion within 4 standard errors.
  const double se = std::sqrt(0.2 * 0.8 / double(trials));
  for (Index i = 0; i < n; ++i) CHECK(std::abs(freq[i] / double(trials) - 0.2) <= 4.0 * se);
}

TEST_CASE("conditioned bernoulli hits the count exactly") {
  const Index n = 100, m = 20;
  const auto w = uniform_weights(n, m);
  double attempts = 0.0;
  const Index runs = 2000;
  for (Index t = 0; t < runs; ++t) {
    const auto plan = sample_bernoulli_conditioned(w, {23, std::uint64_t(t)});
    CHECK(Index(plan.indices.size()) == m);
    attempts += double(plan.attempts);
  }
  // Acceptance probability is the binomial pmf at its mode, about 0.0993.
  const double mean_attempts = attempts / double(runs);
  CHECK(mean_attempts > 7.0);
  CHECK(mean_attempts < 14.0);

  WeightVector ones;
  ones.w = RealVec::Ones(4);
  ones.m = 4;
  const auto plan = sample_bernoulli_conditioned(ones, {1, 1});
  CHECK(plan.attempts == 1);
  CHECK(plan.indices.size() == 4);

  CHECK_THROWS_AS(sample_bernoulli_conditioned(uniform_weights(400, 200), {5, 0}, 2), Error);
}

TEST_CASE("conditioned plans keep saturated rows") {
  const Index n = 120, k = 6, m = 10;
  const auto w = optimized_bernoulli_weights(toy_coherences({n, k, m}), m);
  for (Index t = 0; t < 200; ++t) {
    const auto plan = sample_bernoulli_conditioned(w, {31, std::uint64_t(t)});
    CHECK(Index(plan.indices.size()) == m);
    CHECK(plan.indices.front() == 0);
  }
}

TEST_CASE("with-replacement point mass merges into one multiplicity") {
  RealVec p = RealVec::Zero(5);
  p[1] = 1.0;
  const auto plan = sample_with_replacement(p, 7, {3, 3});
  CHECK(plan.indices.size() == 1);
  CHECK(plan.indices[0] == 1);
  CHECK(plan.multiplicities[0] == 7);
  CHECK(plan.rows() == 7);
}

TEST_CASE("with-replacement frequencies follow the law") {
  const RealVec p = RealVec::Constant(4, 0.25);
  std::map<Index, double> freq;
  const Index draws = 100000;
  const auto plan = sample_with_replacement(p, draws, {11, 0});
  for (size_t r = 0; r < plan.indices.size(); ++r) {
    freq[plan.indices[r]] += double(plan.multiplicities[r]);
  }
  for (Index i = 0; i < 4; ++i) CHECK(std::abs(freq[i] / double(draws) - 0.25) <= 0.005);
}

TEST_CASE("rejection sampler produces distinct rows and duplicate counts") {
  RealVec p(5);
  p << 0.4, 0.3, 0.1, 0.1, 0.1;
  const auto res = sample_wor_rejection(p, 3, {7, 5});
  CHECK(res.plan.indices.size() == 3);
  std::set<Index> distinct(res.plan.indices.begin(), res.plan.indices.end());
  CHECK(distinct.size() == 3);
  std::uint64_t counted = 0;
  for (size_t r = 0; r < res.draw_counts.size(); ++r) {
    CHECK(res.draw_counts[r] >= 1);
    counted += std::uint64_t(res.draw_counts[r]);
  }
  CHECK(counted == res.total_draws);
}

TEST_CASE("rejection sampler with uniform p and m = n is a permutation") {
  const RealVec p = RealVec::Constant(6, 1.0 / 6.0);
  const auto res = sample_wor_rejection(p, 6, {13, 2});
  std::set<Index> s(res.plan.indices.begin(), res.plan.indices.end());
  CHECK(s.size() == 6);
}

TEST_CASE("rejection sampler aborts when the attempt estimate explodes") {
  RealVec p(4);
  p << 0.5, 0.5, 0.0, 0.0;
  CHECK_THROWS_AS(sample_wor_rejection(p, 3, {1, 1}), Error);  // only two positive rows
  RealVec q(3);
  q << 1.0 - 2e-9, 1e-9, 1e-9;
  CHECK_THROWS_AS(sample_wor_rejection(q, 3, {1, 1}, 1e5), Error);  // cap trips
}

TEST_CASE("sequential sampler matches the analytic tuple law") {
  RealVec p(5);
  p << 0.4, 0.3, 0.1, 0.1, 0.1;
  const Index m = 3, trials = 30000;
  std::map<std::array<Index, 3>, double> freq;
  for (Index t = 0; t < trials; ++t) {
    const auto plan = sample_wor_sequential(p, m, {19, std::uint64_t(t)});
    freq[{plan.indices[0], plan.indices[1], plan.indices[2]}] += 1.0 / double(trials);
  }
  // Analytic product law: p_i * p_j/(1-p_i) * p_k/(1-p_i-p_j).
  double tv = 0.0;
  for (Index i = 0; i < 5; ++i) {
    for (Index j = 0; j < 5; ++j) {
      for (Index k = 0; k < 5; ++k) {
        if (i == j || j == k || i == k) continue;
        const double q = p[i] * p[j] / (1 - p[i]) * p[k] / (1 - p[i] - p[j]);
        tv += std::abs(freq[{i, j, k}] - q);
      }
    }
  }
  CHECK(0.5 * tv < 0.02);
}

TEST_CASE("sequential sampler on a two-point law") {
  RealVec p = RealVec::Zero(5);
  p[0] = 0.5;
  p[1] = 0.5;
  Index first_count = 0;
  for (Index t = 0; t < 2000; ++t) {
    const auto plan = sample_wor_sequential(p, 2, {29, std::uint64_t(t)});
    std::set<Index> s(plan.indices.begin(), plan.indices.end());
    CHECK(s == std::set<Index>{0, 1});
    first_count += plan.indices[0] == 0;
  }
  CHECK(std::abs(double(first_count) / 2000.0 - 0.5) < 0.05);

  CHECK_THROWS_AS(sample_wor_sequential(p, 3, {1, 1}), Error);  // only two positive rows
}

TEST_CASE("preconditioner variants") {
  // Bernoulli with uniform weights: all values equal.
  const auto w = uniform_weights(10, 5);
  const auto plan = sample_bernoulli(w, {37, 0});
  for (Index r = 0; r < plan.precond.size(); ++r) {
    CHECK(plan.precond[r] == doctest::Approx(1.0).epsilon(1e-9));  // sqrt(m/(n w)) = 1
  }

  // Heuristic with uniform p: d = 1 exactly.
  const RealVec p = RealVec::Constant(10, 0.1);
  const auto plan_seq = sample_wor_sequential(p, 5, {41, 0});
  for (Index r = 0; r < plan_seq.precond.size(); ++r) {
    CHECK(plan_seq.precond[r] == doctest::Approx(1.0).epsilon(1e-9));
  }

  // Empirical merge: sqrt(m c / (n N p)).
  SamplingPlan fake;
  fake.scheme = Scheme::wor_rejection;
  fake.n = 4;
  fake.m = 2;
  fake.indices = {0, 2};
  fake.multiplicities = {3, 1};
  RealVec pf(4);
  pf << 0.5, 0.2, 0.2, 0.1;
  std::vector<Index> counts{3, 1};
  PrecondParams params;
  params.p = &pf;
  params.draw_counts = &counts;
  params.total_draws = 4;
  const RealVec d = build_preconditioner(fake, Preconditioner::empirical, params);
  CHECK(d[0] == doctest::Approx(std::sqrt(2.0 * 3.0 / (4.0 * 4.0 * 0.5))).epsilon(1e-12));
  CHECK(d[1] == doctest::Approx(std::sqrt(2.0 * 1.0 / (4.0 * 4.0 * 0.2))).epsilon(1e-12));

  params.draw_counts = nullptr;
  CHECK_THROWS_AS(build_preconditioner(fake, Preconditioner::empirical, params), Error);
}

TEST_CASE("regularized preconditioner") {
  WeightVector w;
  w.w = RealVec::Ones(4);
  w.m = 4;
  const std::vector<Index> rows{0, 1, 2, 3};
  const RealVec d = regularized_bernoulli_preconditioner(w, rows, 4);
  for (Index r = 0; r < 4; ++r) {
    CHECK(d[r] == doctest::Approx(std::sqrt(4.0 / (4.0 * (1.0 + 1e-7 * 4.0)))).epsilon(1e-12));
  }

  // Vanishing weight stays bounded instead of diverging.
  WeightVector tiny;
  tiny.w = RealVec::Constant(4, 1e-12);
  tiny.w[0] = 1.0;
  tiny.m = 1;
  const RealVec dt = regularized_bernoulli_preconditioner(tiny, {1}, 4);
  CHECK(dt[0] <= std::sqrt(1.0 / (1e-7 * 4.0)) + 1e-9);

  // Matches the unregularized value to 0.1% for moderate weights.
  WeightVector mid;
  mid.w = RealVec::Constant(10, 0.1);
  mid.m = 1;
  const RealVec dm = regularized_bernoulli_preconditioner(mid, {3}, 10);
  const double plain = std::sqrt(1.0 / (10.0 * 0.1));
  CHECK(std::abs(dm[0] - plain) / plain < 1e-3);
}

TEST_CASE("plans are reproducible and round-trip through JSON") {
  const auto w = uniform_weights(30, 8);
  const auto a = sample_bernoulli(w, {101, 7});
  const auto b = sample_bernoulli(w, {101, 7});
  CHECK(a.indices == b.indices);
  CHECK((a.precond - b.precond).norm() == 0.0);

  const std::string path = "/tmp/vds_test_plan.json";
  write_plan_json(path, a);
  const auto c = read_plan_json(path);
  CHECK(c.indices == a.indices);
  CHECK(c.multiplicities == a.multiplicities);
  CHECK((c.precond - a.precond).norm() == 0.0);
  CHECK(c.scheme == a.scheme);
  CHECK(c.n == a.n);
  CHECK(c.m == a.m);
}
