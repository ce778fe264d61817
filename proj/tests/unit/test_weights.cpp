// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "support.hpp"
#include "vds/analysis.hpp"
#include "vds/weights.hpp"

using namespace vds;

namespace {

RealVec random_alpha(CounterRng& rng, Index n, bool with_zeros = false) {
  RealVec a(n);
  for (Index i = 0; i < n; ++i) {
    a[i] = 0.01 + 0.99 * rng.next_double();
    if (with_zeros && rng.next_double() < 0.2) a[i] = 0.0;
  }
  if (a.maxCoeff() == 0.0) a[0] = 0.5;
  return a;
}

}  // namespace

TEST_CASE("uniform coherences give uniform weights") {
  const RealVec alpha = RealVec::Constant(10, 0.3);
  const auto w = optimized_bernoulli_weights(alpha, 4);
  for (Index i = 0; i < 10; ++i) CHECK(w.w[i] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(w.unsaturated == 10);
  CHECK(w.complexity_sq == doctest::Approx(10 * 0.09).epsilon(1e-12));
}

TEST_CASE("toy coherences saturate the first row") {
  const Index n = 101, k = 10, m = 20;
  const RealVec alpha = toy_coherences({n, k, m});
  const auto w = optimized_bernoulli_weights(alpha, m);
  CHECK(w.w[0] == 1.0);
  const double expected = double(m - 1) / double(n - 1);
  for (Index i = 1; i < n; ++i) CHECK(w.w[i] == doctest::Approx(expected).epsilon(1e-12));
  // L^2 = m (k-1) / (m-1) from the closed form.
  CHECK(w.complexity_sq == doctest::Approx(double(m) * (k - 1) / double(m - 1)).epsilon(1e-12));
}

TEST_CASE("two equal coherences split a single measurement") {
  RealVec alpha(2);
  alpha << 1.0, 1.0;
  const auto w = optimized_bernoulli_weights(alpha, 1);
  CHECK(w.w[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w.w[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w.unsaturated == 2);
  CHECK(w.complexity_sq == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("degenerate full draw keeps every positive row") {
  RealVec alpha(5);
  alpha << 0.0, 0.2, 0.4, 0.0, 0.9;
  const auto w = optimized_bernoulli_weights(alpha, 3);
  CHECK(w.w[0] == 0.0);
  CHECK(w.w[3] == 0.0);
  CHECK(w.w[1] == 1.0);
  CHECK(w.w[2] == 1.0);
  CHECK(w.w[4] == 1.0);
  CHECK(w.unsaturated == 0);
  CHECK(w.complexity_sq == doctest::Approx(3 * 0.04).epsilon(1e-12));
}

TEST_CASE("weight feasibility errors") {
  RealVec alpha(3);
  alpha << 0.5, 0.0, 0.5;
  CHECK_THROWS_AS(optimized_bernoulli_weights(alpha, 3), Error);  // only 2 positive rows
  CHECK_THROWS_AS(optimized_bernoulli_weights(alpha, 0), Error);
  CHECK_THROWS_AS(optimized_bernoulli_weights(RealVec::Zero(3), 1), Error);
}

TEST_CASE("weights match the reference transliteration and sum to m") {
  CounterRng rng(7, 0);
  for (int t = 0; t < 200; ++t) {
    const Index n = 5 + Index(rng.next_u64() % 60);
    const RealVec alpha = random_alpha(rng, n, t % 3 == 0);
    Index pos = 0;
    for (Index i = 0; i < n; ++i) pos += alpha[i] > 0.0;
    const Index m = 1 + Index(rng.next_u64() % std::uint64_t(pos));
    const auto w = optimized_bernoulli_weights(alpha, m);
    const auto ref = vds::testing::appendix_reference_weights(alpha, m);
    CHECK((w.w - ref.w).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(w.w.sum() - double(m)) <= 1e-9);

    // Saturation structure on the ascending order: nondecreasing weights and
    // ones exactly past the unsaturated count.
    Index seen_pos = 0;
    double prev = -1.0;
    for (Index idx : w.sort_perm) {
      CHECK(w.w[idx] >= prev - 1e-15);
      prev = w.w[idx];
      if (alpha[idx] > 0.0) {
        ++seen_pos;
        if (m < pos) {
          if (seen_pos <= w.unsaturated) {
            CHECK(w.w[idx] < 1.0);
          } else {
            CHECK(w.w[idx] == 1.0);
          }
        }
      }
    }
  }
}

TEST_CASE("permutation equivariance") {
  CounterRng rng(13, 0);
  RealVec alpha = random_alpha(rng, 20);
  const auto w = optimized_bernoulli_weights(alpha, 7);
  std::vector<Index> perm(20);
  std::iota(perm.begin(), perm.end(), Index(0));
  for (Index i = 19; i > 0; --i) std::swap(perm[size_t(i)], perm[rng.next_u64() % (i + 1)]);
  RealVec alpha_p(20);
  for (Index i = 0; i < 20; ++i) alpha_p[i] = alpha[perm[size_t(i)]];
  const auto wp = optimized_bernoulli_weights(alpha_p, 7);
  CHECK(wp.complexity_sq == doctest::Approx(w.complexity_sq).epsilon(1e-12));
  CHECK(wp.unsaturated == w.unsaturated);
  for (Index i = 0; i < 20; ++i) CHECK(wp.w[i] == doctest::Approx(w.w[perm[size_t(i)]]).epsilon(1e-12));
}

TEST_CASE("with-replacement probabilities square the coherences") {
  RealVec alpha(3);
  alpha << 2.0, 1.0, 1.0;
  const RealVec p = with_replacement_weights(alpha);
  CHECK(p[0] == doctest::Approx(4.0 / 6.0).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(p[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

  const Index n = 101, k = 10;
  const RealVec toy = toy_coherences({n, k, k});
  const RealVec pt = with_replacement_weights(toy);
  CHECK(pt[0] == doctest::Approx(1.0 / k).epsilon(1e-12));
  CHECK(pt[1] == doctest::Approx(double(k - 1) / (double(k) * double(n - 1))).epsilon(1e-12));

  CHECK_THROWS_AS(with_replacement_weights(RealVec::Zero(3)), Error);
}

TEST_CASE("heuristic marginals solve the normalization exactly") {
  // Uniform closed form.
  const Index n = 10, m = 4;
  const RealVec p = RealVec::Constant(n, 1.0 / double(n));
  const auto h = heuristic_marginal_weights(p, m);
  const double lambda_expected = -double(n) * std::log(1.0 - double(m) / double(n));
  CHECK(h.lambda == doctest::Approx(lambda_expected).epsilon(1e-9));
  for (Index i = 0; i < n; ++i) CHECK(h.w[i] == doctest::Approx(0.4).epsilon(1e-9));

  RealVec half(2);
  half << 0.5, 0.5;
  const auto h2 = heuristic_marginal_weights(half, 1);
  CHECK(h2.lambda == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-9));
  CHECK(h2.w[0] == doctest::Approx(0.5).epsilon(1e-9));

  CounterRng rng(5, 0);
  RealVec pr(100);
  for (Index i = 0; i < 100; ++i) pr[i] = 0.05 + rng.next_double();
  pr /= pr.sum();
  const auto h3 = heuristic_marginal_weights(pr, 20);
  CHECK(std::abs(h3.w.sum() - 20.0) <= 1e-9);
  for (Index i = 0; i + 1 < 100; ++i) {
    if (pr[i] < pr[i + 1]) CHECK(h3.w[i] < h3.w[i + 1]);
  }

  CHECK_THROWS_AS(heuristic_marginal_weights(p, n), Error);  // m >= n has no finite lambda
}

TEST_CASE("complexity functionals") {
  RealVec alpha(2);
  alpha << 1.0, 1.0;
  RealVec w_half(2);
  w_half << 0.5, 0.5;
  CHECK(tight_bernoulli_complexity(alpha, w_half, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(simple_bernoulli_complexity(alpha, w_half, 1) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  // All-saturated weights have zero complexity.
  RealVec ones = RealVec::Ones(2);
  CHECK(tight_bernoulli_complexity(alpha, ones, 2) == 0.0);

  // Zero weight on the support is rejected.
  RealVec bad(2);
  bad << 1.0, 0.0;
  CHECK_THROWS_AS(simple_bernoulli_complexity(alpha, bad, 1), Error);
}

TEST_CASE("gamma is dominated by eta and eta is minimized at the optimized weights") {
  CounterRng rng(19, 0);
  for (int t = 0; t < 50; ++t) {
    const Index n = 4 + Index(rng.next_u64() % 20);
    const RealVec alpha = random_alpha(rng, n);
    const Index m = 1 + Index(rng.next_u64() % std::uint64_t(n - 1));
    const auto wopt = optimized_bernoulli_weights(alpha, m);
    const double l = wopt.complexity();

    if (wopt.unsaturated > 0) {
      CHECK(simple_bernoulli_complexity(alpha, wopt.w, m) == doctest::Approx(l).epsilon(1e-9));
    }
    CHECK(tight_bernoulli_complexity(alpha, wopt.w, m) <=
          simple_bernoulli_complexity(alpha, wopt.w, m) + 1e-12);

    // A feasible competitor never beats the optimized weights.
    const RealVec competitor = vds::testing::clipped_proportional_weights(alpha, m);
    CHECK(simple_bernoulli_complexity(alpha, competitor, m) >= l - 1e-9);
    CHECK(tight_bernoulli_complexity(alpha, competitor, m) <=
          simple_bernoulli_complexity(alpha, competitor, m) + 1e-12);
  }
}

TEST_CASE("eta grid search on the 3-simplex finds no better point") {
  CounterRng rng(23, 0);
  RealVec alpha = random_alpha(rng, 3);
  const auto wopt = optimized_bernoulli_weights(alpha, 1);
  const double best = simple_bernoulli_complexity(alpha, wopt.w, 1);
  RealVec w(3);
  for (int i = 1; i < 100; ++i) {
    for (int j = 1; i + j < 100; ++j) {
      w << 0.01 * i, 0.01 * j, 1.0 - 0.01 * i - 0.01 * j;
      CHECK(simple_bernoulli_complexity(alpha, w, 1) >= best - 1e-6);
    }
  }
}

TEST_CASE("single unsaturated entry dominates eta") {
  RealVec alpha(4);
  alpha << 0.2, 0.9, 0.8, 0.0;
  RealVec w(4);
  w << 0.5, 1.0, 1.0, 0.5;  // zero-coherence row may carry weight
  CHECK(simple_bernoulli_complexity(alpha, w, 3) ==
        doctest::Approx(0.2 * std::sqrt(3.0 / 0.5)).epsilon(1e-12));
}

TEST_CASE("optimized complexity obeys the sandwich and decreases in m") {
  CounterRng rng(29, 0);
  for (int t = 0; t < 30; ++t) {
    const Index n = 10 + Index(rng.next_u64() % 40);
    RealVec alpha = random_alpha(rng, n);
    std::vector<double> sorted(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) sorted[size_t(i)] = alpha[i];
    std::sort(sorted.begin(), sorted.end());

    double prev = std::numeric_limits<double>::infinity();
    for (Index m = 1; m < n; ++m) {
      const double l = optimized_complexity(alpha, m).value;
      double head = 0.0;
      for (Index i = 0; i < n - m + 1; ++i) head += sorted[size_t(i)] * sorted[size_t(i)];
      CHECK(l >= std::sqrt(head) - 1e-12);
      CHECK(l <= alpha.norm() + 1e-12);
      CHECK(l <= prev + 1e-12);
      prev = l;
    }
  }
}

TEST_CASE("uniform coherences make the complexity constant in m") {
  const RealVec alpha = RealVec::Constant(16, 0.25);
  CHECK(optimized_complexity(alpha, 5).value ==
        doctest::Approx(0.25 * std::sqrt(16.0)).epsilon(1e-12));
}

TEST_CASE("sample complexity bound inversion") {
  // Uniform: L^2 = n c^2 independent of m.
  const Index n = 50;
  const double c = 0.2;
  const RealVec alpha = RealVec::Constant(n, c);
  const auto b = sample_complexity_bound(alpha, 2.9);
  CHECK(b.feasible);
  CHECK(b.m_star == 6);  // ceil(2.9 * 50 * 0.04)
  CHECK(b.wr_bound == 6);

  // Decaying coherences: the Bernoulli bound undercuts the with-replacement one.
  RealVec decay(256);
  for (Index i = 0; i < 256; ++i) decay[i] = 1.0 / double(i + 1);
  for (double lambda : {5.0, 10.0, 20.0}) {
    const auto bd = sample_complexity_bound(decay, lambda);
    CHECK(bd.feasible);
    CHECK(bd.m_star < bd.wr_bound);
  }

  // Unreachable factor reports infeasible.
  const auto inf = sample_complexity_bound(RealVec::Constant(3, 1.0), 100.0);
  CHECK(!inf.feasible);
}
