// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "vds/coherence.hpp"
#include "vds/measurement.hpp"
#include "vds/weights.hpp"

using namespace vds;

namespace {

WeightVector uniform_weights(Index n, Index m) {
  WeightVector w;
  w.w = RealVec::Constant(n, double(m) / double(n));
  w.m = m;
  w.unsaturated = n;
  return w;
}

ComplexVec random_complex(Index n, CounterRng& rng) {
  ComplexVec x(n);
  for (Index i = 0; i < n; ++i) x[i] = Complex(rng.next_gaussian(), rng.next_gaussian());
  return x;
}

}  // namespace

TEST_CASE("identity operator with a full plan is a uniform scaling") {
  WeightVector w;
  w.w = RealVec::Ones(5);
  w.m = 5;
  const auto plan = sample_bernoulli(w, {1, 0});
  const MeasurementOperator op(UnitaryOperator::identity(5), plan, /*apply_precond=*/false);
  CounterRng rng(2, 0);
  RealVec x(5);
  for (Index i = 0; i < 5; ++i) x[i] = rng.next_gaussian();
  const ComplexVec y = op.forward(x);
  for (Index i = 0; i < 5; ++i) CHECK(std::abs(y[i] - Complex(x[i], 0)) <= 1e-14);
}

TEST_CASE("forward and adjoint satisfy the inner-product identity") {
  const Index n = 64;
  const auto w = uniform_weights(n, 16);
  const auto plan = sample_bernoulli(w, {5, 1});
  for (bool precond : {false, true}) {
    const MeasurementOperator op(UnitaryOperator::dft_1d(n), plan, precond);
    CounterRng rng(7, precond);
    const ComplexVec x = random_complex(n, rng);
    const ComplexVec y = random_complex(op.rows(), rng);
    const Complex lhs = op.forward(x).adjoint() * y;
    const Complex rhs = x.adjoint() * op.adjoint(y);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (op.forward(x).norm() * y.norm() + 1.0));
  }
}

TEST_CASE("with-replacement multiplicities expand into repeated rows") {
  RealVec p = RealVec::Zero(4);
  p[2] = 1.0;
  const auto plan = sample_with_replacement(p, 3, {9, 0});
  const MeasurementOperator op(UnitaryOperator::identity(4), plan, /*apply_precond=*/false);
  CHECK(op.rows() == 3);
  RealVec x(4);
  x << 1, 2, 3, 4;
  const ComplexVec y = op.forward(x);
  const double scale = std::sqrt(4.0 / 3.0);
  for (Index r = 0; r < 3; ++r) CHECK(std::abs(y[r] - Complex(scale * 3.0, 0)) <= 1e-12);
}

TEST_CASE("sparse wavelet atoms reach their dictionary coherence through the operator") {
  const Index side = 8, n = side * side;
  const UnitaryOperator F = UnitaryOperator::dft_2d_channelwise(side, side, 1);
  const UnitaryOperator W = UnitaryOperator::haar_2d(side, side, 3);
  const RealVec alpha = coherence_dictionary(F, haar_atoms_2d(side, side, 3)).alpha;

  RealVec best = RealVec::Zero(n);
  RealVec e = RealVec::Zero(n);
  for (Index i = 0; i < n; ++i) {
    e[i] = 1.0;
    const ComplexVec row_vals = F.apply(W.apply_adjoint_real(e));
    e[i] = 0.0;
    for (Index j = 0; j < n; ++j) best[j] = std::max(best[j], std::abs(row_vals[j]));
  }
  CHECK((best - alpha).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("noise normalization matches the field convention") {
  const Index m = 100, draws = 10000;
  double acc_real = 0.0, acc_cplx = 0.0;
  const RealVec zero_r = RealVec::Zero(m);
  const ComplexVec zero_c = ComplexVec::Zero(m);
  for (Index t = 0; t < draws; ++t) {
    acc_real += add_noise(zero_r, 1.0, m, {3, std::uint64_t(t)}).squaredNorm();
    acc_cplx += add_noise(zero_c, 1.0, m, Field::cplx, {4, std::uint64_t(t)}).squaredNorm();
  }
  CHECK(std::abs(acc_real / double(draws) - 1.0) <= 0.05);
  CHECK(std::abs(acc_cplx / double(draws) - 2.0) <= 0.1);

  // sigma = 0 is an exact pass-through.
  ComplexVec meas(3);
  meas << Complex(1, 2), Complex(3, 4), Complex(5, 6);
  const ComplexVec same = add_noise(meas, 0.0, 3, Field::cplx, {1, 1});
  CHECK((same - meas).norm() == 0.0);
}

TEST_CASE("unit truncation boundary cases") {
  RealVec a(2);
  a << 1.5, 0.2;
  const auto ta = unit_truncate(a);
  CHECK(ta.value[0] == 1.0);
  CHECK(ta.value[1] == 0.0);
  CHECK(ta.support == 1);
  CHECK(!ta.degenerate);

  RealVec b(3);
  b << 0.6, 0.8, 0.3;
  const auto tb = unit_truncate(b);
  CHECK(tb.value[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(tb.value[1] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(tb.value[2] == 0.0);
  CHECK(tb.support == 2);

  RealVec c(3);
  c << 0.6, 0.6, 0.6;
  const auto tc = unit_truncate(c);
  CHECK(tc.value[2] == doctest::Approx(std::sqrt(0.28)).epsilon(1e-12));
  CHECK(tc.support == 3);
  CHECK(tc.value.norm() == doctest::Approx(1.0).epsilon(1e-12));

  RealVec small(2);
  small << 0.3, 0.4;
  const auto ts = unit_truncate(small);
  CHECK(ts.degenerate);
  CHECK((ts.value - small).norm() == 0.0);

  RealVec neg(2);
  neg << 0.5, -0.1;
  CHECK_THROWS_AS(unit_truncate(neg), Error);
}

TEST_CASE("unit truncation is idempotent above the sphere and lands on it") {
  CounterRng rng(11, 0);
  for (int t = 0; t < 100; ++t) {
    RealVec v(8);
    for (Index i = 0; i < 8; ++i) v[i] = std::abs(rng.next_gaussian());
    if (v.norm() < 1.0) v *= 2.0 / v.norm();
    const auto tr = unit_truncate(v);
    CHECK(std::abs(tr.value.norm() - 1.0) <= 1e-12);
    const auto tr2 = unit_truncate(tr.value);
    CHECK((tr2.value - tr.value).cwiseAbs().maxCoeff() <= 1e-12);
    for (Index i = 0; i < tr.support; ++i) CHECK(tr.value[i] <= v[i] + 1e-15);
  }
}

TEST_CASE("noise factor on a single-row plan matches the hand evaluation") {
  const Index n = 10, m = 2;
  WeightVector w;
  w.w = RealVec::Constant(n, 0.2);
  w.m = m;
  SamplingPlan plan;
  plan.scheme = Scheme::bernoulli;
  plan.n = n;
  plan.m = m;
  plan.indices = {4};
  plan.multiplicities = {1};
  plan.precond = RealVec::Constant(1, std::sqrt(double(m) / (double(n) * 0.2)));
  plan.rng = {0, 0};

  RealVec alpha = RealVec::Constant(n, 0.7);
  const double d = std::sqrt(double(m) / (double(n) * 0.2));
  const double v = std::sqrt(double(n) / double(m)) * d * 0.7;
  const double expected = v >= 1.0 ? d : d * v;  // truncation on a length-1 vector
  CHECK(noise_factor(plan, alpha, w) == doctest::Approx(expected).epsilon(1e-12));

  RealVec alpha_zero = alpha;
  alpha_zero[4] = 0.0;
  CHECK_THROWS_AS(noise_factor(plan, alpha_zero, w), Error);
}

TEST_CASE("noise factor obeys the truncation bounds") {
  CounterRng rng(13, 0);
  for (int t = 0; t < 200; ++t) {
    const Index n = 16 + Index(rng.next_u64() % 64);
    RealVec alpha(n);
    for (Index i = 0; i < n; ++i) alpha[i] = 0.05 + rng.next_double();
    const Index m = 1 + Index(rng.next_u64() % std::uint64_t(n - 1));
    const auto w = optimized_bernoulli_weights(alpha, m);
    const auto plan = sample_bernoulli(w, {1000 + std::uint64_t(t), 0});
    if (plan.indices.empty()) continue;

    const double factor = noise_factor(plan, alpha, w);
    double max_d = 0.0, sd2a_sq = 0.0;
    for (Index idx : plan.indices) {
      const double d = std::sqrt(double(m) / (double(n) * w.w[idx]));
      max_d = std::max(max_d, d);
      const double row = std::sqrt(double(n) / double(m)) * d * d * alpha[idx];
      sd2a_sq += row * row;
    }
    CHECK(factor <= max_d + 1e-12);
    CHECK(factor <= std::sqrt(sd2a_sq) + 1e-12);
  }
}
