// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#include "vds/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

namespace vds {

namespace {

// Synthesis side of a (real) analysis transform.
RealVec synthesize(const UnitaryOperator& prior, const RealVec& coeffs) {
  return prior.apply_adjoint_real(coeffs);
}

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

struct Objective {
  const MeasurementOperator* A;
  const UnitaryOperator* prior;
  const ComplexVec* y;

  ComplexVec residual(const RealVec& c) const { return A->forward(synthesize(*prior, c)) - *y; }

  double value(const RealVec& c) const { return 0.5 * residual(c).squaredNorm(); }

  RealVec gradient(const ComplexVec& res) const {
    const ComplexVec z = A->adjoint(res);
    return prior->apply_real(RealVec(z.real()));
  }
};

std::vector<Index> top_k_support(const RealVec& c, Index k) {
  std::vector<Index> order(size_t(c.size()));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double va = std::abs(c[a]), vb = std::abs(c[b]);
    if (va != vb) return va > vb;
    return a < b;  // ties favor the lower index
  });
  std::vector<Index> support(order.begin(), order.begin() + k);
  std::sort(support.begin(), support.end());
  return support;
}

}  // namespace

LassoResult lasso_synthesis(const MeasurementOperator& A, const ComplexVec& y,
                            const UnitaryOperator& prior, double penalty, int max_iters,
                            double tol) {
  require(prior.field() == Field::real, Errc::invalid_input,
          "sparse prior expects a real synthesis transform");
  require(prior.n() == A.n(), Errc::invalid_input, "prior/operator dimension mismatch");
  require(y.size() == A.rows(), Errc::invalid_input, "measurement length mismatch");
  require(penalty >= 0.0 && std::isfinite(penalty), Errc::invalid_input,
          "penalty must be nonnegative");
  require(max_iters >= 1, Errc::invalid_input, "max_iters must be positive");

  const Objective obj{&A, &prior, &y};
  const Index n = prior.n();

  LassoResult out;
  out.penalty = penalty;
  RealVec c = RealVec::Zero(n);
  double f = obj.value(c);
  double lip = 1.0;
  out.objective_trace.push_back(f + penalty * c.lpNorm<1>());

  for (int it = 0; it < max_iters; ++it) {
    const ComplexVec res = obj.residual(c);
    const RealVec grad = obj.gradient(res);
    RealVec next(n);
    double f_next = 0.0;
    while (true) {
      for (Index i = 0; i < n; ++i) next[i] = soft_threshold(c[i] - grad[i] / lip, penalty / lip);
      f_next = obj.value(next);
      const RealVec step = next - c;
      const double quad = f + grad.dot(step) + 0.5 * lip * step.squaredNorm();
      if (f_next <= quad + 1e-12 * std::max(1.0, f)) break;
      lip *= 2.0;
      require(lip < 1e18, Errc::invalid_input, "backtracking diverged");
    }
    const double total_prev = f + penalty * c.lpNorm<1>();
    c.swap(next);
    f = f_next;
    const double total = f + penalty * c.lpNorm<1>();
    out.objective_trace.push_back(total);
    out.iterations = it + 1;
    if (it >= 10 && total_prev - total <= tol * std::max(1.0, total_prev)) {
      out.converged = true;
      break;
    }
  }
  out.coefficients = std::move(c);
  out.objective = out.objective_trace.back();
  return out;
}

namespace {

// Least squares of complex measurements over complex columns restricted to
// real coefficients: stack real and imaginary parts.
RealVec solve_real_ls(const ComplexMat& cols, const ComplexVec& rhs, bool* rank_deficient) {
  const Index rows = cols.rows(), k = cols.cols();
  RealMat stacked(2 * rows, k);
  stacked.topRows(rows) = cols.real();
  stacked.bottomRows(rows) = cols.imag();
  RealVec r(2 * rows);
  r.head(rows) = rhs.real();
  r.tail(rows) = rhs.imag();
  Eigen::BDCSVD<RealMat> svd(stacked, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  if (rank_deficient != nullptr) *rank_deficient = svd.rank() < k;
  return svd.solve(r);  // minimum-norm when rank deficient
}

double default_penalty(const MeasurementOperator& A, const UnitaryOperator& prior,
                       const ComplexVec& y, double sigma) {
  const Index n = prior.n();
  if (sigma > 0.0) {
    // Universal threshold scaled by the largest column norm of the
    // preconditioned operator in the synthesis coordinates.
    double max_col = 0.0;
    RealVec e = RealVec::Zero(n);
    for (Index j = 0; j < n; ++j) {
      e[j] = 1.0;
      max_col = std::max(max_col, A.forward(synthesize(prior, e)).norm());
      e[j] = 0.0;
    }
    return sigma * std::sqrt(2.0 * std::log(double(n))) / std::sqrt(double(A.plan().m)) * max_col;
  }
  // Noiseless: small penalty relative to the correlation scale, approaching
  // the basis-pursuit limit.
  const ComplexVec z = A.adjoint(y);
  const double corr = prior.apply_real(RealVec(z.real())).cwiseAbs().maxCoeff();
  return 1e-3 * std::max(corr, 1e-300);
}

}  // namespace

SparseRecovery recover_sparse(const MeasurementOperator& Mop, const ComplexVec& b,
                              const SparsePriorConfig& cfg, const RealVec* x0, double sigma) {
  require(cfg.transform != nullptr, Errc::invalid_input, "missing prior transform");
  require(Mop.preconditioned(), Errc::invalid_input,
          "recovery expects a preconditioned measurement operator");
  require(cfg.k >= 1 && cfg.k <= cfg.transform->n(), Errc::invalid_input, "bad sparsity target");
  require(cfg.tol > 0.0, Errc::invalid_input, "tolerance must be positive");
  const UnitaryOperator& prior = *cfg.transform;

  const ComplexVec y = Mop.precondition(b);
  const double penalty =
      cfg.lasso_penalty > 0.0 ? cfg.lasso_penalty : default_penalty(Mop, prior, y, sigma);

  const LassoResult lasso = lasso_synthesis(Mop, y, prior, penalty, cfg.max_iters, cfg.tol);

  SparseRecovery out;
  out.support = top_k_support(lasso.coefficients, cfg.k);

  // Debias: least squares restricted to the support.
  ComplexMat cols(Mop.rows(), cfg.k);
  RealVec e = RealVec::Zero(prior.n());
  for (Index j = 0; j < cfg.k; ++j) {
    e[out.support[size_t(j)]] = 1.0;
    cols.col(j) = Mop.forward(synthesize(prior, e));
    e[out.support[size_t(j)]] = 0.0;
  }
  bool rank_deficient = false;
  const RealVec z = solve_real_ls(cols, y, &rank_deficient);
  out.coefficients = RealVec::Zero(prior.n());
  for (Index j = 0; j < cfg.k; ++j) out.coefficients[out.support[size_t(j)]] = z[j];
  out.xhat = synthesize(prior, out.coefficients);

  RecoveryReport& rep = out.report;
  rep.sigma = sigma;
  rep.m_realized = Mop.rows();
  rep.scheme = scheme_name(Mop.plan().scheme);
  rep.ls_rank_deficient = rank_deficient;
  rep.converged = lasso.converged;
  if (x0 != nullptr) {
    require(x0->size() == prior.n(), Errc::invalid_input, "reference signal dimension mismatch");
    rep.abs_error = (out.xhat - *x0).norm();
    const double nx0 = x0->norm();
    rep.rel_error = nx0 > 0.0 ? rep.abs_error / nx0 : rep.abs_error;
    // Model mismatch and the achievable objective at the projection of x0.
    RealVec coeffs0 = prior.apply_real(*x0);
    const auto support0 = top_k_support(coeffs0, cfg.k);
    RealVec proj_coeffs = RealVec::Zero(prior.n());
    for (Index j : support0) proj_coeffs[j] = coeffs0[j];
    const RealVec proj = synthesize(prior, proj_coeffs);
    rep.mismatch = (*x0 - proj).norm();
    const double achieved = (Mop.forward(out.xhat) - y).squaredNorm();
    const double reference = (Mop.forward(proj) - y).squaredNorm();
    rep.eps_proxy = std::max(0.0, achieved - reference);
  }
  return out;
}

ComplexVec project_subspace_ls(const MeasurementOperator& Mop, const ComplexVec& b,
                               const ComplexMat& basis, bool* rank_deficient) {
  require(Mop.preconditioned(), Errc::invalid_input,
          "projection expects a preconditioned measurement operator");
  require(basis.rows() == Mop.n(), Errc::invalid_input, "basis dimension mismatch");
  const ComplexVec y = Mop.precondition(b);
  ComplexMat cols(Mop.rows(), basis.cols());
  for (Index c = 0; c < basis.cols(); ++c) cols.col(c) = Mop.forward(ComplexVec(basis.col(c)));
  // A real basis spans a real subspace: the fit runs over real coefficients,
  // matching the debiasing stage of the sparse pipeline. Complex bases get
  // complex coefficients.
  if (basis.imag().cwiseAbs().maxCoeff() == 0.0) {
    const RealVec z = solve_real_ls(cols, y, rank_deficient);
    return basis * z.cast<Complex>();
  }
  Eigen::BDCSVD<ComplexMat> svd(cols, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  if (rank_deficient != nullptr) *rank_deficient = svd.rank() < basis.cols();
  const ComplexVec z = svd.solve(y);
  return basis * z;
}

GeometricMeanError geometric_mean_error(const std::vector<double>& errors) {
  require(!errors.empty(), Errc::invalid_input, "no errors to aggregate");
  GeometricMeanError out;
  std::vector<double> logs;
  logs.reserve(errors.size());
  for (double e : errors) {
    require(e >= 0.0 && std::isfinite(e), Errc::invalid_input, "errors must be finite and nonnegative");
    if (e < 1e-15) {
      out.clamped = true;
      e = 1e-15;
    }
    logs.push_back(std::log(e));
  }
  const double mean = std::accumulate(logs.begin(), logs.end(), 0.0) / double(logs.size());
  out.mean = std::exp(mean);
  if (logs.size() > 1) {
    double ss = 0.0;
    for (double l : logs) ss += (l - mean) * (l - mean);
    const double sd = std::sqrt(ss / double(logs.size() - 1));
    out.stderr_factor = std::exp(sd / std::sqrt(double(logs.size())));
  }
  return out;
}

}  // namespace vds
