// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#include "vds/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "parallel.hpp"
#include "vds/analysis.hpp"
#include "vds/coherence.hpp"
#include "vds/io.hpp"
#include "vds/measurement.hpp"
#include "vds/recovery.hpp"
#include "vds/sampling.hpp"
#include "vds/unitary.hpp"
#include "vds/weights.hpp"

namespace vds {

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr const char* kResultsHeader =
    "scheme,m,trial,status,rel_error,m_realized,noise_factor,seed_stream\n";

template <typename T>
std::vector<T> json_list(const nlohmann::json& j, const char* key, std::vector<T> fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<std::vector<T>>();
}

}  // namespace

ExperimentConfig experiment_config_from_json_file(const std::string& path) {
  auto j = nlohmann::json::parse(read_text_file(path));
  ExperimentConfig cfg;
  cfg.scenario = j.value("scenario", cfg.scenario);
  cfg.n = j.value("n", cfg.n);
  cfg.k = j.value("k", cfg.k);
  cfg.m_grid = json_list<Index>(j, "m_grid", {});
  cfg.sigma = j.value("sigma", cfg.sigma);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.threads = j.value("threads", cfg.threads);
  cfg.height = j.value("height", cfg.height);
  cfg.width = j.value("width", cfg.width);
  cfg.levels = j.value("levels", cfg.levels);
  cfg.lasso_penalty = j.value("lasso_penalty", cfg.lasso_penalty);
  cfg.max_iters = j.value("max_iters", cfg.max_iters);
  cfg.amplitude_floor = j.value("amplitude_floor", cfg.amplitude_floor);
  cfg.schemes = json_list<std::string>(j, "schemes", {});
  cfg.alpha_pattern = j.value("alpha_pattern", cfg.alpha_pattern);
  cfg.lambda_grid = json_list<double>(j, "lambda_grid", {});
  cfg.tail_quantiles = json_list<double>(j, "tail_quantiles", {});
  cfg.toy_n = j.value("toy_n", cfg.toy_n);
  cfg.toy_k = j.value("toy_k", cfg.toy_k);
  cfg.toy_m = j.value("toy_m", cfg.toy_m);
  return cfg;
}

std::string canonical_config_string(const ExperimentConfig& cfg) {
  // Thread count is a runtime knob, not an input: it must not reach the
  // manifest, or thread-count reruns would differ byte-wise.
  std::ostringstream s;
  s << "scenario=" << cfg.scenario << ";n=" << cfg.n << ";k=" << cfg.k << ";m_grid=";
  for (Index m : cfg.m_grid) s << m << " ";
  s << ";sigma=" << g17(cfg.sigma) << ";trials=" << cfg.trials << ";seed=" << cfg.seed
    << ";height=" << cfg.height << ";width=" << cfg.width << ";levels=" << cfg.levels
    << ";lasso_penalty=" << g17(cfg.lasso_penalty) << ";max_iters=" << cfg.max_iters
    << ";amplitude_floor=" << g17(cfg.amplitude_floor) << ";schemes=";
  for (const auto& sc : cfg.schemes) s << sc << " ";
  s << ";alpha_pattern=" << cfg.alpha_pattern << ";lambda_grid=";
  for (double l : cfg.lambda_grid) s << g17(l) << " ";
  s << ";tail_quantiles=";
  for (double t : cfg.tail_quantiles) s << g17(t) << " ";
  s << ";toy=" << cfg.toy_n << "/" << cfg.toy_k << "/" << cfg.toy_m;
  return s.str();
}

std::uint64_t task_stream(const std::string& scheme, Index m, Index trial) {
  return fnv1a(scheme + ":" + std::to_string(m) + ":" + std::to_string(trial));
}

RealVec alpha_from_pattern(const std::string& pattern, Index n, std::uint64_t seed) {
  require(n >= 1, Errc::invalid_input, "n must be positive");
  RealVec alpha(n);
  if (pattern == "inv_index") {
    for (Index i = 0; i < n; ++i) alpha[i] = 1.0 / double(i + 1);
  } else if (pattern == "inv_sqrt") {
    for (Index i = 0; i < n; ++i) alpha[i] = 1.0 / std::sqrt(double(i + 1));
  } else if (pattern == "uniform") {
    alpha.setOnes();
  } else if (pattern == "lognormal") {
    CounterRng rng(RngStream{seed, fnv1a("alpha-pattern")});
    for (Index i = 0; i < n; ++i) alpha[i] = std::exp(-1.5 + 0.8 * rng.next_gaussian());
  } else {
    fail(Errc::invalid_input, "unknown alpha pattern: " + pattern);
  }
  return alpha;
}

namespace {

struct TrialRow {
  std::string scheme;
  Index m = 0;
  Index trial = 0;
  std::string status;
  std::string rel_error;     // empty when unavailable
  std::string m_realized;    // empty when unavailable
  std::string noise_factor;  // empty when unavailable
  std::uint64_t seed_stream = 0;

  std::string csv() const {
    return scheme + "," + std::to_string(m) + "," + std::to_string(trial) + "," + status + "," +
           rel_error + "," + m_realized + "," + noise_factor + "," + std::to_string(seed_stream) +
           "\n";
  }
};

struct Outputs {
  std::string results;
  std::string summary;
};

// --- scheme-comparison ------------------------------------------------------

struct ComparisonContext {
  const ExperimentConfig* cfg;
  UnitaryOperator F;
  UnitaryOperator prior;
  RealVec alpha;
  RealMat gram_sq;  // |F P* e_j|^2 per row/column, for penalty column norms
};

// Deterministic k-sparse synthesis signal with amplitudes bounded away from
// zero; scheme-independent so schemes face identical signals.
RealVec make_signal(const ComparisonContext& ctx, Index m, Index trial,
                    std::vector<Index>* support_out) {
  const ExperimentConfig& cfg = *ctx.cfg;
  CounterRng rng(RngStream{cfg.seed, task_stream("signal", m, trial)});
  std::set<Index> support;
  while (Index(support.size()) < cfg.k) {
    support.insert(Index(rng.next_u64() % std::uint64_t(cfg.n)));
  }
  RealVec coeffs = RealVec::Zero(cfg.n);
  for (Index idx : support) {
    const double amp = cfg.amplitude_floor + std::abs(rng.next_gaussian());
    coeffs[idx] = rng.next_double() < 0.5 ? -amp : amp;
  }
  RealVec x0 = ctx.prior.apply_adjoint_real(coeffs);
  x0 /= x0.norm();
  if (support_out != nullptr) support_out->assign(support.begin(), support.end());
  return x0;
}

double penalty_for_plan(const ComparisonContext& ctx, const MeasurementOperator& op, Index m,
                        double sigma) {
  // sigma = 0 defers to the solver's basis-pursuit-limit rule.
  if (sigma <= 0.0 || ctx.cfg->lasso_penalty > 0.0) return ctx.cfg->lasso_penalty;
  const auto& scales = op.row_scales();
  const auto& rows = op.row_indices();
  double max_col_sq = 0.0;
  RealVec acc = RealVec::Zero(ctx.cfg->n);
  for (Index r = 0; r < Index(rows.size()); ++r) {
    acc += (scales[r] * scales[r]) * ctx.gram_sq.row(rows[size_t(r)]).transpose();
  }
  max_col_sq = acc.maxCoeff();
  return sigma * std::sqrt(2.0 * std::log(double(ctx.cfg->n))) / std::sqrt(double(m)) *
         std::sqrt(max_col_sq);
}

Outputs run_scheme_comparison(const ExperimentConfig& cfg) {
  require(cfg.n == cfg.height * cfg.width, Errc::invalid_input,
          "scheme-comparison needs n = height * width");
  require(!cfg.m_grid.empty(), Errc::invalid_input, "empty m grid");
  ComparisonContext ctx{&cfg, UnitaryOperator::dft_2d_channelwise(cfg.height, cfg.width, 1),
                        UnitaryOperator::haar_2d(cfg.height, cfg.width, cfg.levels), {}, {}};
  ctx.alpha = coherence_dictionary(ctx.F, haar_atoms_2d(cfg.height, cfg.width, cfg.levels)).alpha;
  ctx.gram_sq.resize(cfg.n, cfg.n);
  {
    RealVec e = RealVec::Zero(cfg.n);
    for (Index j = 0; j < cfg.n; ++j) {
      e[j] = 1.0;
      ctx.gram_sq.col(j) = ctx.F.apply(ctx.prior.apply_adjoint_real(e)).cwiseAbs2();
      e[j] = 0.0;
    }
  }

  std::vector<std::string> schemes = cfg.schemes;
  if (schemes.empty()) schemes = {"bernoulli-cond", "wr"};

  struct PerM {
    WeightVector opt;
    RealVec p_star;
    RealVec wor_marginals;  // only when a wor scheme is configured
  };
  std::vector<PerM> per_m(cfg.m_grid.size());
  const bool needs_wor = std::any_of(schemes.begin(), schemes.end(), [](const std::string& s) {
    return s == "wor-seq";
  });
  for (size_t mi = 0; mi < cfg.m_grid.size(); ++mi) {
    per_m[mi].opt = optimized_bernoulli_weights(ctx.alpha, cfg.m_grid[mi]);
    per_m[mi].p_star = with_replacement_weights(ctx.alpha);
    if (needs_wor) {
      per_m[mi].wor_marginals = heuristic_marginal_weights(per_m[mi].p_star, cfg.m_grid[mi]).w;
    }
  }

  const Index tasks = Index(schemes.size() * cfg.m_grid.size()) * cfg.trials;
  std::vector<TrialRow> rows(static_cast<size_t>(tasks));
  struct Agg {
    double rel_error = -1.0;
    bool support_ok = false;
    bool ok = false;
  };
  std::vector<Agg> agg(static_cast<size_t>(tasks));

  detail::parallel_for(tasks, cfg.threads, [&](Index task) {
    const Index per_scheme = Index(cfg.m_grid.size()) * cfg.trials;
    const size_t si = size_t(task / per_scheme);
    const Index rem = task % per_scheme;
    const size_t mi = size_t(rem / cfg.trials);
    const Index trial = rem % cfg.trials;
    const std::string& scheme = schemes[si];
    const Index m = cfg.m_grid[mi];

    TrialRow row;
    row.scheme = scheme;
    row.m = m;
    row.trial = trial;
    row.seed_stream = task_stream(scheme, m, trial);

    try {
      std::vector<Index> true_support;
      const RealVec x0 = make_signal(ctx, m, trial, &true_support);
      const RngStream plan_rs{cfg.seed, row.seed_stream};

      SamplingPlan plan;
      const WeightVector& wopt = per_m[mi].opt;
      if (scheme == "bernoulli-cond") {
        plan = sample_bernoulli_conditioned(wopt, plan_rs);
      } else if (scheme == "bernoulli") {
        plan = sample_bernoulli(wopt, plan_rs);
      } else if (scheme == "wr") {
        plan = sample_with_replacement(per_m[mi].p_star, m, plan_rs);
      } else if (scheme == "wor-seq") {
        plan = sample_wor_sequential(per_m[mi].p_star, m, plan_rs, per_m[mi].wor_marginals);
      } else if (scheme == "wor-reject") {
        plan = sample_wor_rejection(per_m[mi].p_star, m, plan_rs).plan;
      } else {
        fail(Errc::invalid_input, "unknown scheme tag: " + scheme);
      }

      const MeasurementOperator raw_op(ctx.F, plan, /*apply_precond=*/false);
      const MeasurementOperator pre_op(ctx.F, plan, /*apply_precond=*/true);
      ComplexVec b = raw_op.forward(x0);
      b = add_noise(b, cfg.sigma, m, Field::cplx, {cfg.seed, task_stream("noise", m, trial)});

      SparsePriorConfig rcfg;
      rcfg.transform = &ctx.prior;
      rcfg.k = cfg.k;
      rcfg.max_iters = cfg.max_iters;
      rcfg.lasso_penalty = penalty_for_plan(ctx, pre_op, m, cfg.sigma);
      const SparseRecovery rec = recover_sparse(pre_op, b, rcfg, &x0, cfg.sigma);

      double nf;
      if (scheme == "bernoulli-cond" || scheme == "bernoulli") {
        nf = noise_factor(plan, ctx.alpha, wopt);
      } else {
        nf = noise_factor_preconditioned(plan, ctx.alpha);
      }

      row.status = rec.report.converged ? "ok" : "nonconverged";
      row.rel_error = g17(rec.report.rel_error);
      row.m_realized = std::to_string(rec.report.m_realized);
      row.noise_factor = g17(nf);

      Agg a;
      a.rel_error = rec.report.rel_error;
      a.support_ok = rec.support == true_support;
      a.ok = true;
      agg[size_t(task)] = a;
    } catch (const Error& e) {
      row.status = e.code() == Errc::resource_exhausted ? "attempt_cap"
                                                        : std::string("error:") + errc_name(e.code());
    }
    rows[size_t(task)] = row;
  });

  Outputs out;
  out.results = kResultsHeader;
  for (const auto& r : rows) out.results += r.csv();

  out.summary = "scheme,m,trials_ok,geo_mean,geo_stderr,support_rate\n";
  for (size_t si = 0; si < schemes.size(); ++si) {
    for (size_t mi = 0; mi < cfg.m_grid.size(); ++mi) {
      std::vector<double> errs;
      Index n_support = 0, n_ok = 0;
      for (Index trial = 0; trial < cfg.trials; ++trial) {
        const size_t task = si * size_t(cfg.m_grid.size()) * size_t(cfg.trials) +
                            mi * size_t(cfg.trials) + size_t(trial);
        if (!agg[task].ok) continue;
        ++n_ok;
        errs.push_back(agg[task].rel_error);
        n_support += agg[task].support_ok;
      }
      std::string geo = "", band = "", support = "";
      if (!errs.empty()) {
        const auto g = geometric_mean_error(errs);
        geo = g17(g.mean);
        band = g17(g.stderr_factor);
        support = g17(double(n_support) / double(n_ok));
      }
      out.summary += schemes[si] + "," + std::to_string(cfg.m_grid[mi]) + "," +
                     std::to_string(n_ok) + "," + geo + "," + band + "," + support + "\n";
    }
  }
  return out;
}

// --- complexity-curves ------------------------------------------------------

Outputs run_complexity_curves(const ExperimentConfig& cfg) {
  const RealVec alpha = alpha_from_pattern(cfg.alpha_pattern, cfg.n, cfg.seed);
  std::vector<Index> m_grid = cfg.m_grid;
  if (m_grid.empty()) {
    for (Index m = 1; m <= cfg.n; m *= 2) m_grid.push_back(m);
  }
  std::vector<double> lambda_grid = cfg.lambda_grid;
  if (lambda_grid.empty()) lambda_grid = {2, 5, 10, 20};

  const auto curves = complexity_curves(alpha, m_grid, lambda_grid);
  Outputs out;
  out.results = "m,L2,alpha_norm_sq\n";
  for (const auto& r : curves.complexity_rows) {
    out.results += g17(r[0]) + "," + g17(r[1]) + "," + g17(r[2]) + "\n";
  }
  out.summary = "lambda,m_star_bernoulli,m_star_wr\n";
  for (const auto& r : curves.bound_rows) {
    out.summary += g17(r[0]) + "," + g17(r[1]) + "," + g17(r[2]) + "\n";
  }
  return out;
}

// --- toy / rip-toy ----------------------------------------------------------

Outputs run_toy(const ExperimentConfig& cfg, bool with_characterization) {
  const ToyExampleSpec spec{cfg.toy_n, cfg.toy_k, cfg.toy_m};
  const RngStream base{cfg.seed, fnv1a("toy")};
  const auto flags = toy_trial_flags(spec, cfg.trials, base, cfg.threads);

  Outputs out;
  out.results = kResultsHeader;
  for (Index t = 0; t < cfg.trials; ++t) {
    const auto& f = flags[size_t(t)];
    TrialRow bern{"bernoulli", spec.m, t,
                  f.bernoulli_ok ? "ok" : (f.bernoulli_undercount ? "undercount" : "fail"),
                  "", "", "", fnv1a("toy-bern:" + std::to_string(t))};
    TrialRow wor{"wor-seq", spec.m, t, f.wor_ok ? "ok" : (f.wor_miss ? "miss" : "fail"),
                 "", "", "", fnv1a("toy-wor:" + std::to_string(t))};
    out.results += bern.csv();
    out.results += wor.csv();
  }

  ToyRates rates = toy_failure_probabilities(spec, cfg.trials, base, cfg.threads);
  out.summary = "quantity,rate,wilson_lo,wilson_hi,analytic\n";
  const auto line = [&](const std::string& name, const WilsonInterval& w, double analytic) {
    out.summary += name + "," + g17(w.rate) + "," + g17(w.lo) + "," + g17(w.hi) + "," +
                   (std::isnan(analytic) ? "" : g17(analytic)) + "\n";
  };
  line("wor_miss", rates.wor_miss, rates.analytic_wor);
  line("bernoulli_miss", rates.bernoulli_miss, 0.0);
  line("bernoulli_undercount", rates.bernoulli_undercount, std::nan(""));
  line("bernoulli_rip_success", rates.bernoulli_rip_success, std::nan(""));
  line("wor_rip_success", rates.wor_rip_success, std::nan(""));

  if (with_characterization) {
    out.summary += "characterization,n,k,holds\n";
    for (Index n : {Index(6), Index(8), Index(10), Index(12)}) {
      for (Index k : {Index(2), Index(3), Index(4)}) {
        if (k + 1 > n) continue;
        out.summary += "characterization," + std::to_string(n) + "," + std::to_string(k) + "," +
                       (toy_characterization_holds(n, k) ? "ok" : "fail") + "\n";
      }
    }
  }
  return out;
}

// --- noise-tail ---------------------------------------------------------------

Outputs run_noise_tail(const ExperimentConfig& cfg) {
  require(!cfg.m_grid.empty(), Errc::invalid_input, "noise-tail needs one m value");
  const Index m = cfg.m_grid.front();
  const RealVec alpha = alpha_from_pattern(cfg.alpha_pattern, cfg.n, cfg.seed);
  const WeightVector w = optimized_bernoulli_weights(alpha, m);
  const double lsq = w.complexity_sq;
  const double amin = alpha.minCoeff();

  std::vector<double> ts = cfg.tail_quantiles;
  if (ts.empty()) ts = {0.1, 0.25, 0.5};

  std::vector<TrialRow> rows(static_cast<size_t>(cfg.trials));
  std::vector<double> factors(static_cast<size_t>(cfg.trials));
  detail::parallel_for(cfg.trials, cfg.threads, [&](Index t) {
    const std::uint64_t stream = task_stream("tail", m, t);
    const SamplingPlan plan = sample_bernoulli(w, {cfg.seed, stream});
    const double nf = noise_factor(plan, alpha, w);
    factors[size_t(t)] = nf;
    rows[size_t(t)] = TrialRow{"bernoulli", m,  t, "ok", "", std::to_string(plan.rows()),
                               g17(nf),     stream};
  });

  Outputs out;
  out.results = kResultsHeader;
  for (const auto& r : rows) out.results += r.csv();

  out.summary = "t,bound,exceed_rate,allowed\n";
  for (double t : ts) {
    const double bound = std::sqrt(lsq) * std::sqrt(std::min(1.0 / t + double(m) / (double(cfg.n) * lsq),
                                                             1.0 / (double(cfg.n) * amin * amin)));
    Index exceed = 0;
    for (double f : factors) exceed += f > bound;
    const double se = std::sqrt(t * (1.0 - t) / double(cfg.trials));
    out.summary += g17(t) + "," + g17(bound) + "," + g17(double(exceed) / double(cfg.trials)) +
                   "," + g17(t + 3.0 * se) + "\n";
  }
  return out;
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  require(cfg.trials >= 1, Errc::invalid_input, "trials must be positive");
  std::filesystem::create_directories(out_dir);

  Outputs out;
  if (cfg.scenario == "scheme-comparison") {
    out = run_scheme_comparison(cfg);
  } else if (cfg.scenario == "complexity-curves") {
    out = run_complexity_curves(cfg);
  } else if (cfg.scenario == "toy") {
    out = run_toy(cfg, /*with_characterization=*/false);
  } else if (cfg.scenario == "rip-toy") {
    out = run_toy(cfg, /*with_characterization=*/true);
  } else if (cfg.scenario == "noise-tail") {
    out = run_noise_tail(cfg);
  } else {
    fail(Errc::invalid_input, "unknown scenario: " + cfg.scenario);
  }

  write_text_file(out_dir + "/results.csv", out.results);
  write_text_file(out_dir + "/summary.csv", out.summary);

  JsonWriter manifest;
  manifest.begin_object();
  manifest.field("scenario", cfg.scenario);
  manifest.field("version", std::string(kVersion));
  manifest.field("seed", cfg.seed);
  manifest.field("config_hash", fnv1a(canonical_config_string(cfg)));
  manifest.field("config", canonical_config_string(cfg));
  manifest.end_object();
  write_text_file(out_dir + "/manifest.json", manifest.str() + "\n");
}

}  // namespace vds
