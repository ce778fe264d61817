// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: coherence vectors, probability weights, sampling
// plans, RIP estimates, toy-example rates, sparse recovery and the
// config-driven experiment runner.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vds/analysis.hpp"
#include "vds/coherence.hpp"
#include "vds/experiments.hpp"
#include "vds/io.hpp"
#include "vds/measurement.hpp"
#include "vds/recovery.hpp"
#include "vds/sampling.hpp"
#include "vds/subspaces.hpp"
#include "vds/unitary.hpp"
#include "vds/weights.hpp"

namespace {

using namespace vds;

struct TransformFlags {
  std::string kind = "identity";
  Index n = 0;
  Index height = 0, width = 0, channels = 1;
  int levels = 3;

  void attach(CLI::App* cmd) {
    cmd->add_option("--transform", kind, "identity|dft1d|dft2d|haar")->required();
    cmd->add_option("--n", n, "ambient dimension (identity, dft1d)");
    cmd->add_option("--height", height, "image rows (dft2d, haar)");
    cmd->add_option("--width", width, "image cols (dft2d, haar)");
    cmd->add_option("--channels", channels, "channels (dft2d)");
    cmd->add_option("--levels", levels, "wavelet levels (haar)");
  }

  UnitaryOperator build(Index fallback_n = 0) const {
    const Index dim = n > 0 ? n : fallback_n;
    if (kind == "identity") return UnitaryOperator::identity(dim);
    if (kind == "dft1d") return UnitaryOperator::dft_1d(dim);
    if (kind == "dft2d") {
      require(height > 0 && width > 0, Errc::invalid_input, "dft2d needs --height and --width");
      return UnitaryOperator::dft_2d_channelwise(height, width, channels);
    }
    if (kind == "haar") {
      require(height > 0 && width > 0, Errc::invalid_input, "haar needs --height and --width");
      return UnitaryOperator::haar_2d(height, width, levels);
    }
    fail(Errc::invalid_input, "unknown transform: " + kind);
  }
};

UnitaryOperator transform_from_json(const nlohmann::json& j) {
  TransformFlags f;
  f.kind = j.value("kind", std::string("identity"));
  f.n = j.value("n", Index(0));
  f.height = j.value("height", Index(0));
  f.width = j.value("width", Index(0));
  f.channels = j.value("channels", Index(1));
  f.levels = j.value("levels", 3);
  return f.build();
}

std::vector<RealVec> load_unit_rows(const std::string& path, bool normalize) {
  auto rows = read_vector_rows_csv(path);
  if (normalize) {
    for (auto& r : rows) {
      const double nr = r.norm();
      if (nr > 0) r /= nr;
    }
  }
  return rows;
}

int cmd_coherence(const TransformFlags& tf, const std::string& prior, const std::string& out) {
  const auto colon = prior.find(':');
  require(colon != std::string::npos, Errc::invalid_input,
          "--prior must be subspaces:FILE, atoms:FILE or samples:FILE");
  const std::string kind = prior.substr(0, colon);
  const std::string file = prior.substr(colon + 1);

  CoherenceVector alpha;
  if (kind == "subspaces") {
    const auto prior_set = read_subspaces_json(file);
    alpha = coherence_exact(tf.build(prior_set.n()), prior_set);
  } else if (kind == "atoms") {
    const auto atoms = load_unit_rows(file, /*normalize=*/false);
    require(!atoms.empty(), Errc::invalid_input, "no atoms in " + file);
    alpha = coherence_dictionary(tf.build(atoms.front().size()), atoms);
  } else if (kind == "samples") {
    const auto samples = load_unit_rows(file, /*normalize=*/false);
    require(!samples.empty(), Errc::invalid_input, "no samples in " + file);
    alpha = coherence_samples(tf.build(samples.front().size()), samples);
  } else {
    fail(Errc::invalid_input, "unknown prior kind: " + kind);
  }
  write_coherence_csv(out, alpha.alpha);
  return 0;
}

int cmd_weights(const std::string& alpha_file, Index m, const std::string& scheme,
                const std::string& out) {
  const RealVec alpha = read_alpha_csv(alpha_file);
  WeightsCsv csv;
  csv.alpha = alpha;
  if (scheme == "bernoulli") {
    const WeightVector w = optimized_bernoulli_weights(alpha, m);
    csv.weight = w.w;
    csv.L2 = w.complexity_sq;
    csv.J = w.unsaturated;
  } else if (scheme == "with-replacement") {
    csv.weight = with_replacement_weights(alpha);
  } else if (scheme == "heuristic") {
    const auto h = heuristic_marginal_weights(with_replacement_weights(alpha), m);
    csv.weight = h.w;
    csv.lambda = h.lambda;
  } else {
    fail(Errc::invalid_input, "unknown weight scheme: " + scheme);
  }
  write_weights_csv(out, csv);
  return 0;
}

int cmd_complexity_bound(const std::string& alpha_file, double lambda, const std::string& out) {
  const auto b = sample_complexity_bound(read_alpha_csv(alpha_file), lambda);
  JsonWriter w;
  w.begin_object();
  w.field("lambda", b.lambda_factor);
  w.field("feasible", b.feasible);
  w.field("m_star", b.m_star);
  w.field("L2_at_m_star", b.complexity_sq_at_m_star);
  w.field("wr_bound", b.wr_bound);
  w.end_object();
  const std::string text = w.str() + "\n";
  if (out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_text_file(out, text);
  }
  return 0;
}

int cmd_sample(const std::string& weights_file, const std::string& scheme_str, std::uint64_t seed,
               std::uint64_t stream, Index m_opt, const std::string& out) {
  const Scheme scheme = scheme_from_name(scheme_str);
  const WeightsCsv csv = read_weights_csv(weights_file);
  const RngStream rs{seed, stream};

  SamplingPlan plan;
  if (scheme == Scheme::bernoulli || scheme == Scheme::bernoulli_conditioned) {
    WeightVector w;
    w.w = csv.weight;
    const double total = csv.weight.sum();
    w.m = m_opt > 0 ? m_opt : Index(std::llround(total));
    require(std::abs(total - double(w.m)) <= 1e-6, Errc::invalid_input,
            "weight column does not sum to an integer m");
    if (csv.L2) w.complexity_sq = *csv.L2;
    if (csv.J) w.unsaturated = *csv.J;
    plan = scheme == Scheme::bernoulli ? sample_bernoulli(w, rs)
                                       : sample_bernoulli_conditioned(w, rs);
  } else {
    require(m_opt > 0, Errc::invalid_input, "--m is required for probability-vector schemes");
    RealVec p = csv.weight;
    const double total = p.sum();
    require(total > 0, Errc::invalid_input, "weight column sums to zero");
    p /= total;
    if (scheme == Scheme::with_replacement) {
      plan = sample_with_replacement(p, m_opt, rs);
    } else if (scheme == Scheme::wor_rejection) {
      plan = sample_wor_rejection(p, m_opt, rs).plan;
    } else {
      plan = sample_wor_sequential(p, m_opt, rs);
    }
  }
  write_plan_json(out, plan);
  return 0;
}

int cmd_rip_estimate(const std::string& config_file, const std::string& out) {
  const auto j = nlohmann::json::parse(read_text_file(config_file));
  const Index trials = j.value("trials", Index(1000));
  const std::uint64_t seed = j.value("seed", std::uint64_t(1));
  const double threshold = j.value("threshold", kRipThreshold);
  const int threads = j.value("threads", 1);
  const Scheme scheme = scheme_from_name(j.value("scheme", std::string("bernoulli")));

  UnionOfSubspaces prior = [&]() {
    const auto& jp = j.at("prior");
    if (jp.contains("subspaces")) return read_subspaces_json(jp.at("subspaces").get<std::string>());
    const auto& jt = jp.at("toy");
    return toy_prior(jt.at("n").get<Index>(), jt.at("k").get<Index>());
  }();
  const UnitaryOperator F = j.contains("transform") ? transform_from_json(j.at("transform"))
                                                    : UnitaryOperator::identity(prior.n());

  SamplingLaw law = RealVec();
  Index m = j.value("m", Index(0));
  const auto& jl = j.at("law");
  if (jl.contains("weights")) {
    const WeightsCsv csv = read_weights_csv(jl.at("weights").get<std::string>());
    WeightVector w;
    w.w = csv.weight;
    w.m = Index(std::llround(csv.weight.sum()));
    if (csv.L2) w.complexity_sq = *csv.L2;
    if (csv.J) w.unsaturated = *csv.J;
    law = std::move(w);
  } else if (jl.contains("alpha")) {
    const RealVec alpha = read_alpha_csv(jl.at("alpha").get<std::string>());
    require(m > 0, Errc::invalid_input, "rip-estimate law needs m");
    if (scheme == Scheme::bernoulli || scheme == Scheme::bernoulli_conditioned) {
      law = optimized_bernoulli_weights(alpha, m);
    } else {
      law = with_replacement_weights(alpha);
    }
  } else if (jl.contains("p")) {
    law = RealVec(read_real_vector_csv(jl.at("p").get<std::string>()));
  } else {
    fail(Errc::invalid_input, "law must provide weights, alpha or p");
  }

  const RipEstimate est = rip_success_probability(F, prior, law, scheme, m, trials,
                                                  {seed, fnv1a("rip-estimate")}, threshold, threads);
  JsonWriter w;
  w.begin_object();
  w.field("scheme", scheme_name(est.scheme));
  w.field("trials", est.trials);
  w.field("threshold", est.threshold);
  w.field("success_rate", est.success_rate);
  w.field("wilson_lo", est.success_interval.lo);
  w.field("wilson_hi", est.success_interval.hi);
  w.field("sampler_failures", est.sampler_failures);
  for (const auto& [q, v] : est.deviation_quantiles) {
    w.field("deviation_q" + std::to_string(int(q * 100)), v);
  }
  w.end_object();
  write_text_file(out, w.str() + "\n");
  return 0;
}

int cmd_toy(Index n, Index k, Index m, Index trials, std::uint64_t seed, int threads,
            const std::string& out) {
  const ToyRates r = toy_failure_probabilities({n, k, m}, trials, {seed, fnv1a("toy")}, threads);
  JsonWriter w;
  w.begin_object();
  w.field("n", n);
  w.field("k", k);
  w.field("m", m);
  w.field("trials", r.trials);
  const auto rate = [&](const std::string& name, const WilsonInterval& wi) {
    w.begin_object(name);
    w.field("rate", wi.rate);
    w.field("wilson_lo", wi.lo);
    w.field("wilson_hi", wi.hi);
    w.end_object();
  };
  rate("wor_miss", r.wor_miss);
  rate("bernoulli_miss", r.bernoulli_miss);
  rate("bernoulli_undercount", r.bernoulli_undercount);
  rate("bernoulli_rip_success", r.bernoulli_rip_success);
  rate("wor_rip_success", r.wor_rip_success);
  w.field("analytic_wor", r.analytic_wor);
  w.end_object();
  write_text_file(out, w.str() + "\n");
  return 0;
}

int cmd_recover(const std::string& plan_file, const std::string& meas_file,
                const std::string& prior_kind, Index k, const TransformFlags& tf,
                const std::string& truth_file, double sigma, double penalty, int iters,
                const std::string& out) {
  const SamplingPlan plan = read_plan_json(plan_file);
  const UnitaryOperator F = tf.build(plan.n);
  require(prior_kind == "haar", Errc::invalid_input, "supported prior: haar");
  const Index side = Index(std::llround(std::sqrt(double(plan.n))));
  require(side * side == plan.n, Errc::invalid_input,
          "haar prior needs a square image; pass --height/--width via the transform");
  const Index h = tf.height > 0 ? tf.height : side;
  const Index wdt = tf.width > 0 ? tf.width : side;
  const UnitaryOperator prior = UnitaryOperator::haar_2d(h, wdt, tf.levels);

  const ComplexVec b = read_complex_vector_csv(meas_file);
  const MeasurementOperator op(F, plan, /*apply_precond=*/true);
  require(b.size() == op.rows(), Errc::invalid_input, "measurement length mismatch");

  SparsePriorConfig cfg;
  cfg.transform = &prior;
  cfg.k = k;
  cfg.lasso_penalty = penalty;
  cfg.max_iters = iters;

  RealVec truth;
  const bool have_truth = !truth_file.empty();
  if (have_truth) truth = read_real_vector_csv(truth_file);

  const SparseRecovery rec =
      recover_sparse(op, b, cfg, have_truth ? &truth : nullptr, sigma);

  JsonWriter w;
  w.begin_object();
  w.field("rel_error", rec.report.rel_error);
  w.field("abs_error", rec.report.abs_error);
  w.field("sigma", rec.report.sigma);
  w.field("eps_proxy", rec.report.eps_proxy);
  w.field("mismatch", rec.report.mismatch);
  w.field("noise_factor", rec.report.noise_factor);
  w.field("m_realized", rec.report.m_realized);
  w.field("scheme", rec.report.scheme);
  w.field("ls_rank_deficient", rec.report.ls_rank_deficient);
  w.field("converged", rec.report.converged);
  w.begin_array("support");
  for (Index i : rec.support) w.element(i);
  w.end_array();
  w.end_object();
  write_text_file(out, w.str() + "\n");

  write_real_vector_csv(out + ".xhat.csv", rec.xhat);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variable-density sampling toolkit"};
  app.require_subcommand(1);

  // coherence
  auto* c_coh = app.add_subcommand("coherence", "compute a local coherence vector");
  TransformFlags coh_tf;
  coh_tf.attach(c_coh);
  std::string coh_prior, coh_out;
  c_coh->add_option("--prior", coh_prior, "subspaces:FILE | atoms:FILE | samples:FILE")->required();
  c_coh->add_option("--out", coh_out, "output CSV")->required();

  // weights
  auto* c_w = app.add_subcommand("weights", "compute sampling weights from coherences");
  std::string w_alpha, w_scheme = "bernoulli", w_out;
  Index w_m = 0;
  c_w->add_option("--alpha", w_alpha, "coherence CSV")->required();
  c_w->add_option("--m", w_m, "expected measurement count")->required();
  c_w->add_option("--scheme", w_scheme, "bernoulli|with-replacement|heuristic");
  c_w->add_option("--out", w_out, "output CSV")->required();

  // complexity-bound
  auto* c_cb = app.add_subcommand("complexity-bound", "invert the sample-complexity bound");
  std::string cb_alpha, cb_out;
  double cb_lambda = 0.0;
  c_cb->add_option("--alpha", cb_alpha, "coherence CSV")->required();
  c_cb->add_option("--lambda", cb_lambda, "log-factor value")->required();
  c_cb->add_option("--out", cb_out, "output JSON (default stdout)");

  // sample
  auto* c_s = app.add_subcommand("sample", "draw a sampling plan");
  std::string s_weights, s_scheme = "bernoulli", s_out;
  std::uint64_t s_seed = 0, s_stream = 0;
  Index s_m = 0;
  c_s->add_option("--weights", s_weights, "weights CSV")->required();
  c_s->add_option("--scheme", s_scheme, "bernoulli|bernoulli-cond|wr|wor-reject|wor-seq");
  c_s->add_option("--seed", s_seed, "RNG seed")->required();
  c_s->add_option("--stream", s_stream, "RNG stream id");
  c_s->add_option("--m", s_m, "draw count (probability schemes)");
  c_s->add_option("--out", s_out, "output JSON")->required();

  // rip-estimate
  auto* c_rip = app.add_subcommand("rip-estimate", "Monte-Carlo RIP success estimate");
  std::string rip_cfg, rip_out;
  c_rip->add_option("--config", rip_cfg, "config JSON")->required();
  c_rip->add_option("--out", rip_out, "output JSON")->required();

  // toy
  auto* c_toy = app.add_subcommand("toy", "toy-example failure rates");
  Index t_n = 2000, t_k = 10, t_m = 20, t_trials = 10000;
  std::uint64_t t_seed = 1;
  int t_threads = 1;
  std::string t_out;
  c_toy->add_option("--n", t_n, "ambient dimension");
  c_toy->add_option("--k", t_k, "prior dimension");
  c_toy->add_option("--m", t_m, "expected measurements");
  c_toy->add_option("--trials", t_trials, "Monte-Carlo trials");
  c_toy->add_option("--seed", t_seed, "RNG seed");
  c_toy->add_option("--threads", t_threads, "worker threads");
  c_toy->add_option("--out", t_out, "output JSON")->required();

  // recover
  auto* c_rec = app.add_subcommand("recover", "sparse recovery from a plan and measurements");
  TransformFlags rec_tf;
  rec_tf.attach(c_rec);
  std::string rec_plan, rec_meas, rec_prior = "haar", rec_truth, rec_out;
  Index rec_k = 1;
  double rec_sigma = 0.0, rec_penalty = -1.0;
  int rec_iters = 1500;
  c_rec->add_option("--plan", rec_plan, "plan JSON")->required();
  c_rec->add_option("--measurements", rec_meas, "measurement CSV")->required();
  c_rec->add_option("--prior", rec_prior, "sparsity prior (haar)");
  c_rec->add_option("--k", rec_k, "target sparsity")->required();
  c_rec->add_option("--truth", rec_truth, "reference signal CSV (enables error fields)");
  c_rec->add_option("--sigma", rec_sigma, "noise level used for the default penalty");
  c_rec->add_option("--lambda", rec_penalty, "LASSO penalty (<=0: automatic)");
  c_rec->add_option("--iters", rec_iters, "max solver iterations");
  c_rec->add_option("--out", rec_out, "report JSON")->required();

  // experiment
  auto* c_exp = app.add_subcommand("experiment", "config-driven experiment runner");
  std::string exp_cfg, exp_out;
  int exp_threads = 0;
  c_exp->add_option("--config", exp_cfg, "config JSON")->required();
  c_exp->add_option("--out", exp_out, "output directory")->required();
  c_exp->add_option("--threads", exp_threads, "worker threads (overrides config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_coh) return cmd_coherence(coh_tf, coh_prior, coh_out);
    if (*c_w) return cmd_weights(w_alpha, w_m, w_scheme, w_out);
    if (*c_cb) return cmd_complexity_bound(cb_alpha, cb_lambda, cb_out);
    if (*c_s) return cmd_sample(s_weights, s_scheme, s_seed, s_stream, s_m, s_out);
    if (*c_rip) return cmd_rip_estimate(rip_cfg, rip_out);
    if (*c_toy) return cmd_toy(t_n, t_k, t_m, t_trials, t_seed, t_threads, t_out);
    if (*c_rec)
      return cmd_recover(rec_plan, rec_meas, rec_prior, rec_k, rec_tf, rec_truth, rec_sigma,
                         rec_penalty, rec_iters, rec_out);
    if (*c_exp) {
      ExperimentConfig cfg = experiment_config_from_json_file(exp_cfg);
      if (exp_threads > 0) cfg.threads = exp_threads;
      run_experiment(cfg, exp_out);
      return 0;
    }
  } catch (const vds::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
