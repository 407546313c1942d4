/*
 * Copyright 2026 The kgp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include "kgp/dependence.hpp"
#include "kgp/errors.hpp"
#include "kgp/gp.hpp"
#include "kgp/io.hpp"
#include "kgp/krr.hpp"
#include "kgp/quadrature.hpp"
#include "kgp/rates.hpp"
#include "kgp/report.hpp"
#include "kgp/verify.hpp"

namespace kgp::cli {

namespace {

using nlohmann::json;

constexpr double kRegressTolerance = 1e-8;
constexpr double kRateBand = 0.3;

std::vector<double> to_vec(const Vector& v) { return {v.data(), v.data() + v.size()}; }

json to_rows(const Matrix& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) rows.push_back(to_vec(M.row(i).transpose()));
  return rows;
}

void emit(const json& j, const std::string& path, std::ostream& out) {
  const std::string text = dump_json(j);
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

json header(const char* command, std::uint64_t seed) {
  return {{"schema", kReportSchema}, {"command", command}, {"seed", seed}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Common {
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "RNG seed");
  app->add_option("--out", c.out, "Write JSON here instead of stdout");
}

// --- verify ------------------------------------------------------------------

struct VerifyArgs {
  Common common;
  std::string suite = "all";
  std::int64_t trials = 200;
  std::int64_t draws = 10000;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  SuiteOptions o;
  o.trials = a.trials;
  o.seed = a.common.seed;
  o.mc_draws = a.draws;
  const Report r = run_suite(a.suite, o);
  emit(to_json(r), a.common.out, out);
  if (!r.all_passed()) {
    std::int64_t failed = 0;
    for (const CaseResult& c : r.cases) failed += c.passed ? 0 : 1;
    err << "verify: " << failed << " of " << r.cases.size() << " cases failed\n";
    return kFailed;
  }
  return kOk;
}

// --- regress -----------------------------------------------------------------

struct RegressArgs {
  Common common;
  std::string data, kernel, mode = "both", query, predictions;
  std::optional<double> lambda, sigma2;
};

int cmd_regress(const RegressArgs& a, std::ostream& out, std::ostream& err) {
  const Kernel k = Kernel::parse(a.kernel);
  const Dataset data = read_dataset(a.data);
  if (data.size() > 0 && !data.has_outputs()) throw InputError(a.data + ": regression data needs a y column");
  Points Q = a.query.empty() ? data.X : read_points(a.query);
  if (data.size() > 0 && Q.rows() > 0 && Q.cols() != data.dim()) {
    throw InputError("query points have dimension " + std::to_string(Q.cols()) + ", data has " +
                     std::to_string(data.dim()));
  }
  if (a.lambda && a.sigma2) throw InputError("regress: give --lambda or --sigma2, not both");
  if (!a.lambda && !a.sigma2) throw InputError("regress: one of --lambda or --sigma2 is required");
  const double n = static_cast<double>(data.size());
  const bool want_krr = a.mode != "gp";
  const bool want_gp = a.mode != "krr";

  json j = header("regress", a.common.seed);
  j["mode"] = a.mode;
  j["kernel"] = k.to_string();
  j["n"] = data.size();
  j["d"] = Q.cols();

  Vector krr_pred, gp_mean, gp_var;
  if (want_krr) {
    if (data.size() == 0) throw InputError("regress: kernel ridge regression needs at least one data row");
    const double lambda = a.lambda ? *a.lambda : *a.sigma2 / n;
    j["lambda"] = lambda;
    const KRREstimator est = lambda > 0.0 ? fit_krr(k, data, lambda) : fit_interpolant(k, data);
    krr_pred = est.predict_at(Q);
    j["predictions_krr"] = to_vec(krr_pred);
  }
  if (want_gp) {
    const double s2 = a.sigma2 ? *a.sigma2 : n * *a.lambda;
    j["sigma2"] = s2;
    const Dataset d = data.size() > 0 ? data : Dataset{Points(0, Q.cols()), Vector(0)};
    const GPPosterior post = condition(GPPrior{k, {}}, d, s2);
    gp_mean.resize(Q.rows());
    gp_var.resize(Q.rows());
    for (Eigen::Index i = 0; i < Q.rows(); ++i) {
      gp_mean[i] = post.mean(Q.row(i).transpose());
      gp_var[i] = post.variance(Q.row(i).transpose());
    }
    j["predictions_gp"] = to_vec(gp_mean);
    j["posterior_variance"] = to_vec(gp_var);
  }

  int code = kOk;
  if (want_krr && want_gp) {
    const double gap = Q.rows() > 0 ? (krr_pred - gp_mean).cwiseAbs().maxCoeff() : 0.0;
    j["max_discrepancy"] = gap;
    j["tolerance"] = kRegressTolerance;
    j["passed"] = gap <= kRegressTolerance;
    if (!(gap <= kRegressTolerance)) {
      err << "regress: KRR and GP predictions differ by " << gap << "\n";
      code = kFailed;
    }
  }

  if (!a.predictions.empty()) {
    std::ofstream f(a.predictions, std::ios::binary);
    if (!f) throw InputError("cannot write '" + a.predictions + "'");
    for (Eigen::Index c = 0; c < Q.cols(); ++c) f << (c ? "," : "") << "x" << c + 1;
    if (want_krr) f << (Q.cols() ? "," : "") << "krr";
    if (want_gp) f << (Q.cols() || want_krr ? "," : "") << "gp,gp_variance";
    f << "\n";
    char buf[32];
    auto put = [&](double v, bool first) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      f << (first ? "" : ",") << buf;
    };
    for (Eigen::Index i = 0; i < Q.rows(); ++i) {
      bool first = true;
      for (Eigen::Index c = 0; c < Q.cols(); ++c, first = false) put(Q(i, c), first);
      if (want_krr) put(krr_pred[i], first), first = false;
      if (want_gp) put(gp_mean[i], first), put(gp_var[i], false);
      f << "\n";
    }
  }
  emit(j, a.common.out, out);
  return code;
}

// --- rates -------------------------------------------------------------------

struct RatesArgs {
  Common common{20260101, ""};
  std::string kernel = "matern:alpha=1.5,h=0.2";
  std::string target = "representer5";
  std::vector<std::int64_t> sizes = {64, 128, 256, 512, 1024, 2048};
  std::int64_t replications = 5;
  double lambda_constant = 0.01;
};

int cmd_rates(const RatesArgs& a, std::ostream& out, std::ostream&) {
  const auto t0 = std::chrono::steady_clock::now();
  RateConfig c;
  c.kernel = Kernel::parse(a.kernel);
  c.target = a.target;
  c.sizes.assign(a.sizes.begin(), a.sizes.end());
  c.replications = a.replications;
  c.lambda_constant = a.lambda_constant;
  c.seed = a.common.seed;
  const RateExperimentResult r = run_rate_experiment(c);
  json j = header("rates", a.common.seed);
  j["kernel"] = c.kernel.to_string();
  j["target"] = c.target;
  j["replications"] = c.replications;
  j["lambda_constant"] = c.lambda_constant;
  j["sample_sizes"] = r.sample_sizes;
  j["errors"] = r.errors;
  j["fitted_slope"] = r.fitted_slope;
  j["theoretical_slope"] = r.theoretical_slope;
  j["band"] = kRateBand;
  j["within_band"] = std::abs(r.fitted_slope - r.theoretical_slope) <= kRateBand;
  j["wall_time"] = seconds_since(t0);
  emit(j, a.common.out, out);
  return kOk;
}

// --- contraction -------------------------------------------------------------

struct ContractionArgs {
  Common common;
  std::string kernel = "matern:alpha=0.5,h=1";
  double x = 0.37;
  std::vector<std::int64_t> sizes = {8, 16, 32, 64, 128};
  double rho = 0.5;
  double resolution = 1e-5;
};

int cmd_contraction(const ContractionArgs& a, std::ostream& out, std::ostream&) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<Eigen::Index> sizes(a.sizes.begin(), a.sizes.end());
  const ContractionReport r = variance_contraction_experiment(Kernel::parse(a.kernel), a.x, sizes,
                                                              ContractionConfig{a.rho, a.resolution});
  json j = header("contraction", a.common.seed);
  j["kernel"] = Kernel::parse(a.kernel).to_string();
  j["x"] = a.x;
  j["rho"] = a.rho;
  j["resolution"] = a.resolution;
  json n = json::array(), h = json::array(), kb = json::array();
  for (const ContractionGrid& g : r.grids) {
    n.push_back(g.n);
    h.push_back(g.fill_distance);
    kb.push_back(g.posterior_variance);
  }
  j["grid_n"] = n;
  j["fill_distance"] = h;
  j["posterior_variance"] = kb;
  j["fitted_slope"] = r.fitted_slope;
  j["theoretical_slope"] = r.theoretical_slope;
  j["wall_time"] = seconds_since(t0);
  emit(j, a.common.out, out);
  return kOk;
}

// --- sample / mmd / hsic / quadrature ---------------------------------------------

struct SampleArgs {
  Common common;
  std::string kernel, points;
  std::int64_t count = 1;
};

int cmd_sample(const SampleArgs& a, std::ostream& out, std::ostream&) {
  const Kernel k = Kernel::parse(a.kernel);
  const Points X = read_points(a.points);
  if (a.count < 0) throw InputError("sample: --count must be >= 0");
  const Matrix S = sample_prior(GPPrior{k, {}}, X, a.count, a.common.seed);
  json j = header("sample", a.common.seed);
  j["kernel"] = k.to_string();
  j["count"] = a.count;
  j["samples"] = to_rows(S);
  emit(j, a.common.out, out);
  return kOk;
}

struct MmdArgs {
  Common common;
  std::string kernel, p, q;
};

int cmd_mmd(const MmdArgs& a, std::ostream& out, std::ostream&) {
  const Kernel k = Kernel::parse(a.kernel);
  const double m = mmd(k, read_measure(a.p), read_measure(a.q));
  json j = header("mmd", a.common.seed);
  j["kernel"] = k.to_string();
  j["mmd"] = m;
  j["mmd2"] = m * m;
  emit(j, a.common.out, out);
  return kOk;
}

struct HsicArgs {
  Common common;
  std::string kernel, kernel_x, kernel_y, data;
  std::int64_t draws = 10000;
};

PairedSample read_paired(const std::string& path) {
  const CsvTable t = read_csv(path);
  std::vector<Eigen::Index> xs, ys;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    const std::string& h = t.header[c];
    if (h.size() > 1 && h[0] == 'x') xs.push_back(static_cast<Eigen::Index>(c));
    else if (h == "y" || (h.size() > 1 && h[0] == 'y')) ys.push_back(static_cast<Eigen::Index>(c));
    else throw ParseError(path + ":1: unexpected column '" + h + "'; expected x1..xp,y1..yq");
  }
  if (xs.empty() || ys.empty()) throw ParseError(path + ":1: expected header x1..xp,y1..yq");
  PairedSample s{Points(t.values.rows(), static_cast<Eigen::Index>(xs.size())),
                 Points(t.values.rows(), static_cast<Eigen::Index>(ys.size()))};
  for (std::size_t c = 0; c < xs.size(); ++c) s.X.col(static_cast<Eigen::Index>(c)) = t.values.col(xs[c]);
  for (std::size_t c = 0; c < ys.size(); ++c) s.Y.col(static_cast<Eigen::Index>(c)) = t.values.col(ys[c]);
  return s;
}

int cmd_hsic(const HsicArgs& a, std::ostream& out, std::ostream&) {
  const std::string sx = a.kernel_x.empty() ? a.kernel : a.kernel_x;
  const std::string sy = a.kernel_y.empty() ? a.kernel : a.kernel_y;
  if (sx.empty() || sy.empty()) throw InputError("hsic: give --kernel or both --kernel-x and --kernel-y");
  const Kernel kx = Kernel::parse(sx);
  const Kernel ky = Kernel::parse(sy);
  const PairedSample s = read_paired(a.data);
  json j = header("hsic", a.common.seed);
  j["kernel_x"] = kx.to_string();
  j["kernel_y"] = ky.to_string();
  j["n"] = s.size();
  j["hsic"] = hsic_empirical(kx, ky, s);
  j["hsic_gp_exact"] = hsic_gp_exact(kx, ky, s);
  j["distance_covariance"] = distance_covariance_v(s);
  if (a.draws > 0) {
    const MonteCarloEstimate mc = hsic_gp_monte_carlo(kx, ky, s, a.draws, a.common.seed);
    j["monte_carlo"] = {{"estimate", mc.estimate}, {"standard_error", mc.standard_error}, {"draws", mc.draws}};
  }
  emit(j, a.common.out, out);
  return kOk;
}

struct QuadratureArgs {
  Common common;
  std::string kernel, nodes, target;
  double lambda = 0.0;
};

int cmd_quadrature(const QuadratureArgs& a, std::ostream& out, std::ostream&) {
  const Kernel k = Kernel::parse(a.kernel);
  const Dataset nodes = read_dataset(a.nodes);
  const DiscreteMeasure target = read_measure(a.target);
  const QuadratureRule rule = kq_weights(k, nodes.X, target, a.lambda);
  const Vector f = nodes.has_outputs() ? *nodes.Y : Vector::Zero(nodes.size());
  const BQPosterior post = bq_posterior(rule, f, a.lambda);
  json j = header("quadrature", a.common.seed);
  j["kernel"] = k.to_string();
  j["lambda"] = a.lambda;
  j["weights"] = to_vec(rule.weights);
  j["variance"] = post.variance;
  if (nodes.has_outputs()) j["mean"] = post.mean;
  if (a.lambda == 0.0) j["mmd2"] = verify_bq_kq_identity(rule).mmd2;
  emit(j, a.common.out, out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian process and kernel method identities: verification and experiments", "kgp"};
  app.require_subcommand(1);
  std::function<int()> action;

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run randomised identity suites");
  verify->add_option("--suite", va.suite, "gp-krr, posterior-variance, mmd-average-case, bq-kq, hsic-gp, shrinkage-bayes or all");
  verify->add_option("--trials", va.trials, "Instances per suite");
  verify->add_option("--draws", va.draws, "Monte Carlo draws per instance");
  add_common(verify, va.common);
  verify->callback([&] { action = [&] { return cmd_verify(va, out, err); }; });

  RegressArgs ra;
  auto* regress = app.add_subcommand("regress", "Kernel ridge regression and GP regression on a CSV dataset");
  regress->add_option("--data", ra.data, "CSV with header x1,...,xd,y")->required();
  regress->add_option("--kernel", ra.kernel, "Kernel spec, e.g. se:gamma=0.5")->required();
  regress->add_option("--lambda", ra.lambda, "KRR regularisation (sigma2 = n lambda)");
  regress->add_option("--sigma2", ra.sigma2, "GP noise variance (lambda = sigma2 / n)");
  regress->add_option("--mode", ra.mode, "krr, gp or both")->check(CLI::IsMember({"krr", "gp", "both"}));
  regress->add_option("--query", ra.query, "CSV of query points (default: the data inputs)");
  regress->add_option("--predictions", ra.predictions, "Write predictions CSV here");
  add_common(regress, ra.common);
  regress->callback([&] { action = [&] { return cmd_regress(ra, out, err); }; });

  RatesArgs rt;
  auto* rates = app.add_subcommand("rates", "KRR learning-rate experiment");
  rates->add_option("--kernel", rt.kernel, "Matern kernel spec");
  rates->add_option("--target", rt.target, "Target function id");
  rates->add_option("--sizes", rt.sizes, "Sample sizes a,b,c")->delimiter(',');
  rates->add_option("--replications", rt.replications, "Replications per size");
  rates->add_option("--lambda-constant", rt.lambda_constant, "c in lambda_n = c / n");
  add_common(rates, rt.common);
  rates->callback([&] { action = [&] { return cmd_rates(rt, out, err); }; });

  ContractionArgs ca;
  auto* contraction = app.add_subcommand("contraction", "Posterior variance against fill distance on grids");
  contraction->add_option("--kernel", ca.kernel, "Matern kernel spec");
  contraction->add_option("--x", ca.x, "Query point in [0, 1]");
  contraction->add_option("--sizes", ca.sizes, "Grid sizes a,b,c")->delimiter(',');
  contraction->add_option("--rho", ca.rho, "Fill distance radius");
  contraction->add_option("--resolution", ca.resolution, "Fill distance search grid step");
  add_common(contraction, ca.common);
  contraction->callback([&] { action = [&] { return cmd_contraction(ca, out, err); }; });

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Draw GP prior samples at given points");
  sample->add_option("--kernel", sa.kernel, "Kernel spec")->required();
  sample->add_option("--points", sa.points, "CSV with header x1,...,xd")->required();
  sample->add_option("--count", sa.count, "Number of samples");
  add_common(sample, sa.common);
  sample->callback([&] { action = [&] { return cmd_sample(sa, out, err); }; });

  MmdArgs ma;
  auto* mmd_cmd = app.add_subcommand("mmd", "MMD between two weighted point sets");
  mmd_cmd->add_option("--kernel", ma.kernel, "Kernel spec")->required();
  mmd_cmd->add_option("--p", ma.p, "Measure CSV x1,...,xd,w")->required();
  mmd_cmd->add_option("--q", ma.q, "Measure CSV x1,...,xd,w")->required();
  add_common(mmd_cmd, ma.common);
  mmd_cmd->callback([&] { action = [&] { return cmd_mmd(ma, out, err); }; });

  HsicArgs ha;
  auto* hsic = app.add_subcommand("hsic", "HSIC of a paired sample");
  hsic->add_option("--data", ha.data, "CSV with header x1..xp,y1..yq")->required();
  hsic->add_option("--kernel", ha.kernel, "Kernel for both X and Y");
  hsic->add_option("--kernel-x", ha.kernel_x, "Kernel on X");
  hsic->add_option("--kernel-y", ha.kernel_y, "Kernel on Y");
  hsic->add_option("--draws", ha.draws, "Monte Carlo draws (0 to skip)");
  add_common(hsic, ha.common);
  hsic->callback([&] { action = [&] { return cmd_hsic(ha, out, err); }; });

  QuadratureArgs qa;
  auto* quad = app.add_subcommand("quadrature", "Kernel / Bayesian quadrature against a discrete target");
  quad->add_option("--kernel", qa.kernel, "Kernel spec")->required();
  quad->add_option("--nodes", qa.nodes, "CSV x1,...,xd[,y]; y are integrand values")->required();
  quad->add_option("--target", qa.target, "Measure CSV x1,...,xd,w")->required();
  quad->add_option("--lambda", qa.lambda, "Regularisation (sigma2 = n lambda)");
  add_common(quad, qa.common);
  quad->callback([&] { action = [&] { return cmd_quadrature(qa, out, err); }; });

  std::vector<const char*> argv;
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "kgp: " << e.what() << "\n";
    return kUsage;
  }
  if (!action) {
    err << "kgp: no command given\n";
    return kUsage;
  }
  try {
    return action();
  } catch (const InputError& e) {
    err << "kgp: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    err << "kgp: " << e.what() << "\n";
    return kUsage;
  } catch (const UnsupportedOperation& e) {
    err << "kgp: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "kgp: " << e.what() << "\n";
    return kFailed;
  }
}

}  // namespace kgp::cli
