#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "polya/errors.hpp"
#include "polya/growth.hpp"
#include "polya/mean_engine.hpp"
#include "polya/moments.hpp"
#include "polya/simulator.hpp"
#include "polya/spec_io.hpp"
#include "polya/spectral.hpp"
#include "polya/urn.hpp"
#include "polya/verdicts.hpp"

#ifndef POLYA_VERSION
#define POLYA_VERSION "dev"
#endif

namespace polya::cli {

namespace {

// Shortest round-trip text, so reruns print byte-identical numbers.
std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string join_orders(const std::vector<double>& orders) {
  std::string s;
  for (std::size_t k = 0; k < orders.size(); ++k) s += (k ? ";" : "") + num(orders[k]);
  return s;
}

// Bad flags or files: reported with status 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Context {
  RunConfig cfg;
  UrnSpec spec;
  BalanceCertificate balance;
  std::string digest;
};

void banner(std::ostream& os, const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  os << "# polya-urn " << POLYA_VERSION << " command=" << c.subcommand << " spec=" << c.spec_path
     << " digest=" << ctx.digest << " seed=" << c.seed << " n_max=" << c.n_max << " replicates=" << c.replicates
     << " checkpoint_ratio=" << num(c.checkpoint_ratio) << " p=" << join_orders(c.orders)
     << " tolerance=" << num(c.tolerance) << " fit_min=" << c.fit_min << "\n";
}

WeightSchedule require_balanced(const Context& ctx) {
  if (!ctx.balance.balanced)
    throw InputError("urn is not balanced (worst deviation " + num(ctx.balance.worst_deviation) +
                     "); means, moments and verdicts need a balanced urn");
  return weight_schedule(ctx.spec);
}

// ---------------------------------------------------------------------------
// Stages shared by the subcommands
// ---------------------------------------------------------------------------

struct SpectralStage {
  Eigen::MatrixXd A;
  Spectrum spectrum;
  std::optional<UrnClassification> classification;
  std::string classification_note;
};

SpectralStage spectral_stage(const Context& ctx) {
  SpectralStage s;
  s.A = intensity_matrix(ctx.spec);
  if (ctx.balance.balanced) {
    s.spectrum = eigen_decompose(s.A, SpectralTolerances{}, ctx.balance.b);
    try {
      s.classification = classify_urn(s.spectrum, ctx.balance.b);
    } catch (const PreconditionError& e) {
      s.classification_note = e.what();
    }
  } else {
    s.spectrum = eigen_decompose(s.A);
    s.classification_note = "not balanced";
  }
  return s;
}

void write_spectrum(std::ostream& os, const SpectralStage& s) {
  os << "lambda_re,lambda_im,mult,nu,is_lambda1\n";
  for (std::size_t k = 0; k < s.spectrum.components.size(); ++k) {
    const auto& c = s.spectrum.components[k];
    os << num(c.lambda.real()) << "," << num(c.lambda.imag()) << "," << c.alg_mult << "," << c.nu << ","
       << (k == 0 ? 1 : 0) << "\n";
  }
  if (s.classification) {
    const auto& c = *s.classification;
    os << "# classification: " << to_string(c.kind) << " ratio=" << num(c.ratio) << " nu2=" << c.nu2
       << " lambda2=" << num(c.lambda2.real()) << (c.lambda2.imag() >= 0 ? "+" : "") << num(c.lambda2.imag())
       << "i\n";
  } else {
    os << "# classification: n/a (" << s.classification_note << ")\n";
  }
}

struct SimulationStage {
  std::vector<long> grid;
  std::vector<Eigen::VectorXd> means;
  std::vector<Trajectory> batch;
};

SimulationStage simulation_stage(const Context& ctx, ProductChain& chain) {
  SimulationStage s;
  RunOptions options;
  options.checkpoint_ratio = ctx.cfg.checkpoint_ratio;
  s.batch = run_batch(ctx.spec, ctx.cfg.n_max, ctx.cfg.replicates, ctx.cfg.seed, options, ctx.cfg.workers);
  s.grid = checkpoint_grid(ctx.cfg.n_max, ctx.cfg.checkpoint_ratio);
  s.means = mean_series(chain, ctx.spec.initial, s.grid);
  return s;
}

struct MomentSeries {
  MomentReport report;
  GrowthCase theory;
  std::optional<GrowthFit> fit;
  std::string fit_note;
};

MomentSeries fitted_series(MomentReport report, GrowthCase theory, const RunConfig& cfg) {
  MomentSeries m{std::move(report), theory, std::nullopt, ""};
  try {
    m.fit = fit_growth(window(m.report.grid, cfg.fit_min, cfg.n_max), theory.log_power);
  } catch (const PreconditionError& e) {
    m.fit_note = e.what();
  }
  return m;
}

struct MomentStage {
  std::map<double, MomentSeries> total;  // ||X_n - E X_n||_p by p
  std::optional<MomentReport> covariance;  // p = 2 report carrying Cov[X_n]
};

MomentStage moment_stage(const Context& ctx, const SpectralStage& spec, const SimulationStage& sim) {
  MomentStage m;
  const BootstrapOptions boot{200, ctx.cfg.seed};
  const GrowthCase theory = spec.classification ? theorem_t2_case(*spec.classification) : GrowthCase{};
  for (const double p : ctx.cfg.orders) {
    MomentReport r = mc_central_moment(sim.batch, sim.means, p, boot);
    if (p == 2.0) m.covariance = r;
    m.total.emplace(p, fitted_series(std::move(r), theory, ctx.cfg));
  }
  if (!m.covariance) m.covariance = mc_central_moment(sim.batch, sim.means, 2.0, boot);
  return m;
}

void write_moments(std::ostream& os, const MomentStage& m) {
  os << "n,p,estimate,stderr,theoretical_exponent,fitted_exponent\n";
  for (const auto& [p, series] : m.total) {
    const std::string fitted = series.fit ? num(series.fit->alpha_hat) : "nan";
    for (const auto& pt : series.report.grid)
      os << pt.n << "," << num(p) << "," << num(pt.estimate) << "," << num(pt.std_error) << ","
         << num(series.theory.exponent) << "," << fitted << "\n";
  }
}

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

enum class Status { pass, fail, skip };

struct Verdict {
  Status status = Status::pass;
  std::string check;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

Verdict bounded(std::string check, double value, double threshold, std::string detail = "") {
  return Verdict{value <= threshold ? Status::pass : Status::fail, std::move(check), value, threshold,
                 std::move(detail)};
}

Verdict skipped(std::string check, std::string why) {
  return Verdict{Status::skip, std::move(check), std::nan(""), std::nan(""), std::move(why)};
}

std::string lambda_label(Complex lambda) {
  std::string s = "lambda=" + num(lambda.real());
  if (lambda.imag() != 0.0) s += (lambda.imag() > 0 ? "+" : "") + num(lambda.imag()) + "i";
  return s;
}

constexpr long kLsofMinStart = 64;
// The sums approach their order slowly when 2 Re lambda / b is just above 1
// (a zeta(2 Re lambda / b) tail), so the grid reaches n = 2^20.
constexpr int kLsoffGridLo = 10;
constexpr int kLsoffGridHi = 20;

std::vector<Verdict> bound_verdicts(const Context& ctx, const SpectralStage& s, const ProductChain& chain) {
  std::vector<Verdict> out;
  for (const auto& c : s.spectrum.components) {
    const std::string label = lambda_label(c.lambda);

    // Small i carry O(1/i) curvature that the bound absorbs into C; start
    // the slope fit where it is negligible.
    const long i0 = std::max(lsof_start(chain, c.lambda), kLsofMinStart);
    const BoundVerdict v = verify_lsof(c, chain, lsof_grid(i0));
    out.push_back(Verdict{v.pass ? Status::pass : Status::fail, "Lsof " + label, v.exponent_fitted,
                          v.exponent_theoretical + LsofOptions{}.slope_tolerance,
                          "nu=" + std::to_string(c.nu) + " i0=" + std::to_string(i0) +
                              " C=" + num(v.constant_estimate) + " spread=" + num(v.constant_spread)});

    const BoundVerdict sum = verify_lsoff(c, chain, lsoff_grid(kLsoffGridLo, kLsoffGridHi), ctx.cfg.tolerance);
    out.push_back(Verdict{sum.pass ? Status::pass : Status::fail, "Lsoff " + label,
                          std::abs(sum.exponent_fitted - sum.exponent_theoretical), ctx.cfg.tolerance,
                          "slope=" + num(sum.exponent_fitted) + " theoretical=" + num(sum.exponent_theoretical) +
                              " log_power=" + std::to_string(sum.log_power_theoretical)});
  }
  return out;
}

std::vector<Verdict> verdicts(const Context& ctx, const SpectralStage& s, ProductChain& chain,
                              const SimulationStage& sim, const MomentStage& m) {
  std::vector<Verdict> out;
  const RunConfig& cfg = ctx.cfg;
  const WeightSchedule w = chain.weights();
  const double b = ctx.balance.b;
  const double scale = 1.0 + s.spectrum.norm;

  out.push_back(bounded("spectral identities", verify_spectral_identities(s.spectrum, s.A.cast<Complex>()).max(),
                        1e-8 * scale));
  out.push_back(bounded("lambda1 = b", std::abs(s.spectrum.leading().lambda - Complex(b)), s.spectrum.tolerance,
                        leading_eigenvalue_dominates(s.spectrum, b) ? "dominant" : "not dominant"));

  out.push_back(bounded("T0 activity", activity_centring_residual(sim.batch, sim.means, ctx.spec.activities, w), 1e-8,
                        "max |a.(X_n - E X_n)| / w_n"));
  const bool simple = s.spectrum.leading().alg_mult == 1;
  if (simple)
    out.push_back(bounded("T0 projection", projection_centring_residual(sim.batch, sim.means, s.spectrum.leading().P, w),
                          1e-8, "max |P_1 (X_n - E X_n)| / w_n"));
  else
    out.push_back(skipped("T0 projection", "lambda1 is not simple"));

  {
    RunOptions options;
    options.record.increments = true;
    const long n = std::min<long>(cfg.n_max, 1000);
    const Trajectory t = run_path(ctx.spec, n, StreamKey{cfg.seed, 0, kSamplingStream}, options);
    if (t.tenability_ok)
      out.push_back(bounded("martingale decomposition", martingale_residual(t, chain), 1e-8,
                            "n=" + std::to_string(n)));
    else
      out.push_back(Verdict{Status::fail, "martingale decomposition", std::nan(""), 1e-8, t.diagnostic});
  }

  for (const auto& [p, series] : m.total) {
    const std::string name = "T2 p=" + num(p);
    if (!series.fit) {
      out.push_back(skipped(name, series.fit_note));
      continue;
    }
    out.push_back(bounded(name, series.fit->alpha_hat, series.theory.exponent + cfg.tolerance,
                          "theoretical=" + num(series.theory.exponent) + " log_power=" + num(series.theory.log_power) +
                              " se=" + num(series.fit->std_error)));
  }

  const BootstrapOptions boot{200, cfg.seed};
  for (std::size_t k = 0; k < s.spectrum.components.size(); ++k) {
    const auto& c = s.spectrum.components[k];
    if (k == 0 && simple) continue;  // identically zero by T0
    const GrowthCase theory = theorem_t1_case(c.lambda, c.nu, b);
    for (const double p : cfg.orders) {
      const std::string name = "T1 " + lambda_label(c.lambda) + " p=" + num(p);
      const MomentSeries series = fitted_series(projected_moment(sim.batch, c.P, sim.means, p, boot), theory, cfg);
      if (!series.fit) {
        out.push_back(skipped(name, series.fit_note));
        continue;
      }
      out.push_back(bounded(name, series.fit->alpha_hat, theory.exponent + cfg.tolerance,
                            "theoretical=" + num(theory.exponent) + " log_power=" + num(theory.log_power)));
    }
  }

  if (!s.classification) {
    out.push_back(skipped("T3", s.classification_note));
  } else if (s.classification->kind != UrnKind::small_strict && s.classification->kind != UrnKind::critical) {
    out.push_back(skipped("T3", std::string(to_string(s.classification->kind)) + " urn"));
  } else if (!is_irreducible(s.A)) {
    out.push_back(skipped("T3", "reducible urn"));
  } else {
    try {
      const CovarianceVerdict v = theorem_t3_check(*m.covariance, *s.classification);
      out.push_back(Verdict{v.pass ? Status::pass : Status::fail, "T3", v.relative_change, 0.10 + v.noise_allowance,
                            "n=" + std::to_string(v.n_prev) + ".." + std::to_string(v.n_last) +
                                " normalized Cov_11=" + num(v.normalized_last(0, 0))});
    } catch (const PreconditionError& e) {
      out.push_back(skipped("T3", e.what()));
    }
  }

  for (auto& v : bound_verdicts(ctx, s, chain)) out.push_back(std::move(v));

  {
    const long n = std::min<long>(cfg.n_max, 1024);
    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(s.A.rows(), s.A.cols());
    const MartingaleSample sample =
        urn_martingale(ctx.spec, normalized_product_weights(chain, identity, n), cfg.replicates, cfg.seed, cfg.orders,
                       cfg.workers);
    for (const double p : cfg.orders) {
      const BurkholderVerdict v = burkholder_check(sample, p, boot);
      out.push_back(Verdict{v.burkholder_pass ? Status::pass : Status::fail, "Burkholder p=" + num(p),
                            v.martingale_norm, (p - 1.0) * v.square_norm,
                            "n=" + std::to_string(n) + " margin_z=" + num(v.margin_z)});
      out.push_back(Verdict{v.ll2_pass ? Status::pass : Status::fail, "LL2 p=" + num(p), v.empirical_cp, p - 1.0,
                            "empirical C_p"});
    }
  }
  return out;
}

void write_verdicts(std::ostream& os, const std::vector<Verdict>& vs) {
  os << "verdict,check,value,threshold,detail\n";
  for (const auto& v : vs) {
    const char* tag = v.status == Status::pass ? "PASS" : v.status == Status::fail ? "FAIL" : "SKIP";
    std::string detail = v.detail;
    for (auto& ch : detail)
      if (ch == ',') ch = ';';
    os << tag << "," << v.check << "," << num(v.value) << "," << num(v.threshold) << "," << detail << "\n";
  }
}

bool any_failed(const std::vector<Verdict>& vs) {
  for (const auto& v : vs)
    if (v.status == Status::fail) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_validate(const Context& ctx, std::ostream& os) {
  if (ctx.balance.balanced)
    os << "balanced, b=" << num(ctx.balance.b);
  else
    os << "not balanced, worst deviation=" << num(ctx.balance.worst_deviation);
  os << ", " << (static_tenability_check(ctx.spec) == Tenability::provably_tenable ? "provably tenable"
                                                                                   : "tenability unknown")
     << "\n";
  return kExitPass;
}

int cmd_spectrum(const Context& ctx, std::ostream& os) {
  const SpectralStage s = spectral_stage(ctx);
  banner(os, ctx);
  write_spectrum(os, s);
  return kExitPass;
}

void write_means(std::ostream& os, const Context& ctx, ProductChain& chain) {
  os << "n";
  for (Eigen::Index i = 0; i < ctx.spec.colours(); ++i) os << ",EX_" << i + 1;
  os << "\n";
  std::vector<long> grid{0};
  for (const long n : checkpoint_grid(ctx.cfg.n_max, ctx.cfg.checkpoint_ratio)) grid.push_back(n);
  const auto means = mean_series(chain, ctx.spec.initial, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    os << grid[k];
    for (Eigen::Index i = 0; i < means[k].size(); ++i) os << "," << num(means[k][i]);
    os << "\n";
  }
}

int cmd_mean(const Context& ctx, std::ostream& os) {
  ProductChain chain(intensity_matrix(ctx.spec), require_balanced(ctx));
  banner(os, ctx);
  write_means(os, ctx, chain);
  return kExitPass;
}

int cmd_simulate(const Context& ctx, std::ostream& os, std::ostream& err) {
  const RunConfig& cfg = ctx.cfg;
  RunOptions options;
  options.checkpoint_ratio = cfg.checkpoint_ratio;
  options.allow_unbalanced = cfg.allow_unbalanced;
  options.record.increments = cfg.record_increments;
  options.record.drawn = cfg.record_increments;
  options.record.every_step = cfg.record_increments;
  if (!ctx.balance.balanced && !cfg.allow_unbalanced)
    throw InputError("urn is not balanced; pass --allow-unbalanced to simulate it anyway");
  const auto batch = run_batch(ctx.spec, cfg.n_max, cfg.replicates, cfg.seed, options, cfg.workers);

  const Eigen::Index q = ctx.spec.colours();
  banner(os, ctx);
  os << "replicate,n";
  for (Eigen::Index i = 0; i < q; ++i) os << ",X_" << i + 1;
  if (cfg.record_increments) {
    os << ",drawn";
    for (Eigen::Index i = 0; i < q; ++i) os << ",Y_" << i + 1;
  }
  os << "\n";
  int failures = 0;
  for (std::size_t r = 0; r < batch.size(); ++r) {
    const Trajectory& t = batch[r];
    for (std::size_t k = 0; k < t.checkpoints.size(); ++k) {
      const auto& cp = t.checkpoints[k];
      os << r << "," << cp.n;
      for (Eigen::Index i = 0; i < q; ++i) os << "," << num(cp.state[i]);
      if (cfg.record_increments) {
        os << "," << t.drawn[k] + 1;
        for (Eigen::Index i = 0; i < q; ++i) os << "," << num(t.increments[k][i]);
      }
      os << "\n";
    }
    if (!t.tenability_ok) {
      ++failures;
      os << "# replicate " << r << " stopped: " << t.diagnostic << "\n";
    }
  }
  if (failures > 0) {
    err << failures << " replicate(s) left the tenable region\n";
    return kExitVerdictFailure;
  }
  return kExitPass;
}

int cmd_moments(const Context& ctx, std::ostream& os) {
  ProductChain chain(intensity_matrix(ctx.spec), require_balanced(ctx));
  const SpectralStage s = spectral_stage(ctx);
  const SimulationStage sim = simulation_stage(ctx, chain);
  const MomentStage m = moment_stage(ctx, s, sim);
  banner(os, ctx);
  write_moments(os, m);
  return kExitPass;
}

int cmd_verify(const Context& ctx, std::ostream& os) {
  ProductChain chain(intensity_matrix(ctx.spec), require_balanced(ctx));
  const SpectralStage s = spectral_stage(ctx);
  const SimulationStage sim = simulation_stage(ctx, chain);
  const MomentStage m = moment_stage(ctx, s, sim);
  const auto vs = verdicts(ctx, s, chain, sim, m);
  banner(os, ctx);
  write_verdicts(os, vs);
  return any_failed(vs) ? kExitVerdictFailure : kExitPass;
}

int cmd_verify_bounds(const Context& ctx, std::ostream& os) {
  ProductChain chain(intensity_matrix(ctx.spec), require_balanced(ctx));
  const SpectralStage s = spectral_stage(ctx);
  const auto vs = bound_verdicts(ctx, s, chain);
  banner(os, ctx);
  write_verdicts(os, vs);
  return any_failed(vs) ? kExitVerdictFailure : kExitPass;
}

int cmd_report(const Context& ctx, std::ostream& os) {
  ProductChain chain(intensity_matrix(ctx.spec), require_balanced(ctx));
  const SpectralStage s = spectral_stage(ctx);
  const SimulationStage sim = simulation_stage(ctx, chain);
  const MomentStage m = moment_stage(ctx, s, sim);
  const auto vs = verdicts(ctx, s, chain, sim, m);

  banner(os, ctx);
  os << "# section: spectrum\n";
  write_spectrum(os, s);
  os << "# section: mean\n";
  write_means(os, ctx, chain);
  os << "# section: simulate\n";
  long steps = 0;
  for (const auto& t : sim.batch) steps += t.steps;
  os << "replicates,n_max,total_steps\n" << sim.batch.size() << "," << ctx.cfg.n_max << "," << steps << "\n";
  os << "# section: moments\n";
  write_moments(os, m);
  os << "# section: verify\n";
  write_verdicts(os, vs);

  std::size_t pass = 0, fail = 0, skip = 0;
  for (const auto& v : vs) (v.status == Status::pass ? pass : v.status == Status::fail ? fail : skip)++;
  os << "# summary:";
  for (const auto& [p, series] : m.total)
    os << " p=" << num(p) << " fitted_exponent=" << (series.fit ? num(series.fit->alpha_hat) : "nan")
       << " theoretical_exponent=" << num(series.theory.exponent) << ";";
  os << " verdicts pass=" << pass << " fail=" << fail << " skip=" << skip << "\n";
  return fail > 0 ? kExitVerdictFailure : kExitPass;
}

void check_config(const RunConfig& cfg) {
  if (cfg.n_max < 1) throw InputError("--n-max must be at least 1");
  if (!(cfg.checkpoint_ratio > 1.0)) throw InputError("--checkpoint-ratio must exceed 1");
  if (cfg.replicates < 1) throw InputError("--replicates must be at least 1");
  for (const double p : cfg.orders)
    if (!(p >= 2.0)) throw InputError("--p must be at least 2");
  const bool statistical = cfg.subcommand == "moments" || cfg.subcommand == "verify" || cfg.subcommand == "report";
  if (statistical && cfg.replicates < kMinReplicates)
    throw InputError("moment estimation needs --replicates >= " + std::to_string(kMinReplicates));
}

int dispatch(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  check_config(cfg);
  Context ctx;
  ctx.cfg = cfg;
  try {
    ctx.spec = load_spec(cfg.spec_path);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  ctx.balance = check_balanced(ctx.spec);
  ctx.digest = spec_digest_hex(ctx.spec);

  const std::string& c = cfg.subcommand;
  if (c == "validate") return cmd_validate(ctx, os);
  if (c == "spectrum") return cmd_spectrum(ctx, os);
  if (c == "mean") return cmd_mean(ctx, os);
  if (c == "simulate") return cmd_simulate(ctx, os, err);
  if (c == "moments") return cmd_moments(ctx, os);
  if (c == "verify") return cmd_verify(ctx, os);
  if (c == "verify-bounds") return cmd_verify_bounds(ctx, os);
  if (c == "report") return cmd_report(ctx, os);
  throw InputError("unknown subcommand " + c);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Balanced generalized Polya urn toolkit", "polya-urn"};
  app.set_version_flag("--version", POLYA_VERSION);
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands{
      {"validate", "check a spec file and report balance and tenability"},
      {"spectrum", "eigenvalues, Jordan indices and urn classification (CSV)"},
      {"mean", "exact E X_n on the checkpoint grid (CSV)"},
      {"simulate", "simulate replicate paths (CSV row per replicate and checkpoint)"},
      {"moments", "Monte Carlo central moments with fitted growth exponents (CSV)"},
      {"verify", "pass/fail verdict per identity, theorem and lemma (CSV)"},
      {"verify-bounds", "product-norm bound verdicts for every eigenvalue (CSV)"},
      {"report", "spectrum, mean, simulate, moments and verify in one summary"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("spec", cfg.spec_path, "urn spec (JSON)")->required();
    if (name == "validate") continue;
    sub->add_option("--n-max", cfg.n_max, "number of draws")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    sub->add_option("--checkpoint-ratio", cfg.checkpoint_ratio, "geometric checkpoint ratio")->capture_default_str();
    if (name == "spectrum" || name == "mean" || name == "verify-bounds") {
      sub->add_option("--tolerance", cfg.tolerance, "slack on fitted exponents")->capture_default_str();
    } else {
      sub->add_option("--replicates", cfg.replicates, "number of replicate paths")->capture_default_str();
      sub->add_option("--workers", cfg.workers, "worker threads (0 = all cores); never changes output")
          ->capture_default_str();
    }
    if (name == "moments" || name == "verify" || name == "report") {
      sub->add_option("--p", cfg.orders, "moment order, repeatable")->capture_default_str();
      sub->add_option("--tolerance", cfg.tolerance, "slack on fitted exponents")->capture_default_str();
      sub->add_option("--fit-min", cfg.fit_min, "smallest n used in growth fits")->capture_default_str();
    }
    if (name == "simulate") {
      sub->add_flag("--allow-unbalanced", cfg.allow_unbalanced, "simulate an unbalanced spec");
      sub->add_flag("--record-increments", cfg.record_increments,
                    "one row per draw with the drawn colour and martingale increment");
    }
    sub->add_option("--out", cfg.out, "write output to this file instead of stdout");
  }

  std::vector<const char*> argv{"polya-urn"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForVersion&) {
    out << POLYA_VERSION << "\n";
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInputError;
  }
  for (const CLI::App* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();

  try {
    if (cfg.out.empty()) return dispatch(cfg, out, err);
    std::ostringstream buffer;
    const int status = dispatch(cfg, buffer, err);
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) throw InputError("cannot open output file " + cfg.out);
    file << buffer.str();
    return status;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InvalidSpec& e) {
    err << "error: invalid spec: " << e.what() << "\n";
    return kExitInputError;
  } catch (const NotBalanced& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerdictFailure;
  }
}

}  // namespace polya::cli
