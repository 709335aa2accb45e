#include "adahuber/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "adahuber/csv_io.hpp"
#include "adahuber/error.hpp"
#include "adahuber/huber_core.hpp"
#include "adahuber/report.hpp"
#include "adahuber/robust_design.hpp"
#include "adahuber/simlab.hpp"
#include "adahuber/solver_irls.hpp"
#include "adahuber/solver_lamm.hpp"
#include "adahuber/tuning.hpp"
#include "adahuber/version.hpp"

namespace adahuber::cli {
namespace {

char delimiter_of(const RunConfig& cfg) {
  if (cfg.delimiter.size() != 1) throw InvalidArgument("--delimiter must be a single byte");
  return cfg.delimiter[0];
}

void apply_overrides(const RunConfig& cfg, SolverConfig& s) {
  if (cfg.tol) s.tol = *cfg.tol;
  if (cfg.max_iter) s.max_iter = *cfg.max_iter;
  if (cfg.phi0) s.phi0 = *cfg.phi0;
  if (cfg.gamma_u) s.gamma_u = *cfg.gamma_u;
  s.validate();
}

void emit(const RunConfig& cfg, const Table& table, std::ostream& out) {
  const OutputFormat fmt = parse_format(cfg.format);
  if (cfg.out.empty()) {
    write_table(out, table, fmt);
  } else {
    write_table(cfg.out, table, fmt);
  }
}

void emit_sibling(const RunConfig& cfg, const std::string& suffix, const Table& table, std::ostream& out) {
  const OutputFormat fmt = parse_format(cfg.format);
  if (cfg.out.empty()) {
    out << '\n';
    write_table(out, table, fmt);
  } else {
    write_table(sibling_path(cfg.out, suffix, extension(fmt)), table, fmt);
  }
}

void emit_metadata(const RunConfig& cfg, const nlohmann::json& meta) {
  if (cfg.out.empty()) return;
  const std::string path = sibling_path(cfg.out, ".meta", ".json");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write '" + path + "'");
  os << meta.dump(2) << '\n';
}

std::vector<std::string> coefficient_names(const Dataset& data, const std::vector<std::string>& features) {
  std::vector<std::string> names = features;
  if (data.intercept()) names.emplace_back("(intercept)");
  return names;
}

Table fit_report(const std::string& command, const Dataset& data, const std::vector<std::string>& names,
                 const FitResult& fit, double in_sample_mae) {
  Table t{{"field", "value"}, {}};
  t.add({"command", command});
  t.add({"n", data.n()});
  t.add({"d", data.d()});
  t.add({"tau", fit.params.tau});
  t.add({"lambda", fit.params.lambda});
  t.add({"varpi", fit.params.varpi ? nlohmann::json(*fit.params.varpi) : nlohmann::json(nullptr)});
  t.add({"converged", fit.converged});
  t.add({"iterations", fit.iterations});
  t.add({"objective", fit.objective});
  t.add({"gradient_norm", fit.gradient_norm});
  t.add({"mae", in_sample_mae});
  for (std::size_t j = 0; j < names.size(); ++j) t.add({"coef." + names[j], fit.beta[static_cast<Index>(j)]});
  return t;
}

NoiseSpec parse_noise(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw InvalidArgument("--noise expects family:parameter, e.g. t:1.5");
  const std::string family = s.substr(0, colon);
  const double v = std::stod(s.substr(colon + 1));
  if (family == "normal") return NoiseSpec::normal(v);
  if (family == "t" || family == "student_t") return NoiseSpec::student_t(v);
  if (family == "lognormal") return NoiseSpec::lognormal(v, true);
  if (family == "lognormal_raw") return NoiseSpec::lognormal(v, false);
  throw InvalidArgument("unknown noise family '" + family + "'");
}

std::vector<double> default_df_grid() {
  std::vector<double> g;
  for (int k = 11; k <= 30; ++k) g.push_back(k / 10.0);
  return g;
}

}  // namespace

int resolve_thread_count(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("ADAHUBER_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.input.empty()) throw InvalidArgument("--input is required");
  const LoadedDataset loaded = load_csv(cfg.input, cfg.response, delimiter_of(cfg), cfg.intercept);
  const Dataset& data = loaded.data;
  const bool penalized = cfg.subcommand != "fit";
  const bool truncated = cfg.subcommand == "fit-truncated";
  const double t = cfg.t.value_or(std::log(static_cast<double>(data.n())));

  HuberParams params;
  if (!cfg.tau || (penalized && !cfg.lambda)) {
    const double sigma = estimate_sigma_crude(data.y());
    const double n_eff = effective_sample_size(data.n(), data.d(), penalized && data.d() >= 2);
    params = default_params(sigma, n_eff, t, cfg.c_tau, cfg.c_lambda);
  }
  if (cfg.tau) params.tau = *cfg.tau;
  params.lambda = penalized ? cfg.lambda.value_or(params.lambda) : 0.0;
  if (truncated) {
    if (cfg.varpi) {
      params.varpi = *cfg.varpi;
    } else {
      const double ratio = data.d() >= 2 ? static_cast<double>(data.n()) / std::log(static_cast<double>(data.d()))
                                         : static_cast<double>(data.n());
      params.varpi = cfg.c_varpi * std::pow(ratio, 0.25);
    }
  }
  params.validate();

  SolverConfig solver = penalized ? SolverConfig::lamm_defaults() : SolverConfig::irls_defaults();
  apply_overrides(cfg, solver);

  FitResult fit;
  Vector pred;
  if (truncated) {
    fit = fit_truncated(data, params, solver);
    pred = truncate_design(data, *params.varpi).design() * fit.beta;
  } else if (penalized) {
    fit = fit_l1_huber(data, params, solver);
    pred = data.design() * fit.beta;
  } else {
    fit = fit_huber(data, params.tau, solver);
    pred = data.design() * fit.beta;
  }
  fit.params = params;
  emit(cfg, fit_report(cfg.subcommand, data, coefficient_names(data, loaded.features), fit, mae(data.y(), pred)),
       out);
  if (!fit.converged) {
    err << "adahuber " << cfg.subcommand << ": not converged after " << fit.iterations << " iterations\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_tune(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.input.empty()) throw InvalidArgument("--input is required");
  const LoadedDataset loaded = load_csv(cfg.input, cfg.response, delimiter_of(cfg), cfg.intercept);
  const Dataset& data = loaded.data;
  const auto names = coefficient_names(data, loaded.features);

  if (cfg.method == "cv") {
    TuningGrid grid;
    grid.c_tau = cfg.grid_tau.empty() ? cfg.grid : cfg.grid_tau;
    // lambda is zero in low dimensions, so c_lambda candidates would only repeat work
    if (!cfg.grid_lambda.empty()) {
      grid.c_lambda = cfg.grid_lambda;
    } else {
      grid.c_lambda = cfg.high_dim ? cfg.grid : std::vector<double>{1.0};
    }
    grid.folds = cfg.folds;
    grid.t = cfg.t;
    grid.seed = cfg.seed;
    apply_overrides(cfg, grid.irls);
    apply_overrides(cfg, grid.lamm);
    const CvResult cv = cross_validate(data, grid, cfg.high_dim);

    Table table{{"c_tau", "c_lambda", "mean_mae", "failed", "selected", "forced"}, {}};
    for (const auto& c : cv.table)
      table.add({c.c_tau, c.c_lambda, c.mean_mae, c.failed, c.c_tau == cv.c_tau && c.c_lambda == cv.c_lambda,
                 cv.forced});
    emit(cfg, table, out);
    FitResult fit = cv.fit;
    fit.params = cv.params;
    emit_sibling(cfg, ".fit", fit_report("tune-cv", data, names, fit, mae(data.y(), data.design() * fit.beta)), out);
    err << "selected c_tau=" << cv.c_tau << " c_lambda=" << cv.c_lambda << (cv.forced ? " (forced)" : "") << '\n';
    return fit.converged ? kExitOk : kExitNotConverged;
  }

  if (cfg.method == "lepski") {
    LepskiGrid grid = LepskiGrid::defaults(data, cfg.lepski_k, cfg.lepski_a);
    if (cfg.t) grid.t = *cfg.t;
    SolverConfig solver = SolverConfig::irls_defaults();
    apply_overrides(cfg, solver);
    const LepskiResult res = lepski_select(data, grid, solver);

    Table table{{"j", "sigma", "tau", "threshold", "max_distance", "admissible", "selected", "forced"}, {}};
    const int m = static_cast<int>(res.sigmas.size());
    for (int j = 0; j < m; ++j) {
      double worst = 0.0;
      for (int k = j + 1; k < m; ++k) worst = std::max(worst, res.distances(k, j));
      const auto js = static_cast<std::size_t>(j);
      table.add({j, res.sigmas[js], res.taus[js], res.thresholds[js], worst, worst <= res.thresholds[js],
                 j == res.selected, m == 1});
    }
    emit(cfg, table, out);
    Table fit = fit_report("tune-lepski", data, names, res.fit, mae(data.y(), data.design() * res.fit.beta));
    fit.add({"selected_j", res.selected});
    fit.add({"l_tilde", res.l_tilde});
    emit_sibling(cfg, ".fit", fit, out);
    err << "selected j=" << res.selected << " tau=" << res.taus[static_cast<std::size_t>(res.selected)] << '\n';
    return res.fit.converged ? kExitOk : kExitNotConverged;
  }
  throw InvalidArgument("unknown --method '" + cfg.method + "' (expected cv or lepski)");
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const int threads = resolve_thread_count(cfg.threads);
  nlohmann::json meta;
  double wall = 0;

  if (cfg.experiment == "table1") {
    Table1Options opt;
    opt.reps = cfg.reps.value_or(100);
    if (cfg.n) opt.n = *cfg.n;
    if (cfg.d) opt.d = *cfg.d;
    opt.seed = cfg.seed;
    opt.folds = cfg.folds;
    if (!cfg.grid_tau.empty()) opt.c_tau = cfg.grid_tau;
    opt.lognormal_centered = !cfg.raw_lognormal;
    opt.threads = threads;
    const ExperimentReport rep = run_table1(opt);
    emit(cfg, records_table(rep.records), out);
    emit_sibling(cfg, ".summary", summary_table(rep.summary), out);
    meta = rep.metadata;
    wall = rep.wall_seconds;
  } else if (cfg.experiment == "phase") {
    PhaseOptions opt;
    opt.df_grid = cfg.df_grid.empty() ? default_df_grid() : cfg.df_grid;
    if (!cfg.n_grid.empty()) {
      opt.n_grid.assign(cfg.n_grid.begin(), cfg.n_grid.end());
    } else if (cfg.n) {
      opt.n_grid = {*cfg.n};
    } else {
      opt.n_grid = {500};
    }
    opt.high_dim = cfg.high_dim;
    opt.d = cfg.d.value_or(cfg.high_dim ? 1000 : 5);
    opt.reps = cfg.reps.value_or(200);
    opt.seed = cfg.seed;
    opt.c_tau = cfg.c_tau == 1.0 ? opt.c_tau : cfg.c_tau;
    opt.c_lambda = cfg.c_lambda;
    opt.t = cfg.t;
    opt.threads = threads;
    const PhaseReport rep = run_phase_transition(opt);
    emit(cfg, phase_table(rep.rows), out);
    emit_sibling(cfg, ".records", records_table(rep.detail.records), out);
    meta = rep.detail.metadata;
    wall = rep.detail.wall_seconds;
  } else if (cfg.experiment == "neff") {
    NeffOptions opt;
    if (!cfg.d_grid.empty()) opt.d_grid.assign(cfg.d_grid.begin(), cfg.d_grid.end());
    if (!cfg.n_grid.empty()) {
      opt.n_grid.assign(cfg.n_grid.begin(), cfg.n_grid.end());
    } else {
      opt.ratio_grid = cfg.ratio_grid.empty() ? std::vector<double>{20, 40, 80, 160} : cfg.ratio_grid;
    }
    opt.reps = cfg.reps.value_or(100);
    opt.seed = cfg.seed;
    opt.c_tau = cfg.c_tau == 1.0 ? opt.c_tau : cfg.c_tau;
    opt.c_lambda = cfg.c_lambda;
    opt.threads = threads;
    const NeffReport rep = run_neff_experiment(opt);
    emit(cfg, neff_table(rep.rows), out);
    emit_sibling(cfg, ".records", records_table(rep.detail.records), out);
    meta = rep.detail.metadata;
    wall = rep.detail.wall_seconds;
  } else if (cfg.experiment == "dataset") {
    if (cfg.out.empty()) throw InvalidArgument("simulate --experiment dataset needs --out");
    ExperimentSpec spec;
    spec.n = cfg.n.value_or(100);
    spec.d = cfg.d.value_or(5);
    spec.beta_star = default_beta_star(spec.d);
    spec.noise = parse_noise(cfg.noise);
    spec.seed = cfg.seed;
    const Dataset data = gen_linear_data(spec);
    std::vector<std::string> names;
    for (Index j = 0; j < spec.d; ++j) names.push_back("x" + std::to_string(j + 1));
    save_csv(cfg.out, data, cfg.response, names, delimiter_of(cfg));
    meta = {{"experiment", "dataset"}, {"seed", cfg.seed}, {"version", kVersion},
            {"generator", std::string(kGeneratorId)}, {"n", spec.n}, {"d", spec.d}, {"noise", spec.noise.name()}};
  } else {
    throw InvalidArgument("unknown --experiment '" + cfg.experiment + "' (expected table1, phase, neff or dataset)");
  }
  emit_metadata(cfg, meta);
  err << "simulate " << cfg.experiment << ": done in " << wall << " s\n";
  return kExitOk;
}

int cmd_diagnose(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.input.empty()) throw InvalidArgument("--input is required");
  const CsvTable data = read_csv_table(cfg.input, delimiter_of(cfg));
  Table table{{"column", "n", "kurtosis", "exceeds_normal_3", "exceeds_t5_9", "degenerate"}, {}};
  int heavy = 0, severe = 0;
  for (std::size_t c = 0; c < data.header.size(); ++c) {
    const Vector col = data.values.col(static_cast<Index>(c));
    try {
      const double k = kurtosis(col);
      // Flag only past three standard errors of the normal-sample kurtosis.
      const double margin = 3.0 * std::sqrt(24.0 / static_cast<double>(col.size()));
      const bool over3 = k > 3.0 + margin, over9 = k > 9.0 + margin;
      heavy += over3;
      severe += over9;
      table.add({data.header[c], col.size(), k, over3, over9, false});
    } catch (const std::exception&) {
      table.add({data.header[c], col.size(), nullptr, false, false, true});
    }
  }
  emit(cfg, table, out);
  err << heavy << " of " << data.header.size() << " columns have kurtosis > 3 (normal reference), " << severe
      << " exceed 9 (t_5)\n";
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive Huber regression toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Master seed");
    sub->add_option("--out", cfg.out, "Output path (stdout when omitted)");
    sub->add_option("--format", cfg.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    sub->add_option("--threads", cfg.threads, "Worker threads (fallback: ADAHUBER_THREADS)");
  };
  auto data_opts = [&cfg](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "CSV file with a header row")->required();
    sub->add_option("--response", cfg.response, "Response column name");
    sub->add_option("--delimiter", cfg.delimiter, "Single-byte field delimiter");
    sub->add_flag("--intercept", cfg.intercept, "Fit an unpenalized intercept");
  };
  auto solver_opts = [&cfg](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "Coefficient-change tolerance");
    sub->add_option("--max-iter", cfg.max_iter, "Iteration cap");
    sub->add_option("--phi0", cfg.phi0, "LAMM starting quadratic parameter");
    sub->add_option("--gamma-u", cfg.gamma_u, "LAMM inflation factor");
  };
  auto tuning_consts = [&cfg](CLI::App* sub) {
    sub->add_option("--c-tau", cfg.c_tau, "Constant in the tau rule");
    sub->add_option("--c-lambda", cfg.c_lambda, "Constant in the lambda rule");
    sub->add_option("--t", cfg.t, "Confidence parameter (default log n)");
  };

  for (const char* name : {"fit", "fit-l1", "fit-truncated"}) {
    CLI::App* sub = app.add_subcommand(name, std::string(name) == "fit"             ? "Adaptive Huber regression (IRLS)"
                                             : std::string(name) == "fit-l1"        ? "l1-regularized adaptive Huber (LAMM)"
                                                                                    : "Truncated-covariate l1 adaptive Huber");
    common(sub);
    data_opts(sub);
    solver_opts(sub);
    tuning_consts(sub);
    sub->add_option("--tau", cfg.tau, "Robustification parameter");
    if (std::string(name) != "fit") sub->add_option("--lambda", cfg.lambda, "l1 penalty level");
    if (std::string(name) == "fit-truncated") {
      sub->add_option("--varpi", cfg.varpi, "Covariate truncation level");
      sub->add_option("--c-varpi", cfg.c_varpi, "Constant in the varpi rule");
    }
  }

  CLI::App* tune = app.add_subcommand("tune", "Select tuning parameters by cross-validation or Lepski's method");
  common(tune);
  data_opts(tune);
  solver_opts(tune);
  tune->add_option("--t", cfg.t, "Confidence parameter (default log n)");
  tune->add_option("--method", cfg.method, "cv or lepski")->check(CLI::IsMember({"cv", "lepski"}));
  tune->add_option("--grid", cfg.grid, "Candidate constants for c_tau and c_lambda")->delimiter(',');
  tune->add_option("--grid-tau", cfg.grid_tau, "Override c_tau candidates")->delimiter(',');
  tune->add_option("--grid-lambda", cfg.grid_lambda, "Override c_lambda candidates")->delimiter(',');
  tune->add_option("--folds", cfg.folds, "Cross-validation folds");
  tune->add_flag("--high-dim", cfg.high_dim, "Use the l1 estimator and n/log d scaling");
  tune->add_option("--lepski-k", cfg.lepski_k, "sigma range factor K");
  tune->add_option("--lepski-a", cfg.lepski_a, "Grid ratio a");

  CLI::App* sim = app.add_subcommand("simulate", "Run a Monte Carlo experiment");
  common(sim);
  tuning_consts(sim);
  sim->add_option("--experiment", cfg.experiment, "table1, phase, neff or dataset")
      ->check(CLI::IsMember({"table1", "phase", "neff", "dataset"}));
  sim->add_option("--reps", cfg.reps, "Replications");
  sim->add_option("--n", cfg.n, "Sample size");
  sim->add_option("--d", cfg.d, "Dimension");
  sim->add_option("--df-grid", cfg.df_grid, "Student-t degrees of freedom")->delimiter(',');
  sim->add_option("--n-grid", cfg.n_grid, "Sample sizes")->delimiter(',');
  sim->add_option("--d-grid", cfg.d_grid, "Dimensions")->delimiter(',');
  sim->add_option("--ratio-grid", cfg.ratio_grid, "Target n/log d values")->delimiter(',');
  sim->add_option("--grid", cfg.grid_tau, "Candidate c_tau constants (table1)")->delimiter(',');
  sim->add_option("--folds", cfg.folds, "Cross-validation folds (table1)");
  sim->add_flag("--high-dim", cfg.high_dim, "High-dimensional phase transition");
  sim->add_flag("--raw-lognormal", cfg.raw_lognormal, "Do not center log-normal noise");
  sim->add_option("--noise", cfg.noise, "Noise for --experiment dataset (normal:4, t:1.5, lognormal:4)");
  sim->add_option("--response", cfg.response, "Response column name for --experiment dataset");
  sim->add_option("--delimiter", cfg.delimiter, "Field delimiter for --experiment dataset");

  CLI::App* diag = app.add_subcommand("diagnose", "Per-column kurtosis table");
  common(diag);
  diag->add_option("--input", cfg.input, "CSV file with a header row")->required();
  diag->add_option("--delimiter", cfg.delimiter, "Single-byte field delimiter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    const int threads = resolve_thread_count(cfg.threads);
    if (threads > 0) omp_set_num_threads(threads);
    if (cfg.subcommand == "tune") return cmd_tune(cfg, out, err);
    if (cfg.subcommand == "simulate") return cmd_simulate(cfg, out, err);
    if (cfg.subcommand == "diagnose") return cmd_diagnose(cfg, out, err);
    return cmd_fit(cfg, out, err);
  } catch (const std::exception& e) {
    err << "adahuber " << cfg.subcommand << ": error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace adahuber::cli
