#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "sparse_ar/error.hpp"
#include "sparse_ar/estimator.hpp"
#include "sparse_ar/forecast.hpp"
#include "sparse_ar/io.hpp"
#include "sparse_ar/montecarlo.hpp"
#include "sparse_ar/selection.hpp"

namespace sparse_ar::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct Options {
  std::optional<std::size_t> threads;
  std::optional<std::uint64_t> seed;

  // simulate
  std::string model_path;
  std::size_t n = 0;
  std::size_t burn_in = kDefaultBurnIn;

  // fit / select / forecast
  std::string input;
  std::string out;
  std::size_t order = 0;
  std::string innovation = "gaussian";
  std::optional<double> df;
  std::optional<double> sigma;
  std::string penalty = "scad";
  std::string lambda_grid;
  std::optional<double> lambda;
  std::vector<double> a{kDefaultScadA};
  double split = 0.8;
  std::size_t pmax = 0;
  std::string fit_path;
  int difference = 0;
  std::size_t holdout = 0;
  std::vector<std::size_t> steps{1};

  // mc
  std::string design_path;
  std::string out_dir;
};

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::uint64_t resolve_seed(const Options& o, std::ostream& err) {
  if (o.seed) return *o.seed;
  const std::uint64_t seed = entropy_seed();
  err << "seed: " << seed << '\n';
  return seed;
}

std::size_t resolve_threads(const Options& o) {
  if (o.threads) return *o.threads;
  if (const char* env = std::getenv("SPARSE_AR_THREADS"); env && *env) {
    std::size_t value = 0;
    const char* end = env + std::char_traits<char>::length(env);
    auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec != std::errc() || ptr != end || value == 0) {
      throw UsageError("SPARSE_AR_THREADS must be a positive integer");
    }
    return value;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Writes via `write` to `path`, or to `out` when path is empty.
template <typename Fn>
void emit(const std::string& path, std::ostream& out, Fn&& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw DegenerateData("cannot open " + path + " for writing");
  write(file);
  if (!file) throw DegenerateData("failed writing " + path);
}

void emit_json(const std::string& path, std::ostream& out, const json& j) {
  emit(path, out, [&](std::ostream& s) { s << j.dump(2) << '\n'; });
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  const ArModel model = load_model_toml(o.model_path);
  const std::uint64_t seed = resolve_seed(o, err);
  const TimeSeries series = simulate(model, o.n, o.burn_in, seed);
  emit(o.out, out, [&](std::ostream& s) { write_series_csv(s, series); });
  return kOk;
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream&) {
  const InnovationFamily innovation = make_innovation(o.innovation, o.sigma, o.df);
  if (o.penalty != "none" && o.lambda_grid.empty() == !o.lambda) {
    throw UsageError("--penalty " + o.penalty + " needs exactly one of --lambda or --lambda-grid");
  }
  if (o.penalty == "none" && (o.lambda || !o.lambda_grid.empty())) {
    throw UsageError("--penalty none takes no lambda");
  }
  if (o.penalty != "scad" && o.a.size() != 1) throw UsageError("several --a values only make sense for scad");

  const TimeSeries series = read_series_csv(fs::path(o.input));
  FitResult fit;
  if (o.penalty == "none") {
    fit = fit_mle(series, o.order, innovation);
  } else {
    const PenaltyKind kind = o.penalty == "scad" ? PenaltyKind::kScad : PenaltyKind::kLasso;
    if (o.lambda) {
      if (o.a.size() != 1) throw UsageError("a fixed --lambda takes a single --a");
      PenaltySpec pen = PenaltySpec::lasso(0.0);
      try {
        pen = kind == PenaltyKind::kScad ? PenaltySpec::scad(*o.lambda, o.a.front()) : PenaltySpec::lasso(*o.lambda);
      } catch (const InvalidInput& e) {
        throw UsageError(e.what());
      }
      fit = fit_pcmle(series, o.order, innovation, pen);
    } else {
      TuningGrid grid;
      grid.lambdas = parse_lambda_grid(o.lambda_grid);
      grid.as = o.a;
      grid.split_fraction = o.split;
      try {
        grid.validate();
      } catch (const InvalidInput& e) {
        throw UsageError(e.what());
      }
      fit = tune(series, o.order, innovation, kind, grid);
    }
  }
  emit_json(o.out, out, fit_to_json(fit, innovation));
  return kOk;
}

int cmd_select(const Options& o, std::ostream& out, std::ostream&) {
  const TimeSeries series = read_series_csv(fs::path(o.input));
  const OrderSelection sel = fpe_select(series, o.pmax);
  json j;
  j["chosen_order"] = sel.chosen_order;
  j["candidates"] = json::array();
  for (const auto& c : sel.candidates) {
    j["candidates"].push_back({{"order", c.order}, {"sigma2", c.sigma2}, {"fpe", c.fpe}});
  }
  emit_json(o.out, out, j);
  return kOk;
}

Eigen::VectorXd load_fit_estimates(const std::string& path, json& fit) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open fit file " + path);
  try {
    fit = json::parse(in);
    const auto values = fit.at("estimates").get<std::vector<double>>();
    if (values.empty()) throw UsageError("fit file has no estimates");
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  } catch (const json::exception& e) {
    throw UsageError("bad fit file " + path + ": " + e.what());
  }
}

int cmd_forecast(const Options& o, std::ostream& out, std::ostream&) {
  json fit;
  const Eigen::VectorXd coefs = load_fit_estimates(o.fit_path, fit);
  const TimeSeries series = read_series_csv(fs::path(o.input));
  if (o.holdout >= series.size()) throw InvalidInput("holdout must be shorter than the input series");
  const std::size_t in_sample = series.size() - o.holdout;

  json j;
  j["method"] = fit.value("method", "unknown");
  j["order"] = coefs.size();
  j["difference"] = o.difference;
  j["in_sample"] = in_sample;
  j["holdout"] = o.holdout;
  j["mae"] = json::object();
  j["rmse"] = json::object();
  j["steps"] = json::array();
  for (std::size_t k : o.steps) {
    const ForecastScore s = score_forecasts(series, coefs, in_sample, k, o.holdout, o.difference);
    const std::string key = std::to_string(k);
    j["mae"][key] = s.mae;
    j["rmse"][key] = s.rmse;
    j["steps"].push_back({{"steps", s.steps},
                          {"origins", s.origins},
                          {"mae", s.mae},
                          {"rmse", s.rmse},
                          {"conventional_mae", s.conventional_mae},
                          {"conventional_rmse", s.conventional_rmse}});
  }
  emit_json(o.out, out, j);
  return kOk;
}

json design_to_json(const ExperimentDesign& d) {
  json methods = json::array();
  for (const auto& m : d.methods) {
    json jm{{"kind", to_string(m.method)}};
    if (m.method != FitMethod::kMle) {
      jm["lambdas"] = m.grid.lambdas;
      if (m.method == FitMethod::kScadPcmle) jm["a"] = m.grid.as;
      jm["split"] = m.grid.split_fraction;
      jm["lambda_exponent"] = m.lambda_exponent;
      jm["reference_n"] = m.reference_n;
    }
    methods.push_back(jm);
  }
  return {{"master_seed", d.master_seed},
          {"replications", d.replications},
          {"sample_sizes", d.sample_sizes},
          {"burn_in", d.burn_in},
          {"model", {{"coefficients", d.model.scales}, {"exponents", d.model.exponents}}},
          {"methods", methods}};
}

int cmd_mc(const Options& o, std::ostream& out, std::ostream& err) {
  DesignFile file = load_design_toml(o.design_path);
  ExperimentDesign& design = file.design;
  if (o.seed) {
    design.master_seed = *o.seed;
  } else if (!file.has_seed) {
    design.master_seed = resolve_seed(o, err);
  }
  try {
    design.validate();
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  const std::size_t threads = resolve_threads(o);

  const ExperimentResult result = run_experiment(design, threads);
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  emit((dir / "raw.csv").string(), out, [&](std::ostream& s) { write_raw_csv(s, result.raw); });
  emit((dir / "summary.csv").string(), out, [&](std::ostream& s) { write_summary_csv(s, result.summary); });
  emit((dir / "curve.csv").string(), out,
       [&](std::ostream& s) { write_curve_csv(s, probability_curve(result.summary)); });

  json meta = design_to_json(design);
  meta["innovation"] = {{"family", design.innovation.name()}, {"parameter", design.innovation.parameter()}};
  meta["assumptions_2_satisfied"] = result.summary.assumptions_2_satisfied;
  meta["fitting_likelihood"] =
      "every method fits with the simulating innovation density, including heavy-tailed t with df <= 4";
  meta["failure_policy"] = "failed fits count as nonzero and are excluded from bias and L2 averages";
  emit_json((dir / "metadata.json").string(), out, meta);

  for (const auto& c : result.summary.cells) {
    out << to_string(c.method) << " N=" << c.n << " median_l2=" << format_double(c.median_l2)
        << " P(all zero)=" << format_double(c.all_zero.value()) << " failures=" << c.failures << '\n';
  }
  return kOk;
}

const CLI::Validator kAtLeastOne(
    [](std::string& text) -> std::string {
      std::size_t value = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) {
        return "must be an integer >= 1, got " + text;
      }
      return {};
    },
    "INT>=1");

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse AR estimation by penalized conditional likelihood", "sparse_ar"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sparse_ar 0.1.0");
  Options o;

  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "Worker threads (default: SPARSE_AR_THREADS or logical cores)")
        ->check(kAtLeastOne);
  };

  auto* sim = app.add_subcommand("simulate", "Simulate a series from an AR model file");
  sim->add_option("--model", o.model_path, "Model TOML")->required()->check(CLI::ExistingFile);
  sim->add_option("--n", o.n, "Series length")->required()->check(kAtLeastOne);
  sim->add_option("--burn-in", o.burn_in, "Discarded leading draws");
  sim->add_option("--seed", o.seed, "Random seed (default: entropy, printed to stderr)");
  sim->add_option("--out", o.out, "Output CSV (default: stdout)");

  auto* fit = app.add_subcommand("fit", "Fit an AR(p) model by MLE or penalized conditional likelihood");
  fit->add_option("--input", o.input, "Series CSV")->required()->check(CLI::ExistingFile);
  fit->add_option("--order", o.order, "AR order p")->required()->check(kAtLeastOne);
  fit->add_option("--innovation", o.innovation, "Innovation family")
      ->check(CLI::IsMember({"gaussian", "student_t"}));
  fit->add_option("--df", o.df, "Student-t degrees of freedom");
  fit->add_option("--sigma", o.sigma, "Gaussian innovation scale");
  fit->add_option("--penalty", o.penalty, "Penalty")->check(CLI::IsMember({"scad", "lasso", "none"}));
  fit->add_option("--lambda-grid", o.lambda_grid, "Geometric tuning grid lo:hi:n");
  fit->add_option("--lambda", o.lambda, "Fixed lambda, no tuning");
  fit->add_option("--a", o.a, "SCAD a (comma-separated to tune over several)")->delimiter(',');
  fit->add_option("--split", o.split, "Training fraction for holdout tuning");
  fit->add_option("--out", o.out, "Output JSON (default: stdout)");

  auto* sel = app.add_subcommand("select", "Choose the AR order by Final Prediction Error");
  sel->add_option("--input", o.input, "Series CSV")->required()->check(CLI::ExistingFile);
  sel->add_option("--pmax", o.pmax, "Largest order considered")->required()->check(kAtLeastOne);
  sel->add_option("--out", o.out, "Output JSON (default: stdout)");

  auto* fc = app.add_subcommand("forecast", "Rolling-origin forecast evaluation of a fitted model");
  fc->add_option("--input", o.input, "Level series CSV, in-sample followed by holdout")
      ->required()
      ->check(CLI::ExistingFile);
  fc->add_option("--fit", o.fit_path, "Fit JSON from the fit command")->required()->check(CLI::ExistingFile);
  fc->add_option("--difference", o.difference, "Differencing order of the fitted model")
      ->check(CLI::IsMember({0, 1}));
  fc->add_option("--holdout", o.holdout, "Holdout length m")->required()->check(kAtLeastOne);
  fc->add_option("--steps", o.steps, "Forecast horizons")->delimiter(',')->check(kAtLeastOne);
  fc->add_option("--out", o.out, "Output JSON (default: stdout)");

  auto* mc = app.add_subcommand("mc", "Run a Monte Carlo experiment");
  mc->add_option("--design", o.design_path, "Design TOML")->required()->check(CLI::ExistingFile);
  mc->add_option("--out-dir", o.out_dir, "Output directory")->required();
  mc->add_option("--seed", o.seed, "Master seed, overrides the design file");
  add_threads(mc);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(o, out, err);
    if (fit->parsed()) return cmd_fit(o, out, err);
    if (sel->parsed()) return cmd_select(o, out, err);
    if (fc->parsed()) return cmd_forecast(o, out, err);
    if (mc->parsed()) return cmd_mc(o, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << '\n';
    return kConvergence;
  } catch (const Error& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}

}  // namespace sparse_ar::cli
