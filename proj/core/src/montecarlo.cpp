#include "sparse_ar/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <thread>

#include "sparse_ar/ar_model.hpp"
#include "sparse_ar/error.hpp"

namespace sparse_ar {
namespace {

constexpr double kWilsonZ = 1.959963984540054;

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::string joint_label(std::size_t zero_count) { return zero_count == 2 ? "both" : "all_zero"; }

std::string optional_text(const std::optional<double>& x) { return x ? format_double(*x) : ""; }

}  // namespace

std::uint64_t mix_seed(std::uint64_t key, std::uint64_t value) noexcept {
  std::uint64_t z = key + 0x9e3779b97f4a7c15ULL * (value + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t replication_seed(std::uint64_t master, std::size_t n, std::size_t replication) noexcept {
  return mix_seed(mix_seed(master, n), replication);
}

CoefficientPattern CoefficientPattern::fixed(std::vector<double> values) {
  CoefficientPattern out;
  out.exponents.assign(values.size(), 0.0);
  out.scales = std::move(values);
  return out;
}

Eigen::VectorXd CoefficientPattern::at(std::size_t n) const {
  Eigen::VectorXd phi(static_cast<Eigen::Index>(scales.size()));
  for (std::size_t j = 0; j < scales.size(); ++j) {
    const double e = j < exponents.size() ? exponents[j] : 0.0;
    phi(static_cast<Eigen::Index>(j)) = e == 0.0 ? scales[j] : scales[j] * std::pow(static_cast<double>(n), e);
  }
  return phi;
}

std::vector<std::size_t> CoefficientPattern::zero_lags() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < scales.size(); ++j)
    if (scales[j] == 0.0) out.push_back(j + 1);
  return out;
}

TuningGrid MethodSpec::grid_for(std::size_t n) const {
  TuningGrid out = grid;
  if (lambda_exponent != 0.0) {
    const double factor = std::pow(static_cast<double>(n) / reference_n, lambda_exponent);
    for (double& l : out.lambdas) l *= factor;
  }
  return out;
}

void ExperimentDesign::validate() const {
  if (model.scales.empty()) throw InvalidInput("experiment model has no coefficients");
  if (!model.exponents.empty() && model.exponents.size() != model.scales.size()) {
    throw InvalidInput("coefficient exponents must match the coefficient count");
  }
  if (sample_sizes.empty()) throw InvalidInput("experiment needs at least one sample size");
  if (replications < 1) throw InvalidInput("experiment needs at least one replication");
  if (methods.empty()) throw InvalidInput("experiment needs at least one method");
  for (const auto& m : methods) {
    if (m.method != FitMethod::kMle) m.grid.validate();
    if (!(m.reference_n > 0.0)) throw InvalidInput("lambda reference N must be positive");
  }
  const std::size_t p = model.order();
  for (std::size_t n : sample_sizes) {
    if (n <= 3 * p) throw InvalidInput("sample size " + std::to_string(n) + " is too small for AR(p): need N > 3p");
    for (const auto& m : methods) {
      if (m.method == FitMethod::kMle) continue;
      const auto n_train = static_cast<std::size_t>(std::floor(m.grid.split_fraction * static_cast<double>(n)));
      if (n_train <= 3 * p || n - n_train <= 3 * p) {
        throw InvalidInput("sample size " + std::to_string(n) + " leaves too few points on one side of the split");
      }
    }
    const ArModel ar(model.at(n), innovation);
    if (!check_causality(ar.coefficients()).causal) {
      throw ModelError("experiment model is not causal at N = " + std::to_string(n));
    }
  }
}

std::pair<double, double> Proportion::wilson() const noexcept {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = value();
  const double z2 = kWilsonZ * kWilsonZ;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kWilsonZ / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

const CellSummary& McSummary::cell(FitMethod method, std::size_t n) const {
  for (const auto& c : cells)
    if (c.method == method && c.n == n) return c;
  throw InvalidInput("no summary cell for method " + to_string(method) + " at N = " + std::to_string(n));
}

ExperimentResult run_experiment(const ExperimentDesign& design, std::size_t threads) {
  design.validate();
  const std::size_t methods = design.methods.size();
  const std::size_t tasks = design.sample_sizes.size() * design.replications;
  std::vector<ReplicationRecord> raw(tasks * methods);

  auto run_task = [&](std::size_t task) {
    const std::size_t n = design.sample_sizes[task / design.replications];
    const std::size_t rep = task % design.replications;
    const std::uint64_t seed = replication_seed(design.master_seed, n, rep);
    const Eigen::VectorXd truth = design.model.at(n);
    const TimeSeries series = simulate(ArModel(truth, design.innovation), n, design.burn_in, seed);
    for (std::size_t m = 0; m < methods; ++m) {
      const MethodSpec& spec = design.methods[m];
      ReplicationRecord rec{spec.method, n, rep, seed, true, {}, std::nullopt, std::nullopt,
                            Eigen::VectorXd::Zero(truth.size()), truth, std::nan("")};
      try {
        const FitResult fit = spec.method == FitMethod::kMle
                                  ? fit_mle(series, static_cast<std::size_t>(truth.size()), design.innovation, design.solver)
                                  : tune(series, static_cast<std::size_t>(truth.size()), design.innovation,
                                         spec.method == FitMethod::kScadPcmle ? PenaltyKind::kScad : PenaltyKind::kLasso,
                                         spec.grid_for(n), design.solver);
        rec.estimates = fit.estimates;
        rec.lambda = fit.lambda_used;
        rec.a = fit.a_used;
        rec.l2_error = (fit.estimates - truth).norm();
      } catch (const Error& e) {
        rec.converged = false;
        rec.failure = e.what();
      }
      raw[task * methods + m] = std::move(rec);
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, tasks));
  if (workers == 1) {
    for (std::size_t t = 0; t < tasks; ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next.fetch_add(1); t < tasks; t = next.fetch_add(1)) run_task(t);
      });
    }
  }

  // Records come out grouped by (N, replication); regroup by (method, N).
  std::stable_sort(raw.begin(), raw.end(), [&](const ReplicationRecord& x, const ReplicationRecord& y) {
    return x.method != y.method ? x.method < y.method : false;
  });
  ExperimentResult out;
  out.summary = summarize(design, raw);
  out.raw = std::move(raw);
  return out;
}

McSummary summarize(const ExperimentDesign& design, const std::vector<ReplicationRecord>& raw) {
  McSummary summary;
  summary.innovation = design.innovation.name();
  summary.innovation_parameter = design.innovation.parameter();
  summary.assumptions_2_satisfied = design.innovation.satisfies_assumptions_2();
  summary.zero_lags = design.model.zero_lags();

  std::vector<FitMethod> methods;
  for (const auto& m : design.methods)
    if (std::find(methods.begin(), methods.end(), m.method) == methods.end()) methods.push_back(m.method);

  for (FitMethod method : methods) {
    for (std::size_t n : design.sample_sizes) {
      const Eigen::VectorXd truth = design.model.at(n);
      const auto p = static_cast<std::size_t>(truth.size());
      CellSummary cell{method, n, 0, 0, {}, {}, 0.0, 0.0};
      std::vector<double> sums(p, 0.0);
      std::vector<std::size_t> zeros(p, 0);
      std::vector<double> errors;
      for (const auto& rec : raw) {
        if (rec.method != method || rec.n != n) continue;
        ++cell.replications;
        if (!rec.converged) {
          ++cell.failures;
          continue;
        }
        bool all_zero = true;
        for (std::size_t j = 0; j < p; ++j) {
          const double v = rec.estimates(static_cast<Eigen::Index>(j));
          sums[j] += v;
          if (v == 0.0) ++zeros[j];
        }
        for (std::size_t lag : summary.zero_lags)
          if (rec.estimates(static_cast<Eigen::Index>(lag - 1)) != 0.0) all_zero = false;
        if (all_zero && !summary.zero_lags.empty()) ++cell.all_zero.successes;
        errors.push_back(rec.l2_error);
      }
      const std::size_t ok = cell.replications - cell.failures;
      cell.all_zero.trials = cell.replications;
      for (std::size_t j = 0; j < p; ++j) {
        const double t = truth(static_cast<Eigen::Index>(j));
        const double bias = ok ? std::abs(sums[j] / static_cast<double>(ok) - t) : std::nan("");
        cell.lags.push_back({j + 1, t, Proportion{zeros[j], cell.replications}, bias});
      }
      cell.median_l2 = median(errors);
      double total = 0.0;
      for (double e : errors) total += e;
      cell.mean_l2 = errors.empty() ? std::nan("") : total / static_cast<double>(errors.size());
      summary.cells.push_back(std::move(cell));
    }
  }
  return summary;
}

std::vector<CurvePoint> probability_curve(const McSummary& summary) {
  std::vector<CurvePoint> out;
  for (const auto& cell : summary.cells) {
    for (const auto& lag : cell.lags) out.push_back({cell.method, cell.n, std::to_string(lag.lag), lag.zero});
    if (!summary.zero_lags.empty()) {
      out.push_back({cell.method, cell.n, joint_label(summary.zero_lags.size()), cell.all_zero});
    }
  }
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_raw_csv(std::ostream& out, const std::vector<ReplicationRecord>& raw) {
  std::size_t p = 0;
  for (const auto& r : raw) p = std::max<std::size_t>(p, static_cast<std::size_t>(r.truth.size()));
  out << "method,n,replication,seed,converged,lambda,a,l2_error";
  for (std::size_t j = 1; j <= p; ++j) out << ",phi_" << j;
  out << ",failure\n";
  for (const auto& r : raw) {
    out << to_string(r.method) << ',' << r.n << ',' << r.replication << ',' << r.seed << ','
        << (r.converged ? 1 : 0) << ',' << optional_text(r.lambda) << ',' << optional_text(r.a) << ','
        << format_double(r.l2_error);
    for (Eigen::Index j = 0; j < r.estimates.size(); ++j) out << ',' << format_double(r.estimates(j));
    std::string reason = r.failure;
    std::replace(reason.begin(), reason.end(), ',', ';');
    out << ',' << reason << '\n';
  }
}

void write_summary_csv(std::ostream& out, const McSummary& summary) {
  out << "method,n,replications,failures,lag,truth,prob_zero,wilson_low,wilson_high,average_bias,"
         "prob_all_zero,median_l2,mean_l2\n";
  for (const auto& cell : summary.cells) {
    for (const auto& lag : cell.lags) {
      const auto [lo, hi] = lag.zero.wilson();
      out << to_string(cell.method) << ',' << cell.n << ',' << cell.replications << ',' << cell.failures << ','
          << lag.lag << ',' << format_double(lag.truth) << ',' << format_double(lag.zero.value()) << ','
          << format_double(lo) << ',' << format_double(hi) << ',' << format_double(lag.average_bias) << ','
          << format_double(cell.all_zero.value()) << ',' << format_double(cell.median_l2) << ','
          << format_double(cell.mean_l2) << '\n';
    }
  }
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
  out << "method,n,lag,probability,wilson_low,wilson_high\n";
  for (const auto& pt : curve) {
    const auto [lo, hi] = pt.probability.wilson();
    out << to_string(pt.method) << ',' << pt.n << ',' << pt.lag << ',' << format_double(pt.probability.value())
        << ',' << format_double(lo) << ',' << format_double(hi) << '\n';
  }
}

ProportionTest two_proportion_test(const Proportion& first, const Proportion& second) {
  if (first.trials == 0 || second.trials == 0) throw InvalidInput("two-proportion test needs non-empty samples");
  const double n1 = static_cast<double>(first.trials);
  const double n2 = static_cast<double>(second.trials);
  const double pooled = static_cast<double>(first.successes + second.successes) / (n1 + n2);
  const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2));
  if (se == 0.0) return {0.0, 1.0};
  const double z = (first.value() - second.value()) / se;
  return {z, std::erfc(std::abs(z) / std::sqrt(2.0))};
}

}  // namespace sparse_ar
