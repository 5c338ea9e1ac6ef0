#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "sparse_ar/error.hpp"

namespace sparse_ar::cli {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

toml::table parse_toml(const std::string& text) {
  try {
    return toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream ss;
    ss << "TOML parse error: " << e.description() << " (line " << e.source().begin.line << ")";
    throw UsageError(ss.str());
  }
}

void reject_unknown(const toml::table& table, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : table) {
    if (!allowed.contains(std::string(key.str()))) {
      throw UsageError("unknown key '" + std::string(key.str()) + "' in " + where);
    }
  }
}

double number(const toml::node& node, const std::string& what) {
  if (auto v = node.value<double>()) return *v;
  throw UsageError(what + " must be a number");
}

std::optional<double> optional_number(const toml::table& t, const std::string& key, const std::string& where) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  return number(*n, where + "." + key);
}

std::vector<double> number_array(const toml::node* node, const std::string& what) {
  const toml::array* arr = node ? node->as_array() : nullptr;
  if (!arr) throw UsageError(what + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& el : *arr) out.push_back(number(el, what));
  return out;
}

std::int64_t integer(const toml::node* node, const std::string& what) {
  if (node) {
    if (auto v = node->value_exact<std::int64_t>()) return *v;
  }
  throw UsageError(what + " must be an integer");
}

const toml::table& required_table(const toml::table& t, const std::string& key) {
  const toml::table* sub = t.get_as<toml::table>(key);
  if (!sub) throw UsageError("missing table [" + key + "]");
  return *sub;
}

InnovationFamily parse_innovation(const toml::table& t) {
  reject_unknown(t, {"family", "sigma", "df"}, "[innovation]");
  const auto family = t["family"].value<std::string>();
  if (!family) throw UsageError("innovation.family must be \"gaussian\" or \"student_t\"");
  return make_innovation(*family, optional_number(t, "sigma", "innovation"), optional_number(t, "df", "innovation"));
}

MethodSpec parse_method(const toml::table& t) {
  reject_unknown(t, {"kind", "lambda_grid", "lambdas", "a", "split", "lambda_exponent", "reference_n"}, "[[methods]]");
  const auto kind = t["kind"].value<std::string>();
  if (!kind) throw UsageError("methods.kind is required");
  MethodSpec m;
  if (*kind == "mle") {
    m.method = FitMethod::kMle;
    if (t.size() != 1) throw UsageError("an mle method takes no tuning keys");
    return m;
  }
  if (*kind == "scad") {
    m.method = FitMethod::kScadPcmle;
  } else if (*kind == "lasso") {
    m.method = FitMethod::kLassoPcmle;
  } else {
    throw UsageError("methods.kind must be mle, lasso or scad");
  }
  if (t.contains("lambda_grid") == t.contains("lambdas")) {
    throw UsageError("penalized methods need exactly one of lambda_grid or lambdas");
  }
  if (auto grid = t["lambda_grid"].value<std::string>()) {
    m.grid.lambdas = parse_lambda_grid(*grid);
  } else if (t.contains("lambda_grid")) {
    throw UsageError("methods.lambda_grid must be a \"lo:hi:n\" string");
  } else {
    m.grid.lambdas = number_array(t.get("lambdas"), "methods.lambdas");
  }
  if (t.contains("a")) {
    if (m.method != FitMethod::kScadPcmle) throw UsageError("methods.a only applies to scad");
    m.grid.as = number_array(t.get("a"), "methods.a");
  }
  if (auto v = optional_number(t, "split", "methods")) m.grid.split_fraction = *v;
  if (auto v = optional_number(t, "lambda_exponent", "methods")) m.lambda_exponent = *v;
  if (auto v = optional_number(t, "reference_n", "methods")) m.reference_n = *v;
  try {
    m.grid.validate();
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  return m;
}

}  // namespace

std::vector<double> parse_lambda_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw UsageError("lambda grid must look like lo:hi:n");
  try {
    std::size_t used = 0;
    const double lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("lo");
    const double hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("hi");
    const long n = std::stol(parts[2], &used);
    if (used != parts[2].size() || n < 1) throw std::invalid_argument("n");
    return TuningGrid::geometric(lo, hi, static_cast<std::size_t>(n));
  } catch (const InvalidInput& e) {
    throw UsageError(std::string("bad lambda grid: ") + e.what());
  } catch (const std::exception&) {
    throw UsageError("lambda grid must look like lo:hi:n with numeric lo, hi and integer n >= 1");
  }
}

InnovationFamily make_innovation(const std::string& family, std::optional<double> sigma, std::optional<double> df) {
  try {
    if (family == "gaussian") {
      if (df) throw UsageError("df does not apply to gaussian innovations");
      return InnovationFamily::gaussian(sigma.value_or(1.0));
    }
    if (family == "student_t") {
      if (sigma) throw UsageError("sigma does not apply to student_t innovations");
      if (!df) throw UsageError("student_t innovations need df");
      return InnovationFamily::student_t(*df);
    }
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  throw UsageError("innovation family must be gaussian or student_t");
}

ArModel parse_model_toml(const std::string& text) {
  const toml::table root = parse_toml(text);
  reject_unknown(root, {"order", "coefficients", "innovation"}, "model file");
  const std::int64_t order = integer(root.get("order"), "order");
  const std::vector<double> coeffs = number_array(root.get("coefficients"), "coefficients");
  if (order < 1) throw UsageError("order must be at least 1");
  if (static_cast<std::size_t>(order) != coeffs.size()) throw UsageError("order does not match the coefficient count");
  const InnovationFamily innovation = parse_innovation(required_table(root, "innovation"));
  try {
    return ArModel(Eigen::Map<const Eigen::VectorXd>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size())),
                   innovation);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
}

ArModel load_model_toml(const std::filesystem::path& path) { return parse_model_toml(read_file(path)); }

DesignFile parse_design_toml(const std::string& text) {
  const toml::table root = parse_toml(text);
  reject_unknown(root, {"master_seed", "replications", "sample_sizes", "burn_in", "model", "innovation", "methods"},
                 "design file");
  DesignFile out;
  ExperimentDesign& d = out.design;
  if (root.contains("master_seed")) {
    const std::int64_t seed = integer(root.get("master_seed"), "master_seed");
    if (seed < 0) throw UsageError("master_seed must be non-negative");
    d.master_seed = static_cast<std::uint64_t>(seed);
    out.has_seed = true;
  }
  const std::int64_t reps = integer(root.get("replications"), "replications");
  if (reps < 1) throw UsageError("replications must be at least 1");
  d.replications = static_cast<std::size_t>(reps);
  if (root.contains("burn_in")) {
    const std::int64_t burn = integer(root.get("burn_in"), "burn_in");
    if (burn < 0) throw UsageError("burn_in must be non-negative");
    d.burn_in = static_cast<std::size_t>(burn);
  }
  const toml::array* sizes = root.get_as<toml::array>("sample_sizes");
  if (!sizes || sizes->empty()) throw UsageError("sample_sizes must be a non-empty array of integers");
  for (const auto& el : *sizes) {
    const std::int64_t n = integer(&el, "sample_sizes");
    if (n < 1) throw UsageError("sample sizes must be positive");
    d.sample_sizes.push_back(static_cast<std::size_t>(n));
  }

  const toml::table& model = required_table(root, "model");
  reject_unknown(model, {"coefficients", "exponents"}, "[model]");
  d.model.scales = number_array(model.get("coefficients"), "model.coefficients");
  d.model.exponents = model.contains("exponents") ? number_array(model.get("exponents"), "model.exponents")
                                                  : std::vector<double>(d.model.scales.size(), 0.0);
  if (d.model.exponents.size() != d.model.scales.size()) {
    throw UsageError("model.exponents must have one entry per coefficient");
  }
  d.innovation = parse_innovation(required_table(root, "innovation"));

  const toml::array* methods = root.get_as<toml::array>("methods");
  if (!methods || methods->empty()) throw UsageError("design needs at least one [[methods]] entry");
  for (const auto& el : *methods) {
    const toml::table* t = el.as_table();
    if (!t) throw UsageError("[[methods]] entries must be tables");
    d.methods.push_back(parse_method(*t));
  }
  return out;
}

DesignFile load_design_toml(const std::filesystem::path& path) { return parse_design_toml(read_file(path)); }

nlohmann::ordered_json fit_to_json(const FitResult& fit, const InnovationFamily& innovation) {
  nlohmann::ordered_json j;
  j["method"] = to_string(fit.method);
  j["order"] = fit.estimates.size();
  j["innovation"] = {{"family", innovation.name()}};
  if (innovation.kind() == InnovationKind::kGaussian) {
    j["innovation"]["sigma"] = innovation.sigma();
  } else {
    j["innovation"]["df"] = innovation.df();
  }
  j["estimates"] = std::vector<double>(fit.estimates.data(), fit.estimates.data() + fit.estimates.size());
  j["support"] = fit.support;
  j["std_errors"] = std::vector<double>(fit.std_errors.data(), fit.std_errors.data() + fit.std_errors.size());
  j["lambda_used"] = fit.lambda_used ? nlohmann::ordered_json(*fit.lambda_used) : nlohmann::ordered_json(nullptr);
  j["a_used"] = fit.a_used ? nlohmann::ordered_json(*fit.a_used) : nlohmann::ordered_json(nullptr);
  j["diagnostics"] = {{"iterations", fit.diagnostics.iterations},
                      {"gradient_norm", fit.diagnostics.gradient_norm},
                      {"holdout_loglik", fit.diagnostics.holdout_loglik ? nlohmann::ordered_json(*fit.diagnostics.holdout_loglik)
                                                                         : nlohmann::ordered_json(nullptr)}};
  return j;
}

}  // namespace sparse_ar::cli
