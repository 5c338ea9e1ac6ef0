#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sparse_ar/ar_model.hpp"
#include "sparse_ar/estimator.hpp"
#include "sparse_ar/montecarlo.hpp"

namespace sparse_ar::cli {

/// Bad command line or configuration file; exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model file: `order`, `coefficients`, and an `[innovation]` table with
/// `family` plus `sigma` (gaussian) or `df` (student_t). Unknown keys are
/// rejected.
ArModel parse_model_toml(const std::string& text);
ArModel load_model_toml(const std::filesystem::path& path);

/// Experiment design file; see README for the schema. Unknown keys are
/// rejected. master_seed is optional in the file.
struct DesignFile {
  ExperimentDesign design;
  bool has_seed = false;
};
DesignFile parse_design_toml(const std::string& text);
DesignFile load_design_toml(const std::filesystem::path& path);

/// "lo:hi:n" -> n geometric points from lo to hi.
std::vector<double> parse_lambda_grid(const std::string& spec);

InnovationFamily make_innovation(const std::string& family, std::optional<double> sigma, std::optional<double> df);

nlohmann::ordered_json fit_to_json(const FitResult& fit, const InnovationFamily& innovation);

}  // namespace sparse_ar::cli
