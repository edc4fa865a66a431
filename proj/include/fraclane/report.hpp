#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraclane/ground_state.hpp"
#include "fraclane/spectrum.hpp"
#include "json.hpp"

namespace fraclane {

inline constexpr const char* kReportSchema = "fraclane.report/1";
inline constexpr const char* kSweepSchema = "fraclane.sweep/1";

/// Bad configuration; where() is a JSON path ("/params/s") or "line L, column C".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

enum class Check { Ground, Spectrum, Symmetry, Pohozaev, Uniqueness };

const char* check_name(Check c);
Check check_from_name(const std::string& name);

struct Tolerances {
  double ground_residual = 1e-8;
  double constraint = 1e-10;
  double energy_identity = 1e-8;
  double rayleigh = 1e-8;
  double mu2_floor = -1e-8;
  double margin_factor = 10.0;
  double variational = 1e-8;
  double polarization_slack = 1e-6;
  double polarization_l2 = 1e-13;
  double pohozaev = 1e-6;
  double interior = 1e-10;
  double flux_factor = 10.0;
  double uniqueness_distance = 1e-6;
  double uniqueness_energy = 1e-9;
};

struct RunConfig {
  int N = 2;
  double s = 0.5;
  double p = 2.0;
  /// lambda itself, or lambda / lambda_1 when lambda_is_fraction.
  double lambda = 0.0;
  bool lambda_is_fraction = false;
  double R = 1.0;

  int modes = 32;
  int ell_max = 4;
  int eigenpairs_per_sector = 6;
  int refine_step = 8;
  int polar_radial = 48;
  int polar_angular = 64;
  double lattice_h = 0.05;
  int n_angular = 32;
  std::vector<double> plane_offsets{0.0, 0.1, 0.3};
  int polarization_samples = 20;
  int multistart_runs = 20;
  int multistart_modes = 24;
  int multistart_ell_max = 2;

  SolverOptions solver;
  Tolerances tol;
  std::uint64_t seed = 1;
  std::vector<Check> checks{Check::Ground, Check::Spectrum, Check::Symmetry, Check::Pohozaev,
                            Check::Uniqueness};

  std::vector<double> sweep_s;
  std::vector<double> sweep_p;
  std::vector<double> sweep_lambda_fraction;
  int workers = 1;

  /// Output directory; empty writes nothing.
  std::string out_dir;
};

/// Validates field by field; unknown keys are errors.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);
/// Parse errors carry the line and column.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);
/// KEY=VAL with KEY a dotted path into the config JSON ("tolerances.pohozaev",
/// "solver.tolerance", "params.p"); VAL is read as JSON, else as a string.
void apply_override(RunConfig& c, const std::string& assignment);

struct CheckResult {
  std::string name;
  std::string status;  ///< "pass", "fail" or "skipped"
  std::string message;
  nlohmann::json measured = nlohmann::json::object();
};

struct StageRecord {
  std::string name;
  std::string status;  ///< "ok", "error" or "skipped"
  std::string message;
  double seconds = 0.0;
};

struct RunReport {
  nlohmann::json config;
  nlohmann::json results = nlohmann::json::object();
  std::vector<StageRecord> stages;
  std::vector<CheckResult> checks;
  std::shared_ptr<const GroundState> ground;
  std::shared_ptr<const SpectrumResult> spectrum;

  bool passed() const;
  int exit_code() const { return passed() ? 0 : 1; }
  /// Timing lives under "timing" and is left out when include_timing is false.
  nlohmann::json to_json(bool include_timing = true) const;
};

/// Stages in the order ground, spectrum, {symmetry, pohozaev}, uniqueness; a
/// stage that throws marks every dependent stage skipped. Writes report.json
/// and the plot CSVs when out_dir is set.
RunReport run(const RunConfig& config);

struct SweepRow {
  double s = 0.0;
  double p = 0.0;
  double lambda_fraction = 0.0;
  std::string status;  ///< "ok", "rejected" (outside the exponent window) or "error"
  std::string message;
  double lambda = 0.0;
  double lambda1 = 0.0;
  double m = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  int mu2_ell = -1;
  int morse_index = -1;
  double refinement_delta = 0.0;
  double margin_ratio = 0.0;  ///< mu2 / refinement_delta
  double flux = 0.0;          ///< int_{dB} (v2/d^s) (e_1.nu)
  double flux_error = 0.0;
  double residual = 0.0;
  double seconds = 0.0;
};

struct SweepResult {
  nlohmann::json config;
  std::vector<SweepRow> rows;  ///< grid order: s outer, lambda middle, p inner
  nlohmann::json to_json(bool include_timing = true) const;
  std::string to_csv() const;
};

/// One chain per (s, lambda fraction), continued in p with warm starts; chains
/// run on up to config.workers threads. Writes sweep.json, sweep.csv and
/// mu_vs_p.csv when out_dir is set.
SweepResult sweep(const RunConfig& config);

/// ground_profile.csv (r, u, u/d^s), eigen_profiles.csv (r, phi1, v2 radial
/// parts), traces.csv (theta, u, v2 boundary traces), spectrum.csv (sorted by mu).
/// Needs the ground and spectrum stages of the report.
void emit_plot_data(const RunReport& report, const std::filesystem::path& dir);
void emit_plot_data(const SweepResult& sweep, const std::filesystem::path& dir);

}  // namespace fraclane
