#include "fraclane/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "fraclane/errors.hpp"
#include "fraclane/grid.hpp"
#include "fraclane/operator.hpp"
#include "fraclane/pohozaev.hpp"
#include "fraclane/symmetry.hpp"

namespace fraclane {

using nlohmann::json;

namespace {

constexpr Check kAllChecks[] = {Check::Ground, Check::Spectrum, Check::Symmetry, Check::Pohozaev,
                                Check::Uniqueness};

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "/" : path_, "expected an object");
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const json& at(const char* key) const { return j_.at(key); }
  std::string where(const char* key) const { return path_ + "/" + key; }

  void get(const char* key, int& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(where(key), "expected an integer");
    out = v.get<int>();
  }
  void get(const char* key, std::uint64_t& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number_unsigned()) throw ConfigError(where(key), "expected a nonnegative integer");
    out = v.get<std::uint64_t>();
  }
  void get(const char* key, double& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(where(key), "expected a number");
    out = v.get<double>();
  }
  void get(const char* key, std::string& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(where(key), "expected a string");
    out = v.get<std::string>();
  }
  void get(const char* key, std::vector<double>& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_array()) throw ConfigError(where(key), "expected an array of numbers");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(where(key) + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
    }
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) throw ConfigError(path_ + "/" + item.key(), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& where, const std::string& what) {
  if (!ok) throw ConfigError(where, what);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CheckResult verdict(const std::string& name, bool ok, json measured, const std::string& failure) {
  return CheckResult{name, ok ? "pass" : "fail", ok ? "" : failure, std::move(measured)};
}

// Random sign-changing function on the lattice: a positive multiple of phi1
// plus compact bumps of random sign inside |x| < 0.4 R; resampled until every
// plane in the list keeps it admissible.
GridFunction admissible_sample(std::mt19937_64& rng, const GroundState& gs,
                               std::shared_ptr<const Grid> lattice, const std::vector<double>& offsets) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double R = gs.params.R();
  const Field phi1(gs.phi1);
  for (int attempt = 0; attempt < 200; ++attempt) {
    const double A = 0.2 + 0.8 * unit(rng);
    struct Bump {
      double c1, c2, r, a;
    };
    std::vector<Bump> bumps(1 + static_cast<int>(3 * unit(rng)));
    for (auto& b : bumps) {
      const double rho = 0.4 * R * std::sqrt(unit(rng));
      const double th = 2.0 * M_PI * unit(rng);
      b = {rho * std::cos(th), rho * std::sin(th), R * (0.1 + 0.25 * unit(rng)),
           (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 1.5 * unit(rng))};
    }
    Eigen::VectorXd vals = Eigen::VectorXd::Zero(lattice->size());
    for (int i = 0; i < lattice->size(); ++i) {
      if (!lattice->inside(i)) continue;
      const double x1 = lattice->x1(i), x2 = lattice->x2(i);
      double val = A * eval(phi1, std::array<double, 2>{x1, x2});
      for (const auto& b : bumps) {
        const double q = ((x1 - b.c1) * (x1 - b.c1) + (x2 - b.c2) * (x2 - b.c2)) / (b.r * b.r);
        if (q < 1.0) val += b.a * (1.0 - q) * (1.0 - q);
      }
      vals[i] = val;
    }
    if (!(vals.minCoeff() < 0.0 && vals.maxCoeff() > 0.0)) continue;
    const GridFunction v(lattice, std::move(vals));
    bool ok = true;
    for (double a : offsets) ok = ok && polarize(v, make_plane(a, R)).admissible;
    if (ok) return v;
  }
  throw ConvergenceError("no admissible polarization sample found", 200, 0.0);
}

json spectrum_json(const SpectrumResult& sp, std::size_t count) {
  json list = json::array();
  for (std::size_t i = 0; i < std::min(count, sp.entries.size()); ++i) {
    const auto& e = sp.entries[i];
    list.push_back({{"mu", e.mu}, {"ell", e.ell}, {"index", e.index}, {"multiplicity", e.multiplicity}});
  }
  return list;
}

struct Pipeline {
  const RunConfig& cfg;
  RunReport& rep;
  FracParams params;
  std::shared_ptr<GroundState> gs;
  std::shared_ptr<SpectrumResult> sp;
  std::shared_ptr<const Grid> polar;

  SpectrumOptions spectrum_options() const {
    SpectrumOptions o;
    o.ell_max = cfg.N == 1 ? 1 : cfg.ell_max;
    o.k = cfg.eigenpairs_per_sector;
    o.refine_step = cfg.refine_step;
    o.solver = cfg.solver;
    return o;
  }

  std::vector<CheckResult> ground_stage() {
    double lambda = cfg.lambda;
    double lambda1 = 0.0;
    if (cfg.lambda_is_fraction) {
      lambda1 = first_eigenvalue(params, cfg.modes).lambda1;
      lambda = cfg.lambda * lambda1;
    }
    rep.results["lambda"] = lambda;
    gs = std::make_shared<GroundState>(ground_state(params.with_lambda(lambda), cfg.modes, cfg.solver));
    params = gs->params;
    rep.results["lambda1"] = gs->lambda1;
    rep.results["m"] = gs->m;
    rep.results["convergence"]["ground_iterations"] = gs->iterations;
    rep.results["convergence"]["ground_residual"] = gs->residual;

    const Field u(gs->u);
    const double p = params.p();
    const double up1 = power_moment(*gs, u);
    const double constraint = std::pow(gs->m, -(p + 1.0) / (p - 1.0)) * up1;
    const double energy = gagliardo_inner(u, u) - params.lambda() * l2_inner(u, u);
    const double identity = std::abs(energy - up1) / std::abs(up1);
    const HopfReport hopf = hopf_check(*gs, cfg.n_angular);
    const bool ok = gs->residual <= cfg.tol.ground_residual && gs->positive && gs->monotone &&
                    std::abs(constraint - 1.0) <= cfg.tol.constraint &&
                    identity <= cfg.tol.energy_identity && hopf.positive;
    return {verdict("ground", ok,
                    {{"residual", gs->residual},
                     {"min_interior", gs->min_interior},
                     {"monotonicity_violation", gs->monotonicity_violation},
                     {"constraint_deviation", std::abs(constraint - 1.0)},
                     {"energy_identity", identity},
                     {"trace", hopf.trace},
                     {"trace_deviation", hopf.deviation}},
                    "ground-state certificate violated")};
  }

  std::vector<CheckResult> spectrum_stage() {
    sp = std::make_shared<SpectrumResult>(full_spectrum(*gs, spectrum_options()));
    rep.results["mu1"] = sp->mu1;
    rep.results["mu2"] = sp->mu2;
    rep.results["mu2_ell"] = sp->mu2_ell;
    rep.results["morse_index"] = sp->morse_index;
    rep.results["spectrum"] = spectrum_json(*sp, 8);
    rep.results["convergence"]["refinement_delta"] = sp->refinement_delta;

    const Field u(gs->u);
    const double p = params.p();
    const double predicted = (1.0 - p) * power_moment(*gs, u) / l2_inner(u, u);
    const double J = rayleigh_J(*gs, u);
    const double rel = std::abs(J - predicted) / std::abs(predicted);
    const auto* first = sp->first_in_sector(0);
    const GridFunction phi = to_grid(Field(first->v), polar_grid());
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < phi.size(); ++i) {
      lo = std::min(lo, phi[i]);
      hi = std::max(hi, phi[i]);
    }
    const bool one_signed = lo >= -1e-12 * hi;
    const double delta = sp->refinement_delta;
    const bool ok = sp->mu1 < 0.0 && sp->morse_index == 1 && sp->mu2 >= cfg.tol.mu2_floor &&
                    sp->mu2 > cfg.tol.margin_factor * delta &&
                    sp->gap > cfg.tol.margin_factor * delta && rel <= cfg.tol.rayleigh && one_signed &&
                    first == &sp->entries.front();
    return {verdict("spectrum", ok,
                    {{"mu1", sp->mu1},
                     {"mu2", sp->mu2},
                     {"morse_index", sp->morse_index},
                     {"refinement_delta", delta},
                     {"gap", sp->gap},
                     {"rayleigh_J", J},
                     {"rayleigh_predicted", predicted},
                     {"rayleigh_deviation", rel},
                     {"phi1_min_over_max", hi > 0.0 ? lo / hi : lo}},
                    "linearized spectrum outside the expected structure")};
  }

  std::shared_ptr<const Grid> polar_grid() {
    if (!polar) polar = Grid::polar(params, cfg.polar_radial, cfg.polar_angular);
    return polar;
  }

  const SpectrumEntry& second() const {
    const auto* v2 = sp->first_in_sector(1);
    if (!v2) throw InvalidArgument("spectrum has no ell = 1 sector");
    return *v2;
  }

  std::vector<CheckResult> symmetry_stage() {
    const SpectrumEntry& e2 = second();
    const Field v2(e2.v);
    const GridFunction g2 = to_grid(v2, polar_grid());
    const NodalReport nodal = nodal_structure(g2);
    const FoliatedSchwarzReport fs = foliated_schwarz_check(g2);
    const BoundaryTrace tr = boundary_trace(v2, cfg.n_angular);
    bool trace_split = true;
    for (std::size_t j = 0; j < tr.t.size(); ++j) {
      if (tr.t[j] > 0.0) trace_split = trace_split && tr.values[j] > 0.0;
      if (tr.t[j] < 0.0) trace_split = trace_split && tr.values[j] < 0.0;
    }
    const VariationalReport vp =
        variational_principle_check(v2, polar_grid(), *gs, sp->mu2, cfg.tol.variational);

    json measured = {{"mu2_ell", sp->mu2_ell},
                     {"nodal_regions", nodal.regions},
                     {"half_ball_split", nodal.half_ball_split},
                     {"foliated_axial_residual", fs.axial_residual},
                     {"foliated_monotonicity_violation", fs.monotonicity_violation},
                     {"trace_one_signed_per_half", trace_split},
                     {"variational_slack_plus", vp.slack_plus},
                     {"variational_slack_minus", vp.slack_minus},
                     {"variational_scale", vp.scale}};

    double worst_slack = std::numeric_limits<double>::infinity();
    double worst_l2 = 0.0;
    int samples = 0;
    if (cfg.N == 2 && cfg.polarization_samples > 0) {
      double reach = 0.0;
      for (double a : cfg.plane_offsets) reach = std::max(reach, std::abs(a));
      auto lattice = Grid::lattice(params, cfg.lattice_h, params.R() + 2.0 * reach + cfg.lattice_h);
      std::mt19937_64 rng(cfg.seed);
      for (int k = 0; k < cfg.polarization_samples; ++k) {
        const GridFunction v = admissible_sample(rng, *gs, lattice, cfg.plane_offsets);
        const double norm = v.l2_norm_squared();
        for (double a : cfg.plane_offsets) {
          const PolarizationReport pr = polarization_report(v, make_plane(a, params.R()), *gs);
          const double scale = std::max({std::abs(pr.plus_v.total), std::abs(pr.minus_v.total), 1.0});
          worst_slack = std::min({worst_slack, pr.slack_plus / scale, pr.slack_minus / scale});
          worst_l2 = std::max(worst_l2, pr.l2_defect / norm);
          ++samples;
        }
      }
      measured["polarization_evaluations"] = samples;
      measured["polarization_min_slack"] = worst_slack;
      measured["polarization_l2_defect"] = worst_l2;
    }
    const bool polar_ok =
        samples == 0 || (worst_slack >= -cfg.tol.polarization_slack && worst_l2 <= cfg.tol.polarization_l2);
    const bool ok = sp->mu2_ell == 1 && nodal.regions == 2 && nodal.half_ball_split && fs.passes &&
                    trace_split && vp.holds && polar_ok;
    return {verdict("symmetry", ok, std::move(measured), "symmetry structure of the second eigenfunction violated")};
  }

  std::vector<CheckResult> pohozaev_stage() {
    const SpectrumEntry& e2 = second();
    const Field u(gs->u), phi1(sp->first_in_sector(0)->v), v2(e2.v);
    const double R = params.R();
    double worst = 0.0;
    json rows = json::array();
    const std::pair<const char*, const Field*> pairs[] = {{"u", &u}, {"phi1", &phi1}, {"v2", &v2}};
    for (const auto& [name, v] : pairs) {
      for (double c : {0.0, R, -R}) {
        const PohozaevReport r = bilinear_pohozaev(*gs, *v, c);
        worst = std::max(worst, r.residual);
        rows.push_back({{"pair", std::string("u,") + name}, {"center", c}, {"residual", r.residual}});
      }
    }
    const InteriorReduction ir = interior_reduction_check(*gs, v2);
    std::vector<double> e1(static_cast<std::size_t>(params.N()), 0.0);
    e1[0] = 1.0;
    const FluxReport flux = boundary_flux(v2, e1, cfg.n_angular);
    const bool ok = worst <= cfg.tol.pohozaev && std::abs(ir.up_v) <= cfg.tol.interior &&
                    std::abs(ir.u_v) <= cfg.tol.interior &&
                    std::abs(flux.value) >= cfg.tol.flux_factor * flux.error && flux.value != 0.0;
    return {verdict("pohozaev", ok,
                    {{"max_residual", worst},
                     {"residuals", rows},
                     {"interior_up_v", ir.up_v},
                     {"interior_u_v", ir.u_v},
                     {"flux", flux.value},
                     {"flux_error", flux.error}},
                    "Pohozaev identity or contradiction witness violated")};
  }

  std::vector<CheckResult> uniqueness_stage() {
    const UniquenessReport ur = multistart_uniqueness(params, cfg.multistart_runs, cfg.seed, cfg.multistart_modes,
                                                      cfg.N == 1 ? 0 : cfg.multistart_ell_max, cfg.solver);
    const bool ok = ur.failures == 0 && ur.max_l2_distance <= cfg.tol.uniqueness_distance &&
                    ur.energy_spread <= cfg.tol.uniqueness_energy;
    return {verdict("uniqueness", ok,
                    {{"runs", ur.runs},
                     {"failures", ur.failures},
                     {"max_l2_distance", ur.max_l2_distance},
                     {"energy_spread", ur.energy_spread}},
                    "multistart runs disagree")};
  }
};

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  out << text;
}

}  // namespace

const char* check_name(Check c) {
  switch (c) {
    case Check::Ground: return "ground";
    case Check::Spectrum: return "spectrum";
    case Check::Symmetry: return "symmetry";
    case Check::Pohozaev: return "pohozaev";
    case Check::Uniqueness: return "uniqueness";
  }
  return "?";
}

Check check_from_name(const std::string& name) {
  for (Check c : kAllChecks) {
    if (name == check_name(c)) return c;
  }
  throw InvalidArgument("unknown check '" + name + "'");
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  Reader top(j, "");
  if (top.has("schema")) {
    require(top.at("schema") == "fraclane.config/1", "/schema", "unsupported schema");
  }
  if (top.has("params")) {
    Reader r(top.at("params"), "/params");
    r.get("N", c.N);
    r.get("s", c.s);
    r.get("p", c.p);
    r.get("R", c.R);
    if (r.has("lambda")) {
      const json& l = r.at("lambda");
      if (l.is_number()) {
        c.lambda = l.get<double>();
        c.lambda_is_fraction = false;
      } else if (l.is_object()) {
        Reader lr(l, "/params/lambda");
        require(lr.has("fraction_of_lambda1"), "/params/lambda", "expected fraction_of_lambda1");
        lr.get("fraction_of_lambda1", c.lambda);
        lr.finish();
        c.lambda_is_fraction = true;
      } else {
        throw ConfigError("/params/lambda", "expected a number or {\"fraction_of_lambda1\": x}");
      }
    }
    r.finish();
  }
  if (top.has("resolution")) {
    Reader r(top.at("resolution"), "/resolution");
    r.get("modes", c.modes);
    r.get("ell_max", c.ell_max);
    r.get("eigenpairs_per_sector", c.eigenpairs_per_sector);
    r.get("refine_step", c.refine_step);
    r.get("polar_radial", c.polar_radial);
    r.get("polar_angular", c.polar_angular);
    r.get("lattice_h", c.lattice_h);
    r.get("n_angular", c.n_angular);
    r.finish();
  }
  if (top.has("solver")) {
    Reader r(top.at("solver"), "/solver");
    r.get("tolerance", c.solver.tolerance);
    r.get("switch_tolerance", c.solver.switch_tolerance);
    r.get("max_gradient_iterations", c.solver.max_gradient_iterations);
    r.get("max_newton_iterations", c.solver.max_newton_iterations);
    r.get("radial_nodes", c.solver.radial_nodes);
    r.get("angular_nodes", c.solver.angular_nodes);
    r.finish();
  }
  if (top.has("tolerances")) {
    Reader r(top.at("tolerances"), "/tolerances");
    r.get("ground_residual", c.tol.ground_residual);
    r.get("constraint", c.tol.constraint);
    r.get("energy_identity", c.tol.energy_identity);
    r.get("rayleigh", c.tol.rayleigh);
    r.get("mu2_floor", c.tol.mu2_floor);
    r.get("margin_factor", c.tol.margin_factor);
    r.get("variational", c.tol.variational);
    r.get("polarization_slack", c.tol.polarization_slack);
    r.get("polarization_l2", c.tol.polarization_l2);
    r.get("pohozaev", c.tol.pohozaev);
    r.get("interior", c.tol.interior);
    r.get("flux_factor", c.tol.flux_factor);
    r.get("uniqueness_distance", c.tol.uniqueness_distance);
    r.get("uniqueness_energy", c.tol.uniqueness_energy);
    r.finish();
  }
  if (top.has("symmetry")) {
    Reader r(top.at("symmetry"), "/symmetry");
    r.get("plane_offsets", c.plane_offsets);
    r.get("polarization_samples", c.polarization_samples);
    r.finish();
  }
  if (top.has("uniqueness")) {
    Reader r(top.at("uniqueness"), "/uniqueness");
    r.get("runs", c.multistart_runs);
    r.get("modes", c.multistart_modes);
    r.get("ell_max", c.multistart_ell_max);
    r.finish();
  }
  top.get("seed", c.seed);
  if (top.has("checks")) {
    const json& list = top.at("checks");
    require(list.is_array(), "/checks", "expected an array of check names");
    c.checks.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = "/checks/" + std::to_string(i);
      require(list[i].is_string(), where, "expected a check name");
      Check k;
      try {
        k = check_from_name(list[i].get<std::string>());
      } catch (const InvalidArgument& e) {
        throw ConfigError(where, e.what());
      }
      require(std::find(c.checks.begin(), c.checks.end(), k) == c.checks.end(), where, "duplicate check");
      c.checks.push_back(k);
    }
    require(!c.checks.empty(), "/checks", "at least one check is required");
  }
  if (top.has("sweep")) {
    Reader r(top.at("sweep"), "/sweep");
    r.get("s", c.sweep_s);
    r.get("p", c.sweep_p);
    r.get("lambda_fraction", c.sweep_lambda_fraction);
    r.get("workers", c.workers);
    r.finish();
  }
  if (top.has("output")) {
    Reader r(top.at("output"), "/output");
    r.get("dir", c.out_dir);
    r.finish();
  }
  top.finish();

  require(c.N >= 1, "/params/N", "must be >= 1");
  require(c.s > 0.0 && c.s < 1.0, "/params/s", "must lie strictly between 0 and 1");
  require(c.p > 1.0, "/params/p", "must exceed 1");
  require(c.R > 0.0, "/params/R", "must be positive");
  require(c.modes >= 4, "/resolution/modes", "must be >= 4");
  require(c.ell_max >= 1, "/resolution/ell_max", "must be >= 1");
  require(c.eigenpairs_per_sector >= 2, "/resolution/eigenpairs_per_sector", "must be >= 2");
  require(c.refine_step >= 1, "/resolution/refine_step", "must be >= 1");
  require(c.polar_radial >= c.modes, "/resolution/polar_radial", "must be >= modes");
  require(c.polar_angular >= 4, "/resolution/polar_angular", "must be >= 4");
  require(c.lattice_h > 0.0, "/resolution/lattice_h", "must be positive");
  require(c.n_angular >= 4, "/resolution/n_angular", "must be >= 4");
  require(c.solver.tolerance > 0.0, "/solver/tolerance", "must be positive");
  require(c.solver.switch_tolerance > 0.0, "/solver/switch_tolerance", "must be positive");
  require(c.solver.max_gradient_iterations > 0, "/solver/max_gradient_iterations", "must be positive");
  require(c.solver.max_newton_iterations > 0, "/solver/max_newton_iterations", "must be positive");
  const std::pair<const char*, double> tols[] = {
      {"ground_residual", c.tol.ground_residual}, {"constraint", c.tol.constraint},
      {"energy_identity", c.tol.energy_identity}, {"rayleigh", c.tol.rayleigh},
      {"margin_factor", c.tol.margin_factor},     {"variational", c.tol.variational},
      {"polarization_slack", c.tol.polarization_slack}, {"polarization_l2", c.tol.polarization_l2},
      {"pohozaev", c.tol.pohozaev},               {"interior", c.tol.interior},
      {"flux_factor", c.tol.flux_factor},         {"uniqueness_distance", c.tol.uniqueness_distance},
      {"uniqueness_energy", c.tol.uniqueness_energy}};
  for (const auto& [name, v] : tols) require(v > 0.0, std::string("/tolerances/") + name, "must be positive");
  require(c.tol.mu2_floor <= 0.0, "/tolerances/mu2_floor", "must be <= 0");
  require(c.polarization_samples >= 0, "/symmetry/polarization_samples", "must be >= 0");
  for (double a : c.plane_offsets) {
    require(std::abs(a) < c.R, "/symmetry/plane_offsets", "offsets must lie in (-R, R)");
  }
  require(c.multistart_runs >= 2, "/uniqueness/runs", "must be >= 2");
  require(c.multistart_modes >= 4, "/uniqueness/modes", "must be >= 4");
  require(c.multistart_ell_max >= 0, "/uniqueness/ell_max", "must be >= 0");
  require(c.workers >= 1, "/sweep/workers", "must be >= 1");
  return c;
}

json config_to_json(const RunConfig& c) {
  json checks = json::array();
  for (Check k : c.checks) checks.push_back(check_name(k));
  json lambda = c.lambda_is_fraction ? json{{"fraction_of_lambda1", c.lambda}} : json(c.lambda);
  return {
      {"schema", "fraclane.config/1"},
      {"params", {{"N", c.N}, {"s", c.s}, {"p", c.p}, {"lambda", lambda}, {"R", c.R}}},
      {"resolution",
       {{"modes", c.modes},
        {"ell_max", c.ell_max},
        {"eigenpairs_per_sector", c.eigenpairs_per_sector},
        {"refine_step", c.refine_step},
        {"polar_radial", c.polar_radial},
        {"polar_angular", c.polar_angular},
        {"lattice_h", c.lattice_h},
        {"n_angular", c.n_angular}}},
      {"solver",
       {{"tolerance", c.solver.tolerance},
        {"switch_tolerance", c.solver.switch_tolerance},
        {"max_gradient_iterations", c.solver.max_gradient_iterations},
        {"max_newton_iterations", c.solver.max_newton_iterations},
        {"radial_nodes", c.solver.radial_nodes},
        {"angular_nodes", c.solver.angular_nodes}}},
      {"tolerances",
       {{"ground_residual", c.tol.ground_residual},
        {"constraint", c.tol.constraint},
        {"energy_identity", c.tol.energy_identity},
        {"rayleigh", c.tol.rayleigh},
        {"mu2_floor", c.tol.mu2_floor},
        {"margin_factor", c.tol.margin_factor},
        {"variational", c.tol.variational},
        {"polarization_slack", c.tol.polarization_slack},
        {"polarization_l2", c.tol.polarization_l2},
        {"pohozaev", c.tol.pohozaev},
        {"interior", c.tol.interior},
        {"flux_factor", c.tol.flux_factor},
        {"uniqueness_distance", c.tol.uniqueness_distance},
        {"uniqueness_energy", c.tol.uniqueness_energy}}},
      {"symmetry", {{"plane_offsets", c.plane_offsets}, {"polarization_samples", c.polarization_samples}}},
      {"uniqueness", {{"runs", c.multistart_runs}, {"modes", c.multistart_modes}, {"ell_max", c.multistart_ell_max}}},
      {"seed", c.seed},
      {"checks", checks},
      {"sweep",
       {{"s", c.sweep_s}, {"p", c.sweep_p}, {"lambda_fraction", c.sweep_lambda_fraction}, {"workers", c.workers}}},
      {"output", {{"dir", c.out_dir}}},
  };
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col), "invalid JSON");
  }
  return config_from_json(j);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_override(RunConfig& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  require(eq != std::string::npos && eq > 0, assignment, "expected KEY=VAL");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  std::string pointer;
  std::stringstream ss(key);
  for (std::string part; std::getline(ss, part, '.');) pointer += "/" + part;
  json j = config_to_json(c);
  const json::json_pointer ptr(pointer);
  require(j.contains(ptr), pointer, "unknown key");
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  j[ptr] = value;
  c = config_from_json(j);
}

bool RunReport::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == "pass"; });
}

json RunReport::to_json(bool include_timing) const {
  json stages_j = json::array();
  json timing = json::object();
  for (const auto& s : stages) {
    stages_j.push_back({{"name", s.name}, {"status", s.status}, {"message", s.message}});
    timing[s.name] = s.seconds;
  }
  json checks_j = json::array();
  for (const auto& c : checks) {
    checks_j.push_back({{"name", c.name}, {"status", c.status}, {"message", c.message}, {"measured", c.measured}});
  }
  json j = {{"schema", kReportSchema},
            {"config", config},
            {"results", results},
            {"stages", stages_j},
            {"checks", checks_j},
            {"passed", passed()}};
  if (include_timing) j["timing"] = timing;
  return j;
}

RunReport run(const RunConfig& cfg) {
  if (cfg.checks.empty()) throw ConfigError("/checks", "at least one check is required");
  std::optional<FracParams> params;
  try {
    params = make_params(cfg.N, cfg.s, cfg.p, cfg.lambda_is_fraction ? 0.0 : cfg.lambda, cfg.R);
  } catch (const InvalidArgument& e) {
    throw ConfigError("/params", e.what());
  }

  RunReport rep;
  rep.config = config_to_json(cfg);
  Pipeline pipe{cfg, rep, *params, nullptr, nullptr, nullptr};

  const auto wanted = [&](Check c) { return std::find(cfg.checks.begin(), cfg.checks.end(), c) != cfg.checks.end(); };
  const bool need_spectrum = wanted(Check::Spectrum) || wanted(Check::Symmetry) || wanted(Check::Pohozaev);

  struct Stage {
    Check check;
    bool needed;
    std::vector<Check> requires_;
    std::function<std::vector<CheckResult>()> body;
  };
  const Stage stages[] = {
      {Check::Ground, true, {}, [&] { return pipe.ground_stage(); }},
      {Check::Spectrum, need_spectrum, {Check::Ground}, [&] { return pipe.spectrum_stage(); }},
      {Check::Symmetry, wanted(Check::Symmetry), {Check::Spectrum}, [&] { return pipe.symmetry_stage(); }},
      {Check::Pohozaev, wanted(Check::Pohozaev), {Check::Spectrum}, [&] { return pipe.pohozaev_stage(); }},
      {Check::Uniqueness, wanted(Check::Uniqueness), {Check::Ground}, [&] { return pipe.uniqueness_stage(); }},
  };

  std::map<Check, std::string> status;
  std::map<Check, CheckResult> results;
  for (const Stage& st : stages) {
    if (!st.needed) continue;
    StageRecord rec{check_name(st.check), "ok", "", 0.0};
    std::string blocker;
    for (Check dep : st.requires_) {
      if (status[dep] != "ok") blocker = check_name(dep);
    }
    if (!blocker.empty()) {
      rec.status = "skipped";
      rec.message = "upstream stage '" + blocker + "' did not complete";
      results[st.check] = CheckResult{rec.name, "skipped", rec.message, json::object()};
    } else {
      const auto t0 = std::chrono::steady_clock::now();
      try {
        for (auto& r : st.body()) results[st.check] = std::move(r);
      } catch (const CoercivityError& e) {
        rec.status = "error";
        rec.message = std::string("coercivity: ") + e.what();
      } catch (const std::exception& e) {
        rec.status = "error";
        rec.message = e.what();
      }
      rec.seconds = elapsed(t0);
      if (rec.status == "error") results[st.check] = CheckResult{rec.name, "fail", rec.message, json::object()};
    }
    status[st.check] = rec.status;
    rep.stages.push_back(rec);
  }
  for (Check c : kAllChecks) {
    if (wanted(c)) rep.checks.push_back(results.at(c));
  }
  rep.ground = pipe.gs;
  rep.spectrum = pipe.sp;

  if (!cfg.out_dir.empty()) {
    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    write_text(dir / "report.json", rep.to_json().dump(2) + "\n");
    if (rep.ground) emit_plot_data(rep, dir);
  }
  return rep;
}

json SweepResult::to_json(bool include_timing) const {
  json rows_j = json::array();
  for (const auto& r : rows) {
    json row = {{"s", r.s},
                {"p", r.p},
                {"lambda_fraction", r.lambda_fraction},
                {"status", r.status},
                {"message", r.message}};
    if (r.status == "ok") {
      row.update({{"lambda", r.lambda},
                  {"lambda1", r.lambda1},
                  {"m", r.m},
                  {"mu1", r.mu1},
                  {"mu2", r.mu2},
                  {"mu2_ell", r.mu2_ell},
                  {"morse_index", r.morse_index},
                  {"refinement_delta", r.refinement_delta},
                  {"margin_ratio", r.margin_ratio},
                  {"flux", r.flux},
                  {"flux_error", r.flux_error},
                  {"residual", r.residual}});
    }
    if (include_timing) row["seconds"] = r.seconds;
    rows_j.push_back(std::move(row));
  }
  return {{"schema", kSweepSchema}, {"config", config}, {"rows", rows_j}};
}

std::string SweepResult::to_csv() const {
  std::string out =
      "s,p,lambda_fraction,status,lambda,lambda1,m,mu1,mu2,mu2_ell,morse_index,refinement_delta,margin_ratio,"
      "flux,flux_error,residual\n";
  for (const auto& r : rows) {
    out += fmt(r.s) + "," + fmt(r.p) + "," + fmt(r.lambda_fraction) + "," + r.status;
    if (r.status == "ok") {
      for (double v : {r.lambda, r.lambda1, r.m, r.mu1, r.mu2}) out += "," + fmt(v);
      out += "," + std::to_string(r.mu2_ell) + "," + std::to_string(r.morse_index);
      for (double v : {r.refinement_delta, r.margin_ratio, r.flux, r.flux_error, r.residual}) out += "," + fmt(v);
    } else {
      out += ",,,,,,,,,,,,";
    }
    out += "\n";
  }
  return out;
}

SweepResult sweep(const RunConfig& cfg) {
  const std::vector<double> svals = cfg.sweep_s.empty() ? std::vector<double>{cfg.s} : cfg.sweep_s;
  const std::vector<double> pvals = cfg.sweep_p.empty() ? std::vector<double>{cfg.p} : cfg.sweep_p;
  std::vector<double> fvals = cfg.sweep_lambda_fraction;
  if (fvals.empty()) {
    if (!cfg.lambda_is_fraction && cfg.lambda != 0.0) {
      throw ConfigError("/sweep/lambda_fraction", "required when params.lambda is an absolute nonzero value");
    }
    fvals = {cfg.lambda_is_fraction ? cfg.lambda : 0.0};
  }

  SweepResult result;
  result.config = config_to_json(cfg);
  const std::size_t np = pvals.size();
  const std::size_t chains = svals.size() * fvals.size();
  result.rows.resize(chains * np);

  SpectrumOptions opts;
  opts.ell_max = cfg.N == 1 ? 1 : cfg.ell_max;
  opts.k = cfg.eigenpairs_per_sector;
  opts.refine_step = cfg.refine_step;
  opts.solver = cfg.solver;

  const auto run_chain = [&](std::size_t chain) {
    const double s = svals[chain / fvals.size()];
    const double f = fvals[chain % fvals.size()];
    std::optional<Field> warm;
    for (std::size_t k = 0; k < np; ++k) {
      SweepRow& row = result.rows[chain * np + k];
      row.s = s;
      row.p = pvals[k];
      row.lambda_fraction = f;
      const auto t0 = std::chrono::steady_clock::now();
      std::optional<FracParams> params;
      try {
        params = make_params(cfg.N, s, pvals[k], 0.0, cfg.R);
      } catch (const InvalidArgument& e) {
        row.status = "rejected";
        row.message = e.what();
        continue;
      }
      try {
        row.lambda1 = first_eigenvalue(*params, cfg.modes).lambda1;
        row.lambda = f * row.lambda1;
        const FracParams point = params->with_lambda(row.lambda);
        std::optional<GroundState> gs;
        if (warm) {
          try {
            gs = ground_state(point, cfg.modes, cfg.solver, warm);
          } catch (const ConvergenceError&) {
          }
        }
        if (!gs) gs = ground_state(point, cfg.modes, cfg.solver);
        warm = Field(gs->u);
        const SpectrumResult sp = full_spectrum(*gs, opts);
        row.m = gs->m;
        row.residual = gs->residual;
        row.mu1 = sp.mu1;
        row.mu2 = sp.mu2;
        row.mu2_ell = sp.mu2_ell;
        row.morse_index = sp.morse_index;
        row.refinement_delta = sp.refinement_delta;
        const double floor = 1e-15 * std::max(1.0, std::abs(sp.mu2));
        row.margin_ratio = sp.mu2 / std::max(sp.refinement_delta, floor);
        if (const auto* v2 = sp.first_in_sector(1)) {
          std::vector<double> e1(static_cast<std::size_t>(cfg.N), 0.0);
          e1[0] = 1.0;
          const FluxReport flux = boundary_flux(Field(v2->v), e1, cfg.n_angular);
          row.flux = flux.value;
          row.flux_error = flux.error;
        }
        row.status = "ok";
      } catch (const std::exception& e) {
        row.status = "error";
        row.message = e.what();
      }
      row.seconds = elapsed(t0);
    }
  };

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), chains);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chains; ++c) run_chain(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < chains; c = next++) run_chain(c);
      });
    }
    for (auto& t : pool) t.join();
  }

  if (!cfg.out_dir.empty()) {
    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    write_text(dir / "sweep.json", result.to_json().dump(2) + "\n");
    emit_plot_data(result, dir);
  }
  return result;
}

void emit_plot_data(const RunReport& report, const std::filesystem::path& dir) {
  if (!report.ground) throw InvalidArgument("emit_plot_data: report has no ground state");
  std::filesystem::create_directories(dir);
  const GroundState& gs = *report.ground;
  const double R = gs.params.R();
  const double s = gs.params.s();
  const int n = 200;

  std::string prof = "r,u,u_over_dist_s\n";
  for (int i = 0; i <= n; ++i) {
    const double r = R * i / n;
    const double u = i == n ? 0.0 : gs.u.radial(r);
    const double ratio = i == n ? gs.trace : u / std::pow(R - r, s);
    prof += fmt(r) + "," + fmt(u) + "," + fmt(ratio) + "\n";
  }
  write_text(dir / "ground_profile.csv", prof);

  if (!report.spectrum) return;
  const SpectrumResult& sp = *report.spectrum;
  const SpectrumEntry* phi1 = sp.first_in_sector(0);
  const SpectrumEntry* v2 = sp.first_in_sector(1);

  std::string eig = "r,phi1,v2\n";
  for (int i = 0; i <= n; ++i) {
    const double r = R * i / n;
    const double a = i == n ? 0.0 : phi1->v.radial(r);
    const double b = (i == n || !v2) ? 0.0 : v2->v.radial(r);
    eig += fmt(r) + "," + fmt(a) + "," + fmt(b) + "\n";
  }
  write_text(dir / "eigen_profiles.csv", eig);

  if (gs.params.N() >= 2) {
    const BoundaryTrace tu = boundary_trace(Field(gs.u), 64);
    const BoundaryTrace tv = v2 ? boundary_trace(Field(v2->v), 64) : tu;
    std::string tr = "theta,t,u_trace,v2_trace\n";
    for (std::size_t j = 0; j < tu.t.size(); ++j) {
      tr += fmt(tu.theta[j]) + "," + fmt(tu.t[j]) + "," + fmt(tu.values[j]) + "," +
            fmt(v2 ? tv.values[j] : 0.0) + "\n";
    }
    write_text(dir / "traces.csv", tr);
  }

  std::string rows = "mu,ell,index,multiplicity\n";
  for (const auto& e : sp.entries) {
    rows += fmt(e.mu) + "," + std::to_string(e.ell) + "," + std::to_string(e.index) + "," +
            std::to_string(e.multiplicity) + "\n";
  }
  write_text(dir / "spectrum.csv", rows);
}

void emit_plot_data(const SweepResult& sw, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "sweep.csv", sw.to_csv());
  std::string curve = "s,lambda_fraction,p,mu1,mu2\n";
  for (const auto& r : sw.rows) {
    if (r.status != "ok") continue;
    curve += fmt(r.s) + "," + fmt(r.lambda_fraction) + "," + fmt(r.p) + "," + fmt(r.mu1) + "," + fmt(r.mu2) + "\n";
  }
  write_text(dir / "mu_vs_p.csv", curve);
}

}  // namespace fraclane
