#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fraclane/errors.hpp"
#include "fraclane/grid.hpp"
#include "fraclane/operator.hpp"
#include "fraclane/oracle.hpp"
#include "fraclane/report.hpp"

using namespace fraclane;
using nlohmann::json;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "config JSON")->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "output directory");
  sub->add_option_function<std::uint64_t>(
      "--seed", [&c](std::uint64_t v) { c.seed = v, c.seed_set = true; }, "random seed");
  sub->add_option("--workers", c.workers, "sweep worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--tol-override", c.overrides, "KEY=VAL applied to the config (repeatable)");
}

RunConfig build(const Common& c) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : load_config(c.config);
  for (const auto& o : c.overrides) apply_override(cfg, o);
  if (c.seed_set) cfg.seed = c.seed;
  if (c.workers > 0) cfg.workers = c.workers;
  if (!c.out.empty()) cfg.out_dir = c.out;
  return cfg;
}

int print_report(const RunReport& rep) {
  for (const auto& st : rep.stages) {
    std::printf("stage %-10s %-7s %.2fs %s\n", st.name.c_str(), st.status.c_str(), st.seconds, st.message.c_str());
  }
  for (const auto& ch : rep.checks) {
    std::printf("check %-10s %s %s\n", ch.name.c_str(), ch.status.c_str(), ch.message.c_str());
  }
  if (rep.results.contains("m")) std::printf("m = %.15g\n", rep.results["m"].get<double>());
  if (rep.results.contains("mu2")) {
    std::printf("mu1 = %.12g  mu2 = %.12g  morse index = %d\n", rep.results["mu1"].get<double>(),
                rep.results["mu2"].get<double>(), rep.results["morse_index"].get<int>());
  }
  return rep.exit_code();
}

int oracle_command(const RunConfig& cfg) {
  const FracParams params = make_params(cfg.N, cfg.s, cfg.p, 0.0, cfg.R);
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int ell_max = cfg.N == 1 ? 1 : 2;
  json rows = json::array();
  int within = 0, total = 0;
  for (int k = 0; k < 4; ++k) {
    std::vector<SectorFunction> parts;
    for (int ell = 0; ell <= ell_max; ++ell) {
      auto basis = SectorBasis::make(params, ell, 6);
      Eigen::VectorXd c(6);
      for (int n = 0; n < 6; ++n) c[n] = normal(rng) / ((1.0 + n) * (1.0 + n));
      parts.emplace_back(basis, c);
    }
    const Field f(parts);
    for (int q = 0; q < 3; ++q) {
      std::vector<double> x(static_cast<std::size_t>(cfg.N), 0.0);
      const double r = 0.8 * cfg.R * unit(rng);
      if (cfg.N == 1) {
        x[0] = unit(rng) < 0.5 ? -r : r;
      } else {
        const double th = 2.0 * M_PI * unit(rng);
        x[0] = r * std::cos(th);
        x[1] = r * std::sin(th);
      }
      const double spectral = f.image_value(axial(x));
      const OracleResult o = quadrature_oracle(f, x);
      const bool ok = std::abs(spectral - o.value) <= o.error;
      within += ok;
      ++total;
      rows.push_back({{"x", x}, {"spectral", spectral}, {"oracle", o.value}, {"error", o.error}, {"within", ok}});
    }
  }
  const json out = {{"samples", rows}, {"within", within}, {"total", total}};
  std::cout << out.dump(2) << "\n";
  return within * 20 >= total * 19 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional Lane-Emden ground states on a ball"};
  app.require_subcommand(1);
  Common common;
  struct Sub {
    const char* name;
    const char* help;
    std::vector<Check> checks;
  };
  const Sub subs[] = {
      {"solve", "ground state and its certificate", {Check::Ground}},
      {"spectrum", "linearized spectrum at the ground state", {Check::Spectrum}},
      {"symmetry", "polarization and second-eigenfunction structure", {Check::Symmetry}},
      {"pohozaev", "bilinear Pohozaev identity and boundary witness", {Check::Pohozaev}},
      {"verify", "every check listed in the config (default: all)", {}},
      {"sweep", "parameter sweep over s, p and lambda fraction", {}},
      {"oracle", "spectral images against the singular-integral quadrature", {}},
  };
  std::vector<CLI::App*> handles;
  for (const auto& s : subs) {
    handles.push_back(app.add_subcommand(s.name, s.help));
    add_common(handles.back(), common);
  }
  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = build(common);
    for (std::size_t i = 0; i < handles.size(); ++i) {
      if (!handles[i]->parsed()) continue;
      const std::string name = subs[i].name;
      if (name == "sweep") {
        const SweepResult sw = sweep(cfg);
        std::cout << sw.to_csv();
        bool ok = true;
        for (const auto& r : sw.rows) ok = ok && r.status != "error";
        return ok ? 0 : 1;
      }
      if (name == "oracle") return oracle_command(cfg);
      if (!subs[i].checks.empty()) cfg.checks = subs[i].checks;
      return print_report(run(cfg));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error at " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
