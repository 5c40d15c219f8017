#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "uwnav/error.hpp"
#include "uwnav/harness/bench.hpp"
#include "uwnav/harness/config.hpp"
#include "uwnav/harness/flops.hpp"
#include "uwnav/harness/metrics.hpp"
#include "uwnav/harness/runner.hpp"

namespace h = uwnav::harness;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::vector<std::string> filters;
  std::vector<double> sigmas;
  std::string out = "out";
  std::string basis;
};

h::RunConfig resolve(const Options& o) {
  h::RunConfig cfg = o.config.empty() ? h::RunConfig::defaults() : h::load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.runs) cfg.mc_runs = *o.runs;
  uwnav::BasisMode basis = cfg.filters.front().basis;
  if (o.basis == "unnormalized") {
    basis = uwnav::BasisMode::Unnormalized;
  } else if (o.basis == "orthonormal") {
    basis = uwnav::BasisMode::Orthonormal;
  }
  if (!o.filters.empty() || !o.sigmas.empty() || !o.basis.empty()) {
    std::vector<std::string> names = o.filters;
    std::vector<double> sigmas = o.sigmas;
    if (names.empty()) {
      for (const auto& f : cfg.filters) {
        std::string n = f.label();
        names.push_back(n.substr(0, n.find('(')));
      }
    }
    if (sigmas.empty()) {
      for (const auto& f : cfg.filters) {
        if (f.robust && std::find(sigmas.begin(), sigmas.end(), f.sigma) == sigmas.end()) {
          sigmas.push_back(f.sigma);
        }
      }
      if (sigmas.empty()) sigmas = {2.0};
    }
    cfg.filters = h::expand_filters(names, sigmas, basis, cfg.filters.front().kappa);
  }
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* app, Options& o) {
  app->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--runs", o.runs, "Monte-Carlo runs")->check(CLI::PositiveNumber);
  app->add_option("--filters", o.filters, "filter kinds, e.g. PCKF MC-PCKF")->delimiter(',');
  app->add_option("--sigma", o.sigmas, "kernel bandwidths")->delimiter(',');
  app->add_option("--out", o.out, "output directory");
  app->add_option("--basis", o.basis, "Hermite basis normalisation")
      ->check(CLI::IsMember({"unnormalized", "orthonormal"}));
}

int cmd_simulate(const Options& o) {
  const auto cfg = resolve(o);
  const auto ref = h::make_reference(cfg);
  const auto trial = h::make_trial(cfg, ref, 0);
  std::filesystem::create_directories(o.out);
  h::write_truth_csv(ref.truth, o.out + "/truth.csv");
  h::write_measurements_csv(trial.measurements, o.out + "/measurements.csv");
  std::printf("wrote %zu truth and %zu measurement rows to %s\n", ref.truth.size(),
              trial.measurements.size(), o.out.c_str());
  return 0;
}

int cmd_run(const Options& o) {
  const auto cfg = resolve(o);
  const auto ref = h::make_reference(cfg);
  const auto trial = h::make_trial(cfg, ref, 0);
  std::filesystem::create_directories(o.out);
  std::printf("%-20s", "filter");
  for (const auto& n : h::state_names()) std::printf(" %9s", n.c_str());
  std::printf("\n");
  for (const auto& spec : cfg.filters) {
    const auto run = h::run_filter(cfg, spec, trial);
    const auto err = h::error_series(run, ref, cfg.earth);
    const auto a = h::armse(h::rmse({err}, cfg.rmse_mode));
    std::string file = spec.label();
    for (char& c : file) {
      if (c == '(' || c == ')' || c == '=') c = '_';
    }
    h::write_estimates_csv(run, o.out + "/estimates_" + file + ".csv");
    std::printf("%-20s", spec.label().c_str());
    for (Eigen::Index i = 0; i < a.size(); ++i) std::printf(" %9.4f", a(i));
    std::printf("\n");
  }
  return 0;
}

int cmd_bench(const Options& o) {
  const auto cfg = resolve(o);
  const auto res = h::bench(cfg);
  h::write_outputs(res, cfg, o.out);
  std::printf("%-20s", "ARMSE");
  for (const auto& n : h::state_names()) std::printf(" %9s", n.c_str());
  std::printf(" %9s\n", "failures");
  for (const auto& f : res.filters) {
    std::printf("%-20s", f.label.c_str());
    for (Eigen::Index i = 0; i < f.armse.size(); ++i) std::printf(" %9.4f", f.armse(i));
    std::printf(" %9ld\n", f.diag.factorization_failures);
  }
  std::printf("outputs in %s\n", o.out.c_str());
  return 0;
}

int cmd_flops(const Options& o, int n, int m, int t) {
  const auto fit = h::fit_published_flops(n);
  std::printf("best fit to published counts: m=%d T=%d mean relative error %.3g\n", fit.m, fit.t,
              fit.mean_rel_error);
  std::printf("%-10s %4s %14s %12s %12s\n", "filter", "Np", "flops", "published", "residual");
  for (const auto& r : fit.rows) {
    std::printf("%-10s %4d %14.2f %12.0f %12.2f\n", r.filter.c_str(), r.np, r.count, r.printed,
                r.printed > 0.0 ? r.count - r.printed : 0.0);
  }
  if (m > 0) {
    std::printf("\nn=%d m=%d T=%d\n", n, m, t);
    for (const auto& r : h::flops_table(n, m, t)) {
      std::printf("%-10s %4d %14.2f\n", r.filter.c_str(), r.np, r.count);
    }
  }
  (void)o;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust square-root filtering benchmark for underwater navigation"};
  app.require_subcommand(1);
  Options o;
  auto* sim = app.add_subcommand("simulate", "write truth and measurement CSVs for trial 0");
  auto* run = app.add_subcommand("run", "run filters on trial 0 and print per-state ARMSE");
  auto* bench = app.add_subcommand("bench", "Monte-Carlo benchmark with CSV outputs");
  auto* flops = app.add_subcommand("flops", "operation-count formulas and published-table fit");
  for (auto* s : {sim, run, bench, flops}) add_common(s, o);
  int fn = 9, fm = 0, ft = 1;
  flops->add_option("-n", fn, "state dimension")->check(CLI::PositiveNumber);
  flops->add_option("-m", fm, "measurement dimension for an extra table");
  flops->add_option("-T", ft, "fixed-point iterations for the extra table")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);
  try {
    if (sim->parsed()) return cmd_simulate(o);
    if (run->parsed()) return cmd_run(o);
    if (bench->parsed()) return cmd_bench(o);
    if (flops->parsed()) return cmd_flops(o, fn, fm, ft);
  } catch (const uwnav::NavError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
