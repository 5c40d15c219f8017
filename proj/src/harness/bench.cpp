#include "uwnav/harness/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <thread>

#include "uwnav/error.hpp"
#include "uwnav/harness/flops.hpp"
#include "uwnav/harness/metrics.hpp"
#include "uwnav/version.hpp"

namespace uwnav::harness {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NavError(ErrorCode::Io, "cannot write " + path);
  return out;
}

struct TrialOutput {
  std::vector<Eigen::MatrixXd> errors;  // per filter
  std::vector<FilterDiagnostics> diag;
  std::vector<double> seconds;
  std::vector<double> t;
};

}  // namespace

RunResult bench(const RunConfig& cfg) {
  cfg.validate();
  const Reference ref = make_reference(cfg);
  const std::size_t nf = cfg.filters.size();
  std::vector<TrialOutput> trials(static_cast<std::size_t>(cfg.mc_runs));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&]() {
    for (int i = next++; i < cfg.mc_runs; i = next++) {
      try {
        const TrialData data = make_trial(cfg, ref, i);
        TrialOutput& out = trials[static_cast<std::size_t>(i)];
        for (const auto& spec : cfg.filters) {
          const FilterRun run = run_filter(cfg, spec, data);
          out.errors.push_back(error_series(run, ref, cfg.earth));
          out.diag.push_back(run.diag);
          out.seconds.push_back(run.seconds);
          out.t = run.t;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, cfg.mc_runs);
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  RunResult res;
  res.mc_runs = cfg.mc_runs;
  res.t = trials.front().t;
  for (std::size_t f = 0; f < nf; ++f) {
    FilterSummary s;
    s.label = cfg.filters[f].label();
    std::vector<Eigen::MatrixXd> ens;
    for (const auto& tr : trials) {
      ens.push_back(tr.errors[f]);
      s.diag.factorization_failures += tr.diag[f].factorization_failures;
      s.diag.skipped_updates += tr.diag[f].skipped_updates;
      s.diag.mc_steps += tr.diag[f].mc_steps;
      s.diag.mc_iterations += tr.diag[f].mc_iterations;
      s.diag.mc_nonconverged += tr.diag[f].mc_nonconverged;
      s.seconds += tr.seconds[f];
    }
    s.rmse = rmse(ens, cfg.rmse_mode);
    s.armse = armse(s.rmse);
    res.filters.push_back(std::move(s));
  }
  return res;
}

void write_outputs(const RunResult& res, const RunConfig& cfg, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto& names = state_names();
  {
    auto out = open_out(dir + "/armse.csv");
    out << "filter";
    for (const auto& n : names) out << ',' << n;
    out << '\n';
    for (const auto& f : res.filters) {
      out << f.label;
      for (Eigen::Index i = 0; i < f.armse.size(); ++i) out << ',' << num(f.armse(i));
      out << '\n';
    }
  }
  for (std::size_t s = 0; s < names.size(); ++s) {
    auto out = open_out(dir + "/rmse_" + names[s] + ".csv");
    out << 't';
    for (const auto& f : res.filters) out << ',' << f.label;
    out << '\n';
    for (std::size_t k = 0; k < res.t.size(); ++k) {
      out << num(res.t[k]);
      for (const auto& f : res.filters) {
        out << ',' << num(f.rmse(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(s)));
      }
      out << '\n';
    }
  }
  const FlopsFit fit = fit_published_flops(kStateDim);
  {
    auto out = open_out(dir + "/flops.csv");
    out << "filter,n,m,Np,T,flops,printed,rel_residual\n";
    for (const auto& r : fit.rows) {
      out << r.filter << ',' << kStateDim << ',' << fit.m << ',' << r.np << ',' << fit.t << ','
          << num(r.count) << ',' << num(r.printed) << ','
          << num(r.printed > 0.0 ? (r.count - r.printed) / r.printed : 0.0) << '\n';
    }
  }
  {
    using json = nlohmann::ordered_json;
    json meta;
    meta["seed"] = cfg.seed;
    meta["mc_runs"] = res.mc_runs;
    meta["steps"] = res.t.size();
    meta["versions"] = {{"uwnav", kVersion},
                        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                      std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                      std::to_string(EIGEN_MINOR_VERSION)}};
    double ref_time = 0.0;
    for (const auto& f : res.filters) {
      if (f.label == "PCKF") ref_time = f.seconds;
    }
    json filters = json::array();
    for (const auto& f : res.filters) {
      json j;
      j["label"] = f.label;
      j["factorization_failures"] = f.diag.factorization_failures;
      j["skipped_updates"] = f.diag.skipped_updates;
      j["mc_steps"] = f.diag.mc_steps;
      j["mc_iterations"] = f.diag.mc_iterations;
      j["mc_nonconverged"] = f.diag.mc_nonconverged;
      if (f.diag.mc_steps > 0) {
        j["mean_iterations"] = static_cast<double>(f.diag.mc_iterations) / f.diag.mc_steps;
        j["converged_fraction"] =
            1.0 - static_cast<double>(f.diag.mc_nonconverged) / f.diag.mc_steps;
      }
      j["wall_seconds"] = f.seconds;
      if (ref_time > 0.0) j["relative_time"] = f.seconds / ref_time;
      filters.push_back(j);
    }
    meta["filters"] = filters;
    meta["flops_fit"] = {{"m", fit.m}, {"T", fit.t}, {"mean_rel_error", fit.mean_rel_error}};
    meta["config"] = json::parse(config_to_json(cfg));
    auto out = open_out(dir + "/meta.json");
    out << meta.dump(2) << '\n';
  }
}

void write_truth_csv(const std::vector<TruthSample>& truth, const std::string& path) {
  auto out = open_out(path);
  out << "t,L_deg,l_deg,Z_m,vN,vE,vD,phi_deg,theta_deg,psi_deg\n";
  for (const auto& s : truth) {
    const auto& x = s.state;
    out << num(s.t) << ',' << num(rad2deg(x.pos.lat)) << ',' << num(rad2deg(x.pos.lon)) << ','
        << num(x.pos.depth) << ',' << num(x.vel_ned.x()) << ',' << num(x.vel_ned.y()) << ','
        << num(x.vel_ned.z()) << ',' << num(rad2deg(x.att.roll)) << ','
        << num(rad2deg(x.att.pitch)) << ',' << num(rad2deg(x.att.yaw)) << '\n';
  }
}

void write_measurements_csv(const std::vector<MeasurementVector>& meas, const std::string& path) {
  auto out = open_out(path);
  out << "t,kind,vN,vE,vD,Z,phi_deg,theta_deg,psi_deg,L_deg,l_deg\n";
  for (const auto& m : meas) {
    const auto& v = m.values;
    out << num(m.t) << ',' << (m.kind == MeasurementKind::ModelI ? "I" : "II") << ','
        << num(v(kMeasVelN)) << ',' << num(v(kMeasVelE)) << ',' << num(v(kMeasVelD)) << ','
        << num(v(kMeasDepth)) << ',' << num(rad2deg(v(kMeasRoll))) << ','
        << num(rad2deg(v(kMeasPitch))) << ',' << num(rad2deg(v(kMeasYaw))) << ',';
    if (m.kind == MeasurementKind::ModelII) {
      out << num(rad2deg(v(kMeasLat))) << ',' << num(rad2deg(v(kMeasLon)));
    } else {
      out << ',';
    }
    out << '\n';
  }
}

void write_estimates_csv(const FilterRun& run, const std::string& path) {
  auto out = open_out(path);
  out << "t,L_deg,l_deg,Z_m,vN,vE,vD,phi_deg,theta_deg,psi_deg\n";
  for (std::size_t k = 0; k < run.estimates.size(); ++k) {
    const auto& x = run.estimates[k];
    out << num(run.t[k]);
    for (int i = 0; i < kStateDim; ++i) {
      const bool ang = i == kLat || i == kLon || i == kRoll || i == kPitch || i == kYaw;
      out << ',' << num(ang ? rad2deg(x(i)) : x(i));
    }
    out << '\n';
  }
}

}  // namespace uwnav::harness
