#include "uwnav/harness/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "uwnav/error.hpp"
#include "uwnav/scenario.hpp"

namespace uwnav::harness {

using json = nlohmann::ordered_json;

namespace {

const char* kind_name(FilterKind k) {
  switch (k) {
    case FilterKind::UKF: return "UKF";
    case FilterKind::CKF: return "CKF";
    case FilterKind::PCKF: return "PCKF";
  }
  return "?";
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Units used in the file: degrees for lat/lon/angles, SI otherwise.
StateVector state_to_file_units(const StateVector& x) {
  StateVector out = x;
  for (int i : {kLat, kLon, kRoll, kPitch, kYaw}) out(i) = rad2deg(x(i));
  return out;
}

StateVector state_from_file_units(const json& j) {
  if (!j.is_array() || j.size() != kStateDim) {
    throw NavError(ErrorCode::Config, "state vectors must have 9 entries");
  }
  StateVector x;
  for (int i = 0; i < kStateDim; ++i) x(i) = j.at(i).get<double>();
  for (int i : {kLat, kLon, kRoll, kPitch, kYaw}) x(i) = deg2rad(x(i));
  return x;
}

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json position_json(const GeodeticPosition& p) {
  return json::array({rad2deg(p.lat), rad2deg(p.lon), p.depth});
}

GeodeticPosition position_from(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw NavError(ErrorCode::Config, "positions are [lat_deg, lon_deg, depth_m]");
  }
  return {deg2rad(j.at(0).get<double>()), deg2rad(j.at(1).get<double>()), j.at(2).get<double>()};
}

json mixture_json(const GaussianMixture& gm, double scale) {
  json a = json::array();
  for (const auto& c : gm.components) a.push_back({c.weight, c.mean / scale, c.std / scale});
  return a;
}

GaussianMixture mixture_from(const json& j, double scale) {
  GaussianMixture gm;
  for (const auto& c : j) {
    if (!c.is_array() || c.size() != 3) {
      throw NavError(ErrorCode::Config, "mixture components are [weight, mean, std]");
    }
    gm.components.push_back(
        {c.at(0).get<double>(), c.at(1).get<double>() * scale, c.at(2).get<double>() * scale});
  }
  gm.validate();
  return gm;
}

struct ChannelRef {
  const char* name;
  GaussianMixture MeasurementNoise::*field;
  double scale;
};

const std::vector<ChannelRef>& channels() {
  static const std::vector<ChannelRef> c = {
      {"vel_n", &MeasurementNoise::vel_n, 1.0},     {"vel_e", &MeasurementNoise::vel_e, 1.0},
      {"vel_d", &MeasurementNoise::vel_d, 1.0},     {"depth", &MeasurementNoise::depth, 1.0},
      {"roll", &MeasurementNoise::roll, kDegToRad}, {"pitch", &MeasurementNoise::pitch, kDegToRad},
      {"yaw", &MeasurementNoise::yaw, kDegToRad},   {"lat", &MeasurementNoise::lat, kDegToRad},
      {"lon", &MeasurementNoise::lon, kDegToRad},
  };
  return c;
}

BasisMode parse_basis(const std::string& s) {
  if (s == "orthonormal") return BasisMode::Orthonormal;
  if (s == "unnormalized") return BasisMode::Unnormalized;
  throw NavError(ErrorCode::Config, "basis must be 'unnormalized' or 'orthonormal', got '" + s + "'");
}

}  // namespace

std::string FilterSpec::label() const {
  std::string s = robust ? std::string("MC-") + kind_name(kind) : kind_name(kind);
  if (robust) s += "(sigma=" + format_number(sigma) + ")";
  return s;
}

FilterSpec parse_filter_kind(const std::string& name) {
  FilterSpec spec;
  std::string base = name;
  if (base.rfind("MC-", 0) == 0) {
    spec.robust = true;
    base = base.substr(3);
  }
  if (base == "UKF") {
    spec.kind = FilterKind::UKF;
  } else if (base == "CKF") {
    spec.kind = FilterKind::CKF;
  } else if (base == "PCKF") {
    spec.kind = FilterKind::PCKF;
  } else {
    throw NavError(ErrorCode::Config, "unknown filter kind '" + name + "'");
  }
  return spec;
}

std::vector<FilterSpec> expand_filters(const std::vector<std::string>& names,
                                       const std::vector<double>& sigmas, BasisMode basis,
                                       std::optional<double> kappa) {
  std::vector<FilterSpec> out;
  const auto push = [&](FilterSpec s) {
    s.basis = basis;
    s.kappa = kappa;
    for (const auto& o : out) {
      if (o.label() == s.label()) return;
    }
    out.push_back(s);
  };
  for (const auto& n : names) {
    FilterSpec s = parse_filter_kind(n);
    if (!s.robust) {
      push(s);
      continue;
    }
    if (sigmas.empty()) throw NavError(ErrorCode::Config, "robust filters need at least one sigma");
    for (double sg : sigmas) {
      s.sigma = sg;
      push(s);
    }
  }
  return out;
}

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.initial_estimate << deg2rad(18.944), deg2rad(72.853), -25.0, 0, 0, 0, 0, 0, 0;
  c.initial_std << deg2rad(0.898), deg2rad(0.898), 10.0, 2.0, 2.0, 2.0, deg2rad(1.0),
      deg2rad(1.0), deg2rad(5.0);
  c.imu_noise = default_imu_noise(c.earth, c.dt_filter);
  c.process_noise_diag = default_process_noise_diag(c.earth, c.dt_filter);
  c.filters = expand_filters({"UKF", "CKF", "PCKF", "MC-UKF", "MC-CKF", "MC-PCKF"}, {0.5, 2.0},
                             BasisMode::Orthonormal, std::nullopt);
  return c;
}

void RunConfig::validate() const {
  earth.validate();
  noise.validate();
  mcc.validate();
  if (mc_runs < 1) throw NavError(ErrorCode::Config, "mc_runs must be at least 1");
  if (threads < 0) throw NavError(ErrorCode::Config, "threads must be non-negative");
  if (!(dt_truth > 0.0) || !(dt_filter > 0.0)) {
    throw NavError(ErrorCode::Config, "time steps must be positive");
  }
  const double ratio = dt_filter / dt_truth;
  if (std::abs(ratio - std::round(ratio)) > 1e-9) {
    throw NavError(ErrorCode::Config, "dt_truth must divide dt_filter");
  }
  if (filters.empty()) throw NavError(ErrorCode::Config, "no filters configured");
  for (const auto& f : filters) {
    if (f.robust && !(f.sigma > 0.0)) throw NavError(ErrorCode::Config, "sigma must be positive");
  }
  if ((process_noise_diag.array() < 0.0).any()) {
    throw NavError(ErrorCode::Config, "process noise must be non-negative");
  }
  if (!(initial_std.array() > 0.0).all()) {
    throw NavError(ErrorCode::Config, "initial standard deviations must be positive");
  }
}

std::vector<ScenarioStage> RunConfig::stages() const {
  if (scenario_file.empty()) return reference_scenario(earth.gravity);
  return load_scenario(scenario_file, earth.gravity);
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text, nullptr, true, true);
  } catch (const json::exception& e) {
    throw NavError(ErrorCode::Config, std::string("invalid JSON: ") + e.what());
  }
  RunConfig c = RunConfig::defaults();
  try {
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("mc_runs")) c.mc_runs = j["mc_runs"].get<int>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    if (j.contains("scenario_file")) c.scenario_file = j["scenario_file"].get<std::string>();
    if (j.contains("dt_truth")) c.dt_truth = j["dt_truth"].get<double>();
    if (j.contains("dt_filter")) c.dt_filter = j["dt_filter"].get<double>();
    if (j.contains("aps_cutoff")) c.aps_cutoff = j["aps_cutoff"].get<double>();
    if (j.contains("rmse_mode")) {
      const auto m = j["rmse_mode"].get<std::string>();
      if (m == "printed") {
        c.rmse_mode = RmseMode::Printed;
      } else if (m == "conventional") {
        c.rmse_mode = RmseMode::Conventional;
      } else {
        throw NavError(ErrorCode::Config, "rmse_mode must be 'printed' or 'conventional'");
      }
    }
    if (j.contains("earth")) {
      const auto& e = j["earth"];
      c.earth.omega_earth = e.value("omega_earth", c.earth.omega_earth);
      c.earth.semi_major = e.value("semi_major", c.earth.semi_major);
      c.earth.eccentricity = e.value("eccentricity", c.earth.eccentricity);
      c.earth.gravity = e.value("gravity", c.earth.gravity);
      c.imu_noise = default_imu_noise(c.earth, c.dt_filter);
      c.process_noise_diag = default_process_noise_diag(c.earth, c.dt_filter);
    }
    if (j.contains("initial_truth")) c.initial_truth.pos = position_from(j["initial_truth"]);
    if (j.contains("initial_estimate")) c.initial_estimate = state_from_file_units(j["initial_estimate"]);
    if (j.contains("initial_std")) c.initial_std = state_from_file_units(j["initial_std"]);
    if (j.contains("imu_noise")) {
      const auto& n = j["imu_noise"];
      c.imu_noise.accel_std = n.value("accel_std_mps2", c.imu_noise.accel_std);
      c.imu_noise.gyro_std = n.value("gyro_std_radps", c.imu_noise.gyro_std);
    }
    if (j.contains("process_noise_diag")) {
      const auto& q = j["process_noise_diag"];
      if (!q.is_array() || q.size() != kStateDim) {
        throw NavError(ErrorCode::Config, "process_noise_diag must have 9 entries");
      }
      for (int i = 0; i < kStateDim; ++i) c.process_noise_diag(i) = q.at(i).get<double>();
    }
    if (j.contains("aps")) {
      const auto& a = j["aps"];
      if (a.contains("gib1")) c.aps.gib1 = position_from(a["gib1"]);
      if (a.contains("gib2")) c.aps.gib2 = position_from(a["gib2"]);
      if (a.contains("ref_point")) c.aps.ref_point = position_from(a["ref_point"]);
    }
    if (j.contains("noise")) {
      for (const auto& ch : channels()) {
        if (j["noise"].contains(ch.name)) c.noise.*ch.field = mixture_from(j["noise"][ch.name], ch.scale);
      }
    }
    if (j.contains("mcc")) {
      const auto& m = j["mcc"];
      c.mcc.epsilon = m.value("epsilon", c.mcc.epsilon);
      c.mcc.i_max = m.value("i_max", c.mcc.i_max);
      c.mcc.pi_floor = m.value("pi_floor", c.mcc.pi_floor);
    }
    BasisMode basis = BasisMode::Orthonormal;
    if (j.contains("basis")) basis = parse_basis(j["basis"].get<std::string>());
    std::optional<double> kappa;
    if (j.contains("ukf_kappa") && !j["ukf_kappa"].is_null()) kappa = j["ukf_kappa"].get<double>();
    std::vector<std::string> names = {"UKF", "CKF", "PCKF", "MC-UKF", "MC-CKF", "MC-PCKF"};
    std::vector<double> sigmas = {0.5, 2.0};
    if (j.contains("filters")) names = j["filters"].get<std::vector<std::string>>();
    if (j.contains("sigmas")) sigmas = j["sigmas"].get<std::vector<double>>();
    c.filters = expand_filters(names, sigmas, basis, kappa);
  } catch (const json::exception& e) {
    throw NavError(ErrorCode::Config, std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NavError(ErrorCode::Io, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["mc_runs"] = c.mc_runs;
  j["threads"] = c.threads;
  j["scenario_file"] = c.scenario_file;
  j["dt_truth"] = c.dt_truth;
  j["dt_filter"] = c.dt_filter;
  j["aps_cutoff"] = c.aps_cutoff;
  j["rmse_mode"] = c.rmse_mode == RmseMode::Printed ? "printed" : "conventional";
  j["earth"] = {{"omega_earth", c.earth.omega_earth},
                {"semi_major", c.earth.semi_major},
                {"eccentricity", c.earth.eccentricity},
                {"gravity", c.earth.gravity}};
  j["initial_truth"] = position_json(c.initial_truth.pos);
  j["initial_estimate"] = vec_json(state_to_file_units(c.initial_estimate));
  j["initial_std"] = vec_json(state_to_file_units(c.initial_std));
  j["imu_noise"] = {{"accel_std_mps2", c.imu_noise.accel_std},
                    {"gyro_std_radps", c.imu_noise.gyro_std}};
  j["process_noise_diag"] = vec_json(c.process_noise_diag);
  j["aps"] = {{"gib1", position_json(c.aps.gib1)},
              {"gib2", position_json(c.aps.gib2)},
              {"ref_point", position_json(c.aps.ref_point)}};
  json noise;
  for (const auto& ch : channels()) noise[ch.name] = mixture_json(c.noise.*ch.field, ch.scale);
  j["noise"] = noise;
  j["mcc"] = {{"epsilon", c.mcc.epsilon}, {"i_max", c.mcc.i_max}, {"pi_floor", c.mcc.pi_floor}};
  std::vector<std::string> names;
  std::vector<double> sigmas;
  for (const auto& f : c.filters) {
    const std::string name = (f.robust ? "MC-" : "") + std::string(kind_name(f.kind));
    if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
    if (f.robust && std::find(sigmas.begin(), sigmas.end(), f.sigma) == sigmas.end()) {
      sigmas.push_back(f.sigma);
    }
  }
  j["filters"] = names;
  j["sigmas"] = sigmas;
  j["basis"] = c.filters.front().basis == BasisMode::Unnormalized ? "unnormalized" : "orthonormal";
  if (c.filters.front().kappa) {
    j["ukf_kappa"] = *c.filters.front().kappa;
  } else {
    j["ukf_kappa"] = nullptr;
  }
  return j.dump(2);
}

}  // namespace uwnav::harness
