#include "uwnav/harness/runner.hpp"

#include <chrono>
#include <cmath>

#include "uwnav/error.hpp"
#include "uwnav/harness/models.hpp"
#include "uwnav/rng.hpp"

namespace uwnav::harness {

namespace {

enum TrialStream : std::uint64_t { kStreamImu = 0, kStreamMeasurements = 1 };

}  // namespace

Reference make_reference(const RunConfig& cfg) {
  Reference ref;
  ref.stages = cfg.stages();
  validate_schedule(ref.stages);
  ref.truth_fine = generate_truth(ref.stages, cfg.initial_truth, cfg.dt_truth, cfg.earth);
  const auto step = static_cast<std::size_t>(std::llround(cfg.dt_filter / cfg.dt_truth));
  for (std::size_t i = 0; i < ref.truth_fine.size(); i += step) ref.truth.push_back(ref.truth_fine[i]);
  return ref;
}

TrialData make_trial(const RunConfig& cfg, const Reference& ref, int trial) {
  TrialData d;
  auto imu_rng = make_stream(cfg.seed, static_cast<std::uint64_t>(trial), kStreamImu);
  d.imu = synthesize_imu(ref.truth_fine, ref.stages, cfg.imu_noise, imu_rng, cfg.dt_filter,
                         cfg.earth);
  MeasurementSynthesisOptions opts;
  opts.aps_cutoff_t = cfg.aps_cutoff;
  d.measurements =
      synthesize_measurements(ref.truth, cfg.noise, cfg.aps, opts,
                              derive_seed(cfg.seed, static_cast<std::uint64_t>(trial),
                                          kStreamMeasurements),
                              cfg.earth);
  return d;
}

FilterRun run_filter(const RunConfig& cfg, const FilterSpec& spec,
                     const TrialData& trial) {
  const auto start = std::chrono::steady_clock::now();
  const EngineConfig engine = spec.engine();
  const MeasurementModel model1 = make_measurement_model(MeasurementKind::ModelI, cfg.noise);
  const MeasurementModel model2 = make_measurement_model(MeasurementKind::ModelII, cfg.noise);

  SqrtBelief belief;
  belief.mean = cfg.initial_estimate;
  belief.sqrt_cov = cfg.initial_std.asDiagonal();

  FilterRun run;
  const std::size_t steps = std::min(trial.imu.size() + 1, trial.measurements.size());
  for (std::size_t k = 1; k < steps; ++k) {
    const ProcessModel pm =
        make_process_model(trial.imu[k - 1], cfg.dt_filter, cfg.process_noise_diag, cfg.earth);
    belief = predict(belief, pm, engine, &run.diag);

    const MeasurementVector& y = trial.measurements[k];
    const MeasurementModel& mm = y.kind == MeasurementKind::ModelI ? model1 : model2;
    try {
      if (spec.robust) {
        MccConfig mc = cfg.mcc;
        mc.sigma = spec.sigma;
        belief = mc_update(belief, y.values, mm, engine, mc, &run.diag).posterior;
      } else {
        belief = update(belief, y.values, mm, engine, &run.diag);
      }
    } catch (const NavError& e) {
      if (e.code() != ErrorCode::NonPositiveInnovation && e.code() != ErrorCode::SingularFactor) throw;
      ++run.diag.factorization_failures;
      ++run.diag.skipped_updates;
    }
    run.t.push_back(y.t);
    run.estimates.push_back(belief.mean);
  }
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

Eigen::MatrixXd error_series(const FilterRun& run, const Reference& ref, const EarthModel& earth) {
  if (run.estimates.size() + 1 > ref.truth.size()) {
    throw NavError(ErrorCode::MismatchedLengths, "more estimates than truth samples");
  }
  Eigen::MatrixXd e(static_cast<Eigen::Index>(run.estimates.size()), kStateDim);
  for (std::size_t k = 0; k < run.estimates.size(); ++k) {
    const StateVector x = ref.truth[k + 1].state.to_vector();
    const StateVector& xh = run.estimates[k];
    const auto r = curvature_radii(x(kLat), earth);
    const auto row = static_cast<Eigen::Index>(k);
    e(row, 0) = (xh(kLat) - x(kLat)) * (r.meridian + x(kDepth));
    e(row, 1) = wrap_angle(xh(kLon) - x(kLon)) * (r.transverse + x(kDepth)) * std::cos(x(kLat));
    e(row, 2) = xh(kDepth) - x(kDepth);
    for (int i = kVelN; i <= kVelD; ++i) e(row, i) = xh(i) - x(i);
    for (int i = kRoll; i <= kYaw; ++i) e(row, i) = rad2deg(wrap_angle(xh(i) - x(i)));
  }
  return e;
}

}  // namespace uwnav::harness
