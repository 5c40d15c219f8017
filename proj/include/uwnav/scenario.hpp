#pragma once

#include <string>
#include <vector>

#include "uwnav/dynamics.hpp"

namespace uwnav {

/// Evaluates a scalar field of the scenario file. Accepts numbers, fractions and the
/// symbol g with + - * / and parentheses, e.g. "1/20", "-(g+0.04)".
double eval_scalar_expr(const std::string& text, double g);

/// Parses the stage table. One stage per line:
///   stage,t_start,t_end,aN,aE,aD,roll_rate,pitch_rate,yaw_rate[,label]
/// Accelerations in m/s^2, rates in deg/s. '#' starts a comment; a header line whose
/// first field is "stage" is skipped.
std::vector<ScenarioStage> parse_scenario(const std::string& text, double g);
std::vector<ScenarioStage> load_scenario(const std::string& path, double g);

/// The built-in 15-stage, 900 s manoeuvre schedule.
std::vector<ScenarioStage> reference_scenario(double g);

/// Text of the built-in schedule in the file format above.
const std::string& reference_scenario_text();

}  // namespace uwnav
