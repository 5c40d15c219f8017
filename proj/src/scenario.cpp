#include "uwnav/scenario.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "uwnav/error.hpp"

namespace uwnav {

namespace {

class ExprParser {
 public:
  ExprParser(const std::string& text, double g) : text_(text), g_(g) {}

  double parse() {
    const double v = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return v;
  }

 private:
  double expr() {
    double v = term();
    for (;;) {
      skip_ws();
      if (accept('+')) v += term();
      else if (accept('-')) v -= term();
      else return v;
    }
  }

  double term() {
    double v = factor();
    for (;;) {
      skip_ws();
      if (accept('*')) {
        v *= factor();
      } else if (accept('/')) {
        const double d = factor();
        if (d == 0.0) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  double factor() {
    skip_ws();
    if (accept('-')) return -factor();
    if (accept('+')) return factor();
    if (accept('(')) {
      const double v = expr();
      skip_ws();
      if (!accept(')')) fail("missing ')'");
      return v;
    }
    if (accept('g')) return g_;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text_.substr(pos_), &used);
    } catch (const std::exception&) {
      fail("expected a number");
    }
    pos_ += used;
    return v;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw NavError(ErrorCode::Config, "bad scalar '" + text_ + "': " + why);
  }

  const std::string& text_;
  double g_;
  std::size_t pos_ = 0;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  return out;
}

}  // namespace

double eval_scalar_expr(const std::string& text, double g) {
  return ExprParser(text, g).parse();
}

std::vector<ScenarioStage> parse_scenario(const std::string& text, double g) {
  std::vector<ScenarioStage> stages;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.front() == "stage") continue;
    if (f.size() < 9) {
      throw NavError(ErrorCode::Config,
                     "scenario line " + std::to_string(line_no) + ": expected at least 9 fields");
    }
    ScenarioStage s;
    s.t_start = eval_scalar_expr(f[1], g);
    s.t_end = eval_scalar_expr(f[2], g);
    s.accel_ned = {eval_scalar_expr(f[3], g), eval_scalar_expr(f[4], g), eval_scalar_expr(f[5], g)};
    s.euler_rates = {deg2rad(eval_scalar_expr(f[6], g)), deg2rad(eval_scalar_expr(f[7], g)),
                     deg2rad(eval_scalar_expr(f[8], g))};
    if (f.size() > 9) s.label = f[9];
    stages.push_back(std::move(s));
  }
  validate_schedule(stages);
  return stages;
}

std::vector<ScenarioStage> load_scenario(const std::string& path, double g) {
  std::ifstream in(path);
  if (!in) throw NavError(ErrorCode::Io, "cannot open scenario file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), g);
}

const std::string& reference_scenario_text() {
  static const std::string text =
      "# Underwater vehicle manoeuvre schedule.\n"
      "# Accelerations are NED specific force in m/s^2 (g = gravity), rates in deg/s.\n"
      "stage,t_start,t_end,aN,aE,aD,roll_rate,pitch_rate,yaw_rate,label\n"
      "1,0,100,0,1/20,-g,0,0,0,Constant acc.\n"
      "2,100,150,0,0.018,-(g+0.04),0,2/5,0,Pitch down\n"
      "3,150,200,0,0,-g,0,0,0,Uniform linear motion\n"
      "4,200,250,0,0.018,-(g-0.04),0,-2/5,0,Pitch up\n"
      "5,250,350,0,0,-g,0,0,0,Uniform linear motion\n"
      "6,350,355,0,0,-g,2/5,0,0,Roll motion\n"
      "7,355,450,0.053,-1/20,-g,0,0,19/20,Turn right\n"
      "8,450,455,0,0,-g,-2/5,0,0,Roll motion\n"
      "9,455,500,0,0,-g,0,0,0,Uniform linear motion\n"
      "10,500,505,0,0,-g,-2/5,0,0,Roll motion\n"
      "11,505,600,-0.053,1/20,-g,0,0,19/20,Turn left\n"
      "12,600,605,0,0,-g,2/5,0,0,Roll angle turn\n"
      "13,605,650,0,0,-g,0,0,0,Uniform linear vel.\n"
      "14,650,700,0,-1/20,-g,0,0,0,Constant decel.\n"
      "15,700,900,0,0,-g,0,0,0,Uniform linear motion\n";
  return text;
}

std::vector<ScenarioStage> reference_scenario(double g) {
  return parse_scenario(reference_scenario_text(), g);
}

}  // namespace uwnav
