#include "uwnav/harness/flops.hpp"

#include <cmath>
#include <limits>

#include "uwnav/error.hpp"

namespace uwnav::harness {

namespace {

double spkf(double n, double m, double np) {
  return 8.0 / 3.0 * n * n * n + m * m * m - 2.0 / 3.0 * np * np * np + n * n * (9.0 * np + 1.0) +
         2.0 * m * m * np + 2.0 * np * np * (n + m) + 2.0 * n * n * m + 4.0 * m * m * n +
         m * n * (2.0 * np - 1.0) + 2.0 * np * (2.0 * n + m) + n + 2.0 * m + 2.0 * np;
}

double pckf(double n, double m, double np) {
  return 8.0 / 3.0 * n * n * n + m * m * m + 2.0 * np * np * (n + m) +
         np * (6.0 * n * n - n - m + 2.0 * m * m + 2.0 * n * m) - 2.0 * n * n - 2.0 * m * m -
         3.0 * n * m + 4.0 * n * m * m + m + 2.0 * n * n * m;
}

double fpi_spkf(double n, double m, double np) {
  return spkf(n, m, np) + 16.0 / 3.0 * (n * n * n + m * m * m) + 4.0 * n * n +
         2.0 * m * m * (np + 1.0) + 2.0 * m * n * np + 2.0 * m * m * n + n + 4.0 * m;
}

double fpi_pckf(double n, double m, double np) {
  return pckf(n, m, np) + 16.0 / 3.0 * n * n * n + 19.0 / 3.0 * m * m * m + 4.0 * n * n +
         2.0 * m * m * (1.0 + np + n) + n * m + 4.0 * m + n;
}

}  // namespace

double flops(FlopsKind kind, int n_i, int m_i, int np_i, int t_i) {
  if (n_i < 1 || m_i < 1 || np_i < 1 || t_i < 1) {
    throw NavError(ErrorCode::InvalidArgument, "flop-count arguments must be positive");
  }
  const double n = n_i, m = m_i, np = np_i, t = t_i;
  switch (kind) {
    case FlopsKind::SPKF: return spkf(n, m, np);
    case FlopsKind::PCKF: return pckf(n, m, np);
    case FlopsKind::FpiSPKF: return fpi_spkf(n, m, np);
    case FlopsKind::FpiPCKF: return fpi_pckf(n, m, np);
    case FlopsKind::MCSPKF:
      return spkf(n, m, np) + t * fpi_spkf(n, m, np) -
             (m * m * m + 2.0 * m * m * np + 2.0 * n * m * (np - 1.0) + 2.0 * n * m * (m + 1.0) + m);
    case FlopsKind::MCPCKF:
      return pckf(n, m, np) + t * fpi_pckf(n, m, np) -
             (m * m * m + 2.0 * m * m * (np + m) + n * m + m);
  }
  return 0.0;
}

const std::vector<FlopsRow>& published_flops() {
  static const std::vector<FlopsRow> rows = {
      {"PCKF", 19, 0.0, 34533},    {"CKF", 18, 0.0, 34812},     {"UKF", 19, 0.0, 36568},
      {"NSKF", 37, 0.0, 63622},    {"MC-PCKF", 19, 0.0, 77364}, {"MC-CKF", 18, 0.0, 77193},
      {"MC-UKF", 19, 0.0, 80706},  {"MC-NSKF", 37, 0.0, 134810},
  };
  return rows;
}

std::vector<FlopsRow> flops_table(int n, int m, int t) {
  const int pts_pckf = 2 * n + 1;
  const std::vector<std::pair<std::string, int>> bases = {
      {"PCKF", pts_pckf}, {"CKF", 2 * n}, {"UKF", 2 * n + 1}, {"NSKF", 4 * n + 1}};
  std::vector<FlopsRow> rows;
  for (bool robust : {false, true}) {
    for (const auto& [name, np] : bases) {
      const bool pc = name == "PCKF";
      FlopsKind kind;
      if (robust) {
        kind = pc ? FlopsKind::MCPCKF : FlopsKind::MCSPKF;
      } else {
        kind = pc ? FlopsKind::PCKF : FlopsKind::SPKF;
      }
      FlopsRow r;
      r.filter = robust ? "MC-" + name : name;
      r.np = np;
      r.count = flops(kind, n, m, np, t);
      for (const auto& p : published_flops()) {
        if (p.filter == r.filter && n == 9) r.printed = p.printed;
      }
      rows.push_back(r);
    }
  }
  return rows;
}

FlopsFit fit_published_flops(int n) {
  FlopsFit best;
  best.mean_rel_error = std::numeric_limits<double>::infinity();
  for (int m : {5, 7, 9}) {
    for (int t = 1; t <= 5; ++t) {
      auto rows = flops_table(n, m, t);
      double err = 0.0;
      int cnt = 0;
      for (const auto& r : rows) {
        if (r.printed > 0.0) {
          err += std::abs(r.count - r.printed) / r.printed;
          ++cnt;
        }
      }
      if (cnt == 0) continue;
      err /= cnt;
      if (err < best.mean_rel_error) best = {m, t, err, std::move(rows)};
    }
  }
  return best;
}

}  // namespace uwnav::harness
