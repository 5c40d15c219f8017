#pragma once

#include <string>
#include <vector>

namespace uwnav::harness {

enum class FlopsKind { SPKF, PCKF, FpiSPKF, FpiPCKF, MCSPKF, MCPCKF };

/// Closed-form operation counts for dimensions n, m, point count np and T iterations.
double flops(FlopsKind kind, int n, int m, int np, int t = 1);

struct FlopsRow {
  std::string filter;
  int np = 0;
  double count = 0.0;
  double printed = 0.0;  ///< published count, 0 when unknown
};

struct FlopsFit {
  int m = 0;
  int t = 0;
  double mean_rel_error = 0.0;
  std::vector<FlopsRow> rows;
};

/// Published counts for n = 9: PCKF, CKF, UKF, NSKF and their MC variants.
const std::vector<FlopsRow>& published_flops();

/// Counts for every published filter at the given (n, m, T).
std::vector<FlopsRow> flops_table(int n, int m, int t);

/// Searches m in {5, 7, 9} and T in {1..5} for the smallest mean relative error
/// against published_flops().
FlopsFit fit_published_flops(int n = 9);

}  // namespace uwnav::harness
