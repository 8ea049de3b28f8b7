#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cvqt/nongaussian.hpp"
#include "cvqt/teleportation.hpp"

namespace cvqt {

/// Inclusive, evenly spaced axis. count >= 2.
struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  int count = 2;

  std::vector<double> values() const;
};

/// "min:max:count".
GridAxis parse_axis(std::string_view text);
/// "m1,n1,m2,n2" with the given transmissivity.
OperationSpec parse_spec(std::string_view text, double transmissivity = 0.9);

enum class OutputFormat { Csv, Json };
OutputFormat parse_format(std::string_view name);

struct SweepConfig {
  SeedFamily family = SeedFamily::TMSV;
  double kappa = 1.0;
  /// Photon numbers only; the transmissivity comes from t_grid.
  OperationSpec spec = OperationSpec::subtraction(0.9);
  GridAxis r_grid{0.01, 1.5, 150};
  GridAxis t_grid{0.5, 0.99, 150};

  SeedDescriptor seed(double r) const;
};

/// Throws DomainError unless counts >= 2, 0 < T_min <= T_max < 1 and 0 <= r_min <= r_max.
void validate(const SweepConfig& config);

struct SweepRow {
  double r = 0.0;
  double T = 0.0;
  double F = 0.0;
  double lambda_min = 0.0;
  double p_ng = 0.0;
  bool success = false;
  bool unsqueezed = false;
  bool region = false;
  /// Boundary markers and per-row errors, e.g. "F_boundary" or "error:measure_zero".
  std::vector<std::string> flags;
};

/// Full pipeline at one point. Pipeline errors propagate.
SweepRow evaluate_point(const SeedDescriptor& seed, const OperationSpec& spec);

/// r-major grid evaluation. Pipeline errors become NaN rows with an error flag.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

struct SweepMetadata {
  SeedFamily family = SeedFamily::TMSV;
  double kappa = 0.5;
  std::string spec;
  std::optional<GridAxis> r_grid;
  std::optional<GridAxis> t_grid;
  /// Additional key/value lines, emitted after the fixed entries.
  std::vector<std::pair<std::string, std::string>> extra;
};

SweepMetadata metadata_of(const SweepConfig& config);

inline constexpr std::string_view kCsvHeader = "r,T,F,lambda_min,p_ng,success,unsqueezed,region,flags";

/// 12 significant digits, '#' preamble, fixed columns.
std::string format_csv(const SweepMetadata& meta, const std::vector<SweepRow>& rows);
/// {"metadata": {...}, "rows": [...]}
std::string format_json(const SweepMetadata& meta, const std::vector<SweepRow>& rows);
std::string format_rows(OutputFormat format, const SweepMetadata& meta, const std::vector<SweepRow>& rows);

/// Writes through a temporary file and a rename, so a rerun replaces a partial file.
void write_file(const std::string& path, const std::string& contents);

std::string engine_version();

/// Closed-form fidelity and minimum eigenvalue of (0,1)(0,1)-PSTMSV and (1,0)(1,0)-PATMSV.
namespace table1 {
double ps_fidelity(double alpha);
double pa_fidelity(double alpha);
double ps_lambda_min(double beta);
double pa_lambda_min(double beta);
/// alpha = T^power tanh r; the printed caption uses power 2.
double alpha(double r, double T, int power = 2);
double beta(double r, double T);
}  // namespace table1

struct VerifyEntry {
  std::string name;
  double max_deviation = 0.0;
  double worst_r = 0.0;
  double worst_T = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyEntry> entries;
  bool pass() const;
};

inline constexpr double kVerifyTolerance = 1e-9;

/// Pipeline vs Table 1 over an n x n grid, r in [0.05, 1.5], T in [0.5, 0.99].
VerifyReport verify_table1(int alpha_power = 2, int n = 20);

struct OraclePoint {
  SeedDescriptor seed;
  OperationSpec spec;
};

struct OracleComparison {
  OraclePoint point;
  int cutoff = 0;
  double dF = 0.0;
  double dlambda = 0.0;
  double dp = 0.0;
  bool pass = false;
};

struct OracleReport {
  std::vector<OracleComparison> comparisons;
  bool pass() const;
};

inline constexpr double kOracleTolerance = 1e-6;

/// PS, PA and PC at five TMSV points.
std::vector<OraclePoint> default_oracle_points_tmsv();
/// PS, PA and PC at three TMST points with the given kappa.
std::vector<OraclePoint> default_oracle_points_tmst(double kappa = 1.0);

/// Pipeline vs Fock oracle. The pipeline fidelity uses `map`, so a corrupted map must fail.
OracleReport oracle_check(const std::vector<OraclePoint>& points, int initial_cutoff,
                          const VariableMap& map = vbk_resource_map());

}  // namespace cvqt
