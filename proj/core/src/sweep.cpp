#include "cvqt/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

#include "cvqt/analysis.hpp"
#include "cvqt/errors.hpp"
#include "cvqt/fock_oracle.hpp"

#ifndef CVQT_VERSION
#define CVQT_VERSION "0.0.0"
#endif

namespace cvqt {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

double to_double(std::string_view s, std::string_view what) {
  const std::string str(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(str, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != str.size()) throw DomainError(fmt::format("{}: '{}' is not a number", what, str));
  return v;
}

int to_int(std::string_view s, std::string_view what) {
  const double v = to_double(s, what);
  if (v != std::floor(v) || std::abs(v) > 1e6) throw DomainError(fmt::format("{}: '{}' is not an integer", what, s));
  return static_cast<int>(v);
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.12g}", v);
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const MeasureZeroOutcome*>(&e)) return "error:measure_zero";
  if (dynamic_cast<const NonConvergentIntegral*>(&e)) return "error:nonconvergent";
  if (dynamic_cast<const NumericalError*>(&e)) return "error:numerical";
  if (dynamic_cast<const DomainError*>(&e)) return "error:domain";
  return "error:other";
}

nlohmann::ordered_json json_number(double v) {
  return std::isnan(v) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v);
}

}  // namespace

std::vector<double> GridAxis::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) {
    v[i] = i == count - 1 ? max : min + (max - min) * static_cast<double>(i) / (count - 1);
  }
  return v;
}

GridAxis parse_axis(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw DomainError(fmt::format("axis '{}' is not min:max:count", text));
  GridAxis axis{to_double(parts[0], "axis min"), to_double(parts[1], "axis max"), to_int(parts[2], "axis count")};
  if (axis.count < 2) throw DomainError(fmt::format("axis count {} < 2", axis.count));
  if (!(axis.min <= axis.max)) throw DomainError(fmt::format("axis min {} > max {}", axis.min, axis.max));
  return axis;
}

OperationSpec parse_spec(std::string_view text, double transmissivity) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw DomainError(fmt::format("spec '{}' is not m1,n1,m2,n2", text));
  OperationSpec spec{to_int(parts[0], "m1"), to_int(parts[1], "n1"), to_int(parts[2], "m2"), to_int(parts[3], "n2"),
                     transmissivity};
  if (spec.m1 < 0 || spec.n1 < 0 || spec.m2 < 0 || spec.n2 < 0) {
    throw DomainError(fmt::format("spec '{}' has negative photon numbers", text));
  }
  return spec;
}

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw DomainError(fmt::format("unknown format '{}'", name));
}

SeedDescriptor SweepConfig::seed(double r) const {
  return {family, r, family == SeedFamily::TMSV ? 0.5 : kappa};
}

void validate(const SweepConfig& c) {
  if (c.r_grid.count < 2 || c.t_grid.count < 2) throw DomainError("grid counts must be at least 2");
  if (!(c.t_grid.min > 0.0 && c.t_grid.min <= c.t_grid.max && c.t_grid.max < 1.0)) {
    throw DomainError(fmt::format("T range [{}, {}] must satisfy 0 < T_min <= T_max < 1", c.t_grid.min, c.t_grid.max));
  }
  if (!(c.r_grid.min >= 0.0 && c.r_grid.min <= c.r_grid.max)) {
    throw DomainError(fmt::format("r range [{}, {}] must satisfy 0 <= r_min <= r_max", c.r_grid.min, c.r_grid.max));
  }
  if (c.family == SeedFamily::TMST && !(c.kappa >= 0.5)) throw DomainError(fmt::format("kappa {} < 1/2", c.kappa));
}

SweepRow evaluate_point(const SeedDescriptor& seed, const OperationSpec& spec) {
  const NGState state = build_ng_state(seed, spec);
  const FidelityRecord fid = fidelity(state);
  const SqueezingReport sq = covariance_of(state);
  SweepRow row;
  row.r = seed.r;
  row.T = spec.transmissivity;
  row.F = fid.fidelity;
  row.lambda_min = sq.lambda_min;
  row.p_ng = state.p_success;
  row.success = fid.verdict.success;
  row.unsqueezed = !sq.squeezed;
  row.region = row.success && row.unsqueezed;
  if (fid.verdict.near_boundary) row.flags.emplace_back("F_boundary");
  if (sq.near_boundary) row.flags.emplace_back("lambda_boundary");
  return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  validate(config);
  const auto rs = config.r_grid.values();
  const auto ts = config.t_grid.values();
  std::vector<SweepRow> rows;
  rows.reserve(rs.size() * ts.size());
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  for (double r : rs) {
    for (double t : ts) {
      OperationSpec spec = config.spec;
      spec.transmissivity = t;
      try {
        rows.push_back(evaluate_point(config.seed(r), spec));
      } catch (const std::exception& e) {
        SweepRow row{r, t, kNaN, kNaN, kNaN, false, false, false, {error_kind(e)}};
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

SweepMetadata metadata_of(const SweepConfig& config) {
  return {config.family, config.family == SeedFamily::TMSV ? 0.5 : config.kappa, config.spec.photon_string(),
          config.r_grid, config.t_grid, {}};
}

std::string engine_version() { return CVQT_VERSION; }

std::string format_csv(const SweepMetadata& meta, const std::vector<SweepRow>& rows) {
  std::string out;
  out += fmt::format("# family: {}\n", to_string(meta.family));
  out += fmt::format("# spec: {}\n", meta.spec);
  out += fmt::format("# kappa: {}\n", num(meta.kappa));
  out += fmt::format("# engine_version: {}\n", engine_version());
  if (meta.r_grid) out += fmt::format("# r_grid: {}:{}:{}\n", num(meta.r_grid->min), num(meta.r_grid->max), meta.r_grid->count);
  if (meta.t_grid) out += fmt::format("# T_grid: {}:{}:{}\n", num(meta.t_grid->min), num(meta.t_grid->max), meta.t_grid->count);
  for (const auto& [key, value] : meta.extra) out += fmt::format("# {}: {}\n", key, value);
  out += kCsvHeader;
  out += '\n';
  for (const auto& row : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", num(row.r), num(row.T), num(row.F), num(row.lambda_min),
                       num(row.p_ng), row.success ? 1 : 0, row.unsqueezed ? 1 : 0, row.region ? 1 : 0,
                       join_flags(row.flags));
  }
  return out;
}

std::string format_json(const SweepMetadata& meta, const std::vector<SweepRow>& rows) {
  // Values are rounded to 12 significant digits, as in the CSV.
  const auto round12 = [](double v) { return std::isnan(v) ? v : std::stod(num(v)); };
  nlohmann::ordered_json doc;
  auto& m = doc["metadata"];
  m["family"] = std::string(to_string(meta.family));
  m["spec"] = meta.spec;
  m["kappa"] = round12(meta.kappa);
  m["engine_version"] = engine_version();
  if (meta.r_grid) m["r_grid"] = {{"min", meta.r_grid->min}, {"max", meta.r_grid->max}, {"count", meta.r_grid->count}};
  if (meta.t_grid) m["T_grid"] = {{"min", meta.t_grid->min}, {"max", meta.t_grid->max}, {"count", meta.t_grid->count}};
  for (const auto& [key, value] : meta.extra) m[key] = value;
  auto& out_rows = doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json j;
    j["r"] = json_number(round12(row.r));
    j["T"] = json_number(round12(row.T));
    j["F"] = json_number(round12(row.F));
    j["lambda_min"] = json_number(round12(row.lambda_min));
    j["p_ng"] = json_number(round12(row.p_ng));
    j["success"] = row.success;
    j["unsqueezed"] = row.unsqueezed;
    j["region"] = row.region;
    j["flags"] = row.flags;
    out_rows.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::string format_rows(OutputFormat format, const SweepMetadata& meta, const std::vector<SweepRow>& rows) {
  return format == OutputFormat::Csv ? format_csv(meta, rows) : format_json(meta, rows);
}

void write_file(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error(fmt::format("cannot open '{}' for writing", tmp));
    f << contents;
    f.flush();
    if (!f) throw std::runtime_error(fmt::format("write to '{}' failed", tmp));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error(fmt::format("cannot move output into '{}'", path));
  }
}

namespace table1 {

double ps_fidelity(double a) { return std::pow(1 + a, 3) / (4 * (1 + a * a)) * (1 + (1 - a) * (1 - a)); }
double pa_fidelity(double a) { return std::pow(1 + a, 3) / (4 * (1 + a * a)); }
double ps_lambda_min(double b) { return (1 - b) * (1 - b) / (2 * (1 - std::pow(b, 4))) * (1 - 2 * b + 3 * b * b); }
double pa_lambda_min(double b) { return (1 - b) * (1 - b) / (2 * (1 - std::pow(b, 4))) * (3 - 2 * b + b * b); }
double alpha(double r, double T, int power) { return std::pow(T, power) * std::tanh(r); }
double beta(double r, double T) { return T * std::tanh(r); }

}  // namespace table1

bool VerifyReport::pass() const {
  for (const auto& e : entries) {
    if (!e.pass) return false;
  }
  return !entries.empty();
}

VerifyReport verify_table1(int alpha_power, int n) {
  struct Column {
    std::string name;
    OperationSpec spec;
    bool is_fidelity;
    double (*closed)(double);
  };
  const std::vector<Column> columns = {
      {"PSTMSV F", OperationSpec::subtraction(0.9), true, table1::ps_fidelity},
      {"PSTMSV lambda_min", OperationSpec::subtraction(0.9), false, table1::ps_lambda_min},
      {"PATMSV F", OperationSpec::addition(0.9), true, table1::pa_fidelity},
      {"PATMSV lambda_min", OperationSpec::addition(0.9), false, table1::pa_lambda_min},
  };
  const auto rs = GridAxis{0.05, 1.5, n}.values();
  const auto ts = GridAxis{0.5, 0.99, n}.values();
  std::vector<VerifyEntry> entries;
  for (const auto& c : columns) entries.push_back({c.name, 0.0, 0.0, 0.0, false});
  for (double r : rs) {
    for (double t : ts) {
      std::map<int, SweepRow> cache;
      for (std::size_t k = 0; k < columns.size(); ++k) {
        const auto& c = columns[k];
        OperationSpec spec = c.spec;
        spec.transmissivity = t;
        const int key = spec.m1;
        if (!cache.contains(key)) cache.emplace(key, evaluate_point({SeedFamily::TMSV, r, 0.5}, spec));
        const SweepRow& row = cache.at(key);
        const double expected = c.is_fidelity ? c.closed(table1::alpha(r, t, alpha_power)) : c.closed(table1::beta(r, t));
        const double dev = std::abs((c.is_fidelity ? row.F : row.lambda_min) - expected);
        if (dev > entries[k].max_deviation || std::isnan(dev)) {
          entries[k].max_deviation = dev;
          entries[k].worst_r = r;
          entries[k].worst_T = t;
        }
      }
    }
  }
  for (auto& e : entries) e.pass = e.max_deviation < kVerifyTolerance;
  return {entries};
}

bool OracleReport::pass() const {
  for (const auto& c : comparisons) {
    if (!c.pass) return false;
  }
  return !comparisons.empty();
}

std::vector<OraclePoint> default_oracle_points_tmsv() {
  const std::vector<std::pair<double, double>> rt = {{0.2, 0.95}, {0.5, 0.9}, {0.8, 0.8}, {1.0, 0.7}, {1.2, 0.6}};
  std::vector<OraclePoint> points;
  for (auto [r, t] : rt) {
    for (auto spec : {OperationSpec::subtraction(t), OperationSpec::addition(t), OperationSpec::catalysis(t)}) {
      points.push_back({{SeedFamily::TMSV, r, 0.5}, spec});
    }
  }
  return points;
}

std::vector<OraclePoint> default_oracle_points_tmst(double kappa) {
  const std::vector<std::pair<double, double>> rt = {{0.3, 0.9}, {0.6, 0.8}, {0.9, 0.7}};
  std::vector<OraclePoint> points;
  for (auto [r, t] : rt) {
    for (auto spec : {OperationSpec::subtraction(t), OperationSpec::addition(t), OperationSpec::catalysis(t)}) {
      points.push_back({{SeedFamily::TMST, r, kappa}, spec});
    }
  }
  return points;
}

OracleReport oracle_check(const std::vector<OraclePoint>& points, int initial_cutoff, const VariableMap& map) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  std::map<std::tuple<int, double, double>, oracle::FockSeed> seeds;
  OracleReport report;
  for (const auto& p : points) {
    OracleComparison cmp{p, 0, kNaN, kNaN, kNaN, false};
    const double kappa = p.seed.family == SeedFamily::TMSV ? 0.5 : p.seed.kappa;
    const auto key = std::make_tuple(static_cast<int>(p.seed.family), p.seed.r, kappa);
    auto it = seeds.find(key);
    if (it == seeds.end()) it = seeds.emplace(key, oracle::oracle_seed_auto(p.seed, initial_cutoff)).first;
    const oracle::FockSeed& seed = it->second;
    cmp.cutoff = seed.rho.cutoff();
    try {
      const NGState state = build_ng_state(p.seed, p.spec);
      const double f = fidelity(state.chi, {}, map).fidelity;
      const double lam = covariance_of(state).lambda_min;
      const oracle::FockNG ng = oracle::oracle_ng(seed.rho, p.spec);
      const double f_oracle = oracle::oracle_fidelity(ng.rho, {}).value;
      const double lam_oracle = squeezing_report(oracle::oracle_covariance(ng.rho), Vector::Zero(4)).lambda_min;
      cmp.dF = std::abs(f - f_oracle);
      cmp.dlambda = std::abs(lam - lam_oracle);
      cmp.dp = std::abs(state.p_success - ng.p_success);
      cmp.pass = cmp.dF < kOracleTolerance && cmp.dlambda < kOracleTolerance && cmp.dp < kOracleTolerance;
    } catch (const NumericalError&) {
      cmp.pass = false;
    }
    report.comparisons.push_back(cmp);
  }
  return report;
}

}  // namespace cvqt
