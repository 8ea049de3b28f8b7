#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cvqt/analysis.hpp"
#include "cvqt/errors.hpp"
#include "cvqt/fock_oracle.hpp"
#include "cvqt/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerification = 3;

struct Options {
  std::string family = "TMSV";
  std::string oracle_family = "all";
  std::string spec = "0,1,0,1";
  std::optional<double> kappa;
  std::string r;
  std::string T;
  std::string out;
  std::string format = "csv";
  int cutoff = cvqt::oracle::kDefaultCutoff;
  std::optional<std::uint64_t> seed;
  int alpha_power = 2;
  int grid = 20;
};

double kappa_for(const Options& o, cvqt::SeedFamily family) {
  if (family == cvqt::SeedFamily::TMSV) return 0.5;
  return o.kappa.value_or(1.0);
}

double parse_scalar(const std::string& text, const char* name) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw cvqt::DomainError(fmt::format("--{} expects a number, got '{}'", name, text));
}

void emit(const Options& o, const std::string& contents) {
  if (o.out.empty()) {
    std::cout << contents;
  } else {
    cvqt::write_file(o.out, contents);
  }
}

int run_point(const Options& o) {
  using namespace cvqt;
  const SeedFamily family = parse_family(o.family);
  if (o.r.empty() || o.T.empty()) throw DomainError("point needs --r and --T");
  const SeedDescriptor seed{family, parse_scalar(o.r, "r"), kappa_for(o, family)};
  const OperationSpec spec = parse_spec(o.spec, parse_scalar(o.T, "T"));
  const SweepRow row = evaluate_point(seed, spec);
  SweepMetadata meta{family, seed.kappa, spec.photon_string(), std::nullopt, std::nullopt, {}};
  if (o.seed) {
    // lambda_min is invariant under passive transforms; report the transformed value as a check.
    const SqueezingReport sq = covariance_of(build_ng_state(seed, spec));
    const SymplecticMatrix u = random_passive(*o.seed);
    const Matrix v = u.matrix() * sq.cov * u.matrix().transpose();
    const double transformed = squeezing_report(v, u.matrix() * sq.mean).lambda_min;
    meta.extra.emplace_back("passive_seed", std::to_string(*o.seed));
    meta.extra.emplace_back("lambda_min_passive", fmt::format("{:.12g}", transformed));
  }
  emit(o, format_rows(parse_format(o.format), meta, {row}));
  return kExitOk;
}

int run_sweep(const Options& o) {
  using namespace cvqt;
  SweepConfig config;
  config.family = parse_family(o.family);
  config.kappa = kappa_for(o, config.family);
  config.spec = parse_spec(o.spec);
  if (!o.r.empty()) config.r_grid = parse_axis(o.r);
  if (!o.T.empty()) config.t_grid = parse_axis(o.T);
  validate(config);
  const auto rows = cvqt::run_sweep(config);
  emit(o, format_rows(parse_format(o.format), metadata_of(config), rows));
  return kExitOk;
}

int run_verify(const Options& o) {
  if (o.alpha_power != 1 && o.alpha_power != 2) throw cvqt::DomainError("--alpha-power must be 1 or 2");
  if (o.grid < 2) throw cvqt::DomainError("--grid must be at least 2");
  const cvqt::VerifyReport report = cvqt::verify_table1(o.alpha_power, o.grid);
  std::string text = fmt::format("# table1 verification, alpha = T^{} tanh r, beta = T tanh r, {}x{} grid\n",
                                 o.alpha_power, o.grid, o.grid);
  for (const auto& e : report.entries) {
    text += fmt::format("{} {:<18} max|dev| = {:.3e} (r = {:.6g}, T = {:.6g})\n", e.pass ? "PASS" : "FAIL", e.name,
                        e.max_deviation, e.worst_r, e.worst_T);
  }
  emit(o, text);
  return report.pass() ? kExitOk : kExitVerification;
}

int run_oracle_check(const Options& o) {
  using namespace cvqt;
  std::vector<OraclePoint> points;
  const std::string fam = o.oracle_family;
  if (fam == "all" || fam == "TMSV" || fam == "tmsv") {
    for (const auto& p : default_oracle_points_tmsv()) points.push_back(p);
  }
  if (fam == "all" || fam == "TMST" || fam == "tmst") {
    for (const auto& p : default_oracle_points_tmst(o.kappa.value_or(1.0))) points.push_back(p);
  }
  if (points.empty()) throw DomainError(fmt::format("unknown family '{}'", fam));
  if (o.cutoff < 1 || o.cutoff > oracle::kMaxCutoff) throw DomainError(fmt::format("--cutoff {} out of range", o.cutoff));
  const OracleReport report = oracle_check(points, o.cutoff);
  std::string text = "family,r,kappa,T,spec,cutoff,dF,dlambda,dp,pass\n";
  for (const auto& c : report.comparisons) {
    text += fmt::format("{},{:.12g},{:.12g},{:.12g},\"{}\",{},{:.3e},{:.3e},{:.3e},{}\n", to_string(c.point.seed.family),
                        c.point.seed.r, c.point.seed.family == SeedFamily::TMSV ? 0.5 : c.point.seed.kappa,
                        c.point.spec.transmissivity, c.point.spec.photon_string(), c.cutoff, c.dF, c.dlambda, c.dp,
                        c.pass ? 1 : 0);
    if (!c.pass) {
      std::cerr << fmt::format("oracle disagreement: {} r={} T={} spec {}\n", to_string(c.point.seed.family),
                               c.point.seed.r, c.point.spec.transmissivity, c.point.spec.photon_string());
    }
  }
  emit(o, text);
  return report.pass() ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Teleportation fidelity and squeezing of heralded non-Gaussian two-mode states"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cvqt::engine_version());
  Options o;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output path (stdout if omitted)");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  const auto add_state = [&](CLI::App* sub) {
    sub->add_option("--family", o.family, "TMSV or TMST");
    sub->add_option("--spec", o.spec, "Photon numbers m1,n1,m2,n2");
    sub->add_option("--kappa", o.kappa, "Thermal variance of TMST seeds (default 1)");
  };

  CLI::App* point = app.add_subcommand("point", "Evaluate one (r, T) point");
  add_state(point);
  add_common(point);
  point->add_option("--r", o.r, "Squeezing r")->required();
  point->add_option("--T", o.T, "Transmissivity T")->required();
  point->add_option("--seed", o.seed, "Also report lambda_min after a seeded random passive transform");

  CLI::App* sweep = app.add_subcommand("sweep", "Evaluate an (r, T) grid");
  add_state(sweep);
  add_common(sweep);
  sweep->add_option("--r", o.r, "r grid min:max:count (default 0.01:1.5:150)");
  sweep->add_option("--T", o.T, "T grid min:max:count (default 0.5:0.99:150)");

  CLI::App* verify = app.add_subcommand("verify", "Compare the pipeline with the Table 1 closed forms");
  verify->add_option("--out", o.out, "Report path (stdout if omitted)");
  verify->add_option("--alpha-power", o.alpha_power, "alpha = T^p tanh r (default 2)");
  verify->add_option("--grid", o.grid, "Grid points per axis (default 20)");

  CLI::App* oracle_check = app.add_subcommand("oracle-check", "Compare the pipeline with the truncated Fock oracle");
  oracle_check->add_option("--family", o.oracle_family, "TMSV, TMST or all (default all)");
  oracle_check->add_option("--kappa", o.kappa, "Thermal variance of TMST seeds (default 1)");
  oracle_check->add_option("--cutoff", o.cutoff, "Initial Fock cutoff, escalated automatically");
  oracle_check->add_option("--out", o.out, "Report path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*point) return run_point(o);
    if (*sweep) return run_sweep(o);
    if (*verify) return run_verify(o);
    if (*oracle_check) return run_oracle_check(o);
  } catch (const cvqt::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const cvqt::DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const cvqt::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
