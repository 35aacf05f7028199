#include "pnorm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "pnorm/and_algebra.hpp"
#include "pnorm/cnd1.hpp"
#include "pnorm/error.hpp"
#include "pnorm/geometry.hpp"
#include "pnorm/interpolation.hpp"
#include "pnorm/io.hpp"
#include "pnorm/singular.hpp"

namespace pnorm::cli {

namespace {

using io::Json;

struct Tolerances {
  double eig = kDefaultEigenTolerance;
  double root = kDefaultRootTolerance;
  double cert = kDefaultCertTolerance;

  Json to_json() const {
    Json j;
    j["tol_eig"] = eig;
    j["tol_root"] = root;
    j["tol_cert"] = cert;
    return j;
  }
};

struct RunReport {
  std::string command;
  Json inputs = Json::object();
  Json results = Json::object();
  bool pass = true;
};

void emit(std::ostream& out, const RunReport& report, const Tolerances& tol) {
  Json j;
  j["command"] = report.command;
  j["inputs"] = report.inputs;
  j["tolerances"] = tol.to_json();
  j["results"] = report.results;
  j["pass"] = report.pass;
  out << io::dump_json(j) << '\n';
}

RadialProfile resolve_profile(const std::string& spec, const std::string& convention) {
  RadialProfile profile = io::parse_profile_spec(spec);
  if (!convention.empty()) profile = profile.with_input(input_convention_from_string(convention));
  return profile;
}

struct DistmatArgs {
  std::string points;
  double p = 2.0;
  std::string profile = "identity";
  std::string convention;
  std::string out;
};

int cmd_distmat(const DistmatArgs& a, const Tolerances& tol, std::ostream& out) {
  const PointSet x = io::read_points(a.points);
  const PExponent p(a.p);
  const RadialProfile profile = resolve_profile(a.profile, a.convention);
  const DistanceMatrix m = build_distance_matrix(x, p, profile);
  io::write_csv_file(a.out, m.entries);

  RunReport r{"distmat"};
  r.inputs["points"] = a.points;
  r.inputs["p"] = a.p;
  r.inputs["profile"] = io::to_json(profile);
  r.results["n"] = x.size();
  r.results["d"] = x.dim();
  r.results["symmetric"] = m.entries == m.entries.transpose();
  r.results["out"] = a.out;
  emit(out, r, tol);
  return kOk;
}

struct CheckAndArgs {
  std::string input;
  std::optional<double> p;
  std::string profile = "identity";
  std::string convention;
  std::string out;
};

int cmd_check_and(const CheckAndArgs& a, const Tolerances& tol, std::ostream& out) {
  RunReport r{"check-and"};
  r.inputs["input"] = a.input;
  AndReport report;
  Eigen::MatrixXd matrix;
  if (a.p) {
    const PointSet x = io::read_points(a.input);
    const RadialProfile profile = resolve_profile(a.profile, a.convention);
    r.inputs["mode"] = "points";
    r.inputs["p"] = *a.p;
    r.inputs["profile"] = io::to_json(profile);
    const ProfileMatrixReport pm = matrix_from_profile(x, PExponent(*a.p), profile, tol.eig);
    report = pm.observed;
    matrix = pm.matrix.entries;
    r.results["prediction"] = io::to_json(pm.predicted);
    if (pm.min_eigenvalue) r.results["min_eigenvalue"] = *pm.min_eigenvalue;
  } else {
    matrix = io::read_matrix(a.input);
    r.inputs["mode"] = "matrix";
    report = check_and(matrix, tol.eig);
  }
  const Json report_json = io::to_json(report);
  r.results["report"] = report_json;
  if (report.verdict == AndVerdict::strictly_and && report.trace >= 0.0) {
    const DetSignCertificate cert = det_sign_certificate(matrix, tol.eig);
    r.results["det_sign_certificate"] = {{"sign", cert.sign}, {"verified", cert.verified}};
    r.pass = cert.verified;
  }
  if (!a.out.empty()) io::write_text_file(a.out, io::dump_json(report_json) + "\n");
  emit(out, r, tol);
  return r.pass ? kOk : kCertificationFailure;
}

struct EmbedArgs {
  std::string matrix;
  std::optional<double> tol;
  std::optional<std::size_t> rank;
  std::string out;
};

int cmd_embed(const EmbedArgs& a, const Tolerances& tol, std::ostream& out) {
  const Eigen::MatrixXd m = io::read_matrix(a.matrix);
  const double t = a.tol.value_or(tol.eig);
  const Embedding e = schoenberg_embed(m, t, a.rank);
  io::write_csv_file(a.out, e.vectors);

  bool distinct = true;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.rows(); ++j)
      if (m(i, j) != 0.0 && e.vectors.row(i) == e.vectors.row(j)) distinct = false;

  RunReport r{"embed"};
  r.inputs["matrix"] = a.matrix;
  r.inputs["tol"] = t;
  if (a.rank) r.inputs["rank"] = *a.rank;
  r.results["n"] = m.rows();
  r.results["dimension"] = e.vectors.cols();
  r.results["residual"] = e.residual;
  r.results["distinct"] = distinct;
  r.results["out"] = a.out;
  r.pass = distinct;
  emit(out, r, tol);
  return r.pass ? kOk : kCertificationFailure;
}

struct FindPnArgs {
  int n_min = 2;
  int n_max = 2;
  std::optional<double> tol;
  std::string out;
};

int cmd_find_pn(const FindPnArgs& a, const Tolerances& tol, std::ostream& out) {
  const double t = a.tol.value_or(tol.root);
  const std::vector<RateRow> rows = rate_table(a.n_min, a.n_max, t);
  std::ostringstream csv;
  csv << "n,p_n,rate\n";
  Json table = Json::array();
  for (const RateRow& row : rows) {
    csv << row.n << ',' << io::format_double(row.p_n) << ',' << io::format_double(row.rate) << '\n';
    table.push_back({{"n", row.n}, {"p_n", row.p_n}, {"rate", row.rate}});
  }
  io::write_text_file(a.out, csv.str());

  RunReport r{"find-pn"};
  r.inputs["n_min"] = a.n_min;
  r.inputs["n_max"] = a.n_max;
  r.inputs["tol"] = t;
  r.results["rows"] = std::move(table);
  r.results["out"] = a.out;
  emit(out, r, tol);
  return kOk;
}

struct SingularArgs {
  std::optional<int> m;
  int n = 2;
  std::optional<double> p;
  int max_cube_dim = kMaxCertifyCubeDim;
  std::string out_points;
  std::string out_cert;
};

int cmd_singular_config(const SingularArgs& a, const Tolerances& tol, std::ostream& out) {
  RunReport r{"singular-config"};
  r.inputs["n"] = a.n;
  CubeConfig config;
  RootResult root;
  if (a.p) {
    if (a.m && *a.m != a.n) throw InputError("with --p the configuration uses two n-cubes; drop --m or set it to --n");
    r.inputs["p"] = *a.p;
    root = find_theta(a.n, *a.p, tol.root);
    config = cube_config(a.n, a.n, root.value, *a.p);
    r.results["solved_for"] = "theta";
  } else {
    const int m = a.m.value_or(a.n);
    r.inputs["m"] = m;
    root = find_pmn(m, a.n, tol.root);
    config = cube_config(m, a.n, 1.0, root.value);
    r.results["solved_for"] = "p";
  }
  r.inputs["max_cube_dim"] = a.max_cube_dim;
  const SingularCertificate cert = certify_singular(config, tol.cert, a.max_cube_dim);
  const Json cert_json = io::to_json(cert);
  if (!a.out_points.empty()) io::write_csv_file(a.out_points, config.points.rows());
  if (!a.out_cert.empty()) io::write_text_file(a.out_cert, io::dump_json(cert_json) + "\n");
  r.results["root"] = io::to_json(root);
  r.results["points"] = config.points.size();
  r.results["certificate"] = cert_json;
  r.pass = cert.pass;
  emit(out, r, tol);
  return r.pass ? kOk : kCertificationFailure;
}

struct InterpArgs {
  std::string data;
  double p = 2.0;
  std::string profile = "identity";
  std::string convention;
  std::string query;
  std::string out;
  std::string model;
  double fit_tol = 1e-8;
};

int cmd_interp(const InterpArgs& a, const Tolerances& tol, std::ostream& out) {
  const auto rows = io::read_csv_file(a.data);
  if (rows.empty()) throw InputError(a.data + ": no data");
  if (rows.front().size() < 2) throw InputError(a.data + ": need d coordinate columns and one value column");
  std::vector<std::vector<double>> coords;
  std::vector<double> values;
  for (const auto& row : rows) {
    coords.emplace_back(row.begin(), row.end() - 1);
    values.push_back(row.back());
  }
  const PointSet x(coords);
  const RadialProfile profile = resolve_profile(a.profile, a.convention);
  FitOptions options;
  options.tol = a.fit_tol;
  options.eig_tol = tol.eig;
  const Interpolant s = fit(x, values, PExponent(a.p), profile, options);

  const PointSet queries = a.query.empty() ? x : io::read_points(a.query);
  Eigen::MatrixXd evaluated(static_cast<Eigen::Index>(queries.size()), 1);
  for (std::size_t i = 0; i < queries.size(); ++i)
    evaluated(static_cast<Eigen::Index>(i), 0) = evaluate_interpolant(s, queries.point(i));
  io::write_csv_file(a.out, evaluated);
  if (!a.model.empty()) io::write_text_file(a.model, io::dump_json(io::to_json(s)) + "\n");

  double center_error = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    center_error = std::max(center_error, std::abs(evaluate_interpolant(s, x.point(i)) - values[i]));

  RunReport r{"interp"};
  r.inputs["data"] = a.data;
  r.inputs["p"] = a.p;
  r.inputs["profile"] = io::to_json(profile);
  r.inputs["fit_tol"] = a.fit_tol;
  if (!a.query.empty()) r.inputs["query"] = a.query;
  r.results["n"] = x.size();
  r.results["d"] = x.dim();
  r.results["residual"] = relative_residual(s, values);
  r.results["max_center_error"] = center_error;
  r.results["condition_estimate"] = s.condition_estimate;
  r.results["guaranteed"] = s.guaranteed;
  r.results["out"] = a.out;
  emit(out, r, tol);
  return kOk;
}

struct ScanPsiArgs {
  std::vector<int> ns;
  std::string grid;
  std::string out;
};

std::vector<double> parse_grid(const std::string& spec) {
  double lo = 0.0, hi = 0.0, step = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof())
    throw InputError("--p-grid must look like lo:hi:step, got '" + spec + "'");
  if (!(step > 0.0)) throw InputError("--p-grid step must be positive");
  std::vector<double> grid;
  for (long k = 0;; ++k) {
    const double p = lo + static_cast<double>(k) * step;
    if (p > hi + 1e-9 * step) break;
    grid.push_back(p);
  }
  return grid;
}

int cmd_scan_psi(const ScanPsiArgs& a, const Tolerances& tol, std::ostream& out) {
  const std::vector<double> grid = parse_grid(a.grid);
  for (int n : a.ns)
    if (n < 1 || n > kMaxBernsteinDegree) throw InputError("--n values must lie in [1, 50]");
  std::ostringstream csv;
  csv << 'p';
  for (int n : a.ns) csv << ",psi_" << n;
  csv << '\n';
  for (double p : grid) {
    csv << io::format_double(p);
    for (int n : a.ns) csv << ',' << io::format_double(psi(n, p));
    csv << '\n';
  }
  io::write_text_file(a.out, csv.str());

  RunReport r{"scan-psi"};
  r.inputs["n"] = a.ns;
  r.inputs["p_grid"] = a.grid;
  r.results["rows"] = grid.size();
  r.results["out"] = a.out;
  emit(out, r, tol);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-norm distance matrix workbench"};
  app.name("pnorm");
  app.require_subcommand(1);
  app.fallthrough();

  Tolerances tol;
  app.add_option("--tol-eig", tol.eig, "eigenvalue tolerance, relative to max(1, max|A_ij|)")->capture_default_str();
  app.add_option("--tol-root", tol.root, "bisection bracket width")->capture_default_str();
  app.add_option("--tol-cert", tol.cert, "singularity certification tolerance")->capture_default_str();

  std::optional<double> p_opt;
  std::optional<double> tol_opt;
  std::optional<std::size_t> rank_opt;
  std::optional<int> m_opt;

  DistmatArgs distmat;
  auto* c_distmat = app.add_subcommand("distmat", "build a distance matrix from a points CSV");
  c_distmat->add_option("points", distmat.points, "points CSV (one point per row)")->required();
  c_distmat->add_option("--p", distmat.p, "p-norm exponent")->required();
  c_distmat->add_option("--profile", distmat.profile, "identity | multiquadric | exponential | power:<tau> | JSON");
  c_distmat->add_option("--convention", distmat.convention, "distance | squared-distance | p-th-power-distance");
  c_distmat->add_option("--out", distmat.out, "matrix CSV output")->required();

  CheckAndArgs check;
  auto* c_check = app.add_subcommand("check-and", "test a matrix (or the matrix of a point set) for AND");
  c_check->add_option("input", check.input, "matrix CSV, or points CSV when --p is given")->required();
  c_check->add_option("--p", p_opt, "treat input as points and build their p-norm matrix");
  c_check->add_option("--profile", check.profile, "radial profile for points mode");
  c_check->add_option("--convention", check.convention, "profile input convention");
  c_check->add_option("--tol", tol_opt, "override --tol-eig");
  c_check->add_option("--out", check.out, "write the AND report JSON here");

  EmbedArgs embed;
  auto* c_embed = app.add_subcommand("embed", "squared-Euclidean embedding of an AND matrix with zero diagonal");
  c_embed->add_option("matrix", embed.matrix, "matrix CSV")->required();
  c_embed->add_option("--tol", tol_opt, "override --tol-eig");
  c_embed->add_option("--rank", rank_opt, "keep only the leading eigenpairs");
  c_embed->add_option("--out", embed.out, "embedding vectors CSV")->required();

  FindPnArgs find;
  auto* c_find = app.add_subcommand("find-pn", "critical exponents p_n and the rate n (p_n - 2)");
  c_find->add_option("--n-min", find.n_min, "first n (>= 2)")->capture_default_str();
  c_find->add_option("--n-max", find.n_max, "last n")->required();
  c_find->add_option("--tol", tol_opt, "override --tol-root");
  c_find->add_option("--out", find.out, "CSV output (n,p_n,rate)")->required();

  SingularArgs singular;
  auto* c_singular = app.add_subcommand("singular-config", "two-cube configuration with a singular p-norm matrix");
  c_singular->add_option("--m", m_opt, "dimension of the first cube (default: n)");
  c_singular->add_option("--n", singular.n, "dimension of the second cube")->required();
  c_singular->add_option("--p", p_opt, "fix p > p_n and solve for the cube scale theta");
  c_singular->add_option("--max-cube-dim", singular.max_cube_dim, "cap for full-matrix certification")
      ->capture_default_str();
  c_singular->add_option("--out-points", singular.out_points, "points CSV output");
  c_singular->add_option("--out-cert", singular.out_cert, "certificate JSON output");

  InterpArgs interp;
  auto* c_interp = app.add_subcommand("interp", "fit and evaluate a p-norm RBF interpolant");
  c_interp->add_option("data", interp.data, "CSV with d coordinate columns then the value")->required();
  c_interp->add_option("--p", interp.p, "p-norm exponent")->required();
  c_interp->add_option("--profile", interp.profile, "radial profile");
  c_interp->add_option("--convention", interp.convention, "profile input convention");
  c_interp->add_option("--query", interp.query, "points CSV to evaluate at (default: the centers)");
  c_interp->add_option("--fit-tol", interp.fit_tol, "relative residual bound for the solve")->capture_default_str();
  c_interp->add_option("--model", interp.model, "write the interpolant JSON here");
  c_interp->add_option("--out", interp.out, "values CSV output")->required();

  ScanPsiArgs scan;
  auto* c_scan = app.add_subcommand("scan-psi", "tabulate psi_n(p) on a grid");
  c_scan->add_option("--n", scan.ns, "comma separated list of n")->required()->delimiter(',');
  c_scan->add_option("--p-grid", scan.grid, "lo:hi:step")->required();
  c_scan->add_option("--out", scan.out, "CSV output")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (c_distmat->parsed()) return cmd_distmat(distmat, tol, out);
    if (c_check->parsed()) {
      check.p = p_opt;
      if (tol_opt) tol.eig = *tol_opt;
      return cmd_check_and(check, tol, out);
    }
    if (c_embed->parsed()) {
      embed.tol = tol_opt;
      embed.rank = rank_opt;
      return cmd_embed(embed, tol, out);
    }
    if (c_find->parsed()) {
      find.tol = tol_opt;
      return cmd_find_pn(find, tol, out);
    }
    if (c_singular->parsed()) {
      singular.m = m_opt;
      singular.p = p_opt;
      return cmd_singular_config(singular, tol, out);
    }
    if (c_interp->parsed()) return cmd_interp(interp, tol, out);
    if (c_scan->parsed()) return cmd_scan_psi(scan, tol, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kCertificationFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInputError;
}

}  // namespace pnorm::cli
