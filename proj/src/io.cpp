#include "pnorm/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "pnorm/error.hpp"

namespace pnorm::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void csv_error(const std::string& source, std::size_t line, const std::string& what) {
  std::ostringstream msg;
  msg << source << ":" << line << ": " << what;
  throw InputError(msg.str());
}

void dump_into(std::string& out, const Json& v, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump_into(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_into(out, item, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? format_double(d) : "null";
      return;
    }
    default:
      out += v.dump();
      return;
  }
}

std::vector<double> vector_from_json(const Json& j) { return j.get<std::vector<double>>(); }

}  // namespace

std::vector<std::vector<double>> read_csv(std::istream& in, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = body.find(',', start);
      const std::string_view field = trim(body.substr(start, comma == std::string_view::npos ? body.npos : comma - start));
      if (field.empty()) csv_error(source, line_no, "empty field");
      std::string_view digits = field;
      if (digits.front() == '+') digits.remove_prefix(1);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
      if (ec != std::errc() || ptr != digits.data() + digits.size())
        csv_error(source, line_no, "not a number: '" + std::string(field) + "'");
      if (!std::isfinite(value)) csv_error(source, line_no, "non-finite value");
      row.push_back(value);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream what;
      what << "expected " << rows.front().size() << " columns, found " << row.size();
      csv_error(source, line_no, what.str());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<double>> read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_csv(in, path.string());
}

PointSet read_points(const std::filesystem::path& path) {
  const auto rows = read_csv_file(path);
  if (rows.empty()) throw InputError(path.string() + ": no points");
  return PointSet(rows);
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
  const auto rows = read_csv_file(path);
  if (rows.empty()) throw InputError(path.string() + ": empty matrix");
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (static_cast<Eigen::Index>(rows.front().size()) != n) {
    std::ostringstream msg;
    msg << path.string() << ": matrix is " << n << "x" << rows.front().size() << ", expected square";
    throw InputError(msg.str());
  }
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_csv_file(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ostringstream text;
  write_csv(text, m);
  write_text_file(path, text.str());
}

std::string dump_json(const Json& value, int indent) {
  std::string out;
  dump_into(out, value, indent, 0);
  return out;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_json(text.str());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed for " + path.string());
}

Json to_json(const AndReport& report) {
  Json j;
  j["verdict"] = to_string(report.verdict);
  j["eigenvalues"] = report.restricted_eigenvalues;
  j["trace"] = report.trace;
  j["det_sign"] = report.det_sign;
  if (report.det_log_magnitude) {
    j["det_log_magnitude"] = *report.det_log_magnitude;
  } else {
    j["det_log_magnitude"] = "zero";
  }
  return j;
}

AndReport and_report_from_json(const Json& j) {
  try {
    AndReport r;
    r.verdict = and_verdict_from_string(j.at("verdict").get<std::string>());
    r.restricted_eigenvalues = vector_from_json(j.at("eigenvalues"));
    r.trace = j.at("trace").get<double>();
    r.det_sign = j.at("det_sign").get<int>();
    const Json& mag = j.at("det_log_magnitude");
    if (mag.is_string()) {
      if (mag.get<std::string>() != "zero") throw InputError("det_log_magnitude must be a number or \"zero\"");
    } else {
      r.det_log_magnitude = mag.get<double>();
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed AND report: ") + e.what());
  }
}

Json to_json(const RadialProfile& profile) {
  // Only the root carries the input convention.
  std::function<Json(const RadialProfile&)> node = [&](const RadialProfile& p) {
    Json j;
    switch (p.kind()) {
      case ProfileKind::identity:
        j["kind"] = "identity";
        break;
      case ProfileKind::power:
        j["kind"] = "power";
        j["tau"] = p.tau();
        break;
      case ProfileKind::multiquadric:
        j["kind"] = "multiquadric";
        break;
      case ProfileKind::exponential:
        j["kind"] = "exponential";
        break;
      case ProfileKind::composition:
        j["kind"] = "composition";
        j["outer"] = node(p.outer());
        j["inner"] = node(p.inner());
        break;
    }
    return j;
  };
  Json j = node(profile);
  j["input"] = to_string(profile.input_convention());
  return j;
}

RadialProfile profile_from_json(const Json& j) {
  std::function<RadialProfile(const Json&)> node = [&](const Json& n) -> RadialProfile {
    if (!n.is_object()) throw InputError("profile must be a JSON object");
    const std::string kind = n.at("kind").get<std::string>();
    if (kind == "identity") return RadialProfile::identity();
    if (kind == "power") return RadialProfile::power(n.at("tau").get<double>());
    if (kind == "multiquadric") return RadialProfile::multiquadric();
    if (kind == "exponential") return RadialProfile::exponential();
    if (kind == "composition") return classify_composition(node(n.at("outer")), node(n.at("inner")));
    throw InputError("unknown profile kind '" + kind + "'");
  };
  try {
    RadialProfile p = node(j);
    if (j.contains("input")) p = p.with_input(input_convention_from_string(j.at("input").get<std::string>()));
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed profile: ") + e.what());
  }
}

RadialProfile parse_profile_spec(const std::string& spec) {
  if (!spec.empty() && spec.front() == '{') return profile_from_json(parse_json(spec));
  if (spec == "identity") return RadialProfile::identity();
  if (spec == "multiquadric") return RadialProfile::multiquadric();
  if (spec == "exponential") return RadialProfile::exponential();
  if (spec.rfind("power:", 0) == 0) {
    const std::string value = spec.substr(6);
    double tau = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), tau);
    if (ec != std::errc() || ptr != value.data() + value.size()) throw InputError("bad power exponent in '" + spec + "'");
    return RadialProfile::power(tau);
  }
  throw InputError("unknown profile '" + spec + "' (identity, multiquadric, exponential, power:<tau>, or JSON)");
}

Json to_json(const TheoremPrediction& prediction) {
  Json j;
  if (prediction.verdict) {
    j["verdict"] = to_string(*prediction.verdict);
  } else {
    j["verdict"] = nullptr;
  }
  j["positive_definite"] = prediction.positive_definite;
  j["basis"] = prediction.basis;
  return j;
}

Json to_json(const SingularCertificate& cert) {
  Json j;
  j["m"] = cert.m;
  j["n"] = cert.n;
  j["theta"] = cert.theta;
  j["p"] = cert.p;
  j["sigma_min"] = cert.sigma_min;
  j["sigma_max"] = cert.sigma_max;
  j["lambda"] = cert.lambda;
  j["mu"] = cert.mu;
  j["residual"] = cert.residual;
  j["pass"] = cert.pass;
  return j;
}

Json to_json(const RootResult& root) {
  Json j;
  j["value"] = root.value;
  j["residual"] = root.residual;
  j["bracket"] = {root.lo, root.hi};
  j["iterations"] = root.iterations;
  return j;
}

Json to_json(const Interpolant& s) {
  Json j;
  Json centers = Json::array();
  for (std::size_t i = 0; i < s.centers.size(); ++i) {
    const auto row = s.centers.point(i);
    Json point = Json::array();
    for (Eigen::Index k = 0; k < row.size(); ++k) point.push_back(row[k]);
    centers.push_back(std::move(point));
  }
  j["centers"] = std::move(centers);
  j["coefficients"] = std::vector<double>(s.coefficients.data(), s.coefficients.data() + s.coefficients.size());
  j["p"] = s.p.value();
  j["profile"] = to_json(s.profile);
  j["condition_estimate"] = s.condition_estimate;
  j["guaranteed"] = s.guaranteed;
  return j;
}

Interpolant interpolant_from_json(const Json& j) {
  try {
    Interpolant s;
    s.centers = PointSet(j.at("centers").get<std::vector<std::vector<double>>>());
    const auto coeffs = vector_from_json(j.at("coefficients"));
    if (coeffs.size() != s.centers.size()) throw InputError("coefficient count does not match centers");
    s.coefficients = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
    s.p = PExponent(j.at("p").get<double>());
    s.profile = profile_from_json(j.at("profile"));
    if (j.contains("condition_estimate")) {
      const Json& cond = j.at("condition_estimate");
      s.condition_estimate = cond.is_null() ? std::numeric_limits<double>::infinity() : cond.get<double>();
    }
    if (j.contains("guaranteed")) s.guaranteed = j.at("guaranteed").get<bool>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed interpolant: ") + e.what());
  }
}

}  // namespace pnorm::io
