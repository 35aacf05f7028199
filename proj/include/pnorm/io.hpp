#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pnorm/and_algebra.hpp"
#include "pnorm/cnd1.hpp"
#include "pnorm/geometry.hpp"
#include "pnorm/interpolation.hpp"
#include "pnorm/profile.hpp"
#include "pnorm/singular.hpp"

namespace pnorm::io {

using Json = nlohmann::ordered_json;

// CSV: one record per line, comma separated decimal floats, no header.
// Blank lines are skipped. Parse errors name the source and line number.

std::vector<std::vector<double>> read_csv(std::istream& in, const std::string& source = "<stream>");
std::vector<std::vector<double>> read_csv_file(const std::filesystem::path& path);

PointSet read_points(const std::filesystem::path& path);
/// Square matrix, n rows of n values.
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);

/// "%.17g": 17 significant digits, enough to read back the same double.
std::string format_double(double v);

void write_csv(std::ostream& out, const Eigen::MatrixXd& m);
void write_csv_file(const std::filesystem::path& path, const Eigen::MatrixXd& m);

/// JSON text with every float written as format_double(). Parsing the
/// output and dumping again gives the same bytes.
std::string dump_json(const Json& value, int indent = 2);
Json parse_json(const std::string& text);
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Json to_json(const AndReport& report);
AndReport and_report_from_json(const Json& j);

/// {"kind":"power","tau":0.5}, {"kind":"composition","outer":{...},"inner":{...}};
/// the root may carry "input": "distance" | "squared-distance" | "p-th-power-distance".
Json to_json(const RadialProfile& profile);
RadialProfile profile_from_json(const Json& j);
/// Accepts a JSON expression or one of: identity, multiquadric, exponential, power:<tau>.
RadialProfile parse_profile_spec(const std::string& spec);

Json to_json(const TheoremPrediction& prediction);
Json to_json(const SingularCertificate& cert);
Json to_json(const RootResult& root);

Json to_json(const Interpolant& s);
Interpolant interpolant_from_json(const Json& j);

}  // namespace pnorm::io
