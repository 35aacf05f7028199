#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pnorm/cli.hpp"
#include "pnorm/io.hpp"

namespace fs = std::filesystem;
using pnorm::io::Json;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = pnorm::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class Scratch {
 public:
  Scratch() {
    static int counter = 0;
    dir_ = fs::temp_directory_path() / ("pnorm_cli_test_" + std::to_string(++counter));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

 private:
  fs::path dir_;
};

const char* kSquare = "0,0\n1,0\n1,1\n0,1\n";

std::string random_points_csv(unsigned seed, int n, int d) {
  std::mt19937_64 rng(seed);
  std::ostringstream s;
  pnorm::io::write_csv(s, oracle::random_points(rng, n, d));
  return s.str();
}

}  // namespace

TEST_CASE("distmat") {
  Scratch tmp;
  const std::string pts = tmp.write("square.csv", kSquare);
  Result r = run({"distmat", pts, "--p", "1", "--out", tmp.path("a.csv")});
  REQUIRE(r.code == 0);
  CHECK(tmp.read("a.csv") == "0,1,2,1\n1,0,1,2\n2,1,0,1\n1,2,1,0\n");
  CHECK(Json::parse(r.out).at("command") == "distmat");

  const std::string one = tmp.write("one.csv", "0.5,0.25\n");
  CHECK(run({"distmat", one, "--p", "1.5", "--out", tmp.path("b.csv")}).code == 0);
  CHECK(tmp.read("b.csv") == "0\n");

  const std::string random = tmp.write("r.csv", random_points_csv(1, 5, 3));
  REQUIRE(run({"distmat", random, "--p", "1.5", "--out", tmp.path("c.csv")}).code == 0);
  const Eigen::MatrixXd m = pnorm::io::read_matrix(tmp.path("c.csv"));
  CHECK(m == m.transpose());
  CHECK(m.diagonal().isZero(0.0));

  const std::string bad = tmp.write("bad.csv", "0,0\n1,zz\n");
  r = run({"distmat", bad, "--p", "1", "--out", tmp.path("d.csv")});
  CHECK(r.code == 2);
  CHECK(r.err.find("bad.csv:2") != std::string::npos);
}

TEST_CASE("check-and") {
  Scratch tmp;
  const std::string pts = tmp.write("square.csv", kSquare);
  Result r = run({"check-and", pts, "--p", "1", "--out", tmp.path("rep.json")});
  REQUIRE(r.code == 0);
  Json rep = Json::parse(tmp.read("rep.json"));
  CHECK(rep.at("verdict") == "AND");
  CHECK(rep.at("det_sign") == 0);

  const std::string two = tmp.write("two.csv", "0,3\n3,0\n");
  r = run({"check-and", two});
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  CHECK(j.at("results").at("report").at("verdict") == "strictly-AND");
  CHECK(j.at("pass") == true);

  const std::string random = tmp.write("r.csv", random_points_csv(2, 6, 2));
  r = run({"check-and", random, "--p", "1.5"});
  REQUIRE(r.code == 0);
  j = Json::parse(r.out);
  CHECK(j.at("results").at("report").at("verdict") == "strictly-AND");
  CHECK(j.at("results").at("report").at("det_sign") == -1);
  CHECK(j.at("results").at("det_sign_certificate").at("verified") == true);

  const std::string rep_text = tmp.read("rep.json");
  CHECK(pnorm::io::dump_json(Json::parse(rep_text)) + "\n" == rep_text);
}

TEST_CASE("embed") {
  Scratch tmp;
  const std::string a = tmp.write("a.csv", "0,1,2,1\n1,0,1,2\n2,1,0,1\n1,2,1,0\n");
  Result r = run({"embed", a, "--out", tmp.path("y.csv")});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j.at("results").at("residual").get<double>() < 1e-12);
  CHECK(j.at("results").at("distinct") == true);
  const auto y = pnorm::io::read_csv_file(tmp.path("y.csv"));
  REQUIRE(y.size() == 4);
  for (double v : y.back()) CHECK(v == 0.0);

  const std::string not_and = tmp.write("n.csv", "0,1,5\n1,0,1\n5,1,0\n");
  CHECK(run({"embed", not_and, "--out", tmp.path("z.csv")}).code == 3);
  const std::string diag = tmp.write("d.csv", "1,1\n1,0\n");
  CHECK(run({"embed", diag, "--out", tmp.path("z.csv")}).code == 2);
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<double> fields(const std::string& line) {
  std::istringstream in(line);
  return pnorm::io::read_csv(in).front();
}

TEST_CASE("find-pn") {
  Scratch tmp;
  REQUIRE(run({"find-pn", "--n-max", "2", "--out", tmp.path("p.csv")}).code == 0);
  std::vector<std::string> l = lines(tmp.read("p.csv"));
  REQUIRE(l.size() == 2);
  CHECK(l[0] == "n,p_n,rate");
  const std::vector<double> row = fields(l[1]);
  CHECK(row[0] == 2.0);
  CHECK(std::abs(row[1] - oracle::p2_closed_form()) < 1e-11);
  CHECK(std::abs(row[2] - 2.0 * (oracle::p2_closed_form() - 2.0)) < 1e-10);

  REQUIRE(run({"find-pn", "--n-min", "2", "--n-max", "5", "--out", tmp.path("q.csv")}).code == 0);
  l = lines(tmp.read("q.csv"));
  REQUIRE(l.size() == 5);
  for (std::size_t i = 2; i < l.size(); ++i) CHECK(fields(l[i])[1] < fields(l[i - 1])[1]);

  REQUIRE(run({"find-pn", "--n-min", "5", "--n-max", "4", "--out", tmp.path("e.csv")}).code == 0);
  CHECK(tmp.read("e.csv") == "n,p_n,rate\n");

  CHECK(run({"find-pn", "--n-min", "1", "--n-max", "3", "--out", tmp.path("f.csv")}).code == 2);
}

TEST_CASE("singular-config") {
  Scratch tmp;
  Result r = run({"singular-config", "--m", "2", "--n", "2", "--out-points", tmp.path("pts.csv"), "--out-cert",
                  tmp.path("cert.json")});
  REQUIRE(r.code == 0);
  Json cert = Json::parse(tmp.read("cert.json"));
  CHECK(cert.at("pass") == true);
  CHECK(std::abs(cert.at("p").get<double>() - oracle::p2_closed_form()) < 1e-11);
  CHECK(pnorm::io::read_points(tmp.path("pts.csv")).size() == 8);
  const std::string cert_text = tmp.read("cert.json");
  CHECK(pnorm::io::dump_json(Json::parse(cert_text)) + "\n" == cert_text);

  r = run({"singular-config", "--n", "2", "--p", "3.0", "--out-cert", tmp.path("t.json")});
  REQUIRE(r.code == 0);
  cert = Json::parse(tmp.read("t.json"));
  CHECK(cert.at("pass") == true);
  CHECK(cert.at("theta").get<double>() < 1.0);

  r = run({"singular-config", "--n", "2", "--p", "2.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("p <= p_n") != std::string::npos);

  CHECK(run({"singular-config", "--m", "2", "--n", "6"}).code == 2);
}

TEST_CASE("interp") {
  Scratch tmp;
  const std::string data = tmp.write("data.csv", "0,0,1\n1,0,2\n1,1,3\n0,1,5\n");
  Result r = run({"interp", data, "--p", "1", "--out", tmp.path("v.csv")});
  CHECK(r.code == 3);
  CHECK(r.err.find("singular") != std::string::npos);

  std::mt19937_64 rng(3);
  const Eigen::MatrixXd x = oracle::random_points(rng, 20, 3);
  Eigen::MatrixXd with_values(20, 4);
  with_values << x, (x.col(0).array().sin() + x.col(1).array() * x.col(2).array()).matrix();
  std::ostringstream csv;
  pnorm::io::write_csv(csv, with_values);
  const std::string random = tmp.write("random.csv", csv.str());
  r = run({"interp", random, "--p", "1.5", "--out", tmp.path("w.csv"), "--model", tmp.path("model.json")});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j.at("results").at("residual").get<double>() < 1e-8);
  const auto values = pnorm::io::read_csv_file(tmp.path("w.csv"));
  REQUIRE(values.size() == 20);
  for (int i = 0; i < 20; ++i) CHECK(values[static_cast<std::size_t>(i)][0] == doctest::Approx(with_values(i, 3)).epsilon(1e-8));
  const std::string model = tmp.read("model.json");
  CHECK(pnorm::io::dump_json(Json::parse(model)) + "\n" == model);

  std::ostringstream centers;
  pnorm::io::write_csv(centers, x);
  const std::string query = tmp.write("q.csv", centers.str());
  REQUIRE(run({"interp", random, "--p", "1.5", "--query", query, "--out", tmp.path("u.csv")}).code == 0);
  CHECK(tmp.read("u.csv") == tmp.read("w.csv"));

  const std::string wrong_dim = tmp.write("q2.csv", "0,0\n");
  CHECK(run({"interp", random, "--p", "1.5", "--query", wrong_dim, "--out", tmp.path("z.csv")}).code == 2);
}

TEST_CASE("scan-psi") {
  Scratch tmp;
  REQUIRE(run({"scan-psi", "--n", "2", "--p-grid", "2:3:0.5", "--out", tmp.path("s.csv")}).code == 0);
  std::vector<std::string> l = lines(tmp.read("s.csv"));
  REQUIRE(l.size() == 4);
  CHECK(l[0] == "p,psi_2");
  const std::vector<double> first = fields(l[1]);
  CHECK(first[0] == 2.0);
  CHECK(first[1] == doctest::Approx((1.0 - std::sqrt(2.0)) / 2.0).epsilon(1e-14));

  REQUIRE(run({"scan-psi", "--n", "1,3", "--p-grid", "10:1000:330", "--out", tmp.path("t.csv")}).code == 0);
  l = lines(tmp.read("t.csv"));
  CHECK(l[0] == "p,psi_1,psi_3");
  double previous = -1.0;
  for (std::size_t i = 1; i < l.size(); ++i) {
    const double v = fields(l[i])[1];
    CHECK(v < 0.0);
    CHECK(v > previous);
    previous = v;
  }
  CHECK(previous > -1e-3);

  REQUIRE(run({"scan-psi", "--n", "2", "--p-grid", "3:2:0.5", "--out", tmp.path("e.csv")}).code == 0);
  CHECK(tmp.read("e.csv") == "p,psi_2\n");

  CHECK(run({"scan-psi", "--n", "2", "--p-grid", "2-3", "--out", tmp.path("x.csv")}).code == 2);
}

TEST_CASE("runs are deterministic") {
  Scratch tmp;
  const std::string random = tmp.write("r.csv", random_points_csv(4, 7, 2));
  const std::vector<std::string> args{"check-and", random, "--p", "1.3"};
  const Result a = run(args);
  const Result b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  run({"find-pn", "--n-max", "6", "--out", tmp.path("1.csv")});
  run({"find-pn", "--n-max", "6", "--out", tmp.path("2.csv")});
  CHECK(tmp.read("1.csv") == tmp.read("2.csv"));
}

TEST_CASE("argument errors and global tolerances") {
  CHECK(run({}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"distmat"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  Scratch tmp;
  const std::string pts = tmp.write("p.csv", kSquare);
  const Result r = run({"--tol-eig", "1e-6", "check-and", pts, "--p", "1"});
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out).at("tolerances").at("tol_eig").get<double>() == 1e-6);
}

TEST_CASE("installed binary") {
  const std::string cmd = std::string("\"") + PNORM_CLI_PATH + "\" --help > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  const std::string bad = std::string("\"") + PNORM_CLI_PATH + "\" distmat 2> /dev/null";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
