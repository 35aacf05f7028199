#include <doctest.h>

#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "pnorm/error.hpp"
#include "pnorm/geometry.hpp"

using namespace pnorm;

namespace {

PointSet unit_square() { return PointSet({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

}  // namespace

TEST_CASE("pexponent classification") {
  CHECK(PExponent(0.5).is_quasi_norm());
  CHECK_FALSE(PExponent(0.5).is_norm());
  CHECK(PExponent(1.0).is_norm());
  CHECK(PExponent(2.0).is_euclidean());
  CHECK_FALSE(PExponent(2.5).is_euclidean());
  CHECK_THROWS_AS(PExponent(0.0), InputError);
  CHECK_THROWS_AS(PExponent(-1.0), InputError);
  CHECK_THROWS_AS(PExponent(NAN), InputError);
}

TEST_CASE("pnorm examples") {
  const std::array<double, 3> zero{0, 0, 0};
  for (double p : {0.3, 1.0, 1.5, 2.0, 7.0}) CHECK(norm_p(zero, PExponent(p)) == 0.0);

  // Two coordinates at 2^(-1/p), three at -3^(-1/p): norm 2^(1/p).
  for (double p : {0.5, 1.0, 1.5, 2.0, 3.0, 10.0}) {
    const double a = std::pow(2.0, -1.0 / p);
    const double b = std::pow(3.0, -1.0 / p);
    const std::array<double, 5> v{a, a, -b, -b, -b};
    CHECK(norm_p(v, PExponent(p)) == doctest::Approx(std::pow(2.0, 1.0 / p)).epsilon(1e-14));
  }

  const std::array<double, 2> ones{1, 1};
  const long double reference = oracle::pnorm_ld({1.0L, 1.0L}, 1.5L);
  CHECK(norm_p(ones, PExponent(1.5)) == doctest::Approx(static_cast<double>(reference)).epsilon(1e-15));
  CHECK(norm_p(ones, PExponent(1.5)) == doctest::Approx(1.5874010519681994).epsilon(1e-15));

  const std::array<double, 2> bad{1.0, INFINITY};
  CHECK_THROWS_AS(norm_p(bad, PExponent(2.0)), InputError);
}

TEST_CASE("pnorm agrees with a long double reference on random vectors") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double p = 0.25 + 0.05 * (trial % 80);
    std::vector<double> v(1 + trial % 6);
    std::vector<long double> vl;
    for (double& x : v) {
      x = u(rng);
      vl.push_back(x);
    }
    CHECK(norm_p(v, PExponent(p)) == doctest::Approx(static_cast<double>(oracle::pnorm_ld(vl, p))).epsilon(1e-13));
  }
}

TEST_CASE("pnorm homogeneity and triangle inequality for p >= 1") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (double p : {1.0, 1.3, 2.0, 3.5, 8.0}) {
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::RowVectorXd v(4), w(4);
      for (int k = 0; k < 4; ++k) {
        v[k] = u(rng);
        w[k] = u(rng);
      }
      const double c = u(rng);
      const PExponent pe(p);
      CHECK(norm_p(Eigen::RowVectorXd(c * v), pe) == doctest::Approx(std::abs(c) * norm_p(v, pe)).epsilon(1e-13));
      CHECK(norm_p(Eigen::RowVectorXd(v + w), pe) <= norm_p(v, pe) + norm_p(w, pe) + 1e-12);
    }
  }
}

TEST_CASE("triangle inequality fails for the quasi-norm p = 1/2") {
  const PExponent half(0.5);
  Eigen::RowVectorXd v(2), w(2);
  v << 1, 0;
  w << 0, 1;
  // ||v + w||_{1/2} = (1 + 1)^2 = 4 > 2 = ||v|| + ||w||.
  CHECK(norm_p(Eigen::RowVectorXd(v + w), half) == doctest::Approx(4.0));
  CHECK(norm_p(Eigen::RowVectorXd(v + w), half) > norm_p(v, half) + norm_p(w, half));
}

TEST_CASE("point set construction and distinctness") {
  CHECK(unit_square().size() == 4);
  CHECK(unit_square().dim() == 2);
  CHECK(unit_square().distinct());
  CHECK_FALSE(PointSet({{0, 1}, {2, 3}, {0, 1}}).distinct());
  CHECK_THROWS_AS(PointSet({{0, 1}, {2}}), InputError);
  CHECK_THROWS_AS(PointSet(std::vector<std::vector<double>>{}), InputError);
}

TEST_CASE("distance matrix examples") {
  const DistanceMatrix a = build_distance_matrix(unit_square(), PExponent(1.0));
  Eigen::MatrixXd expected(4, 4);
  expected << 0, 1, 2, 1, 1, 0, 1, 2, 2, 1, 0, 1, 1, 2, 1, 0;
  CHECK(a.entries == expected);

  const DistanceMatrix single = build_distance_matrix(PointSet({{0.3, 0.7, 1.1}}), PExponent(2.5));
  CHECK(single.entries.rows() == 1);
  CHECK(single.entries(0, 0) == 0.0);

  const DistanceMatrix pair = build_distance_matrix(PointSet({{0.0}, {1.0}}), PExponent(1.5));
  Eigen::Matrix2d unit;
  unit << 0, 1, 1, 0;
  CHECK(pair.entries == Eigen::MatrixXd(unit));
}

TEST_CASE("diagonal follows the profile value at zero") {
  const PointSet x({{0, 0}, {1, 2}, {3, -1}});
  CHECK(build_distance_matrix(x, PExponent(1.5), RadialProfile::multiquadric()).entries.diagonal().isOnes());
  CHECK(build_distance_matrix(x, PExponent(1.5), RadialProfile::power(0.5)).entries.diagonal().isZero(0.0));
  CHECK(build_distance_matrix(x, PExponent(1.5), RadialProfile::exponential()).entries.diagonal().isOnes());
}

TEST_CASE("input conventions feed distance, square, or p-th power") {
  const PointSet x({{0, 0}, {1, 2}});
  const PExponent p(1.5);
  const double d = std::pow(1.0 + std::pow(2.0, 1.5), 1.0 / 1.5);
  const auto id = RadialProfile::identity();
  CHECK(build_distance_matrix(x, p, id).entries(0, 1) == doctest::Approx(d).epsilon(1e-15));
  CHECK(build_distance_matrix(x, p, id.with_input(InputConvention::squared_distance)).entries(0, 1) ==
        doctest::Approx(d * d).epsilon(1e-15));
  CHECK(build_distance_matrix(x, p, id.with_input(InputConvention::pth_power_distance)).entries(0, 1) ==
        doctest::Approx(1.0 + std::pow(2.0, 1.5)).epsilon(1e-15));
}

TEST_CASE("distance matrix symmetry, permutation and translation") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const PointSet x(oracle::random_points(rng, 7, 3));
    const PExponent p(0.5 + 0.2 * trial);
    const Eigen::MatrixXd a = build_distance_matrix(x, p).entries;
    CHECK(a == a.transpose());

    std::vector<std::size_t> order(7);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const Eigen::MatrixXd b = build_distance_matrix(x.permuted(order), p).entries;
    for (std::size_t i = 0; i < 7; ++i)
      for (std::size_t j = 0; j < 7; ++j)
        CHECK(b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
              a(static_cast<Eigen::Index>(order[i]), static_cast<Eigen::Index>(order[j])));

    // Shift by a dyadic vector so coordinate differences stay exact.
    Eigen::RowVectorXd shift(3);
    shift << 0.5, -2.0, 4.0;
    const Eigen::MatrixXd c = build_distance_matrix(x.translated(shift), p).entries;
    CHECK((c - a).cwiseAbs().maxCoeff() <= 1e-14);
  }
}
