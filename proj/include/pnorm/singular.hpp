#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "pnorm/geometry.hpp"

namespace pnorm {

// Singular p-norm distance matrices for p > 2, built from two orthogonal
// cubes on the p-norm unit sphere. By symmetry the interpolation equations on
// the union of the cubes collapse to a 2x2 system whose determinant is a
// Bernstein-polynomial expression in p.

inline constexpr int kMaxBernsteinDegree = 50;
inline constexpr int kMaxCubeDim = 12;
inline constexpr int kMaxCertifyCubeDim = 5;
inline constexpr double kDefaultRootTolerance = 1e-12;
inline constexpr double kDefaultCertTolerance = 1e-8;
/// Ceiling asserted on n (p_n - 2) by rate_table.
inline constexpr double kRateBound = 2.0;

/// Row `degree` of Pascal's triangle in floating point (exact up to degree 50).
std::vector<double> pascal_row(int degree);

/// B_i(t^(1/p), 1/2) = 2^-i sum_{j=0}^{i} C(i,j) (j/i)^(1/p); the j = 0 term is 0.
double bernstein_half(double p, int degree);

/// sum over the vertices of [0,1]^k of their p-norms, = sum_l C(k,l) l^(1/p).
double vertex_psum(int k, double p);

/// 2 B_n(f_p, 1/2) - 2^(1/p).
double psi(int n, double p);
/// Pointwise limit of psi as n -> infinity: 2^(1-1/p) - 2^(1/p).
double psi_limit(double p);
/// Scaled determinant of the reduced system: 4 B_m B_n - 2^(2/p).
double phi(int m, int n, double p);
/// Scaled determinant with the second cube shrunk by theta:
/// 4 theta B_m B_n - (1 + theta^p)^(2/p).
double phi_theta(int m, int n, double theta, double p);
double phi_theta(int n, double theta, double p);

/// Vertices of [-a, a]^m (a = m^(-1/p)) in the first m coordinates, followed
/// by vertices of [-theta b, theta b]^n (b = n^(-1/p)) in the last n.
struct CubeConfig {
  int m = 1;
  int n = 1;
  double theta = 1.0;
  PExponent p{2.0};
  PointSet points;

  std::size_t first_block() const { return std::size_t{1} << m; }
  std::size_t second_block() const { return std::size_t{1} << n; }
};

/// Checks the cross-distance and within-cube-sum symmetries after
/// construction (NumericalError if they fail). m, n in [1, max_dim].
CubeConfig cube_config(int m, int n, double theta, double p, int max_dim = kMaxCubeDim);

/// The 2x2 system acting on the block values (lambda, mu).
struct ReducedSystem {
  Eigen::Matrix2d matrix;
  int m = 1;
  int n = 1;
  double theta = 1.0;
  double p = 2.0;

  /// det(matrix) 2^-(m+n).
  double scaled_determinant() const;
  /// Unit vector (lambda, mu) minimising |matrix * v|, with lambda >= 0.
  Eigen::Vector2d kernel() const;
};

ReducedSystem reduced_system(int m, int n, double theta, double p, int max_dim = kMaxCubeDim);

struct RootResult {
  double value = 0.0;
  double residual = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
};

/// Plain bisection on a sign change; stops once hi - lo < tol. Throws
/// InputError if f(lo) and f(hi) share a sign.
RootResult bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
                  int max_iterations = 400);

/// Unique root of psi_n in (2, inf), n >= 2.
RootResult find_pn(int n, double tol = kDefaultRootTolerance);

/// Root of phi_{m,n} in (p_n, p_m) for 2 <= m < n (arguments may come in
/// either order; m == n gives p_n). Also asserts phi_mm < phi_mn < phi_nn on a
/// probe grid across the bracket.
RootResult find_pmn(int m, int n, double tol = kDefaultRootTolerance);

/// theta* in (0,1) with phi_{n,n,theta*}(p) = 0, for p > p_n. The bracket
/// is [theta_lo, 1] with theta_lo halved until the value turns negative.
RootResult find_theta(int n, double p, double tol = kDefaultRootTolerance);

struct SingularCertificate {
  int m = 0;
  int n = 0;
  double theta = 1.0;
  double p = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  /// |A v| / (|A| |v|) for the block-constant vector v.
  double residual = 0.0;
  bool pass = false;
  Eigen::VectorXd null_vector;
};

/// Builds the full p-norm distance matrix of the configuration and checks
/// sigma_min <= tol sigma_max and that the block-constant vector from the
/// reduced system's kernel is a null vector to within tol. Refuses cubes of
/// dimension above max_dim (InputError).
SingularCertificate certify_singular(const CubeConfig& config, double tol = kDefaultCertTolerance,
                                     int max_dim = kMaxCertifyCubeDim);

/// Same check for an arbitrary point set; the null vector is the singular
/// vector of the smallest singular value.
SingularCertificate certify_singular(const PointSet& points, PExponent p, double tol = kDefaultCertTolerance);

struct RateRow {
  int n = 0;
  double p_n = 0.0;
  double rate = 0.0;  // n (p_n - 2)
};

/// Rows for n_min..n_max (empty when n_max < n_min). Throws NumericalError if
/// p_n fails to decrease strictly or n (p_n - 2) exceeds kRateBound.
std::vector<RateRow> rate_table(int n_min, int n_max, double tol = kDefaultRootTolerance);

}  // namespace pnorm
