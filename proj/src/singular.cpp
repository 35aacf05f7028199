#include "pnorm/singular.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pnorm/error.hpp"

namespace pnorm {

namespace {

void require_degree(int degree) {
  if (degree < 1 || degree > kMaxBernsteinDegree) {
    std::ostringstream msg;
    msg << "degree must be in [1, " << kMaxBernsteinDegree << "], got " << degree;
    throw InputError(msg.str());
  }
}

void require_p(double p) {
  if (!std::isfinite(p) || !(p > 0.0)) throw InputError("p must be finite and positive");
}

void require_cube_dims(int m, int n, int max_dim) {
  if (m < 1 || n < 1) throw InputError("cube dimensions must be at least 1");
  if (m > max_dim || n > max_dim) {
    std::ostringstream msg;
    msg << "cube dimension exceeds cap " << max_dim << " (m=" << m << ", n=" << n << ")";
    throw InputError(msg.str());
  }
}

// sum_{j=1}^{k} C(k,j) (j/k)^(1/p)
double scaled_vertex_sum(int k, double p) {
  const std::vector<double> binom = pascal_row(k);
  double sum = 0.0;
  for (int j = 1; j <= k; ++j) sum += binom[static_cast<std::size_t>(j)] * std::pow(static_cast<double>(j) / k, 1.0 / p);
  return sum;
}

// Vertices of [-half, half]^k, coordinate c of vertex v is +half iff bit c of v is set.
void write_cube(Eigen::MatrixXd& rows, Eigen::Index first_row, Eigen::Index first_col, int k, double half) {
  const Eigen::Index count = Eigen::Index{1} << k;
  for (Eigen::Index v = 0; v < count; ++v)
    for (int c = 0; c < k; ++c) rows(first_row + v, first_col + c) = ((v >> c) & 1) ? half : -half;
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

void validate_cube_symmetries(const CubeConfig& config) {
  const auto& rows = config.points.rows();
  const auto first = static_cast<Eigen::Index>(config.first_block());
  const auto second = static_cast<Eigen::Index>(config.second_block());
  const double p = config.p.value();
  const double cross = std::pow(1.0 + std::pow(config.theta, p), 1.0 / p);
  const double sum_first = 2.0 * scaled_vertex_sum(config.m, p);
  const double sum_second = 2.0 * config.theta * scaled_vertex_sum(config.n, p);
  constexpr double rel = 1e-12;
  constexpr Eigen::Index kFullCheck = 256;

  auto sample = [](Eigen::Index count) {
    std::vector<Eigen::Index> idx;
    if (count <= kFullCheck) {
      for (Eigen::Index i = 0; i < count; ++i) idx.push_back(i);
    } else {
      for (Eigen::Index i = 0; i < 16; ++i) idx.push_back((i * (count - 1)) / 15);
    }
    return idx;
  };

  for (Eigen::Index i : sample(first)) {
    double within = 0.0;
    for (Eigen::Index j = 0; j < first; ++j) within += pnorm_distance(rows.row(i), rows.row(j), config.p);
    if (!close(within, sum_first, rel)) throw NumericalError("within-cube distance sum differs between vertices");
    for (Eigen::Index j : sample(second))
      if (!close(pnorm_distance(rows.row(i), rows.row(first + j), config.p), cross, rel))
        throw NumericalError("cross-cube distance is not constant");
  }
  for (Eigen::Index i : sample(second)) {
    double within = 0.0;
    for (Eigen::Index j = 0; j < second; ++j)
      within += pnorm_distance(rows.row(first + i), rows.row(first + j), config.p);
    if (!close(within, sum_second, rel)) throw NumericalError("within-cube distance sum differs between vertices");
  }
}

double relative_null_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& v, double sigma_max) {
  const double denom = sigma_max * v.norm();
  return denom == 0.0 ? 0.0 : (a * v).norm() / denom;
}

}  // namespace

std::vector<double> pascal_row(int degree) {
  if (degree < 0 || degree > kMaxBernsteinDegree) {
    std::ostringstream msg;
    msg << "binomial degree must be in [0, " << kMaxBernsteinDegree << "]";
    throw InputError(msg.str());
  }
  std::vector<double> row(static_cast<std::size_t>(degree) + 1, 0.0);
  row[0] = 1.0;
  for (int r = 1; r <= degree; ++r)
    for (int j = r; j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j) - 1];
  return row;
}

double bernstein_half(double p, int degree) {
  require_degree(degree);
  require_p(p);
  return std::ldexp(scaled_vertex_sum(degree, p), -degree);
}

double vertex_psum(int k, double p) {
  require_degree(k);
  require_p(p);
  const std::vector<double> binom = pascal_row(k);
  double sum = 0.0;
  for (int l = 1; l <= k; ++l) sum += binom[static_cast<std::size_t>(l)] * std::pow(static_cast<double>(l), 1.0 / p);
  return sum;
}

double psi(int n, double p) { return 2.0 * bernstein_half(p, n) - std::pow(2.0, 1.0 / p); }

double psi_limit(double p) {
  require_p(p);
  return std::pow(2.0, 1.0 - 1.0 / p) - std::pow(2.0, 1.0 / p);
}

double phi(int m, int n, double p) {
  return 4.0 * bernstein_half(p, m) * bernstein_half(p, n) - std::pow(2.0, 2.0 / p);
}

double phi_theta(int m, int n, double theta, double p) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw InputError("theta must be positive");
  return 4.0 * theta * bernstein_half(p, m) * bernstein_half(p, n) -
         std::pow(1.0 + std::pow(theta, p), 2.0 / p);
}

double phi_theta(int n, double theta, double p) { return phi_theta(n, n, theta, p); }

CubeConfig cube_config(int m, int n, double theta, double p, int max_dim) {
  require_cube_dims(m, n, max_dim);
  if (!(theta > 0.0) || !std::isfinite(theta)) throw InputError("theta must be positive");
  CubeConfig config;
  config.m = m;
  config.n = n;
  config.theta = theta;
  config.p = PExponent(p);

  const Eigen::Index first = Eigen::Index{1} << m;
  const Eigen::Index second = Eigen::Index{1} << n;
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(first + second, m + n);
  write_cube(rows, 0, 0, m, std::pow(static_cast<double>(m), -1.0 / p));
  write_cube(rows, first, m, n, theta * std::pow(static_cast<double>(n), -1.0 / p));
  config.points = PointSet(std::move(rows));
  validate_cube_symmetries(config);
  return config;
}

double ReducedSystem::scaled_determinant() const { return std::ldexp(matrix.determinant(), -(m + n)); }

Eigen::Vector2d ReducedSystem::kernel() const {
  // Each row (a, b) is annihilated by (b, -a); take the better-scaled row.
  Eigen::Vector2d from_first(matrix(0, 1), -matrix(0, 0));
  Eigen::Vector2d from_second(matrix(1, 1), -matrix(1, 0));
  Eigen::Vector2d v = from_first.norm() >= from_second.norm() ? from_first : from_second;
  v.normalize();
  if (v[0] < 0.0) v = -v;
  return v;
}

ReducedSystem reduced_system(int m, int n, double theta, double p, int max_dim) {
  require_cube_dims(m, n, max_dim);
  require_p(p);
  if (!(theta > 0.0) || !std::isfinite(theta)) throw InputError("theta must be positive");
  ReducedSystem sys;
  sys.m = m;
  sys.n = n;
  sys.theta = theta;
  sys.p = p;
  const double cross = std::pow(1.0 + std::pow(theta, p), 1.0 / p);
  sys.matrix(0, 0) = 2.0 * scaled_vertex_sum(m, p);
  sys.matrix(0, 1) = std::ldexp(cross, n);
  sys.matrix(1, 0) = std::ldexp(cross, m);
  sys.matrix(1, 1) = 2.0 * theta * scaled_vertex_sum(n, p);
  return sys;
}

RootResult bisect(const std::function<double(double)>& f, double lo, double hi, double tol, int max_iterations) {
  if (!(lo < hi)) throw InputError("bisection bracket must satisfy lo < hi");
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return {lo, 0.0, lo, hi, 0};
  if (f_hi == 0.0) return {hi, 0.0, lo, hi, 0};
  if ((f_lo < 0.0) == (f_hi < 0.0)) throw InputError("bisection bracket has no sign change");

  RootResult out;
  out.lo = lo;
  out.hi = hi;
  while (out.hi - out.lo >= tol && out.iterations < max_iterations) {
    const double mid = 0.5 * (out.lo + out.hi);
    if (mid <= out.lo || mid >= out.hi) break;  // bracket is down to adjacent doubles
    ++out.iterations;
    const double f_mid = f(mid);
    if (f_mid == 0.0) {
      out.value = mid;
      out.residual = 0.0;
      return out;
    }
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      out.lo = mid;
      f_lo = f_mid;
    } else {
      out.hi = mid;
    }
  }
  out.value = 0.5 * (out.lo + out.hi);
  out.residual = std::abs(f(out.value));
  return out;
}

RootResult find_pn(int n, double tol) {
  if (n < 2) {
    throw InputError(
        "p_n needs n >= 2: psi_1 tends to 1 - 2^(1-n) = 0 as p grows and has no root in (2, inf)");
  }
  require_degree(n);
  auto f = [n](double p) { return psi(n, p); };
  const double lo = 2.0;
  if (!(f(lo) < 0.0)) throw NumericalError("psi_n(2) is not negative");
  double hi = 4.0;
  int doublings = 0;
  while (!(f(hi) > 0.0)) {
    if (++doublings > 60) throw NumericalError("bracket expansion for p_n failed");
    hi *= 2.0;
  }
  return bisect(f, lo, hi, tol);
}

RootResult find_pmn(int m, int n, double tol) {
  if (m < 2 || n < 2) throw InputError("p_{m,n} needs m, n >= 2");
  if (m == n) return find_pn(n, tol);
  const int small = std::min(m, n);
  const int large = std::max(m, n);
  const RootResult p_large = find_pn(large, tol);
  const RootResult p_small = find_pn(small, tol);

  constexpr int kProbes = 20;
  for (int i = 0; i < kProbes; ++i) {
    const double p = p_large.value + (p_small.value - p_large.value) * (i + 0.5) / kProbes;
    const double lower = phi(small, small, p);
    const double middle = phi(small, large, p);
    const double upper = phi(large, large, p);
    if (!(lower < middle && middle < upper)) {
      std::ostringstream msg;
      msg << "phi ordering fails at p=" << p;
      throw NumericalError(msg.str());
    }
  }
  return bisect([small, large](double p) { return phi(small, large, p); }, p_large.value, p_small.value, tol);
}

RootResult find_theta(int n, double p, double tol) {
  const RootResult p_n = find_pn(n, tol);
  if (!(p > p_n.value)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "p <= p_n: need p > " << p_n.value << " for n=" << n << ", got " << p;
    throw InputError(msg.str());
  }
  auto f = [n, p](double theta) { return phi_theta(n, theta, p); };
  if (!(f(1.0) > 0.0)) throw NumericalError("phi_{n,n,1}(p) is not positive above p_n");
  double hi = 1.0;
  double lo = 0.5;
  int halvings = 0;
  while (!(f(lo) < 0.0)) {
    if (++halvings > 200) throw NumericalError("bracket search for theta* failed");
    hi = lo;
    lo *= 0.5;
  }
  return bisect(f, lo, hi, tol);
}

SingularCertificate certify_singular(const CubeConfig& config, double tol, int max_dim) {
  require_cube_dims(config.m, config.n, max_dim);
  const DistanceMatrix a = build_distance_matrix(config.points, config.p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.entries, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed in certify_singular");
  const Eigen::VectorXd sigma = solver.eigenvalues().cwiseAbs();

  SingularCertificate cert;
  cert.m = config.m;
  cert.n = config.n;
  cert.theta = config.theta;
  cert.p = config.p.value();
  cert.sigma_min = sigma.minCoeff();
  cert.sigma_max = sigma.maxCoeff();

  const ReducedSystem sys = reduced_system(config.m, config.n, config.theta, config.p.value(), max_dim);
  const Eigen::Vector2d kernel = sys.kernel();
  cert.lambda = kernel[0];
  cert.mu = kernel[1];
  const auto first = static_cast<Eigen::Index>(config.first_block());
  const auto second = static_cast<Eigen::Index>(config.second_block());
  cert.null_vector.resize(first + second);
  cert.null_vector.head(first).setConstant(cert.lambda);
  cert.null_vector.tail(second).setConstant(cert.mu);
  cert.residual = relative_null_residual(a.entries, cert.null_vector, cert.sigma_max);
  cert.pass = cert.sigma_min <= tol * cert.sigma_max && cert.residual <= tol;
  return cert;
}

SingularCertificate certify_singular(const PointSet& points, PExponent p, double tol) {
  const DistanceMatrix a = build_distance_matrix(points, p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.entries);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed in certify_singular");
  const Eigen::VectorXd sigma = solver.eigenvalues().cwiseAbs();
  Eigen::Index smallest = 0;
  SingularCertificate cert;
  cert.p = p.value();
  cert.sigma_min = sigma.minCoeff(&smallest);
  cert.sigma_max = sigma.maxCoeff();
  cert.null_vector = solver.eigenvectors().col(smallest);
  cert.residual = relative_null_residual(a.entries, cert.null_vector, cert.sigma_max);
  cert.pass = cert.sigma_min <= tol * cert.sigma_max && cert.residual <= tol;
  return cert;
}

std::vector<RateRow> rate_table(int n_min, int n_max, double tol) {
  std::vector<RateRow> rows;
  if (n_max < n_min) return rows;
  if (n_min < 2) throw InputError("rate table needs n >= 2");
  for (int n = n_min; n <= n_max; ++n) {
    const RootResult root = find_pn(n, tol);
    rows.push_back({n, root.value, n * (root.value - 2.0)});
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!(rows[i].p_n > 2.0)) throw NumericalError("p_n did not exceed 2");
    if (rows[i].rate > kRateBound) {
      std::ostringstream msg;
      msg << "n (p_n - 2) = " << rows[i].rate << " exceeds bound " << kRateBound << " at n=" << rows[i].n;
      throw NumericalError(msg.str());
    }
    if (i > 0 && !(rows[i].p_n < rows[i - 1].p_n)) {
      std::ostringstream msg;
      msg << "p_n is not strictly decreasing at n=" << rows[i].n;
      throw NumericalError(msg.str());
    }
  }
  return rows;
}

}  // namespace pnorm
