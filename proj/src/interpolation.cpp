#include "pnorm/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pnorm/cnd1.hpp"
#include "pnorm/error.hpp"

namespace pnorm {

namespace {

constexpr Eigen::Index kSvdConditionLimit = 500;

bool guaranteed_nonsingular(const PointSet& x, PExponent p, const RadialProfile& profile, double diag) {
  if (x.size() < 2) return diag != 0.0;
  const TheoremPrediction pred = predict(x, p, profile);
  if (pred.positive_definite) return true;
  // Strictly AND with non-negative trace has determinant sign (-1)^(n-1).
  return pred.verdict == AndVerdict::strictly_and && diag >= 0.0;
}

double sup_norm(std::span<const double> f) {
  double out = 0.0;
  for (double v : f) out = std::max(out, std::abs(v));
  return out;
}

}  // namespace

Interpolant fit(const PointSet& x, std::span<const double> f, PExponent p, const RadialProfile& profile,
                const FitOptions& options) {
  const std::size_t n = x.size();
  if (f.size() != n) {
    std::ostringstream msg;
    msg << "data length " << f.size() << " does not match " << n << " centers";
    throw InputError(msg.str());
  }
  if (!x.distinct()) throw InputError("interpolation centers must be distinct");
  for (double v : f)
    if (!std::isfinite(v)) throw InputError("non-finite data value");

  const DistanceMatrix a = build_distance_matrix(x, p, profile);
  Interpolant s;
  s.centers = x;
  s.p = p;
  s.profile = profile;
  s.guaranteed = guaranteed_nonsingular(x, p, profile, a.entries(0, 0));
  const Eigen::Map<const Eigen::VectorXd> rhs(f.data(), static_cast<Eigen::Index>(n));

  auto report = [&]() -> std::optional<AndReport> {
    if (n < 2) return std::nullopt;
    return check_and(a.entries, options.eig_tol);
  };

  if (n == 1) {
    const double phi0 = a.entries(0, 0);
    if (phi0 == 0.0) {
      if (f[0] != 0.0) throw SingularSystemError("singular system: 1x1 interpolation matrix is zero", std::nullopt);
      s.coefficients = Eigen::VectorXd::Zero(1);
      s.condition_estimate = std::numeric_limits<double>::infinity();
      return s;
    }
    s.coefficients = Eigen::VectorXd::Constant(1, f[0] / phi0);
    s.condition_estimate = 1.0;
    return s;
  }

  const auto dim = static_cast<Eigen::Index>(n);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a.entries);
  double sigma_ratio = 0.0;  // sigma_min / sigma_max, or reciprocal condition estimate
  if (dim <= kSvdConditionLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.entries, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd sigma = solver.eigenvalues().cwiseAbs();
    sigma_ratio = sigma.maxCoeff() == 0.0 ? 0.0 : sigma.minCoeff() / sigma.maxCoeff();
  } else {
    sigma_ratio = lu.rcond();
  }
  s.condition_estimate = sigma_ratio == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / sigma_ratio;

  const double singular_threshold = 16.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon();
  if (sigma_ratio <= singular_threshold) {
    std::ostringstream msg;
    msg << "singular system: condition estimate " << s.condition_estimate
        << (s.guaranteed ? " (nonsingularity was guaranteed; numerical breakdown)" : " (no guarantee for this p/profile)");
    throw SingularSystemError(msg.str(), report());
  }

  Eigen::VectorXd lambda = lu.solve(rhs);
  // One step of iterative refinement.
  lambda += lu.solve(rhs - a.entries * lambda);
  s.coefficients = lambda;

  const double residual = relative_residual(s, f);
  if (!(residual <= options.tol)) {
    std::ostringstream msg;
    msg << "singular system: relative residual " << residual << " exceeds " << options.tol
        << " (condition estimate " << s.condition_estimate << ")";
    throw SingularSystemError(msg.str(), report());
  }
  return s;
}

double evaluate_interpolant(const Interpolant& s, const Eigen::Ref<const Eigen::RowVectorXd>& query) {
  if (static_cast<std::size_t>(query.size()) != s.centers.dim()) {
    std::ostringstream msg;
    msg << "query dimension " << query.size() << " does not match center dimension " << s.centers.dim();
    throw InputError(msg.str());
  }
  if (!query.allFinite()) throw InputError("non-finite query coordinate");
  const InputConvention input = s.profile.input_convention();
  double value = 0.0;
  for (std::size_t i = 0; i < s.centers.size(); ++i) {
    const double arg = pair_argument(query, s.centers.point(i), s.p, input);
    value += s.coefficients[static_cast<Eigen::Index>(i)] * s.profile(arg);
  }
  return value;
}

double relative_residual(const Interpolant& s, std::span<const double> f) {
  if (f.size() != s.centers.size()) throw InputError("data length mismatch");
  const DistanceMatrix a = build_distance_matrix(s.centers, s.p, s.profile);
  const Eigen::Map<const Eigen::VectorXd> rhs(f.data(), static_cast<Eigen::Index>(f.size()));
  const double err = (a.entries * s.coefficients - rhs).cwiseAbs().maxCoeff();
  const double scale = sup_norm(f);
  return scale == 0.0 ? err : err / scale;
}

}  // namespace pnorm
