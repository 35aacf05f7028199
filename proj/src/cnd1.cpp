#include "pnorm/cnd1.hpp"

#include <algorithm>
#include <sstream>

#include "pnorm/error.hpp"

namespace pnorm {

namespace {

int rank(AndVerdict v) {
  switch (v) {
    case AndVerdict::not_and:
      return 0;
    case AndVerdict::and_:
      return 1;
    case AndVerdict::strictly_and:
      return 2;
  }
  return 0;
}

// Map taking ||.||_p^p to the argument the profile consumes, or nothing when
// that map is not CND1 (exponent above one).
std::optional<RadialProfile> lift_from_base(PExponent p, InputConvention input) {
  double exponent = 1.0;
  switch (input) {
    case InputConvention::pth_power_distance:
      exponent = 1.0;
      break;
    case InputConvention::distance:
      exponent = 1.0 / p.value();
      break;
    case InputConvention::squared_distance:
      exponent = 2.0 / p.value();
      break;
  }
  if (exponent == 1.0) return RadialProfile::identity();
  if (exponent > 0.0 && exponent < 1.0) return RadialProfile::power(exponent);
  return std::nullopt;
}

}  // namespace

TheoremPrediction predict(const PointSet& x, PExponent p, const RadialProfile& profile) {
  TheoremPrediction out;
  if (p.value() > 2.0) {
    out.basis = "no guarantee: the p-th power base is not AND for p > 2";
    return out;
  }
  const auto lift = lift_from_base(p, profile.input_convention());
  if (!lift) {
    out.basis = "no guarantee: " + to_string(profile.input_convention()) +
                " is not a CND1 image of the p-th power base at this p";
    return out;
  }
  const RadialProfile g = classify_composition(profile, *lift);
  const bool distinct = x.size() >= 2 && x.distinct();
  std::ostringstream basis;
  basis << "AND base ||.||_p^p (p=" << p.value() << "), composed with " << g.describe();
  if (g.flags().cnd1) {
    out.verdict = (distinct && g.flags().strictly_cnd1) ? AndVerdict::strictly_and : AndVerdict::and_;
    basis << (g.flags().strictly_cnd1 ? ", strictly CND1" : ", CND1");
  }
  if (g.flags().strictly_positive_definite && distinct) {
    out.positive_definite = true;
    basis << ", strictly positive definite";
  }
  if (!out.verdict && !out.positive_definite) basis << ", no catalogued class applies";
  out.basis = basis.str();
  return out;
}

ProfileMatrixReport matrix_from_profile(const PointSet& x, PExponent p, const RadialProfile& profile,
                                        double tol) {
  if (x.size() < 2) throw InputError("matrix_from_profile needs at least two points");
  ProfileMatrixReport out;
  out.matrix = build_distance_matrix(x, p, profile);
  out.observed = check_and(out.matrix.entries, tol);
  out.predicted = predict(x, p, profile);

  if (out.predicted.verdict && rank(out.observed.verdict) < rank(*out.predicted.verdict)) {
    std::ostringstream msg;
    msg << "verdict mismatch: predicted " << to_string(*out.predicted.verdict) << " (" << out.predicted.basis
        << "), observed " << to_string(out.observed.verdict);
    throw NumericalError(msg.str());
  }
  if (out.predicted.positive_definite) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(out.matrix.entries, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = solver.eigenvalues()[0];
    const double scale = std::max(1.0, out.matrix.entries.cwiseAbs().maxCoeff());
    if (*out.min_eigenvalue < -tol * scale) {
      std::ostringstream msg;
      msg << "positive definiteness predicted but smallest eigenvalue is " << *out.min_eigenvalue;
      throw NumericalError(msg.str());
    }
  }
  return out;
}

}  // namespace pnorm
