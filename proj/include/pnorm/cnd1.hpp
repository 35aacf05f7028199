#pragma once

#include <optional>
#include <string>

#include "pnorm/and_algebra.hpp"
#include "pnorm/geometry.hpp"
#include "pnorm/profile.hpp"

namespace pnorm {

/// What the composition rules guarantee for a built matrix, before any
/// numerics. `verdict` is a lower bound: the observed verdict may be stronger.
struct TheoremPrediction {
  std::optional<AndVerdict> verdict;
  bool positive_definite = false;
  /// Short human-readable account of which rule produced the prediction.
  std::string basis;
};

struct ProfileMatrixReport {
  DistanceMatrix matrix;
  AndReport observed;
  TheoremPrediction predicted;
  /// Smallest eigenvalue of the matrix itself; filled when positive
  /// definiteness is predicted.
  std::optional<double> min_eigenvalue;
};

/// The matrix ||x^i - x^j||_p^p is AND for p in (0,2], with nonzero
/// off-diagonal entries on distinct points. Every convention is a map on top of
/// that base: distance = base^(1/p), squared distance = base^(2/p). The map
/// is folded into the profile and the composition rules decide the verdict.
TheoremPrediction predict(const PointSet& x, PExponent p, const RadialProfile& profile);

/// Builds the matrix, runs check_and and compares against predict(). Throws
/// NumericalError when the observation falls short of the prediction.
ProfileMatrixReport matrix_from_profile(const PointSet& x, PExponent p, const RadialProfile& profile,
                                        double tol = kDefaultEigenTolerance);

}  // namespace pnorm
