#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>

#include "pnorm/and_algebra.hpp"
#include "pnorm/error.hpp"
#include "pnorm/geometry.hpp"
#include "pnorm/profile.hpp"

namespace pnorm {

/// s(x) = sum_i lambda_i profile(||x - x^i||_p), per the profile's input convention.
struct Interpolant {
  PointSet centers;
  Eigen::VectorXd coefficients;
  PExponent p{2.0};
  RadialProfile profile = RadialProfile::identity();
  double condition_estimate = 1.0;
  /// True when the composition rules guarantee a nonsingular matrix
  /// for these centers.
  bool guaranteed = false;
};

struct FitOptions {
  double tol = 1e-8;
  double eig_tol = kDefaultEigenTolerance;
};

/// Singular or ill-conditioned interpolation system. Carries the AND report
/// of the matrix when one could be computed (n >= 2).
class SingularSystemError : public NumericalError {
 public:
  SingularSystemError(const std::string& what, std::optional<AndReport> report)
      : NumericalError(what), report_(std::move(report)) {}
  const std::optional<AndReport>& report() const { return report_; }

 private:
  std::optional<AndReport> report_;
};

/// Solves A lambda = f with a dense pivoted LU (A is indefinite: one
/// positive and n-1 negative eigenvalues in the distance-matrix case).
/// Throws InputError for non-distinct centers or a length mismatch, and
/// SingularSystemError when the matrix is numerically singular or the
/// relative residual |A lambda - f|_inf / |f|_inf exceeds options.tol.
Interpolant fit(const PointSet& x, std::span<const double> f, PExponent p, const RadialProfile& profile,
                const FitOptions& options = {});

double evaluate_interpolant(const Interpolant& s, const Eigen::Ref<const Eigen::RowVectorXd>& query);

/// max_i |A lambda - f|_i / max(|f|_inf, tiny); the quantity fit() bounds.
double relative_residual(const Interpolant& s, std::span<const double> f);

}  // namespace pnorm
