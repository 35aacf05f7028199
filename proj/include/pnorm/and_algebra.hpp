#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace pnorm {

// A symmetric matrix is "almost negative definite" (AND) when y^T A y <= 0
// for every y whose coordinates sum to zero, and strictly AND when the
// inequality is strict for y != 0.

inline constexpr double kDefaultEigenTolerance = 1e-10;

enum class AndVerdict { not_and, and_, strictly_and };

std::string to_string(AndVerdict verdict);
AndVerdict and_verdict_from_string(const std::string& name);

/// Sign of det(A) with log|det(A)|; log_magnitude is empty when the
/// determinant was found to be zero.
struct DeterminantSign {
  int sign = 0;
  std::optional<double> log_magnitude;
};

struct AndReport {
  AndVerdict verdict = AndVerdict::not_and;
  /// Spectrum of the quadratic form restricted to the zero-sum hyperplane,
  /// in the integer basis e^n - e^i. Ascending, length n - 1.
  std::vector<double> restricted_eigenvalues;
  double trace = 0.0;
  int det_sign = 0;
  std::optional<double> det_log_magnitude;
};

struct Embedding {
  /// One vector per row; the last row is exactly zero.
  Eigen::MatrixXd vectors;
  /// max_ij | |y^i - y^j|^2 - A_ij |
  double residual = 0.0;
};

struct DetSignCertificate {
  int sign = 0;  // (-1)^(n-1)
  int computed_sign = 0;
  bool verified = false;
};

/// Leading (n-1) x (n-1) block of -F^T A F, F = [e^n - e^1, ..., e^n - e^(n-1), e^n]:
///   B'_ij = A_in + A_nj - A_ij - A_nn.
/// A is AND iff B' is non-negative definite, strictly AND iff B' is positive definite.
Eigen::MatrixXd restrict_to_zn(const Eigen::MatrixXd& a);

/// Verdict from the spectrum of the restricted form. An eigenvalue counts as
/// zero when it is within tol * max(1, max|A_ij|).
AndReport check_and(const Eigen::MatrixXd& a, double tol = kDefaultEigenTolerance);

/// Partial-pivoting elimination tracking permutation parity. A pivot below
/// 4 n eps max|A_ij| is treated as an exact zero.
DeterminantSign determinant_sign(const Eigen::MatrixXd& a);

/// P with P^T P = B for symmetric non-negative definite B, from a full
/// eigendecomposition. Eigenvalues in [-tol ||B||, 0) are clamped to zero;
/// anything more negative throws NumericalError. With `rank`, only the rank
/// largest eigenpairs are kept and P is rank x k.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& b, double tol = kDefaultEigenTolerance,
                           std::optional<std::size_t> rank = std::nullopt);

/// Vectors y^1..y^n in R^(n-1) with A_ij = |y^i - y^j|^2 and y^n = 0, for A
/// AND with zero diagonal. Throws InputError for a nonzero diagonal and
/// NumericalError if A is not AND or the reconstruction misses tol.
Embedding schoenberg_embed(const Eigen::MatrixXd& a, double tol = kDefaultEigenTolerance,
                           std::optional<std::size_t> rank = std::nullopt);

/// For strictly AND A with non-negative trace the determinant has sign
/// (-1)^(n-1). Throws InputError when the preconditions do not hold; a
/// false `verified` means numerical breakdown.
DetSignCertificate det_sign_certificate(const Eigen::MatrixXd& a, double tol = kDefaultEigenTolerance);

}  // namespace pnorm
