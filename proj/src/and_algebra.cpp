#include "pnorm/and_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pnorm/error.hpp"

namespace pnorm {

namespace {

double max_abs(const Eigen::MatrixXd& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

void require_square_symmetric(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw InputError("matrix must be square");
  if (!a.allFinite()) throw InputError("matrix has non-finite entries");
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, max_abs(a));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > slack) {
        std::ostringstream msg;
        msg << "matrix is not symmetric at (" << i << "," << j << ")";
        throw InputError(msg.str());
      }
}

}  // namespace

std::string to_string(AndVerdict verdict) {
  switch (verdict) {
    case AndVerdict::not_and:
      return "not-AND";
    case AndVerdict::and_:
      return "AND";
    case AndVerdict::strictly_and:
      return "strictly-AND";
  }
  return "not-AND";
}

AndVerdict and_verdict_from_string(const std::string& name) {
  if (name == "not-AND") return AndVerdict::not_and;
  if (name == "AND") return AndVerdict::and_;
  if (name == "strictly-AND") return AndVerdict::strictly_and;
  throw InputError("unknown AND verdict '" + name + "'");
}

Eigen::MatrixXd restrict_to_zn(const Eigen::MatrixXd& a) {
  require_square_symmetric(a);
  const Eigen::Index n = a.rows();
  if (n < 2) throw InputError("restriction to the zero-sum hyperplane needs n >= 2");
  const Eigen::Index last = n - 1;
  Eigen::MatrixXd b(last, last);
  for (Eigen::Index i = 0; i < last; ++i)
    for (Eigen::Index j = i; j < last; ++j) {
      const double v = a(i, last) + a(last, j) - a(i, j) - a(last, last);
      b(i, j) = v;
      b(j, i) = v;
    }
  return b;
}

DeterminantSign determinant_sign(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw InputError("determinant of a non-square matrix");
  const Eigen::Index n = a.rows();
  DeterminantSign out;
  if (n == 0) {
    out.sign = 1;
    out.log_magnitude = 0.0;
    return out;
  }
  Eigen::MatrixXd u = a;
  const double zero_pivot = 4.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() * max_abs(a);
  int sign = 1;
  double log_mag = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot_row = k;
    u.col(k).tail(n - k).cwiseAbs().maxCoeff(&pivot_row);
    pivot_row += k;
    const double pivot = u(pivot_row, k);
    if (std::abs(pivot) <= zero_pivot) {
      out.sign = 0;
      return out;
    }
    if (pivot_row != k) {
      u.row(k).swap(u.row(pivot_row));
      sign = -sign;
    }
    if (pivot < 0.0) sign = -sign;
    log_mag += std::log(std::abs(pivot));
    for (Eigen::Index r = k + 1; r < n; ++r) {
      const double factor = u(r, k) / pivot;
      if (factor != 0.0) u.row(r).tail(n - k) -= factor * u.row(k).tail(n - k);
    }
  }
  out.sign = sign;
  out.log_magnitude = log_mag;
  return out;
}

AndReport check_and(const Eigen::MatrixXd& a, double tol) {
  require_square_symmetric(a);
  if (a.rows() < 2) throw InputError("no strictly AND 1x1 matrices: check_and needs n >= 2");
  const Eigen::MatrixXd b = restrict_to_zn(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed in check_and");

  AndReport report;
  const Eigen::VectorXd& w = solver.eigenvalues();  // ascending for B'
  report.restricted_eigenvalues.resize(static_cast<std::size_t>(w.size()));
  for (Eigen::Index i = 0; i < w.size(); ++i)
    report.restricted_eigenvalues[static_cast<std::size_t>(i)] = -w[w.size() - 1 - i];

  const double threshold = tol * std::max(1.0, max_abs(a));
  const double largest = report.restricted_eigenvalues.back();
  if (largest < -threshold) {
    report.verdict = AndVerdict::strictly_and;
  } else if (largest <= threshold) {
    report.verdict = AndVerdict::and_;
  } else {
    report.verdict = AndVerdict::not_and;
  }
  report.trace = a.trace();
  const DeterminantSign det = determinant_sign(a);
  report.det_sign = det.sign;
  report.det_log_magnitude = det.log_magnitude;
  return report;
}

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& b, double tol, std::optional<std::size_t> rank) {
  require_square_symmetric(b);
  const Eigen::Index k = b.rows();
  if (k == 0) return Eigen::MatrixXd(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed in psd_factor");
  const Eigen::VectorXd& w = solver.eigenvalues();
  const double norm = w.cwiseAbs().maxCoeff();
  if (w[0] < -tol * norm) {
    std::ostringstream msg;
    msg << "matrix is not non-negative definite: eigenvalue " << w[0] << " below -" << tol << " * " << norm;
    throw NumericalError(msg.str());
  }
  const Eigen::Index keep = rank ? std::min<Eigen::Index>(static_cast<Eigen::Index>(*rank), k) : k;
  // Rows of P are sqrt(w_i) v_i^T, largest eigenvalues first.
  Eigen::MatrixXd p(keep, k);
  for (Eigen::Index r = 0; r < keep; ++r) {
    const Eigen::Index idx = k - 1 - r;
    const double lambda = std::max(0.0, w[idx]);
    p.row(r) = std::sqrt(lambda) * solver.eigenvectors().col(idx).transpose();
  }
  return p;
}

Embedding schoenberg_embed(const Eigen::MatrixXd& a, double tol, std::optional<std::size_t> rank) {
  require_square_symmetric(a);
  const Eigen::Index n = a.rows();
  const double scale = std::max(1.0, max_abs(a));
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(a(i, i)) > tol * scale) throw InputError("embedding needs a zero diagonal");

  const AndReport report = check_and(a, tol);
  if (report.verdict == AndVerdict::not_and) {
    std::ostringstream msg;
    msg << "matrix is not AND (largest restricted eigenvalue " << report.restricted_eigenvalues.back() << ")";
    throw NumericalError(msg.str());
  }

  const Eigen::MatrixXd b = restrict_to_zn(a);
  const Eigen::MatrixXd p = psd_factor(b, tol, rank);
  const Eigen::Index dim = p.rows();

  // xi^i = p^i / sqrt(2) for i < n, xi^n = 0.
  Embedding out;
  out.vectors = Eigen::MatrixXd::Zero(n, dim);
  out.vectors.topRows(n - 1) = p.transpose() / std::sqrt(2.0);

  double residual = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      residual = std::max(residual, std::abs((out.vectors.row(i) - out.vectors.row(j)).squaredNorm() - a(i, j)));
  out.residual = residual;

  if (!rank && residual > tol * scale * static_cast<double>(n)) {
    std::ostringstream msg;
    msg << "embedding residual " << residual << " exceeds tolerance";
    throw NumericalError(msg.str());
  }
  return out;
}

DetSignCertificate det_sign_certificate(const Eigen::MatrixXd& a, double tol) {
  const AndReport report = check_and(a, tol);
  if (report.verdict != AndVerdict::strictly_and)
    throw InputError("determinant sign certificate needs a strictly AND matrix");
  if (report.trace < 0.0) throw InputError("determinant sign certificate needs a non-negative trace");
  DetSignCertificate cert;
  cert.sign = (a.rows() % 2 == 0) ? -1 : 1;
  cert.computed_sign = report.det_sign;
  cert.verified = cert.computed_sign == cert.sign;
  return cert;
}

}  // namespace pnorm
