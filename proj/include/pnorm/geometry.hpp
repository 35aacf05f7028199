#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "pnorm/profile.hpp"

namespace pnorm {

/// Exponent of a p-norm. Values in (0,1) give the quasi-norm
/// (sum |v_k|^p)^(1/p), which still gets called a p-norm here.
class PExponent {
 public:
  explicit PExponent(double p);

  double value() const { return p_; }
  bool is_quasi_norm() const { return p_ < 1.0; }
  bool is_norm() const { return p_ >= 1.0; }
  bool is_euclidean() const { return p_ == 2.0; }

  friend bool operator==(const PExponent&, const PExponent&) = default;

 private:
  double p_;
};

/// Ordered points x^1..x^n in R^d, stored one point per row.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(Eigen::MatrixXd rows);
  explicit PointSet(const std::vector<std::vector<double>>& rows);
  PointSet(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t size() const { return static_cast<std::size_t>(rows_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(rows_.cols()); }
  auto point(std::size_t i) const { return rows_.row(static_cast<Eigen::Index>(i)); }
  const Eigen::MatrixXd& rows() const { return rows_; }

  /// No two points equal coordinate-wise.
  bool distinct() const;

  PointSet translated(const Eigen::RowVectorXd& shift) const;
  PointSet permuted(std::span<const std::size_t> order) const;

 private:
  Eigen::MatrixXd rows_;
};

struct DistanceProvenance {
  PExponent p;
  RadialProfile profile;
};

/// Symmetric n x n matrix A_ij = profile(argument(||x^i - x^j||_p)).
struct DistanceMatrix {
  Eigen::MatrixXd entries;
  std::optional<DistanceProvenance> provenance;

  std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }
};

/// (sum |v_k|^p)^(1/p). Throws InputError on non-finite coordinates.
double norm_p(std::span<const double> v, PExponent p);
double norm_p(const Eigen::Ref<const Eigen::RowVectorXd>& v, PExponent p);

/// sum_k |x_k - y_k|^p, i.e. ||x - y||_p^p.
double pnorm_power_sum(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                       const Eigen::Ref<const Eigen::RowVectorXd>& y, PExponent p);

/// ||x - y||_p without materialising the difference.
double pnorm_distance(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                      const Eigen::Ref<const Eigen::RowVectorXd>& y, PExponent p);

/// The argument a profile consumes for a given p-norm distance, per its
/// input convention (distance, its square, or its p-th power).
double profile_argument(double distance, PExponent p, InputConvention convention);

/// profile_argument(||x - y||_p, ...) computed straight from the coordinates.
double pair_argument(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                     const Eigen::Ref<const Eigen::RowVectorXd>& y, PExponent p, InputConvention convention);

/// Each unordered pair is evaluated once and mirrored, so the result is
/// bitwise symmetric.
DistanceMatrix build_distance_matrix(const PointSet& x, PExponent p, const RadialProfile& profile);

/// Plain p-norm distance matrix, A_ij = ||x^i - x^j||_p.
DistanceMatrix build_distance_matrix(const PointSet& x, PExponent p);

}  // namespace pnorm
