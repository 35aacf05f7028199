#include "pnorm/geometry.hpp"

#include <cmath>
#include <sstream>

#include "pnorm/error.hpp"

namespace pnorm {

namespace {

// |v|^p as exp(p ln|v|) with exact shortcuts at v = 0 and p in {1, 2}.
double abs_power(double v, double p) {
  const double a = std::abs(v);
  if (a == 0.0) return 0.0;
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return std::exp(p * std::log(a));
}

double root_of_sum(double sum, double p) {
  if (sum == 0.0) return 0.0;
  if (p == 1.0) return sum;
  if (p == 2.0) return std::sqrt(sum);
  return std::exp(std::log(sum) / p);
}

void require_finite(double v) {
  if (!std::isfinite(v)) throw InputError("non-finite coordinate");
}

}  // namespace

PExponent::PExponent(double p) : p_(p) {
  if (!std::isfinite(p) || !(p > 0.0)) {
    std::ostringstream msg;
    msg << "p-norm exponent must be finite and positive, got " << p;
    throw InputError(msg.str());
  }
}

PointSet::PointSet(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
  if (rows_.rows() < 1 || rows_.cols() < 1) throw InputError("point set needs n >= 1 points of dimension d >= 1");
  if (!rows_.allFinite()) throw InputError("non-finite coordinate in point set");
}

PointSet::PointSet(std::initializer_list<std::initializer_list<double>> rows)
    : PointSet(std::vector<std::vector<double>>(rows.begin(), rows.end())) {}

PointSet::PointSet(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw InputError("point set needs n >= 1 points of dimension d >= 1");
  const std::size_t d = rows.front().size();
  rows_.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) {
      std::ostringstream msg;
      msg << "point " << i << " has dimension " << rows[i].size() << ", expected " << d;
      throw InputError(msg.str());
    }
    for (std::size_t k = 0; k < d; ++k) {
      require_finite(rows[i][k]);
      rows_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
  }
}

bool PointSet::distinct() const {
  for (Eigen::Index i = 0; i < rows_.rows(); ++i)
    for (Eigen::Index j = i + 1; j < rows_.rows(); ++j)
      if (rows_.row(i) == rows_.row(j)) return false;
  return true;
}

PointSet PointSet::translated(const Eigen::RowVectorXd& shift) const {
  if (shift.size() != rows_.cols()) throw InputError("translation dimension mismatch");
  Eigen::MatrixXd moved = rows_.rowwise() + shift;
  return PointSet(std::move(moved));
}

PointSet PointSet::permuted(std::span<const std::size_t> order) const {
  if (order.size() != size()) throw InputError("permutation length mismatch");
  Eigen::MatrixXd out(rows_.rows(), rows_.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= size()) throw InputError("permutation index out of range");
    out.row(static_cast<Eigen::Index>(i)) = rows_.row(static_cast<Eigen::Index>(order[i]));
  }
  return PointSet(std::move(out));
}

double norm_p(std::span<const double> v, PExponent p) {
  if (v.empty()) throw InputError("pnorm of an empty vector");
  double sum = 0.0;
  for (double x : v) {
    require_finite(x);
    sum += abs_power(x, p.value());
  }
  return root_of_sum(sum, p.value());
}

double norm_p(const Eigen::Ref<const Eigen::RowVectorXd>& v, PExponent p) {
  if (v.size() == 0) throw InputError("pnorm of an empty vector");
  double sum = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    require_finite(v[k]);
    sum += abs_power(v[k], p.value());
  }
  return root_of_sum(sum, p.value());
}

double pnorm_power_sum(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                       const Eigen::Ref<const Eigen::RowVectorXd>& y, PExponent p) {
  if (x.size() != y.size()) throw InputError("dimension mismatch in pnorm_distance");
  double sum = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) sum += abs_power(x[k] - y[k], p.value());
  return sum;
}

double pnorm_distance(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                      const Eigen::Ref<const Eigen::RowVectorXd>& y, PExponent p) {
  return root_of_sum(pnorm_power_sum(x, y, p), p.value());
}

double profile_argument(double distance, PExponent p, InputConvention convention) {
  switch (convention) {
    case InputConvention::distance:
      return distance;
    case InputConvention::squared_distance:
      return distance * distance;
    case InputConvention::pth_power_distance:
      return abs_power(distance, p.value());
  }
  return distance;
}

double pair_argument(const Eigen::Ref<const Eigen::RowVectorXd>& x,
                     const Eigen::Ref<const Eigen::RowVectorXd>& y, PExponent p, InputConvention convention) {
  // The p-th power convention uses the raw coordinate sum, skipping the
  // root-then-power round trip.
  const double sum = pnorm_power_sum(x, y, p);
  if (convention == InputConvention::pth_power_distance) return sum;
  return profile_argument(root_of_sum(sum, p.value()), p, convention);
}

DistanceMatrix build_distance_matrix(const PointSet& x, PExponent p, const RadialProfile& profile) {
  const auto n = static_cast<Eigen::Index>(x.size());
  if (n < 1) throw InputError("distance matrix needs at least one point");
  DistanceMatrix out;
  out.entries.resize(n, n);
  const double diag = profile(profile_argument(0.0, p, profile.input_convention()));
  const auto& rows = x.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    out.entries(i, i) = diag;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double arg = pair_argument(rows.row(i), rows.row(j), p, profile.input_convention());
      const double value = profile(arg);
      out.entries(i, j) = value;
      out.entries(j, i) = value;
    }
  }
  out.provenance = DistanceProvenance{p, profile};
  return out;
}

DistanceMatrix build_distance_matrix(const PointSet& x, PExponent p) {
  return build_distance_matrix(x, p, RadialProfile::identity());
}

}  // namespace pnorm
