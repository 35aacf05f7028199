#include "pnorm/profile.hpp"

#include <cmath>
#include <sstream>

#include "pnorm/error.hpp"

namespace pnorm {

struct RadialProfile::Parts {
  RadialProfile outer;
  RadialProfile inner;
};

RadialProfile::RadialProfile(ProfileKind kind, double tau, InputConvention input, ProfileClass flags)
    : kind_(kind), tau_(tau), input_(input), flags_(flags) {}

RadialProfile RadialProfile::identity(InputConvention input) {
  ProfileClass c;
  c.cnd1 = true;
  c.vanishes_only_at_zero = true;
  return {ProfileKind::identity, 1.0, input, c};
}

RadialProfile RadialProfile::power(double tau, InputConvention input) {
  if (!(tau > 0.0 && tau < 1.0)) {
    std::ostringstream msg;
    msg << "power profile needs tau in (0,1), got " << tau;
    throw InputError(msg.str());
  }
  ProfileClass c;
  c.cnd1 = true;
  c.strictly_cnd1 = true;
  c.vanishes_only_at_zero = true;
  return {ProfileKind::power, tau, input, c};
}

RadialProfile RadialProfile::multiquadric(InputConvention input) {
  ProfileClass c;
  c.cnd1 = true;
  c.strictly_cnd1 = true;
  return {ProfileKind::multiquadric, 0.5, input, c};
}

RadialProfile RadialProfile::exponential(InputConvention input) {
  ProfileClass c;
  c.positive_definite = true;
  c.strictly_positive_definite = true;
  return {ProfileKind::exponential, 1.0, input, c};
}

const RadialProfile& RadialProfile::outer() const {
  if (kind_ != ProfileKind::composition) throw InputError("outer() on a non-composition profile");
  return parts_->outer;
}

const RadialProfile& RadialProfile::inner() const {
  if (kind_ != ProfileKind::composition) throw InputError("inner() on a non-composition profile");
  return parts_->inner;
}

RadialProfile RadialProfile::with_input(InputConvention input) const {
  RadialProfile copy = *this;
  copy.input_ = input;
  return copy;
}

double RadialProfile::operator()(double t) const {
  switch (kind_) {
    case ProfileKind::identity:
      return t;
    case ProfileKind::power:
      return t == 0.0 ? 0.0 : std::pow(t, tau_);
    case ProfileKind::multiquadric:
      return std::sqrt(1.0 + t);
    case ProfileKind::exponential:
      return std::exp(-t);
    case ProfileKind::composition:
      return parts_->outer(parts_->inner(t));
  }
  return t;
}

std::string RadialProfile::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case ProfileKind::identity:
      out << "t";
      break;
    case ProfileKind::power:
      out << "t^" << tau_;
      break;
    case ProfileKind::multiquadric:
      out << "(1+t)^0.5";
      break;
    case ProfileKind::exponential:
      out << "exp(-t)";
      break;
    case ProfileKind::composition:
      out << "[" << parts_->outer.describe() << "] o [" << parts_->inner.describe() << "]";
      break;
  }
  return out.str();
}

double evaluate(const RadialProfile& profile, double t) {
  if (!std::isfinite(t) || t < 0.0) {
    std::ostringstream msg;
    msg << "profile argument must be finite and non-negative, got " << t;
    throw InputError(msg.str());
  }
  return profile(t);
}

RadialProfile classify_composition(const RadialProfile& g, const RadialProfile& f) {
  ProfileClass c;
  if (g.kind() == ProfileKind::identity) {
    c = f.flags();
  } else if (f.kind() == ProfileKind::identity) {
    c = g.flags();
  } else {
    const ProfileClass& gc = g.flags();
    const ProfileClass& fc = f.flags();
    const bool f_fixes_zero = f(0.0) == 0.0;
    const bool inner_ok = fc.cnd1 && f_fixes_zero;
    c.cnd1 = gc.cnd1 && inner_ok;
    c.strictly_cnd1 = c.cnd1 && gc.strictly_cnd1 && fc.vanishes_only_at_zero;
    c.positive_definite = gc.positive_definite && inner_ok;
    c.strictly_positive_definite =
        gc.strictly_positive_definite && inner_ok && fc.vanishes_only_at_zero;
    c.vanishes_only_at_zero = gc.vanishes_only_at_zero && fc.vanishes_only_at_zero;
  }
  RadialProfile out(ProfileKind::composition, 1.0, f.input_convention(), c);
  out.parts_ = std::make_shared<const RadialProfile::Parts>(RadialProfile::Parts{g, f});
  return out;
}

std::optional<PowerLaw> as_power_law(const RadialProfile& profile) {
  switch (profile.kind()) {
    case ProfileKind::identity:
      return PowerLaw{0.0, 1.0};
    case ProfileKind::power:
      return PowerLaw{0.0, profile.tau()};
    case ProfileKind::multiquadric:
      return PowerLaw{1.0, 0.5};
    default:
      return std::nullopt;
  }
}

bool cm_derivative_spotcheck(const PowerLaw& f, int order, std::span<const double> grid) {
  if (order < 0 || order > 4) throw InputError("derivative order must be in [0, 4]");
  for (double t : grid) {
    if (!(t > 0.0) || !std::isfinite(t)) throw InputError("spot-check grid points must be positive");
    const double base = f.shift + t;
    // f^(j+1)(t) = c (c-1) ... (c-j) base^(c-j-1)
    double falling = f.exponent;
    for (int j = 0; j <= order; ++j) {
      if (j > 0) falling *= f.exponent - j;
      const double derivative = falling * std::pow(base, f.exponent - j - 1);
      const double signed_value = (j % 2 == 0) ? derivative : -derivative;
      if (signed_value < 0.0) return false;
    }
  }
  return true;
}

bool cm_derivative_spotcheck(const RadialProfile& profile, int order, std::span<const double> grid) {
  auto law = as_power_law(profile);
  if (!law) {
    throw InputError("no closed-form derivatives shipped for profile " + profile.describe());
  }
  return cm_derivative_spotcheck(*law, order, grid);
}

std::string to_string(InputConvention input) {
  switch (input) {
    case InputConvention::distance:
      return "distance";
    case InputConvention::squared_distance:
      return "squared-distance";
    case InputConvention::pth_power_distance:
      return "p-th-power-distance";
  }
  return "distance";
}

InputConvention input_convention_from_string(const std::string& name) {
  if (name == "distance") return InputConvention::distance;
  if (name == "squared-distance") return InputConvention::squared_distance;
  if (name == "p-th-power-distance") return InputConvention::pth_power_distance;
  throw InputError("unknown input convention '" + name +
                   "' (expected distance, squared-distance or p-th-power-distance)");
}

}  // namespace pnorm
