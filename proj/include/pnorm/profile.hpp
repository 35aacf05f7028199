#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>

namespace pnorm {

enum class ProfileKind { identity, power, multiquadric, exponential, composition };

/// Which scalar a profile consumes when it is applied to a pair of points:
/// the p-norm distance itself, its square, or its p-th power.
enum class InputConvention { distance, squared_distance, pth_power_distance };

/// Catalogued facts about f, where "CND1" means f(|x^i - x^j|^2) is almost
/// negative definite for every point set. These are stored, not proved.
struct ProfileClass {
  bool cnd1 = false;
  bool strictly_cnd1 = false;
  bool positive_definite = false;
  bool strictly_positive_definite = false;
  bool vanishes_only_at_zero = false;

  friend bool operator==(const ProfileClass&, const ProfileClass&) = default;
};

/// Immutable descriptor of a radial map t -> f(t). Compositions share their
/// children, so copies are cheap.
class RadialProfile {
 public:
  static RadialProfile identity(InputConvention input = InputConvention::distance);
  /// t^tau, tau in (0,1).
  static RadialProfile power(double tau, InputConvention input = InputConvention::distance);
  /// (1 + t)^(1/2).
  static RadialProfile multiquadric(InputConvention input = InputConvention::distance);
  /// exp(-t).
  static RadialProfile exponential(InputConvention input = InputConvention::distance);

  ProfileKind kind() const { return kind_; }
  double tau() const { return tau_; }
  const RadialProfile& outer() const;
  const RadialProfile& inner() const;
  InputConvention input_convention() const { return input_; }
  const ProfileClass& flags() const { return flags_; }

  RadialProfile with_input(InputConvention input) const;

  /// Unchecked evaluation; see evaluate() for the validating entry point.
  double operator()(double t) const;

  std::string describe() const;

  friend RadialProfile classify_composition(const RadialProfile& g, const RadialProfile& f);

 private:
  struct Parts;

  RadialProfile(ProfileKind kind, double tau, InputConvention input, ProfileClass flags);

  ProfileKind kind_ = ProfileKind::identity;
  double tau_ = 1.0;
  InputConvention input_ = InputConvention::distance;
  ProfileClass flags_{};
  std::shared_ptr<const Parts> parts_;
};

/// f(t) for t >= 0. Throws InputError on negative or non-finite t.
double evaluate(const RadialProfile& profile, double t);

/// g o f, with class flags propagated by the composition rule:
///   cnd1          iff g.cnd1 && f.cnd1 && f(0) == 0
///   strictly_cnd1 iff additionally g.strictly_cnd1 && f vanishes only at 0
///   (strictly) positive definite likewise when g is and f is CND1 with f(0) == 0.
/// Composing with the identity keeps the other side's flags unchanged.
RadialProfile classify_composition(const RadialProfile& g, const RadialProfile& f);

/// t -> (shift + t)^exponent. Covers power, identity and multiquadric.
struct PowerLaw {
  double shift = 0.0;
  double exponent = 1.0;
};

std::optional<PowerLaw> as_power_law(const RadialProfile& profile);

/// True iff (-1)^j f^(j+1)(t) >= 0 at every grid point for j = 0..order,
/// using closed-form derivatives of the power law. order must be in [0, 4]
/// and grid points must be positive.
bool cm_derivative_spotcheck(const PowerLaw& f, int order, std::span<const double> grid);

/// Same check for a catalogued profile. Throws InputError for profiles
/// without a shipped closed form (exponential, compositions).
bool cm_derivative_spotcheck(const RadialProfile& profile, int order, std::span<const double> grid);

std::string to_string(InputConvention input);
InputConvention input_convention_from_string(const std::string& name);

}  // namespace pnorm
