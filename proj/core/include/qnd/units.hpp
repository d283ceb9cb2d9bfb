#pragma once

#include <compare>
#include <numbers>

namespace qnd {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angular frequency (or rate) in rad/us.
///
/// Every frequency, decay rate, coupling and dispersive shift is carried in
/// this unit. Human-facing formats use linear MHz and convert at the
/// boundary with from_mhz()/mhz(), so 2*pi appears in exactly one place.
class AngularFrequency {
public:
  constexpr AngularFrequency() = default;
  constexpr explicit AngularFrequency(double rad_per_us) : value_(rad_per_us) {}

  static constexpr AngularFrequency from_mhz(double mhz) { return AngularFrequency(kTwoPi * mhz); }
  static constexpr AngularFrequency from_ghz(double ghz) { return from_mhz(1e3 * ghz); }

  constexpr double rad_per_us() const { return value_; }
  constexpr double mhz() const { return value_ / kTwoPi; }

  constexpr AngularFrequency operator-() const { return AngularFrequency(-value_); }
  constexpr AngularFrequency& operator+=(AngularFrequency o) { value_ += o.value_; return *this; }
  constexpr AngularFrequency& operator-=(AngularFrequency o) { value_ -= o.value_; return *this; }

  friend constexpr AngularFrequency operator+(AngularFrequency a, AngularFrequency b) { return a += b; }
  friend constexpr AngularFrequency operator-(AngularFrequency a, AngularFrequency b) { return a -= b; }
  friend constexpr AngularFrequency operator*(AngularFrequency a, double s) { return AngularFrequency(a.value_ * s); }
  friend constexpr AngularFrequency operator*(double s, AngularFrequency a) { return a * s; }
  friend constexpr AngularFrequency operator/(AngularFrequency a, double s) { return AngularFrequency(a.value_ / s); }
  friend constexpr double operator/(AngularFrequency a, AngularFrequency b) { return a.value_ / b.value_; }

  constexpr auto operator<=>(const AngularFrequency&) const = default;

private:
  double value_ = 0.0;
};

}  // namespace qnd
