#pragma once

#include <array>
#include <cstddef>

#include "femto/units.hpp"

namespace femto {

// Link classes by endpoint placement. "Indoor" means transmitter and
// receiver share the same home; "indoor-to-indoor" crosses two walls.
enum class LinkClass {
  kOutdoor = 0,
  kIndoor,
  kOutdoorToIndoor,
  kIndoorToOutdoor,
  kIndoorToIndoor,
};

inline constexpr std::size_t kNumLinkClasses = 5;

// Fixed loss in dB for a link class at carrier frequency f_c (MHz) and wall
// penetration loss wall_loss_db. The outdoor baseline is 30*log10(f_c) - 71;
// wall crossings add wall_loss_db each; the in-home link is a constant 37 dB.
double fixed_loss_db(double carrier_freq_mhz, double wall_loss_db, LinkClass link);

// Per-class pathloss: channel gain over distance d is fading * Z^-alpha * d^-alpha,
// where Z^alpha is the fixed loss stored here in linear scale.
class PathlossTable {
 public:
  PathlossTable() = default;
  PathlossTable(double carrier_freq_mhz, double wall_loss_db);

  double exponent(LinkClass link) const { return exponent_[index(link)]; }
  double fixed_loss(LinkClass link) const { return fixed_loss_lin_[index(link)]; }
  double fixed_loss_in_db(LinkClass link) const { return fixed_loss_db_[index(link)]; }

  // Z^2 = (Z^alpha)^(2/alpha); appears in the interference transforms.
  double z_squared(LinkClass link) const {
    return std::pow(fixed_loss(link), 2.0 / exponent(link));
  }

  // Channel gain without fading: (Z d)^-alpha.
  double gain(LinkClass link, double distance_m) const {
    const std::size_t i = index(link);
    return 1.0 / (fixed_loss_lin_[i] * std::pow(distance_m, exponent_[i]));
  }

 private:
  static std::size_t index(LinkClass link) { return static_cast<std::size_t>(link); }

  std::array<double, kNumLinkClasses> exponent_{4.0, 3.0, 4.0, 4.0, 4.0};
  std::array<double, kNumLinkClasses> fixed_loss_db_{};
  std::array<double, kNumLinkClasses> fixed_loss_lin_{};
};

}  // namespace femto
