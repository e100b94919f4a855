#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace autobias {

// Index order used everywhere a bias register is addressed positionally.
enum class BiasId : int { DiffOn = 0, DiffOff = 1, Fo = 2, Hpf = 3, Refr = 4 };

inline constexpr int kNumBiases = 5;

inline constexpr std::array<const char*, kNumBiases> kBiasNames = {
    "diff_on", "diff_off", "fo", "hpf", "refr"};

/// The five integer bias registers of the sensor. Default-constructed
/// value is the camera's factory default: all registers zero.
struct BiasVector {
  int diff_on = 0;
  int diff_off = 0;
  int fo = 0;
  int hpf = 0;
  int refr = 0;

  int& operator[](int i);
  int operator[](int i) const;

  bool operator==(const BiasVector&) const = default;
};

struct RegisterRange {
  int min = 0;
  int max = 0;
};

/// Per-register box bounds. The sensor vendor publishes these; the defaults
/// here are a plausible register window that contains zero for every bias.
struct BiasBounds {
  RegisterRange diff_on{-85, 140};
  RegisterRange diff_off{-35, 190};
  RegisterRange fo{-35, 55};
  RegisterRange hpf{0, 120};
  RegisterRange refr{-20, 235};

  RegisterRange& operator[](int i);
  const RegisterRange& operator[](int i) const;

  // Throws std::invalid_argument if any range is empty or excludes zero.
  void validate() const;

  bool contains(const BiasVector& b) const;

  // Throws std::invalid_argument naming the offending register.
  void require_within(const BiasVector& b) const;

  BiasVector clamp(const BiasVector& b) const;
};

/// Constants of the register -> behavioral-parameter mapping. Exponential in
/// the register value so parameters stay positive and one register unit is a
/// few percent of change.
struct BiasMapping {
  double theta0 = 0.15;    // contrast threshold at register 0
  double k_c = 0.02;
  double f_lp0_hz = 500.0; // low-pass cutoff at register 0
  double k_f = 0.1;
  double f_hp0_hz = 0.05;  // high-pass base cutoff (hpf > 0 enables)
  double k_h = 0.05;
  double t_refr0_us = 1000.0;
  double k_r = 0.02;
};

/// Behavioral pixel parameters derived from the bias registers.
struct PixelParams {
  double theta_on = 0.15;   // positive log-intensity contrast threshold
  double theta_off = 0.15;  // negative log-intensity contrast threshold
  double f_lp_hz = 500.0;   // photoreceptor low-pass cutoff
  double f_hp_hz = 0.0;     // high-pass cutoff, 0 = disabled
  double t_refr_us = 1000.0;  // per-pixel dead time after an event
};

PixelParams map_bias_to_params(const BiasVector& b, const BiasBounds& bounds,
                               const BiasMapping& m = {});

std::string to_string(const BiasVector& b);

}  // namespace autobias
