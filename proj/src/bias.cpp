#include "autobias/bias.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace autobias {

namespace {
int* field_ptr(BiasVector& b, int i) {
  switch (i) {
    case 0: return &b.diff_on;
    case 1: return &b.diff_off;
    case 2: return &b.fo;
    case 3: return &b.hpf;
    case 4: return &b.refr;
  }
  throw std::out_of_range("bias index");
}
}  // namespace

int& BiasVector::operator[](int i) { return *field_ptr(*this, i); }

int BiasVector::operator[](int i) const {
  return *field_ptr(const_cast<BiasVector&>(*this), i);
}

RegisterRange& BiasBounds::operator[](int i) {
  switch (i) {
    case 0: return diff_on;
    case 1: return diff_off;
    case 2: return fo;
    case 3: return hpf;
    case 4: return refr;
  }
  throw std::out_of_range("bias index");
}

const RegisterRange& BiasBounds::operator[](int i) const {
  return const_cast<BiasBounds&>(*this)[i];
}

void BiasBounds::validate() const {
  for (int i = 0; i < kNumBiases; ++i) {
    const RegisterRange& r = (*this)[i];
    if (r.min >= r.max) {
      throw std::invalid_argument(std::string("bias_bounds.") + kBiasNames[i] +
                                  ": min must be < max");
    }
    if (r.min > 0 || r.max < 0) {
      throw std::invalid_argument(std::string("bias_bounds.") + kBiasNames[i] +
                                  ": range must contain 0");
    }
  }
}

bool BiasBounds::contains(const BiasVector& b) const {
  for (int i = 0; i < kNumBiases; ++i) {
    if (b[i] < (*this)[i].min || b[i] > (*this)[i].max) return false;
  }
  return true;
}

void BiasBounds::require_within(const BiasVector& b) const {
  for (int i = 0; i < kNumBiases; ++i) {
    const RegisterRange& r = (*this)[i];
    if (b[i] < r.min || b[i] > r.max) {
      std::ostringstream os;
      os << "bias register " << kBiasNames[i] << "=" << b[i]
         << " outside bounds [" << r.min << ", " << r.max << "]";
      throw std::invalid_argument(os.str());
    }
  }
}

BiasVector BiasBounds::clamp(const BiasVector& b) const {
  BiasVector out = b;
  for (int i = 0; i < kNumBiases; ++i) {
    const RegisterRange& r = (*this)[i];
    if (out[i] < r.min) out[i] = r.min;
    if (out[i] > r.max) out[i] = r.max;
  }
  return out;
}

PixelParams map_bias_to_params(const BiasVector& b, const BiasBounds& bounds,
                               const BiasMapping& m) {
  bounds.require_within(b);
  PixelParams p;
  p.theta_on = m.theta0 * std::exp(m.k_c * b.diff_on);
  p.theta_off = m.theta0 * std::exp(m.k_c * b.diff_off);
  p.f_lp_hz = m.f_lp0_hz * std::exp(m.k_f * b.fo);
  p.f_hp_hz = b.hpf > 0 ? m.f_hp0_hz * std::exp(m.k_h * b.hpf) : 0.0;
  p.t_refr_us = m.t_refr0_us * std::exp(-m.k_r * b.refr);
  return p;
}

std::string to_string(const BiasVector& b) {
  std::ostringstream os;
  os << "(" << b.diff_on << ", " << b.diff_off << ", " << b.fo << ", " << b.hpf
     << ", " << b.refr << ")";
  return os.str();
}

}  // namespace autobias
