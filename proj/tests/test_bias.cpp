#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "autobias/bias.hpp"

using namespace autobias;

TEST_CASE("default bias vector is all zeros") {
  BiasVector b;
  CHECK(b.diff_on == 0);
  CHECK(b.diff_off == 0);
  CHECK(b.fo == 0);
  CHECK(b.hpf == 0);
  CHECK(b.refr == 0);
}

TEST_CASE("all-zero biases map to the identity point of the mapping") {
  PixelParams p = map_bias_to_params(BiasVector{}, BiasBounds{});
  CHECK(p.theta_on == doctest::Approx(0.15));
  CHECK(p.theta_off == doctest::Approx(0.15));
  CHECK(p.f_lp_hz == doctest::Approx(500.0));
  CHECK(p.f_hp_hz == 0.0);  // hpf = 0 disables the high-pass
  CHECK(p.t_refr_us == doctest::Approx(1000.0));
}

TEST_CASE("mapping evaluates the exponential form") {
  BiasBounds bounds;

  // diff_off = 35: theta_off = 0.15 * e^0.70
  BiasVector b1;
  b1.diff_off = 35;
  PixelParams p1 = map_bias_to_params(b1, bounds);
  CHECK(p1.theta_off == doctest::Approx(0.15 * std::exp(0.70)).epsilon(1e-12));
  CHECK(p1.theta_off == doctest::Approx(0.3021).epsilon(1e-3));
  CHECK(p1.theta_on == doctest::Approx(0.15));

  // fo = -22: f_lp = 500 * e^-2.2 ~= 55.4 Hz
  BiasVector b2;
  b2.fo = -22;
  PixelParams p2 = map_bias_to_params(b2, bounds);
  CHECK(p2.f_lp_hz == doctest::Approx(500.0 * std::exp(-2.2)).epsilon(1e-12));
  CHECK(p2.f_lp_hz == doctest::Approx(55.4).epsilon(1e-2));
}

TEST_CASE("out-of-bounds register raises an error naming the register") {
  BiasBounds bounds;
  BiasVector b;
  b.fo = 99;  // fo max is 55
  try {
    map_bias_to_params(b, bounds);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("fo") != std::string::npos);
  }
}

TEST_CASE("bounds validation") {
  BiasBounds bad;
  bad.fo = {10, 55};  // excludes zero
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  BiasBounds empty;
  empty.refr = {20, 20};
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);

  CHECK_NOTHROW(BiasBounds{}.validate());
}

TEST_CASE("parameter monotonicity in each register") {
  BiasBounds bounds;
  BiasMapping m;
  // theta_on strictly increasing in diff_on
  double prev = 0.0;
  for (int v = bounds.diff_on.min; v <= bounds.diff_on.max; v += 15) {
    BiasVector b;
    b.diff_on = v;
    double t = map_bias_to_params(b, bounds, m).theta_on;
    if (v != bounds.diff_on.min) CHECK(t > prev);
    prev = t;
  }
  // theta_off strictly increasing in diff_off
  prev = 0.0;
  for (int v = bounds.diff_off.min; v <= bounds.diff_off.max; v += 15) {
    BiasVector b;
    b.diff_off = v;
    double t = map_bias_to_params(b, bounds, m).theta_off;
    if (v != bounds.diff_off.min) CHECK(t > prev);
    prev = t;
  }
  // f_lp strictly increasing in fo
  prev = 0.0;
  for (int v = bounds.fo.min; v <= bounds.fo.max; v += 10) {
    BiasVector b;
    b.fo = v;
    double f = map_bias_to_params(b, bounds, m).f_lp_hz;
    if (v != bounds.fo.min) CHECK(f > prev);
    prev = f;
  }
  // f_hp non-decreasing in hpf (0 disables)
  prev = -1.0;
  for (int v = bounds.hpf.min; v <= bounds.hpf.max; v += 10) {
    BiasVector b;
    b.hpf = v;
    double f = map_bias_to_params(b, bounds, m).f_hp_hz;
    CHECK(f >= prev);
    prev = f;
  }
  // t_refr strictly decreasing in refr
  prev = 1e18;
  for (int v = bounds.refr.min; v <= bounds.refr.max; v += 25) {
    BiasVector b;
    b.refr = v;
    double t = map_bias_to_params(b, bounds, m).t_refr_us;
    CHECK(t < prev);
    prev = t;
  }
}

TEST_CASE("clamp projects onto the box and is idempotent inside it") {
  BiasBounds bounds;
  BiasVector wild;
  wild.diff_on = 1000;
  wild.fo = -1000;
  BiasVector c = bounds.clamp(wild);
  CHECK(c.diff_on == bounds.diff_on.max);
  CHECK(c.fo == bounds.fo.min);
  CHECK(bounds.contains(c));
  CHECK(bounds.clamp(c) == c);
}
