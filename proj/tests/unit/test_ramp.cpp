#include <catch2/catch.hpp>

#include "tgotto/ramp.hpp"

using namespace tgotto;

TEST_CASE("reference schedule endpoints and flatness") {
  const double tf = 3.0;
  CHECK(lambda_schedule(0.0, tf) == 0.0);
  CHECK(lambda_schedule(tf, tf) == 1.0);
  CHECK(lambda_schedule(tf / 2.0, tf) == Approx(0.5));
  const double h = 1e-4;
  for (double t : {0.0, tf}) {
    const double a = lambda_schedule(std::clamp(t - h, 0.0, tf), tf);
    const double b = lambda_schedule(std::clamp(t + h, 0.0, tf), tf);
    CHECK(std::abs(b - a) / h < 1e-6);
  }
}

TEST_CASE("reference schedule equals the quintic smoothstep") {
  for (double s = 0.0; s <= 1.0; s += 0.05) CHECK(lambda_schedule(s, 1.0) == Approx(quintic_smoothstep(s).value).margin(1e-15));
}

TEST_CASE("smoothstep derivatives match finite differences") {
  const double h = 1e-5;
  for (double s : {0.1, 0.37, 0.5, 0.82}) {
    const auto d = quintic_smoothstep(s);
    const double fd1 = (quintic_smoothstep(s + h).value - quintic_smoothstep(s - h).value) / (2.0 * h);
    const double fd2 = (quintic_smoothstep(s + h).d1 - quintic_smoothstep(s - h).d1) / (2.0 * h);
    CHECK(d.d1 == Approx(fd1).margin(1e-8));
    CHECK(d.d2 == Approx(fd2).margin(1e-7));
  }
  CHECK(quintic_smoothstep(0.0).d1 == 0.0);
  CHECK(quintic_smoothstep(1.0).d2 == 0.0);
}

TEST_CASE("ramp time is converted once to internal units") {
  const Ramp r = Ramp::reference(0.0, 10.0, 2.5, Direction::Up);
  CHECK(r.ramp_time() == 2.5);
  CHECK(r.duration() == Approx(2.5 * 2.0 * kPi).epsilon(1e-15));
  CHECK(to_internal_time(1.0) == Approx(2.0 * kPi));
  // Half of the internal duration is half of the ramp.
  CHECK(r.depth(r.duration() / 2.0) == Approx(5.0));
  CHECK(r.depth(0.0) == 0.0);
  CHECK(r.depth(r.duration()) == 10.0);
}

TEST_CASE("down ramps run from V_f back to V_i") {
  const RampPair p = reference_ramps(1.0, 9.0, 4.0);
  CHECK(p.up.depth(0.0) == 1.0);
  CHECK(p.down.depth(0.0) == 9.0);
  CHECK(p.down.depth(p.down.duration()) == 1.0);
  CHECK(p.down.direction() == Direction::Down);
}

TEST_CASE("sampled ramps interpolate linearly") {
  const Ramp r = Ramp::from_samples({0.0, 1.0, 3.0}, {0.0, 4.0, 2.0}, 0.0, 2.0, Direction::Up);
  CHECK(r.ramp_time() == 3.0);
  CHECK(r.depth(to_internal_time(0.5)) == Approx(2.0));
  CHECK(r.depth(to_internal_time(2.0)) == Approx(3.0));
  CHECK(r.depth(to_internal_time(3.0)) == 2.0);
  CHECK(r.depth(1e9) == 2.0);
  const auto [t, v] = r.sampled(4);
  CHECK(t.size() == 4);
  CHECK(v[1] == Approx(4.0));
}

TEST_CASE("flat reference ramp") {
  CHECK(Ramp::reference(3.0, 3.0, 1.0, Direction::Up).flat());
  CHECK_FALSE(Ramp::reference(3.0, 4.0, 1.0, Direction::Up).flat());
}

TEST_CASE("malformed ramps are rejected") {
  CHECK_THROWS_AS(Ramp::reference(0.0, 1.0, 0.0, Direction::Up), ConfigError);
  CHECK_THROWS_AS(Ramp::reference(-1.0, 1.0, 1.0, Direction::Up), ConfigError);
  CHECK_THROWS_AS(Ramp::from_samples({0.0}, {1.0}, 0.0, 1.0, Direction::Up), ConfigError);
  CHECK_THROWS_AS(Ramp::from_samples({0.1, 1.0}, {0.0, 1.0}, 0.0, 1.0, Direction::Up), ConfigError);
  CHECK_THROWS_AS(Ramp::from_samples({0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}, 0.0, 1.0, Direction::Up), ConfigError);
  CHECK_THROWS_AS(Ramp::from_samples({0.0, 1.0}, {0.0, std::nan("")}, 0.0, 1.0, Direction::Up), ConfigError);
  CHECK_THROWS_AS(lambda_schedule(2.0, 1.0), ConfigError);
  CHECK_THROWS_AS(Ramp::reference(0.0, 1.0, 1.0, Direction::Up).sampled(1), ConfigError);
}
