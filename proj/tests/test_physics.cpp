#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "keyfuse/physics.hpp"

using namespace keyfuse::physics;

// Hand-composed oracle for the default constants:
//   q = 0.25 * 0.00024025 * 13 * 0.28 / 0.0015 = 0.14575166...
//   dT = q / (1000 * 0.0004716)               = 0.30906...
TEST_CASE("conduction heat and temperature rise match the closed form") {
  const KeycapSpec keycap;
  const EnvironmentSpec env;

  const double q = conduction_heat(keycap, env);
  CHECK(q == doctest::Approx(0.1457516667).epsilon(1e-9));
  CHECK(std::abs(q - 0.1458) < 1e-4);

  const double dt = temperature_rise(q, keycap);
  CHECK(dt == doctest::Approx(q / 0.4716).epsilon(1e-12));
  CHECK(std::abs(dt - 0.3092) < 5e-4);

  const ConductionResult both = press_conduction(keycap, env);
  CHECK(both.heat == q);
  CHECK(both.delta_t == dt);
}

TEST_CASE("conduction heat scales linearly in each parameter") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> mul(0.5, 3.0);
  const KeycapSpec base_cap;
  const EnvironmentSpec base_env;
  const double q0 = conduction_heat(base_cap, base_env);

  for (int i = 0; i < 20; ++i) {
    const double f = mul(rng);
    KeycapSpec cap = base_cap;
    EnvironmentSpec env = base_env;

    cap.conductivity = base_cap.conductivity * f;
    CHECK(conduction_heat(cap, env) == doctest::Approx(q0 * f).epsilon(1e-12));
    cap = base_cap;

    cap.contact_area = base_cap.contact_area * f;
    CHECK(conduction_heat(cap, env) == doctest::Approx(q0 * f).epsilon(1e-12));
    cap = base_cap;

    cap.thickness = base_cap.thickness * f;
    CHECK(conduction_heat(cap, env) == doctest::Approx(q0 / f).epsilon(1e-12));
    cap = base_cap;

    env.press_duration = base_env.press_duration * f;
    CHECK(conduction_heat(cap, env) == doctest::Approx(q0 * f).epsilon(1e-12));
  }
}

TEST_CASE("skin colder than ambient conducts heat out of the cap") {
  const KeycapSpec keycap;
  EnvironmentSpec env;
  env.skin_temp = env.ambient_temp - 5.0;
  CHECK(conduction_heat(keycap, env) < 0.0);
}

TEST_CASE("cooling follows the exponential decay law") {
  const EnvironmentSpec env;
  const double dt0 = 0.309;

  CHECK(cool_temperature(dt0, env, 0.0) ==
        doctest::Approx(env.ambient_temp + dt0).epsilon(1e-12));

  // Independent oracle: exp evaluated directly.
  for (double t : {1.0, 10.0, 55.27, 120.0}) {
    const double expected = env.ambient_temp + dt0 * std::exp(-0.037 * t);
    CHECK(cool_temperature(dt0, env, t) == doctest::Approx(expected).epsilon(1e-12));
  }

  // Strictly decreasing toward ambient, never below it.
  double prev = cool_temperature(dt0, env, 0.0);
  for (double t = 5.0; t <= 300.0; t += 5.0) {
    const double now = cool_temperature(dt0, env, t);
    CHECK(now < prev);
    CHECK(now > env.ambient_temp);
    prev = now;
  }

  CHECK_THROWS_AS(cool_temperature(dt0, env, -0.1), std::domain_error);
}

TEST_CASE("threshold time matches the logarithmic closed form") {
  // ln(0.3092/0.04)/0.037 = 55.27...; the published figure rounds to 55.7,
  // the constants themselves give 55.27.
  const double t_sc620 = time_to_threshold(0.3092, 0.04, 0.037);
  CHECK(t_sc620 == doctest::Approx(std::log(0.3092 / 0.04) / 0.037).epsilon(1e-12));
  CHECK(t_sc620 > 55.2);
  CHECK(t_sc620 < 55.8);

  // Camera with 0.15 K sensitivity sees the residue for just under 20 s.
  const double t_flir = time_to_threshold(0.3092, 0.15, 0.037);
  CHECK(t_flir > 19.0);
  CHECK(t_flir < 20.5);
}

TEST_CASE("threshold time inverts the cooling curve") {
  const EnvironmentSpec env;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dt0_dist(0.05, 2.0);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  for (int i = 0; i < 50; ++i) {
    const double dt0 = dt0_dist(rng);
    const double threshold = dt0 * frac(rng);
    const double t = time_to_threshold(dt0, threshold, env.cooling_constant);
    const double back = cool_temperature(dt0, env, t) - env.ambient_temp;
    CHECK(back == doctest::Approx(threshold).epsilon(1e-9));
  }
}

TEST_CASE("threshold time edge cases") {
  CHECK(time_to_threshold(0.3, 0.3, 0.037) == 0.0);
  CHECK(time_to_threshold(0.3, 0.5, 0.037) == 0.0);
  CHECK_THROWS_AS(time_to_threshold(0.3, 0.0, 0.037), std::domain_error);
  CHECK_THROWS_AS(time_to_threshold(0.3, -0.1, 0.037), std::domain_error);
  CHECK_THROWS_AS(time_to_threshold(0.3, 0.04, 0.0), std::domain_error);
  CHECK_THROWS_AS(time_to_threshold(0.3, 0.04, -1.0), std::domain_error);
}

TEST_CASE("spec validation rejects non-physical values") {
  KeycapSpec keycap;
  CHECK_NOTHROW(keycap.validate());
  keycap.mass = 0.0;
  CHECK_THROWS_AS(keycap.validate(), std::domain_error);
  keycap = KeycapSpec{};
  keycap.contact_area = -1.0;
  CHECK_THROWS_AS(keycap.validate(), std::domain_error);
  keycap = KeycapSpec{};
  keycap.thickness = 0.0;
  CHECK_THROWS_AS(keycap.validate(), std::domain_error);
  keycap = KeycapSpec{};
  keycap.specific_heat = 0.0;
  CHECK_THROWS_AS(keycap.validate(), std::domain_error);
  keycap = KeycapSpec{};
  keycap.conductivity = 0.0;
  CHECK_THROWS_AS(keycap.validate(), std::domain_error);

  EnvironmentSpec env;
  CHECK_NOTHROW(env.validate());
  env.cooling_constant = 0.0;
  CHECK_THROWS_AS(env.validate(), std::domain_error);
  env = EnvironmentSpec{};
  env.press_duration = -0.1;
  CHECK_THROWS_AS(env.validate(), std::domain_error);
  env = EnvironmentSpec{};
  env.detectability_threshold = 0.0;
  CHECK_THROWS_AS(env.validate(), std::domain_error);
}
