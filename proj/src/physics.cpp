#include "keyfuse/physics.hpp"

#include <cmath>
#include <stdexcept>

namespace keyfuse::physics {

void KeycapSpec::validate() const {
  if (contact_area <= 0.0) throw std::domain_error("keycap contact_area must be > 0");
  if (thickness <= 0.0) throw std::domain_error("keycap thickness must be > 0");
  if (mass <= 0.0) throw std::domain_error("keycap mass must be > 0");
  if (specific_heat <= 0.0) throw std::domain_error("keycap specific_heat must be > 0");
  if (conductivity <= 0.0) throw std::domain_error("keycap conductivity must be > 0");
}

void EnvironmentSpec::validate() const {
  if (press_duration <= 0.0) throw std::domain_error("press_duration must be > 0");
  if (cooling_constant <= 0.0) throw std::domain_error("cooling_constant must be > 0");
  if (detectability_threshold <= 0.0) throw std::domain_error("detectability_threshold must be > 0");
}

double conduction_heat(const KeycapSpec& keycap, const EnvironmentSpec& env) {
  if (keycap.thickness <= 0.0) throw std::domain_error("keycap thickness must be > 0");
  return keycap.conductivity * keycap.contact_area *
         (env.skin_temp - env.ambient_temp) * env.press_duration /
         keycap.thickness;
}

double temperature_rise(double heat_joules, const KeycapSpec& keycap) {
  if (keycap.mass <= 0.0) throw std::domain_error("keycap mass must be > 0");
  if (keycap.specific_heat <= 0.0) throw std::domain_error("keycap specific_heat must be > 0");
  return heat_joules / (keycap.specific_heat * keycap.mass);
}

ConductionResult press_conduction(const KeycapSpec& keycap,
                                  const EnvironmentSpec& env) {
  const double q = conduction_heat(keycap, env);
  return ConductionResult{q, temperature_rise(q, keycap)};
}

double cool_temperature(double delta_t0, const EnvironmentSpec& env, double t) {
  if (t < 0.0) throw std::domain_error("cooling time must be >= 0");
  return env.ambient_temp + delta_t0 * std::exp(-env.cooling_constant * t);
}

double time_to_threshold(double delta_t0, double threshold, double kappa) {
  if (threshold <= 0.0) throw std::domain_error("threshold must be > 0");
  if (kappa <= 0.0) throw std::domain_error("kappa must be > 0");
  if (threshold >= delta_t0) return 0.0;  // already at or below the threshold
  return std::log(delta_t0 / threshold) / kappa;
}

}  // namespace keyfuse::physics
