#pragma once

// Closed-form heat-transfer primitives for a single keycap: conduction
// heating by a fingertip contact and Newton-cooling back to ambient.
// All quantities are SI; temperatures are Kelvin throughout.

namespace keyfuse::physics {

struct KeycapSpec {
  double contact_area = 0.00024025;  // m^2
  double thickness = 0.0015;         // m
  double mass = 0.0004716;           // kg
  double specific_heat = 1000.0;     // J/(kg K)
  double conductivity = 0.25;        // W/(m K)

  // Throws std::domain_error unless every field is strictly positive.
  void validate() const;
};

struct EnvironmentSpec {
  double skin_temp = 307.15;               // K (34 C)
  double ambient_temp = 294.15;            // K (21 C)
  double press_duration = 0.28;            // s
  double cooling_constant = 0.037;         // 1/s
  double detectability_threshold = 0.04;   // K

  void validate() const;
};

struct ConductionResult {
  double heat;     // J
  double delta_t;  // K
};

// Fourier conduction for one press: K * A * (T_skin - T_ambient) * t / d.
// Negative when the skin is colder than ambient. Throws std::domain_error
// on non-positive thickness.
double conduction_heat(const KeycapSpec& keycap, const EnvironmentSpec& env);

// Temperature change of the keycap for heat q: q / (c * m).
// Throws std::domain_error on non-positive mass or specific heat.
double temperature_rise(double heat_joules, const KeycapSpec& keycap);

// conduction_heat and temperature_rise in one call.
ConductionResult press_conduction(const KeycapSpec& keycap,
                                  const EnvironmentSpec& env);

// Keycap temperature after cooling for t seconds from an initial excess of
// delta_t0 above ambient: ambient + delta_t0 * exp(-kappa * t).
// Throws std::domain_error on negative t.
double cool_temperature(double delta_t0, const EnvironmentSpec& env, double t);

// Seconds until the excess decays from delta_t0 down to threshold:
// ln(delta_t0 / threshold) / kappa. Doubles as the camera observability
// window when threshold is the camera sensitivity. Returns 0 when the excess
// already sits at or below the threshold. Throws std::domain_error on
// non-positive threshold or kappa.
double time_to_threshold(double delta_t0, double threshold, double kappa);

}  // namespace keyfuse::physics
