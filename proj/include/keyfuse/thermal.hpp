#pragma once

// Thermal-residue simulation for a typing session: per-key temperature
// fields, a thermal-camera model, hot-key extraction and key-set recovery
// distance.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "keyfuse/keys.hpp"
#include "keyfuse/physics.hpp"

namespace keyfuse::thermal {

struct KeyboardLayout {
  struct KeyPos {
    Key label;
    int row;
    int col;
  };

  std::vector<KeyPos> keys;
  KeySet home_row;   // resting keys of a touch typist
  KeySet near_home;  // secondary-residue keys, disjoint from home_row

  bool contains(Key k) const;
  std::optional<KeyPos> position(Key k) const;
  // Throws std::invalid_argument if labels repeat or the home-row /
  // near-home sets are not disjoint subsets of the keys.
  void validate() const;

  // The 46-key layout used everywhere by default: four QWERTY rows, home row
  // "asdf" + "jkl;", near-home noise keys "qwertgvcxz" + "][poiuhnm,./".
  static KeyboardLayout qwerty46();
};

enum class TypingStyle { HuntAndPeck, TouchTypist };

struct StyleOptions {
  TypingStyle style = TypingStyle::HuntAndPeck;
  // Residue intensity of resting contacts, as a fraction of one standard
  // press (excess-temperature ratio). Tunable knobs, not measured values.
  double home_row_scale = 0.8;
  double near_home_scale = 0.3;
  bool home_row_contacts = true;   // touch typists rest on the home row
  bool near_home_contacts = false; // optional secondary residue
  bool acrylic_nails = false;      // zero contact area, leaves no residue
};

struct TypingEvent {
  Key key;
  double press_time;        // s, session clock
  double contact_duration;  // s
  double area_scale;        // fraction of the full keycap contact area
  bool resting = false;     // noise contact, not a password keystroke
};

// Press schedule: evenly spaced by default, or an explicit per-press list.
struct CadenceSpec {
  double start_time = 0.0;
  double interval = 0.25;  // s between consecutive presses
  std::vector<double> press_times;  // overrides start/interval when non-empty
};

struct TypingSession {
  std::string password;
  std::vector<TypingEvent> events;  // time-ordered
  TypingStyle style = TypingStyle::HuntAndPeck;
  double ambient = 294.15;  // K
  KeyboardLayout layout;

  // Press time of the last event, 0 for an empty session. Resting contacts
  // release when entry ends, so this is also the capture-clock origin.
  double end_time() const;
};

struct ThermalState {
  double timestamp = 0.0;  // s, session clock
  std::map<Key, double> temperature;  // K, one entry per layout key
  double ambient = 294.15;            // K
};

struct CameraModel {
  std::string name;
  double sensitivity = 0.04;    // K, minimum detectable excess
  double capture_latency = 0.0; // s between trigger and exposure

  void validate() const;

  static CameraModel flir_one();  // 0.15 K
  static CameraModel sc620();     // 0.04 K
  static CameraModel a6700sc();   // 0.018 K
  static CameraModel x8500sc();   // 0.02 K
  // Case-insensitive preset lookup; nullopt for unknown names.
  static std::optional<CameraModel> preset(std::string_view name);
};

// Builds the press schedule for one password entry. Hunt-and-peck sessions
// touch only the password keys; touch typists additionally leave resting
// contacts on the home row (and optionally near it), modeled as
// equivalent-press events released when entry ends. Throws
// std::invalid_argument when a password character is missing from the layout
// or the skin is not warmer than ambient.
TypingSession simulate_session(std::string_view password,
                               const StyleOptions& style,
                               const KeyboardLayout& layout,
                               const CadenceSpec& cadence,
                               const physics::EnvironmentSpec& env);

// Uncapped per-key excess over ambient at session time t. Each event decays
// independently: sum of dT_event * exp(-kappa * (t - press_time)); events
// after t contribute nothing.
std::map<Key, double> excess_at(const TypingSession& session, double t,
                                const physics::KeycapSpec& keycap,
                                const physics::EnvironmentSpec& env);

// Temperature field at session time t: ambient + excess, with the total
// excess capped at skin - ambient (a keycap cannot exceed skin temperature).
ThermalState thermal_state_at(const TypingSession& session, double t,
                              const physics::KeycapSpec& keycap,
                              const physics::EnvironmentSpec& env);

// Keys whose excess over ambient meets the camera sensitivity.
KeySet extract_hot_keys(const ThermalState& state, const CameraModel& camera);

// Symmetric-difference size |(K u P) \ (K n P)|: keys missed plus keys
// misidentified as pressed.
int keyset_distance(const KeySet& truth, const KeySet& detected);

struct RecoveryPoint {
  double time;   // s after entry completed
  int distance;  // keyset distance against the password key-set
};

// Recovery distance over capture delays measured from the end of entry
// (camera latency added on top). sample_times must be sorted ascending.
std::vector<RecoveryPoint> recovery_curve(const TypingSession& session,
                                          const CameraModel& camera,
                                          const physics::KeycapSpec& keycap,
                                          const physics::EnvironmentSpec& env,
                                          const std::vector<double>& sample_times);

}  // namespace keyfuse::thermal
