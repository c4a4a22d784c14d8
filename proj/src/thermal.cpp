#include "keyfuse/thermal.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace keyfuse::thermal {

namespace {

const char* kRow0 = "1234567890-=";
const char* kRow1 = "qwertyuiop[]\\";
const char* kRow2 = "asdfghjkl;'";
const char* kRow3 = "zxcvbnm,./";

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

bool KeyboardLayout::contains(Key k) const {
  return std::any_of(keys.begin(), keys.end(),
                     [k](const KeyPos& p) { return p.label == k; });
}

std::optional<KeyboardLayout::KeyPos> KeyboardLayout::position(Key k) const {
  for (const KeyPos& p : keys)
    if (p.label == k) return p;
  return std::nullopt;
}

void KeyboardLayout::validate() const {
  KeySet seen;
  for (const KeyPos& p : keys) {
    if (!seen.insert(p.label).second)
      throw std::invalid_argument(std::string("duplicate key label '") + p.label + "'");
  }
  for (Key k : home_row)
    if (!seen.count(k))
      throw std::invalid_argument(std::string("home-row key '") + k + "' not in layout");
  for (Key k : near_home) {
    if (!seen.count(k))
      throw std::invalid_argument(std::string("near-home key '") + k + "' not in layout");
    if (home_row.count(k))
      throw std::invalid_argument(std::string("key '") + k + "' in both home-row and near-home sets");
  }
}

KeyboardLayout KeyboardLayout::qwerty46() {
  KeyboardLayout layout;
  const char* rows[] = {kRow0, kRow1, kRow2, kRow3};
  for (int r = 0; r < 4; ++r) {
    int c = 0;
    for (const char* p = rows[r]; *p; ++p)
      layout.keys.push_back({*p, r, c++});
  }
  layout.home_row = key_set_of("asdfjkl;");
  layout.near_home = key_set_of("qwertgvcxz][poiuhnm,./");
  layout.validate();
  return layout;
}

void CameraModel::validate() const {
  if (sensitivity <= 0.0) throw std::domain_error("camera sensitivity must be > 0");
  if (capture_latency < 0.0) throw std::domain_error("camera capture_latency must be >= 0");
}

CameraModel CameraModel::flir_one() { return {"FLIR-One", 0.15, 0.0}; }
CameraModel CameraModel::sc620() { return {"SC620", 0.04, 0.0}; }
CameraModel CameraModel::a6700sc() { return {"A6700sc", 0.018, 0.0}; }
CameraModel CameraModel::x8500sc() { return {"X8500sc", 0.02, 0.0}; }

std::optional<CameraModel> CameraModel::preset(std::string_view name) {
  const std::string n = lower(name);
  if (n == "flir-one" || n == "flirone" || n == "flir_one") return flir_one();
  if (n == "sc620") return sc620();
  if (n == "a6700sc") return a6700sc();
  if (n == "x8500sc") return x8500sc();
  return std::nullopt;
}

double TypingSession::end_time() const {
  double end = 0.0;
  for (const TypingEvent& e : events) end = std::max(end, e.press_time);
  return end;
}

TypingSession simulate_session(std::string_view password,
                               const StyleOptions& style,
                               const KeyboardLayout& layout,
                               const CadenceSpec& cadence,
                               const physics::EnvironmentSpec& env) {
  layout.validate();
  env.validate();
  if (env.skin_temp <= env.ambient_temp)
    throw std::invalid_argument("heating-only model requires skin_temp > ambient_temp");
  if (!cadence.press_times.empty() && cadence.press_times.size() != password.size())
    throw std::invalid_argument("explicit press schedule must match password length");

  TypingSession session;
  session.password = std::string(password);
  session.style = style.style;
  session.ambient = env.ambient_temp;
  session.layout = layout;

  const double area = style.acrylic_nails ? 0.0 : 1.0;
  for (std::size_t i = 0; i < password.size(); ++i) {
    const Key k = password[i];
    if (!layout.contains(k))
      throw std::invalid_argument(std::string("password character '") + k + "' not in layout");
    const double t = cadence.press_times.empty()
                         ? cadence.start_time + static_cast<double>(i) * cadence.interval
                         : cadence.press_times[i];
    session.events.push_back({k, t, env.press_duration, area, false});
  }
  std::sort(session.events.begin(), session.events.end(),
            [](const TypingEvent& a, const TypingEvent& b) { return a.press_time < b.press_time; });

  if (style.style == TypingStyle::TouchTypist && !style.acrylic_nails) {
    // Resting contacts decay from the moment the hands lift, i.e. when entry
    // ends. Intensity knobs are excess ratios relative to one standard press.
    const double release = session.end_time();
    if (style.home_row_contacts)
      for (Key k : layout.home_row)
        session.events.push_back({k, release, env.press_duration,
                                  style.home_row_scale, true});
    if (style.near_home_contacts)
      for (Key k : layout.near_home)
        session.events.push_back({k, release, env.press_duration,
                                  style.near_home_scale, true});
  }
  return session;
}

std::map<Key, double> excess_at(const TypingSession& session, double t,
                                const physics::KeycapSpec& keycap,
                                const physics::EnvironmentSpec& env) {
  keycap.validate();
  env.validate();

  std::map<Key, double> excess;
  for (const KeyboardLayout::KeyPos& p : session.layout.keys)
    excess[p.label] = 0.0;

  for (const TypingEvent& e : session.events) {
    if (e.press_time > t) continue;  // not yet occurred
    physics::KeycapSpec contact = keycap;
    physics::EnvironmentSpec press_env = env;
    contact.contact_area = keycap.contact_area * e.area_scale;
    press_env.press_duration = e.contact_duration;
    const double dt0 = physics::press_conduction(contact, press_env).delta_t;
    excess[e.key] += dt0 * std::exp(-env.cooling_constant * (t - e.press_time));
  }
  return excess;
}

ThermalState thermal_state_at(const TypingSession& session, double t,
                              const physics::KeycapSpec& keycap,
                              const physics::EnvironmentSpec& env) {
  const double cap = env.skin_temp - env.ambient_temp;
  ThermalState state;
  state.timestamp = t;
  state.ambient = env.ambient_temp;
  for (auto& [key, ex] : excess_at(session, t, keycap, env))
    state.temperature[key] = env.ambient_temp + std::min(ex, cap);
  return state;
}

KeySet extract_hot_keys(const ThermalState& state, const CameraModel& camera) {
  camera.validate();
  KeySet hot;
  for (const auto& [key, temp] : state.temperature)
    if (temp - state.ambient >= camera.sensitivity) hot.insert(key);
  return hot;
}

int keyset_distance(const KeySet& truth, const KeySet& detected) {
  int d = 0;
  for (Key k : truth)
    if (!detected.count(k)) ++d;
  for (Key k : detected)
    if (!truth.count(k)) ++d;
  return d;
}

std::vector<RecoveryPoint> recovery_curve(const TypingSession& session,
                                          const CameraModel& camera,
                                          const physics::KeycapSpec& keycap,
                                          const physics::EnvironmentSpec& env,
                                          const std::vector<double>& sample_times) {
  if (!std::is_sorted(sample_times.begin(), sample_times.end()))
    throw std::invalid_argument("sample_times must be sorted ascending");

  const KeySet truth = key_set_of(session.password);
  const double entry_end = session.end_time();

  std::vector<RecoveryPoint> curve;
  curve.reserve(sample_times.size());
  for (double t : sample_times) {
    const double capture = entry_end + t + camera.capture_latency;
    const ThermalState state = thermal_state_at(session, capture, keycap, env);
    curve.push_back({t, keyset_distance(truth, extract_hot_keys(state, camera))});
  }
  return curve;
}

}  // namespace keyfuse::thermal
