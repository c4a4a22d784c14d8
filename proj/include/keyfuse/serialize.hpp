#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "keyfuse/audio.hpp"
#include "keyfuse/classify.hpp"
#include "keyfuse/fusion.hpp"
#include "keyfuse/physics.hpp"
#include "keyfuse/thermal.hpp"

// JSON/CSV glue shared by the CLI and the tests. All emitters use ordered
// JSON so reports serialize with a stable field order.
namespace keyfuse::io {

using json = nlohmann::ordered_json;

// --- physics constants ------------------------------------------------------

json keycap_to_json(const physics::KeycapSpec& keycap);
physics::KeycapSpec keycap_from_json(const json& j);

json environment_to_json(const physics::EnvironmentSpec& env);
physics::EnvironmentSpec environment_from_json(const json& j);

// --- scenario configuration -------------------------------------------------

struct ScenarioConfig {
  std::string password;
  thermal::TypingStyle style = thermal::TypingStyle::HuntAndPeck;
  thermal::StyleOptions style_options;
  std::string layout_id = "qwerty46";
  thermal::CameraModel camera = thermal::CameraModel::flir_one();
  physics::KeycapSpec keycap;
  physics::EnvironmentSpec environment;
  thermal::CadenceSpec cadence;
  std::vector<double> sample_times = {0, 15, 30, 45, 60};
};

// Accepts either {"camera": {"preset": "flir_one"}} or explicit
// {"sensitivity": ..., "capture_latency": ...} fields; unknown presets throw.
ScenarioConfig scenario_from_json(const json& j);
ScenarioConfig load_scenario(const std::string& path);

// --- thermal artifacts ------------------------------------------------------

std::string thermal_state_to_csv(const thermal::ThermalState& state,
                                 const thermal::KeyboardLayout& layout);
json thermal_state_to_json(const thermal::ThermalState& state,
                           const thermal::KeyboardLayout& layout);

json recovery_to_json(const std::vector<thermal::RecoveryPoint>& curve);
std::string recovery_to_csv(const std::vector<thermal::RecoveryPoint>& curve);

// --- acoustic artifacts -----------------------------------------------------

json segments_to_json(const std::vector<audio::KeystrokeSegment>& segments,
                      const std::vector<audio::FeatureVector>& features,
                      double sample_rate);

std::vector<double> press_times_from_csv(const std::string& path);

// --- classifier artifacts ---------------------------------------------------

json corpus_to_json(const classify::TrainingCorpus& corpus);
classify::TrainingCorpus corpus_from_json(const json& j);

json model_to_json(const classify::KeyModel& model);
classify::KeyModel model_from_json(const json& j);
void save_model(const std::string& path, const classify::KeyModel& model);
classify::KeyModel load_model(const std::string& path);

json predictions_to_json(const std::vector<classify::PredictionList>& predictions);
std::vector<classify::PredictionList> predictions_from_json(const json& j);

// --- fusion artifacts -------------------------------------------------------

json rank_outcome_to_json(const fusion::RankOutcome& outcome);

json load_json(const std::string& path);
void save_json(const std::string& path, const json& j);
void save_text(const std::string& path, const std::string& text);

}  // namespace keyfuse::io
