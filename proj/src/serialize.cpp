#include "keyfuse/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace keyfuse::io {

namespace {

std::string key_to_string(Key k) { return std::string(1, k); }

Key key_from_json(const json& j) {
  const auto s = j.get<std::string>();
  if (s.size() != 1) throw std::invalid_argument("key must be a single character: " + s);
  return s[0];
}

// Apply present fields only, so configs may override a subset of constants.
void merge_double(const json& j, const char* field, double& out) {
  if (j.contains(field)) out = j.at(field).get<double>();
}

void merge_bool(const json& j, const char* field, bool& out) {
  if (j.contains(field)) out = j.at(field).get<bool>();
}

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

json keycap_to_json(const physics::KeycapSpec& keycap) {
  return json{{"contact_area", keycap.contact_area},
              {"thickness", keycap.thickness},
              {"mass", keycap.mass},
              {"specific_heat", keycap.specific_heat},
              {"conductivity", keycap.conductivity}};
}

physics::KeycapSpec keycap_from_json(const json& j) {
  physics::KeycapSpec keycap;
  merge_double(j, "contact_area", keycap.contact_area);
  merge_double(j, "thickness", keycap.thickness);
  merge_double(j, "mass", keycap.mass);
  merge_double(j, "specific_heat", keycap.specific_heat);
  merge_double(j, "conductivity", keycap.conductivity);
  keycap.validate();
  return keycap;
}

json environment_to_json(const physics::EnvironmentSpec& env) {
  return json{{"skin_temp", env.skin_temp},
              {"ambient_temp", env.ambient_temp},
              {"press_duration", env.press_duration},
              {"cooling_constant", env.cooling_constant},
              {"detectability_threshold", env.detectability_threshold}};
}

physics::EnvironmentSpec environment_from_json(const json& j) {
  physics::EnvironmentSpec env;
  merge_double(j, "skin_temp", env.skin_temp);
  merge_double(j, "ambient_temp", env.ambient_temp);
  merge_double(j, "press_duration", env.press_duration);
  merge_double(j, "cooling_constant", env.cooling_constant);
  merge_double(j, "detectability_threshold", env.detectability_threshold);
  env.validate();
  return env;
}

ScenarioConfig scenario_from_json(const json& j) {
  ScenarioConfig config;
  if (!j.contains("password") || !j.at("password").is_string())
    throw std::invalid_argument("scenario needs a \"password\" string");
  config.password = j.at("password").get<std::string>();
  if (config.password.empty())
    throw std::invalid_argument("scenario password is empty");

  if (j.contains("style")) {
    const auto s = j.at("style").get<std::string>();
    if (s == "hp")
      config.style = thermal::TypingStyle::HuntAndPeck;
    else if (s == "tt")
      config.style = thermal::TypingStyle::TouchTypist;
    else
      throw std::invalid_argument("unknown typing style: " + s);
  }
  config.style_options.style = config.style;
  if (j.contains("style_options")) {
    const json& o = j.at("style_options");
    merge_double(o, "home_row_scale", config.style_options.home_row_scale);
    merge_double(o, "near_home_scale", config.style_options.near_home_scale);
    merge_bool(o, "home_row_contacts", config.style_options.home_row_contacts);
    merge_bool(o, "near_home_contacts", config.style_options.near_home_contacts);
    merge_bool(o, "acrylic_nails", config.style_options.acrylic_nails);
  }

  if (j.contains("layout")) {
    config.layout_id = j.at("layout").get<std::string>();
    if (config.layout_id != "qwerty46")
      throw std::invalid_argument("unknown keyboard layout: " + config.layout_id);
  }

  if (j.contains("camera")) {
    const json& c = j.at("camera");
    if (c.is_string()) {
      const auto preset = thermal::CameraModel::preset(c.get<std::string>());
      if (!preset)
        throw std::invalid_argument("unknown camera preset: " + c.get<std::string>());
      config.camera = *preset;
    } else {
      if (c.contains("preset")) {
        const auto preset = thermal::CameraModel::preset(c.at("preset").get<std::string>());
        if (!preset)
          throw std::invalid_argument("unknown camera preset: " +
                                      c.at("preset").get<std::string>());
        config.camera = *preset;
      }
      if (c.contains("name")) config.camera.name = c.at("name").get<std::string>();
      merge_double(c, "sensitivity", config.camera.sensitivity);
      merge_double(c, "capture_latency", config.camera.capture_latency);
      config.camera.validate();
    }
  }

  if (j.contains("keycap")) config.keycap = keycap_from_json(j.at("keycap"));
  if (j.contains("environment"))
    config.environment = environment_from_json(j.at("environment"));

  if (j.contains("cadence")) {
    const json& c = j.at("cadence");
    merge_double(c, "start_time", config.cadence.start_time);
    merge_double(c, "interval", config.cadence.interval);
    if (c.contains("press_times"))
      config.cadence.press_times = c.at("press_times").get<std::vector<double>>();
  }

  if (j.contains("sample_times")) {
    config.sample_times = j.at("sample_times").get<std::vector<double>>();
    if (!std::is_sorted(config.sample_times.begin(), config.sample_times.end()))
      throw std::invalid_argument("sample_times must be sorted ascending");
  }
  return config;
}

ScenarioConfig load_scenario(const std::string& path) {
  return scenario_from_json(load_json(path));
}

std::string thermal_state_to_csv(const thermal::ThermalState& state,
                                 const thermal::KeyboardLayout& layout) {
  std::ostringstream out;
  out << "row,col,label,kelvin\n";
  std::vector<thermal::KeyboardLayout::KeyPos> ordered = layout.keys;
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (const auto& pos : ordered) {
    const auto it = state.temperature.find(pos.label);
    const double kelvin = it == state.temperature.end() ? state.ambient : it->second;
    // The label column is always quoted; ',' is itself a key.
    out << pos.row << ',' << pos.col << ",\"" << pos.label << "\","
        << format_fixed(kelvin, 6) << '\n';
  }
  return out.str();
}

json thermal_state_to_json(const thermal::ThermalState& state,
                           const thermal::KeyboardLayout& layout) {
  json keys = json::array();
  std::vector<thermal::KeyboardLayout::KeyPos> ordered = layout.keys;
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (const auto& pos : ordered) {
    const auto it = state.temperature.find(pos.label);
    const double kelvin = it == state.temperature.end() ? state.ambient : it->second;
    keys.push_back(json{{"row", pos.row},
                        {"col", pos.col},
                        {"label", key_to_string(pos.label)},
                        {"kelvin", kelvin}});
  }
  return json{{"timestamp", state.timestamp}, {"ambient", state.ambient}, {"keys", keys}};
}

json recovery_to_json(const std::vector<thermal::RecoveryPoint>& curve) {
  json points = json::array();
  for (const auto& p : curve)
    points.push_back(json{{"time", p.time}, {"distance", p.distance}});
  return points;
}

std::string recovery_to_csv(const std::vector<thermal::RecoveryPoint>& curve) {
  std::ostringstream out;
  out << "time,distance\n";
  for (const auto& p : curve)
    out << format_fixed(p.time, 3) << ',' << p.distance << '\n';
  return out.str();
}

json segments_to_json(const std::vector<audio::KeystrokeSegment>& segments,
                      const std::vector<audio::FeatureVector>& features,
                      double sample_rate) {
  if (!features.empty() && features.size() != segments.size())
    throw std::invalid_argument("feature count must match segment count");

  json list = json::array();
  for (std::size_t i = 0; i < segments.size(); ++i) {
    json entry{{"press_time", segments[i].press_time}};
    if (segments[i].release_time.has_value())
      entry["release_time"] = *segments[i].release_time;
    else
      entry["release_time"] = nullptr;
    if (!features.empty())
      entry["features"] = json{{"frame_count", features[i].frame_count},
                               {"coeffs_per_frame", features[i].coeffs_per_frame},
                               {"coefficients", features[i].coefficients}};
    list.push_back(std::move(entry));
  }

  json timings = json::array();
  const auto gaps = audio::interkeystroke_timings(segments);
  for (const auto& [transition, dt] : gaps)
    timings.push_back(json{{"transition", transition}, {"dt", dt}});

  return json{{"sample_rate", sample_rate},
              {"count", segments.size()},
              {"segments", std::move(list)},
              {"timings", std::move(timings)}};
}

std::vector<double> press_times_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open press-time csv: " + path);
  std::vector<double> times;
  std::string token;
  while (std::getline(in, token)) {
    std::istringstream line(token);
    std::string cell;
    while (std::getline(line, cell, ',')) {
      if (cell.find_first_not_of(" \t\r") == std::string::npos) continue;
      times.push_back(std::stod(cell));
    }
  }
  return times;
}

json corpus_to_json(const classify::TrainingCorpus& corpus) {
  json samples = json::array();
  for (const auto& s : corpus.samples)
    samples.push_back(json{{"label", key_to_string(s.label)},
                           {"frame_count", s.features.frame_count},
                           {"coeffs_per_frame", s.features.coeffs_per_frame},
                           {"coefficients", s.features.coefficients}});
  return json{{"style", classify::to_string(corpus.style)},
              {"keyboard_id", corpus.keyboard_id},
              {"samples", std::move(samples)}};
}

classify::TrainingCorpus corpus_from_json(const json& j) {
  classify::TrainingCorpus corpus;
  corpus.style = classify::corpus_style_from_string(j.at("style").get<std::string>());
  corpus.keyboard_id = j.value("keyboard_id", std::string{});
  for (const json& s : j.at("samples")) {
    classify::LabelledSample sample;
    sample.label = key_from_json(s.at("label"));
    sample.features.frame_count = s.at("frame_count").get<std::size_t>();
    sample.features.coeffs_per_frame = s.at("coeffs_per_frame").get<std::size_t>();
    sample.features.coefficients = s.at("coefficients").get<std::vector<double>>();
    corpus.samples.push_back(std::move(sample));
  }
  return corpus;
}

json model_to_json(const classify::KeyModel& model) {
  json classes = json::array();
  for (Key k : model.classes) classes.push_back(key_to_string(k));
  return json{{"version", 1},
              {"classes", std::move(classes)},
              {"weights", model.weights},
              {"bias", model.bias},
              {"feature_mean", model.feature_mean},
              {"feature_scale", model.feature_scale},
              {"hyper",
               json{{"l2_inverse_strength", model.hyper.l2_inverse_strength},
                    {"max_iterations", model.hyper.max_iterations},
                    {"learning_rate", model.hyper.learning_rate},
                    {"seed", model.hyper.seed}}},
              {"style", classify::to_string(model.style)},
              {"keyboard_id", model.keyboard_id}};
}

classify::KeyModel model_from_json(const json& j) {
  if (j.value("version", 0) != 1)
    throw std::invalid_argument("unsupported model file version");
  classify::KeyModel model;
  for (const json& c : j.at("classes")) model.classes.push_back(key_from_json(c));
  model.weights = j.at("weights").get<std::vector<std::vector<double>>>();
  model.bias = j.at("bias").get<std::vector<double>>();
  model.feature_mean = j.at("feature_mean").get<std::vector<double>>();
  model.feature_scale = j.at("feature_scale").get<std::vector<double>>();
  const json& h = j.at("hyper");
  model.hyper.l2_inverse_strength = h.at("l2_inverse_strength").get<double>();
  model.hyper.max_iterations = h.at("max_iterations").get<int>();
  model.hyper.learning_rate = h.at("learning_rate").get<double>();
  model.hyper.seed = h.at("seed").get<std::uint64_t>();
  model.style = classify::corpus_style_from_string(j.at("style").get<std::string>());
  model.keyboard_id = j.value("keyboard_id", std::string{});

  if (model.weights.size() != model.classes.size() ||
      model.bias.size() != model.classes.size())
    throw std::invalid_argument("model class/weight shape mismatch");
  for (const auto& w : model.weights)
    if (w.size() != model.feature_mean.size())
      throw std::invalid_argument("model weight length mismatch");
  return model;
}

void save_model(const std::string& path, const classify::KeyModel& model) {
  save_json(path, model_to_json(model));
}

classify::KeyModel load_model(const std::string& path) {
  return model_from_json(load_json(path));
}

json predictions_to_json(const std::vector<classify::PredictionList>& predictions) {
  json out = json::array();
  for (const auto& list : predictions) {
    json entries = json::array();
    for (const auto& [key, probability] : list)
      entries.push_back(json{{"key", key_to_string(key)}, {"probability", probability}});
    out.push_back(std::move(entries));
  }
  return out;
}

std::vector<classify::PredictionList> predictions_from_json(const json& j) {
  std::vector<classify::PredictionList> predictions;
  for (const json& entries : j) {
    classify::PredictionList list;
    for (const json& e : entries)
      list.push_back({key_from_json(e.at("key")), e.at("probability").get<double>()});
    predictions.push_back(std::move(list));
  }
  return predictions;
}

json rank_outcome_to_json(const fusion::RankOutcome& outcome) {
  json top = json::array();
  for (const auto& scored : outcome.top)
    top.push_back(json{{"candidate", scored.candidate},
                       {"score", scored.score},
                       {"bonus_applied", scored.bonus_applied}});
  json out{{"truth_in_space", outcome.truth_in_space}};
  if (outcome.truth_in_space) {
    out["rank"] = outcome.result.rank;
    out["space_size"] = outcome.result.space_size;
    out["reduction"] = outcome.result.reduction;
  } else {
    out["rank"] = nullptr;
    out["space_size"] = outcome.result.space_size;
    out["reduction"] = nullptr;
  }
  out["top_k"] = std::move(top);
  return out;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open json file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("malformed json in " + path + ": " + e.what());
  }
  return j;
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot create file: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot create file: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace keyfuse::io
