// keyfuse: keyboard side-channel analysis toolkit.
//
// Subcommands cover the whole pipeline: thermal-scenario simulation,
// keystroke segmentation of a recording, classifier training/prediction/
// cross-validation, channel fusion into a ranked password list, and report
// assembly. Exit codes: 0 success, 2 usage/input error, 3 analysis failure
// (e.g. the true password falls outside the fused search space).

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "keyfuse/audio.hpp"
#include "keyfuse/classify.hpp"
#include "keyfuse/fusion.hpp"
#include "keyfuse/keys.hpp"
#include "keyfuse/physics.hpp"
#include "keyfuse/serialize.hpp"
#include "keyfuse/thermal.hpp"
#include "keyfuse/wav.hpp"

namespace fs = std::filesystem;
using keyfuse::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitAnalysis = 3;

struct GlobalOptions {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  std::string format = "json";
};

std::string out_path(const GlobalOptions& global, const std::string& name) {
  fs::create_directories(global.output_dir);
  return (fs::path(global.output_dir) / name).string();
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> values;
  std::istringstream in(csv);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    if (cell.find_first_not_of(" \t") == std::string::npos) continue;
    values.push_back(std::stod(cell));
  }
  return values;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOptions {
  std::string password;
  std::string style = "hp";
  std::string camera;
  std::string sample_times;
  bool password_set = false;
  bool style_set = false;
  bool camera_set = false;
  bool sample_times_set = false;
};

keyfuse::io::ScenarioConfig resolve_scenario(const GlobalOptions& global,
                                             const SimulateOptions& opts) {
  keyfuse::io::ScenarioConfig config;
  if (!global.config_path.empty())
    config = keyfuse::io::load_scenario(global.config_path);
  else if (!opts.password_set)
    throw std::invalid_argument("simulate needs --config or --password");

  if (opts.password_set) config.password = opts.password;
  if (opts.style_set) {
    if (opts.style == "hp")
      config.style = keyfuse::thermal::TypingStyle::HuntAndPeck;
    else if (opts.style == "tt")
      config.style = keyfuse::thermal::TypingStyle::TouchTypist;
    else
      throw std::invalid_argument("unknown typing style: " + opts.style);
    config.style_options.style = config.style;
  }
  if (opts.camera_set) {
    const auto preset = keyfuse::thermal::CameraModel::preset(opts.camera);
    if (!preset) throw std::invalid_argument("unknown camera preset: " + opts.camera);
    config.camera = *preset;
  }
  if (opts.sample_times_set) {
    config.sample_times = parse_double_list(opts.sample_times);
    if (!std::is_sorted(config.sample_times.begin(), config.sample_times.end()))
      throw std::invalid_argument("sample times must be sorted ascending");
  }
  if (config.password.empty()) throw std::invalid_argument("password is empty");
  if (config.sample_times.empty())
    throw std::invalid_argument("at least one sample time is required");
  return config;
}

json scenario_echo(const keyfuse::io::ScenarioConfig& config) {
  return json{{"password", config.password},
              {"style",
               config.style == keyfuse::thermal::TypingStyle::HuntAndPeck ? "hp" : "tt"},
              {"layout", config.layout_id},
              {"camera",
               json{{"name", config.camera.name},
                    {"sensitivity", config.camera.sensitivity},
                    {"capture_latency", config.camera.capture_latency}}},
              {"sample_times", config.sample_times}};
}

int cmd_simulate(const GlobalOptions& global, const SimulateOptions& opts) {
  const keyfuse::io::ScenarioConfig config = resolve_scenario(global, opts);
  const auto layout = keyfuse::thermal::KeyboardLayout::qwerty46();

  const auto session = keyfuse::thermal::simulate_session(
      config.password, config.style_options, layout, config.cadence, config.environment);
  const auto curve = keyfuse::thermal::recovery_curve(
      session, config.camera, config.keycap, config.environment, config.sample_times);

  const double first_capture =
      session.end_time() + config.sample_times.front() + config.camera.capture_latency;
  const auto state = keyfuse::thermal::thermal_state_at(session, first_capture,
                                                        config.keycap, config.environment);
  const auto hot = keyfuse::thermal::extract_hot_keys(state, config.camera);

  const auto conduction =
      keyfuse::physics::press_conduction(config.keycap, config.environment);
  const double window = keyfuse::physics::time_to_threshold(
      conduction.delta_t, config.camera.sensitivity,
      config.environment.cooling_constant);

  if (global.format == "csv") {
    keyfuse::io::save_text(out_path(global, "recovery.csv"),
                           keyfuse::io::recovery_to_csv(curve));
    keyfuse::io::save_text(out_path(global, "thermal_state.csv"),
                           keyfuse::io::thermal_state_to_csv(state, layout));
  } else {
    keyfuse::io::save_json(out_path(global, "recovery.json"),
                           keyfuse::io::recovery_to_json(curve));
    keyfuse::io::save_json(out_path(global, "thermal_state.json"),
                           keyfuse::io::thermal_state_to_json(state, layout));
  }

  const json report{
      {"scenario", scenario_echo(config)},
      {"constants",
       json{{"keycap", keyfuse::io::keycap_to_json(config.keycap)},
            {"environment", keyfuse::io::environment_to_json(config.environment)}}},
      {"derived",
       json{{"press_heat_joules", conduction.heat},
            {"press_delta_t_kelvin", conduction.delta_t},
            {"camera_window_seconds", window}}},
      {"entry_end", session.end_time()},
      {"hot_keys", keyfuse::keyset_to_string(hot)},
      {"recovery", keyfuse::io::recovery_to_json(curve)}};
  keyfuse::io::save_json(out_path(global, "simulate_report.json"), report);

  std::cout << "hot keys at first sample: " << keyfuse::keyset_to_string(hot) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// segment
// ---------------------------------------------------------------------------

struct SegmentOptions {
  std::string wav_path;
  std::string press_times_csv;
  double band_low = 400.0;
  double band_high = 12000.0;
  double press_threshold = 0.15;
  double refractory = 0.125;
  double release_threshold = 0.3;
  double segment_len = 0.1;
};

int cmd_segment(const GlobalOptions& global, const SegmentOptions& opts) {
  const auto clip = keyfuse::audio::read_wav(opts.wav_path);
  const auto filtered = keyfuse::audio::bandpass(clip, opts.band_low, opts.band_high);

  std::vector<keyfuse::audio::KeystrokeBoundary> boundaries;
  if (!opts.press_times_csv.empty()) {
    for (double t : keyfuse::io::press_times_from_csv(opts.press_times_csv))
      boundaries.push_back({t, std::nullopt});
  } else {
    const auto energy = keyfuse::audio::energy_vector(filtered);
    keyfuse::audio::DetectorConfig detector;
    detector.press_threshold = opts.press_threshold;
    detector.refractory = opts.refractory;
    detector.release_rel_threshold = opts.release_threshold;
    boundaries = keyfuse::audio::detect_keystrokes(energy, detector);
  }

  const auto segments =
      keyfuse::audio::split_segments(filtered, boundaries, opts.segment_len);
  std::vector<keyfuse::audio::FeatureVector> features;
  features.reserve(segments.size());
  for (const auto& segment : segments)
    features.push_back(keyfuse::audio::mfcc(segment));

  keyfuse::io::save_json(
      out_path(global, "segments.json"),
      keyfuse::io::segments_to_json(segments, features, filtered.sample_rate));
  std::cout << "segments: " << segments.size() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train / predict / cv
// ---------------------------------------------------------------------------

struct TrainOptions {
  std::string features_path;
  std::string merge_path;
  std::string corpus_dir;
  std::string model_path;
  double l2_inverse_strength = 1.0;
  int max_iterations = 100;
  double learning_rate = 0.5;
};

keyfuse::classify::TrainingCorpus corpus_from_dir(const std::string& dir) {
  const fs::path manifest_path = fs::path(dir) / "manifest.json";
  const json manifest = keyfuse::io::load_json(manifest_path.string());

  keyfuse::classify::TrainingCorpus corpus;
  corpus.style = keyfuse::classify::corpus_style_from_string(
      manifest.value("style", std::string("hp")));
  corpus.keyboard_id = manifest.value("keyboard_id", std::string{});

  // Labels come from the `<key>_<index>.wav` naming convention; sorted paths
  // keep the corpus deterministic.
  std::vector<fs::path> wavs;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".wav") wavs.push_back(entry.path());
  std::sort(wavs.begin(), wavs.end());

  for (const fs::path& path : wavs) {
    const std::string stem = path.stem().string();
    const auto underscore = stem.find('_');
    if (underscore != 1)
      throw std::invalid_argument("corpus wav name must be <key>_<index>.wav: " +
                                  path.filename().string());
    keyfuse::classify::LabelledSample sample;
    sample.label = stem[0];
    sample.features = keyfuse::audio::mfcc(keyfuse::audio::read_wav(path.string()));
    corpus.samples.push_back(std::move(sample));
  }
  return corpus;
}

keyfuse::classify::TrainingCorpus load_corpus(const std::string& features_path,
                                              const std::string& corpus_dir) {
  if (!features_path.empty())
    return keyfuse::io::corpus_from_json(keyfuse::io::load_json(features_path));
  if (!corpus_dir.empty()) return corpus_from_dir(corpus_dir);
  throw std::invalid_argument("need --features or --corpus-dir");
}

keyfuse::classify::TrainHyper hyper_of(const GlobalOptions& global,
                                       const TrainOptions& opts) {
  keyfuse::classify::TrainHyper hyper;
  hyper.l2_inverse_strength = opts.l2_inverse_strength;
  hyper.max_iterations = opts.max_iterations;
  hyper.learning_rate = opts.learning_rate;
  hyper.seed = global.seed;
  return hyper;
}

int cmd_train(const GlobalOptions& global, const TrainOptions& opts) {
  keyfuse::classify::TrainingCorpus corpus =
      load_corpus(opts.features_path, opts.corpus_dir);
  if (!opts.merge_path.empty()) {
    const auto other =
        keyfuse::io::corpus_from_json(keyfuse::io::load_json(opts.merge_path));
    corpus = keyfuse::classify::TrainingCorpus::merge_styles(corpus, other);
  }

  const auto model = keyfuse::classify::train(corpus, hyper_of(global, opts));
  const std::string path =
      opts.model_path.empty() ? out_path(global, "model.json") : opts.model_path;
  keyfuse::io::save_model(path, model);

  const double accuracy = keyfuse::classify::top_n_accuracy(model, corpus.samples, 1);
  std::cout << "model: " << path << " training-top1 " << accuracy << "\n";
  return kExitOk;
}

struct PredictOptions {
  std::string model_path;
  std::string segments_path;
  std::string features_path;
};

int cmd_predict(const GlobalOptions& global, const PredictOptions& opts) {
  const auto model = keyfuse::io::load_model(opts.model_path);

  std::vector<keyfuse::audio::FeatureVector> features;
  if (!opts.segments_path.empty()) {
    const json segments = keyfuse::io::load_json(opts.segments_path);
    for (const json& s : segments.at("segments")) {
      keyfuse::audio::FeatureVector fv;
      const json& f = s.at("features");
      fv.frame_count = f.at("frame_count").get<std::size_t>();
      fv.coeffs_per_frame = f.at("coeffs_per_frame").get<std::size_t>();
      fv.coefficients = f.at("coefficients").get<std::vector<double>>();
      features.push_back(std::move(fv));
    }
  } else if (!opts.features_path.empty()) {
    const auto corpus =
        keyfuse::io::corpus_from_json(keyfuse::io::load_json(opts.features_path));
    for (const auto& sample : corpus.samples) features.push_back(sample.features);
  } else {
    throw std::invalid_argument("need --segments or --features");
  }

  std::vector<keyfuse::classify::PredictionList> predictions;
  std::string top1;
  for (const auto& fv : features) {
    predictions.push_back(keyfuse::classify::predict(model, fv));
    top1.push_back(predictions.back().front().key);
  }

  keyfuse::io::save_json(out_path(global, "predictions.json"),
                         keyfuse::io::predictions_to_json(predictions));
  std::cout << "top1: " << top1 << "\n";
  return kExitOk;
}

struct CvOptions {
  std::string features_path;
  int folds = 5;
};

int cmd_cv(const GlobalOptions& global, const CvOptions& opts) {
  const auto corpus =
      keyfuse::io::corpus_from_json(keyfuse::io::load_json(opts.features_path));
  keyfuse::classify::TrainHyper hyper;
  hyper.seed = global.seed;
  const auto result = keyfuse::classify::cross_validate(corpus, opts.folds, hyper);

  json folds = json::array();
  for (double a : result.fold_accuracy) folds.push_back(a);
  keyfuse::io::save_json(out_path(global, "cv.json"),
                         json{{"folds", folds}, {"mean", result.mean_accuracy}});

  for (std::size_t i = 0; i < result.fold_accuracy.size(); ++i)
    std::cout << "fold " << i + 1 << ": " << result.fold_accuracy[i] << "\n";
  std::cout << "mean: " << result.mean_accuracy << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// fuse
// ---------------------------------------------------------------------------

struct FuseOptions {
  std::string keyset;
  std::string truth;
  std::string predictions_path;
  std::string segments_path;
  std::string timings;
  std::string method = "mult-prob";
  std::string dictionary_path;
  std::string typist = "hp";
  std::string top_n = "1,5,10,25,50,100";
  std::string scores_csv;
  std::size_t length = 0;
  std::size_t top_k = 10;
  double bonus_threshold = 0.15;
  bool bonus = false;
  bool allow_missing_keys = false;
};

keyfuse::fusion::ScoreMethod parse_method(const std::string& name) {
  keyfuse::fusion::ScoreMethod method;
  if (name == "mult-prob") {
    method.combine = keyfuse::fusion::Combine::Multiply;
    method.key_score = keyfuse::fusion::KeyScore::Probability;
  } else if (name == "sum-prob") {
    method.combine = keyfuse::fusion::Combine::Sum;
    method.key_score = keyfuse::fusion::KeyScore::Probability;
  } else if (name == "mult-ldv") {
    method.combine = keyfuse::fusion::Combine::Multiply;
    method.key_score = keyfuse::fusion::KeyScore::Ldv;
  } else if (name == "sum-ldv") {
    method.combine = keyfuse::fusion::Combine::Sum;
    method.key_score = keyfuse::fusion::KeyScore::Ldv;
  } else {
    throw std::invalid_argument("unknown method: " + name);
  }
  return method;
}

std::vector<std::pair<std::size_t, double>> load_timings(const FuseOptions& opts) {
  std::vector<std::pair<std::size_t, double>> timings;
  if (!opts.segments_path.empty()) {
    const json segments = keyfuse::io::load_json(opts.segments_path);
    for (const json& t : segments.at("timings"))
      timings.emplace_back(t.at("transition").get<std::size_t>(),
                           t.at("dt").get<double>());
  } else if (!opts.timings.empty()) {
    const auto values = parse_double_list(opts.timings);
    for (std::size_t i = 0; i < values.size(); ++i) timings.emplace_back(i, values[i]);
  }
  return timings;
}

int dictionary_mode(const GlobalOptions& global, const FuseOptions& opts) {
  const auto dictionary = keyfuse::fusion::load_dictionary(opts.dictionary_path);
  const auto typist = opts.typist == "tt" ? keyfuse::thermal::TypingStyle::TouchTypist
                                          : keyfuse::thermal::TypingStyle::HuntAndPeck;
  if (opts.typist != "hp" && opts.typist != "tt")
    throw std::invalid_argument("unknown typist: " + opts.typist);

  const std::size_t length = opts.length > 0 ? opts.length : opts.truth.size();
  if (length == 0) throw std::invalid_argument("need --length or --truth");

  const auto layout = keyfuse::thermal::KeyboardLayout::qwerty46();
  const auto ranked = keyfuse::fusion::dictionary_attack(
      dictionary, keyfuse::key_set_of(opts.keyset), length, typist, layout.home_row);

  json top_table = json::array();
  std::optional<std::size_t> truth_rank;
  for (std::size_t i = 0; i < ranked.size(); ++i)
    if (ranked[i].password == opts.truth) {
      truth_rank = i + 1;
      break;
    }
  for (double n_raw : parse_double_list(opts.top_n)) {
    const auto n = static_cast<std::size_t>(n_raw);
    top_table.push_back(json{
        {"n", n}, {"hit", keyfuse::fusion::top_n_hit(ranked, opts.truth, n)}});
  }

  json best = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(ranked.size(), opts.top_k); ++i)
    best.push_back(json{{"password", ranked[i].password},
                        {"popularity_rank", ranked[i].popularity_rank}});

  json report{{"mode", "dictionary"},
              {"typist", opts.typist},
              {"key_set", opts.keyset},
              {"length", length},
              {"candidates", ranked.size()}};
  report["truth_rank"] = truth_rank.has_value() ? json(*truth_rank) : json(nullptr);
  report["top_n"] = std::move(top_table);
  report["best"] = std::move(best);
  keyfuse::io::save_json(out_path(global, "dictionary_report.json"), report);

  std::cout << "candidates: " << ranked.size() << "\n";
  return kExitOk;
}

int cmd_fuse(const GlobalOptions& global, const FuseOptions& opts) {
  if (opts.keyset.empty()) throw std::invalid_argument("--keyset is required");
  if (opts.truth.empty()) throw std::invalid_argument("--truth is required");
  if (!opts.dictionary_path.empty()) return dictionary_mode(global, opts);
  if (opts.predictions_path.empty())
    throw std::invalid_argument("--predictions is required outside dictionary mode");

  const auto predictions = keyfuse::io::predictions_from_json(
      keyfuse::io::load_json(opts.predictions_path));

  keyfuse::fusion::SearchSpaceSpec spec;
  spec.key_set = keyfuse::key_set_of(opts.keyset);
  spec.length = opts.length > 0 ? opts.length : predictions.size();
  if (spec.length != predictions.size())
    throw std::invalid_argument("--length disagrees with the prediction count");

  const auto method = parse_method(opts.method);
  std::optional<keyfuse::fusion::TimingBonus> bonus;
  if (opts.bonus) {
    keyfuse::fusion::TimingBonus b;
    b.timings = load_timings(opts);
    b.threshold = opts.bonus_threshold;
    bonus = std::move(b);
  }

  const bool require_all = !opts.allow_missing_keys;
  const auto outcome = keyfuse::fusion::rank_passwords(spec, predictions, method, bonus,
                                                       opts.truth, opts.top_k, require_all);

  if (!opts.scores_csv.empty()) {
    std::ostringstream csv;
    csv << "candidate,score,bonus_applied\n";
    keyfuse::fusion::for_each_candidate(
        spec,
        [&](const std::string& candidate) {
          const auto scored =
              keyfuse::fusion::score_password(candidate, predictions, method, bonus);
          csv << '"' << scored.candidate << "\"," << scored.score << ','
              << scored.bonus_applied << '\n';
        },
        require_all);
    keyfuse::io::save_text(opts.scores_csv, csv.str());
  }

  json report{{"mode", "ranking"},
              {"method", opts.method},
              {"key_set", keyfuse::keyset_to_string(spec.key_set)},
              {"length", spec.length},
              {"space", require_all ? "all-keys" : "at-most"}};
  report["bonus"] = opts.bonus ? json{{"threshold", opts.bonus_threshold}} : json(nullptr);
  const json outcome_json = keyfuse::io::rank_outcome_to_json(outcome);
  for (const auto& [key, value] : outcome_json.items()) report[key] = value;
  keyfuse::io::save_json(out_path(global, "fuse_report.json"), report);

  if (!outcome.truth_in_space) {
    std::cerr << "true password is outside the fused search space\n";
    return kExitAnalysis;
  }
  std::cout << "rank " << outcome.result.rank << " of " << outcome.result.space_size
            << " reduction " << outcome.result.reduction << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

struct ReportOptions {
  std::string simulate_path;
  std::string segments_path;
  std::string predictions_path;
  std::string fuse_path;
};

int cmd_report(const GlobalOptions& global, const ReportOptions& opts) {
  if (opts.simulate_path.empty() && opts.segments_path.empty() &&
      opts.predictions_path.empty() && opts.fuse_path.empty())
    throw std::invalid_argument("report needs at least one input artifact");

  json report;
  if (!opts.simulate_path.empty()) {
    const json sim = keyfuse::io::load_json(opts.simulate_path);
    report["scenario"] = sim.value("scenario", json(nullptr));
    report["constants"] = sim.value("constants", json(nullptr));
    report["derived"] = sim.value("derived", json(nullptr));
    report["thermal_key_set"] = sim.value("hot_keys", json(nullptr));
    report["recovery"] = sim.value("recovery", json(nullptr));
  }
  if (!opts.segments_path.empty()) {
    const json segments = keyfuse::io::load_json(opts.segments_path);
    report["acoustic_length"] = segments.value("count", json(nullptr));
    report["timings"] = segments.value("timings", json(nullptr));
  }
  if (!opts.predictions_path.empty()) {
    const json predictions = keyfuse::io::load_json(opts.predictions_path);
    std::string top1;
    json per_position = json::array();
    for (const json& list : predictions) {
      json top3 = json::array();
      for (std::size_t i = 0; i < std::min<std::size_t>(3, list.size()); ++i)
        top3.push_back(list[i]);
      if (!list.empty()) top1 += list[0].at("key").get<std::string>();
      per_position.push_back(std::move(top3));
    }
    report["predictions"] = json{{"top1", top1}, {"per_position", std::move(per_position)}};
  }
  if (!opts.fuse_path.empty()) report["ranking"] = keyfuse::io::load_json(opts.fuse_path);

  keyfuse::io::save_json(out_path(global, "report.json"), report);
  std::cout << "report: " << out_path(global, "report.json") << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"keyboard side-channel analysis toolkit"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--config", global.config_path, "scenario JSON file");
  app.add_option("--seed", global.seed, "RNG seed for fold shuffling");
  app.add_option("--output-dir", global.output_dir, "artifact directory");
  app.add_option("--format", global.format, "artifact format")
      ->check(CLI::IsMember({"json", "csv"}));

  SimulateOptions sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "simulate a thermal typing session");
  sim_cmd->fallthrough();
  auto* sim_password = sim_cmd->add_option("--password", sim.password, "password to type");
  auto* sim_style = sim_cmd->add_option("--style", sim.style, "hp or tt");
  auto* sim_camera = sim_cmd->add_option("--camera", sim.camera, "camera preset");
  auto* sim_times =
      sim_cmd->add_option("--sample-times", sim.sample_times, "comma list of delays (s)");

  SegmentOptions seg;
  CLI::App* seg_cmd = app.add_subcommand("segment", "detect keystrokes in a recording");
  seg_cmd->fallthrough();
  seg_cmd->add_option("--wav", seg.wav_path, "input WAV")->required();
  seg_cmd->add_option("--press-times", seg.press_times_csv, "boundary override CSV");
  seg_cmd->add_option("--band-low", seg.band_low, "band-pass low edge (Hz)");
  seg_cmd->add_option("--band-high", seg.band_high, "band-pass high edge (Hz)");
  seg_cmd->add_option("--press-threshold", seg.press_threshold, "energy delta for a press");
  seg_cmd->add_option("--refractory", seg.refractory, "post-press suppression (s)");
  seg_cmd->add_option("--release-threshold", seg.release_threshold,
                      "release fraction of press peak");
  seg_cmd->add_option("--segment-len", seg.segment_len, "segment length (s)");

  TrainOptions train;
  CLI::App* train_cmd = app.add_subcommand("train", "train the keystroke classifier");
  train_cmd->fallthrough();
  train_cmd->add_option("--features", train.features_path, "corpus features JSON");
  train_cmd->add_option("--merge", train.merge_path,
                        "second corpus JSON merged in (hp + tt)");
  train_cmd->add_option("--corpus-dir", train.corpus_dir,
                        "directory of <key>_<index>.wav plus manifest.json");
  train_cmd->add_option("--model", train.model_path, "model output path");
  train_cmd->add_option("--l2-c", train.l2_inverse_strength, "inverse L2 strength");
  train_cmd->add_option("--max-iter", train.max_iterations, "gradient-descent cap");
  train_cmd->add_option("--rate", train.learning_rate, "gradient-descent step");

  PredictOptions predict;
  CLI::App* predict_cmd = app.add_subcommand("predict", "rank keys for each keystroke");
  predict_cmd->fallthrough();
  predict_cmd->add_option("--model", predict.model_path, "model JSON")->required();
  predict_cmd->add_option("--segments", predict.segments_path, "segments JSON");
  predict_cmd->add_option("--features", predict.features_path, "corpus features JSON");

  CvOptions cv;
  CLI::App* cv_cmd = app.add_subcommand("cv", "stratified cross-validation");
  cv_cmd->fallthrough();
  cv_cmd->add_option("--features", cv.features_path, "corpus features JSON")->required();
  cv_cmd->add_option("--folds", cv.folds, "fold count");

  FuseOptions fuse;
  CLI::App* fuse_cmd = app.add_subcommand("fuse", "fuse channels into a ranked list");
  fuse_cmd->fallthrough();
  fuse_cmd->add_option("--keyset", fuse.keyset, "thermally recovered keys");
  fuse_cmd->add_option("--truth", fuse.truth, "true password");
  fuse_cmd->add_option("--predictions", fuse.predictions_path, "predictions JSON");
  fuse_cmd->add_option("--segments", fuse.segments_path, "segments JSON (timings)");
  fuse_cmd->add_option("--timings", fuse.timings, "comma list of gaps (s)");
  fuse_cmd->add_option("--length", fuse.length, "password length");
  fuse_cmd->add_option("--method", fuse.method, "mult-prob|sum-prob|mult-ldv|sum-ldv");
  fuse_cmd->add_flag("--bonus", fuse.bonus, "same-key timing bonus");
  fuse_cmd->add_option("--bonus-threshold", fuse.bonus_threshold, "repeat gap limit (s)");
  fuse_cmd->add_option("--top-k", fuse.top_k, "candidates kept in the report");
  fuse_cmd->add_option("--dictionary", fuse.dictionary_path, "password list (dictionary mode)");
  fuse_cmd->add_option("--typist", fuse.typist, "hp or tt (dictionary mode)");
  fuse_cmd->add_option("--top-n", fuse.top_n, "comma list of N for the hit table");
  fuse_cmd->add_option("--scores-csv", fuse.scores_csv, "write every candidate score");
  fuse_cmd->add_flag("--allow-missing-keys", fuse.allow_missing_keys,
                     "relaxed space when the key set exceeds the length");

  ReportOptions rep;
  CLI::App* rep_cmd = app.add_subcommand("report", "assemble a combined report");
  rep_cmd->fallthrough();
  rep_cmd->add_option("--simulate", rep.simulate_path, "simulate_report.json");
  rep_cmd->add_option("--segments", rep.segments_path, "segments.json");
  rep_cmd->add_option("--predictions", rep.predictions_path, "predictions.json");
  rep_cmd->add_option("--fuse", rep.fuse_path, "fuse_report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  sim.password_set = sim_password->count() > 0;
  sim.style_set = sim_style->count() > 0;
  sim.camera_set = sim_camera->count() > 0;
  sim.sample_times_set = sim_times->count() > 0;

  try {
    if (sim_cmd->parsed()) return cmd_simulate(global, sim);
    if (seg_cmd->parsed()) return cmd_segment(global, seg);
    if (train_cmd->parsed()) return cmd_train(global, train);
    if (predict_cmd->parsed()) return cmd_predict(global, predict);
    if (cv_cmd->parsed()) return cmd_cv(global, cv);
    if (fuse_cmd->parsed()) return cmd_fuse(global, fuse);
    if (rep_cmd->parsed()) return cmd_report(global, rep);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
