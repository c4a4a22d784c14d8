#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "keyfuse/audio.hpp"
#include "keyfuse/keys.hpp"

namespace keyfuse::classify {

enum class CorpusStyle { HuntAndPeck, TouchTypist, Combined };

std::string to_string(CorpusStyle style);
CorpusStyle corpus_style_from_string(const std::string& name);

struct LabelledSample {
  audio::FeatureVector features;
  Key label = 0;
};

struct TrainingCorpus {
  std::vector<LabelledSample> samples;
  CorpusStyle style = CorpusStyle::HuntAndPeck;
  std::string keyboard_id;

  // Throws std::invalid_argument on labels outside the alphabet, empty
  // corpora, or ragged feature lengths.
  void validate() const;

  std::size_t feature_length() const;
  std::vector<Key> class_labels() const;  // sorted, deduplicated

  // Combined corpora are only built by merging one corpus per typing style.
  static TrainingCorpus merge_styles(const TrainingCorpus& hunt_and_peck,
                                     const TrainingCorpus& touch_typist);
};

struct TrainHyper {
  double l2_inverse_strength = 1.0;  // larger = weaker regularization
  int max_iterations = 100;
  double learning_rate = 0.5;
  std::uint64_t seed = 0;  // folding/shuffling only; the fit itself is zero-init
};

struct KeyModel {
  std::vector<Key> classes;                 // sorted by alphabet
  std::vector<std::vector<double>> weights; // classes × feature_length
  std::vector<double> bias;                 // per class
  std::vector<double> feature_mean;
  std::vector<double> feature_scale;
  TrainHyper hyper;
  CorpusStyle style = CorpusStyle::HuntAndPeck;
  std::string keyboard_id;

  std::size_t feature_length() const { return feature_mean.size(); }
};

struct KeyProbability {
  Key key = 0;
  double probability = 0.0;
};

// Descending probability; equal probabilities fall back to alphabet order.
using PredictionList = std::vector<KeyProbability>;

struct CrossValidationResult {
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
};

// Multinomial logistic regression, full-batch gradient descent from a zero
// start on standardized features, so the fit is deterministic.
KeyModel train(const TrainingCorpus& corpus, const TrainHyper& hyper = {});

PredictionList predict(const KeyModel& model, const std::vector<double>& features);
PredictionList predict(const KeyModel& model, const audio::FeatureVector& features);

// Stratified k-fold; throws naming the first class with fewer samples than
// folds.
CrossValidationResult cross_validate(const TrainingCorpus& corpus, int folds = 5,
                                     const TrainHyper& hyper = {});

// Fraction of samples whose true label sits within the first n predictions.
double top_n_accuracy(const KeyModel& model, const std::vector<LabelledSample>& samples,
                      int n);

}  // namespace keyfuse::classify
