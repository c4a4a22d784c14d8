#include "keyfuse/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace keyfuse::classify {

std::string to_string(CorpusStyle style) {
  switch (style) {
    case CorpusStyle::HuntAndPeck: return "hp";
    case CorpusStyle::TouchTypist: return "tt";
    case CorpusStyle::Combined: return "hptt";
  }
  throw std::logic_error("unknown corpus style");
}

CorpusStyle corpus_style_from_string(const std::string& name) {
  if (name == "hp") return CorpusStyle::HuntAndPeck;
  if (name == "tt") return CorpusStyle::TouchTypist;
  if (name == "hptt") return CorpusStyle::Combined;
  throw std::invalid_argument("unknown corpus style: " + name);
}

void TrainingCorpus::validate() const {
  if (samples.empty()) throw std::invalid_argument("corpus has no samples");
  const std::size_t len = samples.front().features.coefficients.size();
  if (len == 0) throw std::invalid_argument("corpus has empty feature vectors");
  for (const LabelledSample& s : samples) {
    if (!is_alphabet_key(s.label))
      throw std::invalid_argument(std::string("label outside key alphabet: '") +
                                  s.label + "'");
    if (s.features.coefficients.size() != len)
      throw std::invalid_argument("ragged feature lengths in corpus");
  }
}

std::size_t TrainingCorpus::feature_length() const {
  return samples.empty() ? 0 : samples.front().features.coefficients.size();
}

std::vector<Key> TrainingCorpus::class_labels() const {
  std::vector<Key> labels;
  labels.reserve(samples.size());
  for (const LabelledSample& s : samples) labels.push_back(s.label);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return labels;
}

TrainingCorpus TrainingCorpus::merge_styles(const TrainingCorpus& hunt_and_peck,
                                            const TrainingCorpus& touch_typist) {
  if (hunt_and_peck.style != CorpusStyle::HuntAndPeck)
    throw std::invalid_argument("first corpus must be hunt-and-peck");
  if (touch_typist.style != CorpusStyle::TouchTypist)
    throw std::invalid_argument("second corpus must be touch-typist");
  if (hunt_and_peck.keyboard_id != touch_typist.keyboard_id)
    throw std::invalid_argument("cannot merge corpora from different keyboards");
  hunt_and_peck.validate();
  touch_typist.validate();
  if (hunt_and_peck.feature_length() != touch_typist.feature_length())
    throw std::invalid_argument("corpora have different feature lengths");

  TrainingCorpus merged;
  merged.style = CorpusStyle::Combined;
  merged.keyboard_id = hunt_and_peck.keyboard_id;
  merged.samples = hunt_and_peck.samples;
  merged.samples.insert(merged.samples.end(), touch_typist.samples.begin(),
                        touch_typist.samples.end());
  return merged;
}

namespace {

std::vector<double> standardize(const KeyModel& model, const std::vector<double>& x) {
  std::vector<double> z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    z[j] = (x[j] - model.feature_mean[j]) / model.feature_scale[j];
  return z;
}

// Softmax with the usual max shift for stability.
std::vector<double> class_probabilities(const KeyModel& model,
                                        const std::vector<double>& standardized) {
  const std::size_t c_count = model.classes.size();
  std::vector<double> logits(c_count);
  for (std::size_t c = 0; c < c_count; ++c) {
    double z = model.bias[c];
    const auto& w = model.weights[c];
    for (std::size_t j = 0; j < standardized.size(); ++j) z += w[j] * standardized[j];
    logits[c] = z;
  }
  const double zmax = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double& z : logits) {
    z = std::exp(z - zmax);
    total += z;
  }
  for (double& z : logits) z /= total;
  return logits;
}

}  // namespace

KeyModel train(const TrainingCorpus& corpus, const TrainHyper& hyper) {
  corpus.validate();
  if (hyper.l2_inverse_strength <= 0.0)
    throw std::domain_error("l2_inverse_strength must be > 0");
  if (hyper.max_iterations < 1) throw std::domain_error("max_iterations must be >= 1");
  if (hyper.learning_rate <= 0.0) throw std::domain_error("learning_rate must be > 0");

  KeyModel model;
  model.classes = corpus.class_labels();
  if (model.classes.size() < 2)
    throw std::invalid_argument("corpus must contain at least two classes");
  model.hyper = hyper;
  model.style = corpus.style;
  model.keyboard_id = corpus.keyboard_id;

  const std::size_t n = corpus.samples.size();
  const std::size_t dim = corpus.feature_length();
  const std::size_t c_count = model.classes.size();

  // Population moments so that duplicating the corpus leaves them untouched.
  model.feature_mean.assign(dim, 0.0);
  model.feature_scale.assign(dim, 0.0);
  for (const LabelledSample& s : corpus.samples)
    for (std::size_t j = 0; j < dim; ++j)
      model.feature_mean[j] += s.features.coefficients[j];
  for (double& m : model.feature_mean) m /= static_cast<double>(n);
  for (const LabelledSample& s : corpus.samples)
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = s.features.coefficients[j] - model.feature_mean[j];
      model.feature_scale[j] += d * d;
    }
  for (double& v : model.feature_scale) {
    v = std::sqrt(v / static_cast<double>(n));
    if (v == 0.0) v = 1.0;  // constant feature: pass through centred
  }

  std::vector<std::vector<double>> x(n, std::vector<double>(dim));
  std::vector<std::size_t> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j)
      x[i][j] = (corpus.samples[i].features.coefficients[j] - model.feature_mean[j]) /
                model.feature_scale[j];
    const auto it = std::lower_bound(model.classes.begin(), model.classes.end(),
                                     corpus.samples[i].label);
    y[i] = static_cast<std::size_t>(it - model.classes.begin());
  }

  model.weights.assign(c_count, std::vector<double>(dim, 0.0));
  model.bias.assign(c_count, 0.0);

  // Mean cross-entropy plus (lambda/2)·||W||², lambda = 1/C; bias is left
  // unregularized. The per-sample mean keeps the loss surface independent of
  // corpus duplication.
  const double lambda = 1.0 / hyper.l2_inverse_strength;
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<std::vector<double>> grad_w(c_count, std::vector<double>(dim));
  std::vector<double> grad_b(c_count);

  for (int iter = 0; iter < hyper.max_iterations; ++iter) {
    for (auto& g : grad_w) std::fill(g.begin(), g.end(), 0.0);
    std::fill(grad_b.begin(), grad_b.end(), 0.0);

    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> logits(c_count);
      for (std::size_t c = 0; c < c_count; ++c) {
        double z = model.bias[c];
        const auto& w = model.weights[c];
        for (std::size_t j = 0; j < dim; ++j) z += w[j] * x[i][j];
        logits[c] = z;
      }
      const double zmax = *std::max_element(logits.begin(), logits.end());
      double total = 0.0;
      for (double& z : logits) {
        z = std::exp(z - zmax);
        total += z;
      }
      for (std::size_t c = 0; c < c_count; ++c) {
        const double err = logits[c] / total - (y[i] == c ? 1.0 : 0.0);
        grad_b[c] += err;
        auto& g = grad_w[c];
        for (std::size_t j = 0; j < dim; ++j) g[j] += err * x[i][j];
      }
    }

    for (std::size_t c = 0; c < c_count; ++c) {
      model.bias[c] -= hyper.learning_rate * grad_b[c] * inv_n;
      auto& w = model.weights[c];
      const auto& g = grad_w[c];
      for (std::size_t j = 0; j < dim; ++j)
        w[j] -= hyper.learning_rate * (g[j] * inv_n + lambda * w[j]);
    }
  }
  return model;
}

PredictionList predict(const KeyModel& model, const std::vector<double>& features) {
  if (features.size() != model.feature_length())
    throw std::invalid_argument("feature length does not match model");
  const std::vector<double> probs = class_probabilities(model, standardize(model, features));

  PredictionList list(model.classes.size());
  for (std::size_t c = 0; c < model.classes.size(); ++c)
    list[c] = {model.classes[c], probs[c]};
  std::stable_sort(list.begin(), list.end(), [](const KeyProbability& a, const KeyProbability& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    return a.key < b.key;
  });
  return list;
}

PredictionList predict(const KeyModel& model, const audio::FeatureVector& features) {
  return predict(model, features.coefficients);
}

CrossValidationResult cross_validate(const TrainingCorpus& corpus, int folds,
                                     const TrainHyper& hyper) {
  corpus.validate();
  if (folds < 2) throw std::invalid_argument("cross-validation needs folds >= 2");

  std::map<Key, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < corpus.samples.size(); ++i)
    by_class[corpus.samples[i].label].push_back(i);
  for (const auto& [label, indices] : by_class)
    if (indices.size() < static_cast<std::size_t>(folds))
      throw std::invalid_argument(std::string("class '") + label + "' has " +
                                  std::to_string(indices.size()) +
                                  " samples; stratified folding needs at least " +
                                  std::to_string(folds));

  // Shuffle within each class, then deal round-robin so folds stay stratified.
  std::mt19937_64 rng(hyper.seed);
  std::vector<std::vector<std::size_t>> fold_of(static_cast<std::size_t>(folds));
  for (auto& [label, indices] : by_class) {
    std::shuffle(indices.begin(), indices.end(), rng);
    for (std::size_t i = 0; i < indices.size(); ++i)
      fold_of[i % static_cast<std::size_t>(folds)].push_back(indices[i]);
  }

  CrossValidationResult result;
  result.fold_accuracy.reserve(static_cast<std::size_t>(folds));
  for (int f = 0; f < folds; ++f) {
    TrainingCorpus fit;
    fit.style = corpus.style;
    fit.keyboard_id = corpus.keyboard_id;
    std::vector<std::size_t> held;
    for (int g = 0; g < folds; ++g) {
      const auto& bucket = fold_of[static_cast<std::size_t>(g)];
      if (g == f)
        held = bucket;
      else
        for (std::size_t i : bucket) fit.samples.push_back(corpus.samples[i]);
    }
    const KeyModel model = train(fit, hyper);
    std::size_t hits = 0;
    for (std::size_t i : held) {
      const PredictionList list = predict(model, corpus.samples[i].features);
      if (list.front().key == corpus.samples[i].label) ++hits;
    }
    result.fold_accuracy.push_back(static_cast<double>(hits) /
                                   static_cast<double>(held.size()));
  }
  for (double a : result.fold_accuracy) result.mean_accuracy += a;
  result.mean_accuracy /= static_cast<double>(folds);
  return result;
}

double top_n_accuracy(const KeyModel& model, const std::vector<LabelledSample>& samples,
                      int n) {
  if (samples.empty()) throw std::invalid_argument("top-n accuracy over empty set");
  if (n < 1 || static_cast<std::size_t>(n) > model.classes.size())
    throw std::domain_error("n must fall within [1, class count]");

  std::size_t hits = 0;
  for (const LabelledSample& s : samples) {
    const PredictionList list = predict(model, s.features);
    for (int r = 0; r < n; ++r)
      if (list[static_cast<std::size_t>(r)].key == s.label) {
        ++hits;
        break;
      }
  }
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

}  // namespace keyfuse::classify
