#include "keyfuse/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace keyfuse::fusion {

void SearchSpaceSpec::validate() const {
  if (key_set.empty()) throw std::invalid_argument("key set is empty");
  if (length == 0) throw std::invalid_argument("password length must be positive");
}

namespace {

using u128 = unsigned __int128;

constexpr u128 kU64Max = std::numeric_limits<std::uint64_t>::max();

u128 checked_pow(u128 base, std::size_t exp) {
  u128 r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > static_cast<u128>(-1) / base)
      throw std::overflow_error("search space size exceeds 128-bit range");
    r *= base;
  }
  return r;
}

u128 binomial(std::size_t m, std::size_t k) {
  if (k > m) return 0;
  k = std::min(k, m - k);
  u128 r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (m - k + i) / i;
  return r;
}

std::uint64_t to_u64(u128 v, const char* what) {
  if (v > kU64Max) throw std::overflow_error(what);
  return static_cast<std::uint64_t>(v);
}

}  // namespace

std::uint64_t search_space_size(const SearchSpaceSpec& spec) {
  spec.validate();
  const std::size_t m = spec.key_set.size();
  const std::size_t n = spec.length;
  if (m > n) return 0;

  // Inclusion–exclusion over the keys that never appear.
  u128 total = 0;
  for (std::size_t k = 0; k <= m; ++k) {
    const u128 term = binomial(m, k) * checked_pow(m - k, n);
    if (k % 2 == 0)
      total += term;
    else
      total -= term;
  }
  return to_u64(total, "search space size exceeds uint64 range");
}

std::uint64_t relaxed_space_size(const SearchSpaceSpec& spec) {
  spec.validate();
  return to_u64(checked_pow(spec.key_set.size(), spec.length),
                "relaxed space size exceeds uint64 range");
}

std::vector<std::string> generate_search_space(const SearchSpaceSpec& spec,
                                               bool require_all_keys) {
  std::vector<std::string> out;
  for_each_candidate(
      spec, [&out](const std::string& candidate) { out.push_back(candidate); },
      require_all_keys);
  return out;
}

namespace {

double key_points(const classify::PredictionList& list, Key key, KeyScore mode) {
  for (std::size_t r = 0; r < list.size(); ++r)
    if (list[r].key == key)
      return mode == KeyScore::Probability
                 ? list[r].probability
                 : static_cast<double>(list.size() - r);  // rank 0 -> 46 on full lists
  throw std::invalid_argument(std::string("candidate key '") + key +
                              "' missing from prediction list");
}

std::optional<double> timing_at(const TimingBonus& bonus, std::size_t transition) {
  for (const auto& [index, dt] : bonus.timings)
    if (index == transition) return dt;
  return std::nullopt;
}

}  // namespace

ScoredPassword score_password(const std::string& candidate,
                              const std::vector<classify::PredictionList>& predictions,
                              ScoreMethod method,
                              const std::optional<TimingBonus>& bonus) {
  if (candidate.empty()) throw std::invalid_argument("candidate is empty");
  if (predictions.size() != candidate.size())
    throw std::invalid_argument("prediction list count must equal candidate length");

  ScoredPassword scored;
  scored.candidate = candidate;
  scored.method = method;

  double score = method.combine == Combine::Multiply ? 1.0 : 0.0;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    const double p = key_points(predictions[i], candidate[i], method.key_score);
    if (method.combine == Combine::Multiply)
      score *= p;
    else
      score += p;
  }

  if (bonus.has_value()) {
    const double increment = method.key_score == KeyScore::Ldv
                                 ? bonus->ldv_increment
                                 : bonus->probability_increment;
    for (std::size_t i = 0; i + 1 < candidate.size(); ++i) {
      if (candidate[i] != candidate[i + 1]) continue;
      const std::optional<double> dt = timing_at(*bonus, i);
      if (dt.has_value() && *dt <= bonus->threshold) {
        score += increment;
        ++scored.bonus_applied;
      }
    }
  }
  scored.score = score;
  return scored;
}

RankOutcome rank_passwords(const SearchSpaceSpec& spec,
                           const std::vector<classify::PredictionList>& predictions,
                           ScoreMethod method, const std::optional<TimingBonus>& bonus,
                           const std::string& truth, std::size_t top_k,
                           bool require_all_keys) {
  spec.validate();
  if (predictions.size() != spec.length)
    throw std::invalid_argument("prediction list count must equal password length");

  RankOutcome outcome;
  outcome.result.space_size =
      require_all_keys ? search_space_size(spec) : relaxed_space_size(spec);

  // Membership is checkable without enumeration: right length, only key-set
  // characters, and (in the strict space) every key present.
  bool member = truth.size() == spec.length;
  if (member) {
    const KeySet truth_keys = key_set_of(truth);
    member = require_all_keys
                 ? truth_keys == spec.key_set
                 : std::includes(spec.key_set.begin(), spec.key_set.end(),
                                 truth_keys.begin(), truth_keys.end());
  }
  outcome.truth_in_space = member;
  if (!member) return outcome;

  const ScoredPassword truth_scored = score_password(truth, predictions, method, bonus);

  // (score desc, candidate asc) defines the ranking order.
  const auto better = [](const ScoredPassword& a, const ScoredPassword& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.candidate < b.candidate;
  };

  std::uint64_t ahead = 0;
  std::vector<ScoredPassword> top;
  for_each_candidate(
      spec,
      [&](const std::string& candidate) {
        const ScoredPassword scored =
            score_password(candidate, predictions, method, bonus);
        if (candidate != truth && better(scored, truth_scored)) ++ahead;
        if (top_k > 0) {
          if (top.size() < top_k) {
            top.push_back(scored);
            std::push_heap(top.begin(), top.end(), better);
          } else if (better(scored, top.front())) {
            std::pop_heap(top.begin(), top.end(), better);
            top.back() = scored;
            std::push_heap(top.begin(), top.end(), better);
          }
        }
      },
      require_all_keys);
  std::sort_heap(top.begin(), top.end(), better);

  outcome.result.rank = ahead + 1;
  outcome.result.reduction =
      1.0 - static_cast<double>(outcome.result.rank) /
                static_cast<double>(outcome.result.space_size);
  outcome.top = std::move(top);
  return outcome;
}

LayeredGraph build_graph(
    const std::vector<std::vector<Key>>& per_layer_candidates,
    const std::vector<std::map<Key, double>>& node_probabilities,
    const std::vector<std::map<std::pair<Key, Key>, double>>& digram_likelihoods) {
  if (per_layer_candidates.empty()) throw std::invalid_argument("graph needs layers");
  if (node_probabilities.size() != per_layer_candidates.size())
    throw std::invalid_argument("need one probability map per layer");
  if (digram_likelihoods.size() + 1 != per_layer_candidates.size())
    throw std::invalid_argument("need one likelihood map per layer transition");

  const auto probability_of = [&](std::size_t layer, Key key) {
    const auto it = node_probabilities[layer].find(key);
    return it == node_probabilities[layer].end() ? 0.0 : it->second;
  };
  const auto likelihood_of = [&](std::size_t transition, Key u, Key v) {
    const auto it = digram_likelihoods[transition].find({u, v});
    return it == digram_likelihoods[transition].end() ? 0.0 : it->second;
  };

  LayeredGraph graph;
  graph.layers.reserve(per_layer_candidates.size());
  for (const std::vector<Key>& layer : per_layer_candidates) {
    if (layer.empty()) throw std::invalid_argument("graph layer is empty");
    std::vector<Key> sorted = layer;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    graph.layers.push_back(std::move(sorted));
  }

  graph.start_weights.reserve(graph.layers.front().size());
  for (Key v : graph.layers.front())
    graph.start_weights.push_back(probability_of(0, v));

  graph.transitions.resize(graph.layers.size() - 1);
  for (std::size_t k = 0; k + 1 < graph.layers.size(); ++k) {
    auto& matrix = graph.transitions[k];
    matrix.assign(graph.layers[k].size(),
                  std::vector<std::optional<double>>(graph.layers[k + 1].size()));
    for (std::size_t u = 0; u < graph.layers[k].size(); ++u)
      for (std::size_t v = 0; v < graph.layers[k + 1].size(); ++v)
        matrix[u][v] = probability_of(k + 1, graph.layers[k + 1][v]) +
                       likelihood_of(k, graph.layers[k][u], graph.layers[k + 1][v]);
  }
  return graph;
}

namespace {

// Total order for paths: heavier first, then lexicographically smaller word.
bool path_before(const GraphPath& a, const GraphPath& b) {
  if (a.weight != b.weight) return a.weight > b.weight;
  return a.word < b.word;
}

void keep_top(std::vector<GraphPath>& paths, std::size_t k) {
  std::sort(paths.begin(), paths.end(), path_before);
  if (paths.size() > k) paths.resize(k);
}

}  // namespace

std::vector<GraphPath> k_best_paths(const LayeredGraph& graph, std::size_t k) {
  if (k == 0) throw std::domain_error("k must be >= 1");
  if (graph.layers.empty()) return {};

  // Per-node k-best prefixes. Extending every prefix at a node by the same
  // suffix preserves their order, so truncating to k per node loses nothing.
  std::vector<std::vector<GraphPath>> best(graph.layers.front().size());
  for (std::size_t v = 0; v < best.size(); ++v)
    best[v].push_back({std::string(1, graph.layers.front()[v]),
                       graph.start_weights[v]});

  for (std::size_t kk = 0; kk + 1 < graph.layers.size(); ++kk) {
    std::vector<std::vector<GraphPath>> next(graph.layers[kk + 1].size());
    for (std::size_t u = 0; u < graph.layers[kk].size(); ++u) {
      for (std::size_t v = 0; v < graph.layers[kk + 1].size(); ++v) {
        const std::optional<double>& w = graph.transitions[kk][u][v];
        if (!w.has_value()) continue;
        for (const GraphPath& p : best[u])
          next[v].push_back({p.word + graph.layers[kk + 1][v], p.weight + *w});
      }
    }
    for (auto& paths : next) keep_top(paths, k);
    best = std::move(next);
  }

  std::vector<GraphPath> merged;  // end edges weigh 0
  for (const auto& paths : best)
    merged.insert(merged.end(), paths.begin(), paths.end());
  keep_top(merged, k);
  return merged;
}

LayeredGraph prune_repeat_edges(const LayeredGraph& graph,
                                const std::vector<double>& timings,
                                double threshold) {
  if (timings.size() != graph.transitions.size())
    throw std::invalid_argument("need one timing per layer transition");

  LayeredGraph pruned = graph;
  for (std::size_t k = 0; k < pruned.transitions.size(); ++k) {
    if (timings[k] <= threshold) continue;
    for (std::size_t u = 0; u < pruned.layers[k].size(); ++u)
      for (std::size_t v = 0; v < pruned.layers[k + 1].size(); ++v)
        if (pruned.layers[k][u] == pruned.layers[k + 1][v])
          pruned.transitions[k][u][v] = std::nullopt;
  }
  return pruned;
}

std::vector<DictEntry> load_dictionary(std::istream& in) {
  std::vector<DictEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    DictEntry entry;
    entry.password = line;
    entry.popularity_rank = entries.size() + 1;
    entry.key_set = key_set_of(line);
    entry.length = line.size();
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<DictEntry> load_dictionary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dictionary: " + path);
  return load_dictionary(in);
}

std::vector<DictEntry> dictionary_attack(const std::vector<DictEntry>& dictionary,
                                         const KeySet& observed_key_set,
                                         std::size_t length, thermal::TypingStyle typist,
                                         const KeySet& home_row) {
  KeySet target = observed_key_set;
  if (typist == thermal::TypingStyle::TouchTypist)
    target.insert(home_row.begin(), home_row.end());

  std::vector<DictEntry> ranked;
  for (const DictEntry& entry : dictionary)
    if (entry.length == length) ranked.push_back(entry);

  std::stable_sort(ranked.begin(), ranked.end(),
                   [&target](const DictEntry& a, const DictEntry& b) {
                     const int da = thermal::keyset_distance(a.key_set, target);
                     const int db = thermal::keyset_distance(b.key_set, target);
                     if (da != db) return da < db;
                     return a.popularity_rank < b.popularity_rank;
                   });
  return ranked;
}

bool top_n_hit(const std::vector<DictEntry>& ranked, const std::string& truth,
               std::size_t n) {
  const std::size_t limit = std::min(n, ranked.size());
  for (std::size_t i = 0; i < limit; ++i)
    if (ranked[i].password == truth) return true;
  return false;
}

}  // namespace keyfuse::fusion
