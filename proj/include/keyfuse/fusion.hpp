#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "keyfuse/classify.hpp"
#include "keyfuse/keys.hpp"
#include "keyfuse/thermal.hpp"

namespace keyfuse::fusion {

// ---------------------------------------------------------------------------
// Guided search space
// ---------------------------------------------------------------------------

struct SearchSpaceSpec {
  KeySet key_set;        // keys recovered from the thermal capture
  std::size_t length = 0;  // keystroke count recovered from the audio

  void validate() const;  // std::invalid_argument on empty set / zero length
};

// Strings of the given length over key_set that use every key at least once:
// sum_k (-1)^k C(m,k) (m-k)^n. Zero when m > n. Throws std::overflow_error
// past the uint64 range.
std::uint64_t search_space_size(const SearchSpaceSpec& spec);

// Relaxed variant without the every-key-once constraint: m^n.
std::uint64_t relaxed_space_size(const SearchSpaceSpec& spec);

namespace detail {

// Lexicographic depth-first walk with surjectivity pruning: a branch dies as
// soon as the unused keys outnumber the remaining positions.
template <typename Callback>
void walk_candidates(const std::vector<Key>& keys, std::string& prefix,
                     std::vector<int>& used, std::size_t unused_count,
                     std::size_t length, bool require_all_keys, Callback&& cb) {
  if (prefix.size() == length) {
    cb(const_cast<const std::string&>(prefix));
    return;
  }
  const std::size_t remaining = length - prefix.size();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const bool first_use = used[i] == 0;
    const std::size_t next_unused = unused_count - (first_use ? 1 : 0);
    if (require_all_keys && next_unused > remaining - 1) continue;
    ++used[i];
    prefix.push_back(keys[i]);
    walk_candidates(keys, prefix, used, next_unused, length, require_all_keys, cb);
    prefix.pop_back();
    --used[i];
  }
}

}  // namespace detail

// Streams candidates in lexicographic order without materializing the space.
template <typename Callback>
void for_each_candidate(const SearchSpaceSpec& spec, Callback&& cb,
                        bool require_all_keys = true) {
  spec.validate();
  if (require_all_keys && spec.key_set.size() > spec.length) return;
  const std::vector<Key> keys(spec.key_set.begin(), spec.key_set.end());
  std::string prefix;
  prefix.reserve(spec.length);
  std::vector<int> used(keys.size(), 0);
  detail::walk_candidates(keys, prefix, used, keys.size(), spec.length,
                          require_all_keys, cb);
}

// Materialized form for small spaces (tests, report excerpts).
std::vector<std::string> generate_search_space(const SearchSpaceSpec& spec,
                                               bool require_all_keys = true);

// ---------------------------------------------------------------------------
// Candidate scoring
// ---------------------------------------------------------------------------

enum class Combine { Sum, Multiply };
enum class KeyScore { Probability, Ldv };  // Ldv: list-distance value, top rank -> 46

struct ScoreMethod {
  Combine combine = Combine::Multiply;
  KeyScore key_score = KeyScore::Probability;
};

// Same-key timing bonus: an adjacent repeated character whose inter-keystroke
// gap is at most `threshold` adds the increment to the final combined score.
struct TimingBonus {
  std::vector<std::pair<std::size_t, double>> timings;  // (transition index, dt)
  double threshold = 0.15;
  double ldv_increment = 46.0;
  double probability_increment = 1.0;
};

struct ScoredPassword {
  std::string candidate;
  double score = 0.0;
  ScoreMethod method;
  std::size_t bonus_applied = 0;
};

ScoredPassword score_password(const std::string& candidate,
                              const std::vector<classify::PredictionList>& predictions,
                              ScoreMethod method,
                              const std::optional<TimingBonus>& bonus = std::nullopt);

// ---------------------------------------------------------------------------
// Whole-space ranking
// ---------------------------------------------------------------------------

struct RankResult {
  std::uint64_t rank = 0;  // 1-based
  std::uint64_t space_size = 0;
  double reduction = 0.0;  // 1 - rank/space_size
};

struct RankOutcome {
  bool truth_in_space = false;
  RankResult result;                // valid only when truth_in_space
  std::vector<ScoredPassword> top;  // best candidates, at most top_k
};

// Scores the full space in a streaming pass: the truth's rank is the count of
// candidates strictly better under (score desc, candidate asc), plus one.
// require_all_keys = false switches to the relaxed space (any string over the
// key set), the fallback when thermal false positives make |key_set| > length.
RankOutcome rank_passwords(const SearchSpaceSpec& spec,
                           const std::vector<classify::PredictionList>& predictions,
                           ScoreMethod method, const std::optional<TimingBonus>& bonus,
                           const std::string& truth, std::size_t top_k = 10,
                           bool require_all_keys = true);

// ---------------------------------------------------------------------------
// Layered DAG combiner
// ---------------------------------------------------------------------------

struct LayeredGraph {
  std::vector<std::vector<Key>> layers;  // sorted candidate keys per position
  std::vector<double> start_weights;     // start -> layer-0 node
  // transitions[k][u][v]: weight of layer-k node u -> layer-k+1 node v;
  // nullopt marks a pruned edge.
  std::vector<std::vector<std::vector<std::optional<double>>>> transitions;
};

// edge(u@k -> v@k+1) = probability(v at k+1) + likelihood(digram uv at k);
// start edges carry the first-position probabilities, end edges weigh 0.
LayeredGraph build_graph(
    const std::vector<std::vector<Key>>& per_layer_candidates,
    const std::vector<std::map<Key, double>>& node_probabilities,
    const std::vector<std::map<std::pair<Key, Key>, double>>& digram_likelihoods);

struct GraphPath {
  std::string word;
  double weight = 0.0;
};

// Top-k start->end paths by total weight via per-node k-best dynamic
// programming; ties order lexicographically on the induced string.
std::vector<GraphPath> k_best_paths(const LayeredGraph& graph, std::size_t k);

// Drops u@k -> u@k+1 edges whenever the observed gap at transition k exceeds
// the threshold (too slow to be the same key twice).
LayeredGraph prune_repeat_edges(const LayeredGraph& graph,
                                const std::vector<double>& timings,
                                double threshold = 0.15);

// ---------------------------------------------------------------------------
// Dictionary attack
// ---------------------------------------------------------------------------

struct DictEntry {
  std::string password;
  std::size_t popularity_rank = 0;  // 1-based line order
  KeySet key_set;
  std::size_t length = 0;
};

std::vector<DictEntry> load_dictionary(std::istream& in);
std::vector<DictEntry> load_dictionary(const std::string& path);

// Filters to the observed length, then sorts ascending by key-set distance to
// the target set (observed keys, plus the home row for touch typists);
// equal distances stay in popularity order.
std::vector<DictEntry> dictionary_attack(const std::vector<DictEntry>& dictionary,
                                         const KeySet& observed_key_set,
                                         std::size_t length, thermal::TypingStyle typist,
                                         const KeySet& home_row);

bool top_n_hit(const std::vector<DictEntry>& ranked, const std::string& truth,
               std::size_t n);

}  // namespace keyfuse::fusion
