#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>

namespace keyfuse {

using Key = char;
using KeySet = std::set<Key>;

// The 46-key working alphabet: 26 letters, digits 0-9 and the ten symbols
// . = - , ; ' [ ] / \ , listed in ascending ASCII order. Ranked outputs use
// this order to break ties.
inline constexpr std::string_view kAlphabet =
    "',-./0123456789;=[\\]abcdefghijklmnopqrstuvwxyz";

inline constexpr std::size_t kAlphabetSize = 46;
static_assert(kAlphabet.size() == kAlphabetSize);

constexpr bool is_alphabet_key(Key k) {
  return kAlphabet.find(k) != std::string_view::npos;
}

// Index of a key in kAlphabet, or kAlphabetSize if it is not a member.
constexpr std::size_t alphabet_index(Key k) {
  const auto pos = kAlphabet.find(k);
  return pos == std::string_view::npos ? kAlphabetSize : pos;
}

inline KeySet key_set_of(std::string_view text) {
  return KeySet(text.begin(), text.end());
}

inline std::string keyset_to_string(const KeySet& keys) {
  return std::string(keys.begin(), keys.end());
}

}  // namespace keyfuse
