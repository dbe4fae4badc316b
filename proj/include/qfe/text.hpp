// Copyright 2026 The QFE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QFE_TEXT_HPP
#define QFE_TEXT_HPP

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace qfe {

inline constexpr std::array<std::string_view, 52> kStopWords = {
    "a",     "about", "all",   "also",  "an",    "and",  "are",  "as",    "at",
    "be",    "been",  "but",   "by",    "can",   "do",   "for",  "from",  "had",
    "has",   "have",  "he",    "her",   "his",   "i",    "if",   "in",    "into",
    "is",    "it",    "its",   "not",   "of",    "on",   "or",   "she",   "so",
    "that",  "the",   "their", "them",  "there", "they", "this", "to",    "was",
    "we",    "were",  "which", "will",  "with",  "you",  "your"};

inline bool is_stop_word(std::string_view word) {
  for (auto s : kStopWords) {
    if (s == word) return true;
  }
  return false;
}

namespace detail {

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

inline bool is_alpha(char c) { return c >= 'a' && c <= 'z'; }

}  // namespace detail

/// Light suffix normalizer: plural stripping, then -ing/-ed with a
/// three-character minimum stem and consonant undoubling.
inline std::string normalize_suffix(std::string word) {
  using detail::ends_with;
  if (word.size() > 4 && ends_with(word, "ies")) {
    word.replace(word.size() - 3, 3, "y");
  } else if (word.size() > 4 && ends_with(word, "es") && !ends_with(word, "ses")) {
    word.resize(word.size() - 2);
  } else if (word.size() > 3 && ends_with(word, "s") && !ends_with(word, "ss") &&
             !ends_with(word, "us") && !ends_with(word, "is")) {
    word.resize(word.size() - 1);
  }

  std::size_t strip = 0;
  if (ends_with(word, "ing") && word.size() - 3 >= 3) {
    strip = 3;
  } else if (ends_with(word, "ed") && word.size() - 2 >= 3) {
    strip = 2;
  }
  if (strip > 0) {
    word.resize(word.size() - strip);
    const std::size_t n = word.size();
    const char last = word[n - 1];
    if (n >= 4 && last == word[n - 2] && detail::is_alpha(last) && !detail::is_vowel(last) &&
        last != 'l' && last != 's' && last != 'z') {
      word.pop_back();
    }
  }
  return word;
}

/// Lowercases ASCII, splits on anything that is not a letter, digit or
/// non-ASCII byte, drops stop words and normalizes suffixes.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&]() {
    if (current.empty()) return;
    if (!is_stop_word(current)) {
      std::string term = normalize_suffix(std::move(current));
      if (!term.empty()) out.push_back(std::move(term));
    }
    current.clear();
  };
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (c >= 'A' && c <= 'Z') {
      current.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80) {
      current.push_back(raw);
    } else {
      flush();
    }
  }
  flush();
  return out;
}

}  // namespace qfe

#endif  // QFE_TEXT_HPP
