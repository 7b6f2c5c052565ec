#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace uniparser {

// Half-open byte span into the raw message.
struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

struct TokenizedMessage {
  std::string raw;
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
};

inline bool is_separator(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Characters that split a whitespace-delimited chunk and become one-char
// tokens themselves. Deliberately excludes . / - _ so versions, paths and
// IPs stay whole.
inline bool is_delimiter(char c) {
  switch (c) {
    case '=':
    case ',':
    case ';':
    case ':':
    case '(':
    case ')':
    case '[':
    case ']':
    case '{':
    case '}':
    case '"':
    case '\'':
    case '<':
    case '>':
      return true;
    default:
      return false;
  }
}

// Whitespace runs separate tokens and never yield tokens; each delimiter
// character is its own token; maximal runs of other characters are tokens.
inline TokenizedMessage tokenize(std::string_view raw) {
  TokenizedMessage out;
  out.raw.assign(raw);
  const std::size_t n = raw.size();
  std::size_t i = 0;
  while (i < n) {
    if (is_separator(raw[i])) {
      ++i;
      continue;
    }
    if (is_delimiter(raw[i])) {
      out.tokens.push_back({std::string(1, raw[i]), i, i + 1});
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && !is_separator(raw[j]) && !is_delimiter(raw[j])) ++j;
    out.tokens.push_back({std::string(raw.substr(i, j - i)), i, j});
    i = j;
  }
  return out;
}

}  // namespace uniparser
