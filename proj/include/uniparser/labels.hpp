#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uniparser/common.hpp"
#include "uniparser/tokenizer.hpp"

namespace uniparser {

enum class TokenLabel : std::uint8_t { Template = 0, Parameter = 1 };

// Character-level matcher built from a ground-truth template. Literal
// characters match exactly, whitespace in the template matches one or more
// separator characters, and each `<*>` is a non-greedy wildcard capture.
// The match is anchored at both ends. Among feasible matches, captures are
// resolved leftmost-shortest: scanning left to right, each wildcard takes
// the shortest capture that still allows a full match (separator runs
// preceding a wildcard consume maximally first, keeping whitespace out of
// captures).
class TemplateMatcher {
 public:
  explicit TemplateMatcher(std::string_view template_text) {
    std::size_t i = 0;
    const std::size_t n = template_text.size();
    while (i < n) {
      if (template_text.compare(i, 3, "<*>") == 0) {
        elements_.push_back({Kind::Wildcard, '\0'});
        i += 3;
      } else if (is_separator(template_text[i])) {
        while (i < n && is_separator(template_text[i])) ++i;
        elements_.push_back({Kind::Separator, '\0'});
      } else {
        elements_.push_back({Kind::Literal, template_text[i]});
        ++i;
      }
    }
  }

  // Per-byte capture mask over raw (true = inside a wildcard capture), or
  // nullopt when the template does not match.
  std::optional<std::vector<bool>> match(std::string_view raw) const {
    const std::size_t m = elements_.size();
    const std::size_t n = raw.size();
    const std::size_t stride = n + 1;

    // sep_run[i] = length of the separator run starting at i
    std::vector<std::size_t> sep_run(n + 1, 0);
    for (std::size_t i = n; i-- > 0;)
      sep_run[i] = is_separator(raw[i]) ? sep_run[i + 1] + 1 : 0;

    // can[j*stride + i] = elements[j..] matches raw[i..]
    std::vector<char> can((m + 1) * stride, 0);
    can[m * stride + n] = 1;
    std::vector<char> suffix_any(stride, 0);  // OR of can[j+1][i..n]

    for (std::size_t j = m + 1; j-- > 1;) {
      const std::size_t row = (j - 1) * stride;
      const std::size_t next = j * stride;
      suffix_any[n] = can[next + n];
      for (std::size_t i = n; i-- > 0;) suffix_any[i] = suffix_any[i + 1] | can[next + i];
      const Element& e = elements_[j - 1];
      for (std::size_t i = 0; i <= n; ++i) {
        char ok = 0;
        switch (e.kind) {
          case Kind::Literal:
            ok = (i < n && raw[i] == e.ch && can[next + i + 1]);
            break;
          case Kind::Separator:
            for (std::size_t len = 1; len <= sep_run[i] && !ok; ++len)
              ok = can[next + i + len];
            break;
          case Kind::Wildcard:
            ok = suffix_any[i];
            break;
        }
        can[row + i] = ok;
      }
    }
    if (!can[0]) return std::nullopt;

    // Walk forward through the unique canonical match.
    std::vector<bool> mask(n, false);
    std::size_t i = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t next = (j + 1) * stride;
      const Element& e = elements_[j];
      switch (e.kind) {
        case Kind::Literal:
          ++i;
          break;
        case Kind::Separator: {
          std::size_t len = sep_run[i];
          while (len >= 1 && !can[next + i + len]) --len;
          i += len;
          break;
        }
        case Kind::Wildcard: {
          std::size_t len = 0;
          while (!can[next + i + len]) ++len;
          for (std::size_t b = i; b < i + len; ++b) mask[b] = true;
          i += len;
          break;
        }
      }
    }
    return mask;
  }

 private:
  enum class Kind : std::uint8_t { Literal, Separator, Wildcard };
  struct Element {
    Kind kind;
    char ch;
  };
  std::vector<Element> elements_;
};

// A token is Parameter iff at least one byte of its span was captured.
inline std::vector<TokenLabel> derive_token_labels(const TokenizedMessage& message,
                                                   std::string_view template_text) {
  const auto mask = TemplateMatcher(template_text).match(message.raw);
  if (!mask) throw AlignmentError(message.raw, std::string(template_text));
  std::vector<TokenLabel> labels;
  labels.reserve(message.tokens.size());
  for (const Token& tok : message.tokens) {
    bool captured = false;
    for (std::size_t b = tok.begin; b < tok.end && !captured; ++b) captured = (*mask)[b];
    labels.push_back(captured ? TokenLabel::Parameter : TokenLabel::Template);
  }
  return labels;
}

}  // namespace uniparser
