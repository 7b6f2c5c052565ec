#pragma once

#include <string>

namespace uniparser {

// 96 character slots: the 95 printable ASCII characters 0x20..0x7E in
// order, then one out-of-vocabulary slot. Every byte maps somewhere.
class CharVocabulary {
 public:
  static constexpr int kSize = 96;
  static constexpr int kOovIndex = 95;
  static constexpr char kFirstPrintable = 0x20;
  static constexpr char kLastPrintable = 0x7E;

  static int index_of(char c) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (u >= 0x20 && u <= 0x7E) return u - 0x20;
    return kOovIndex;
  }

  // The 95 printable slots as one ordered string (serialization form).
  static std::string printable() {
    std::string s;
    s.reserve(95);
    for (int c = 0x20; c <= 0x7E; ++c) s.push_back(static_cast<char>(c));
    return s;
  }
};

}  // namespace uniparser
