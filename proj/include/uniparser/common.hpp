#pragma once

#include <stdexcept>
#include <string>

namespace uniparser {

// Bad input data: missing files/columns, malformed rows, shape mismatches
// in model files. CLI maps this to exit code 2.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite values where finite ones are required (exploding loss,
// corrupt gradients). CLI maps this to exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A ground-truth template that does not match its raw message.
struct AlignmentError : DataError {
  AlignmentError(std::string raw_, std::string template_)
      : DataError("template does not align with message: template=\"" + template_ +
                  "\" raw=\"" + raw_ + "\""),
        raw(std::move(raw_)),
        template_text(std::move(template_)) {}
  std::string raw;
  std::string template_text;
};

}  // namespace uniparser
