// storyalign/error.hpp

// Copyright 2026  The Storyalign Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef STORYALIGN_ERROR_HPP_
#define STORYALIGN_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace storyalign {

/// All library failures are reported as Error. The code is a short stable
/// machine-readable tag ("validation", "bad-magic", "input-not-found", ...)
/// suitable for exit-status mapping and tests; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

namespace errc {
inline constexpr const char* kValidation = "validation";
inline constexpr const char* kStructural = "structural";
inline constexpr const char* kParse = "parse";
inline constexpr const char* kBadMagic = "bad-magic";
inline constexpr const char* kTruncated = "truncated-payload";
inline constexpr const char* kNonFinite = "non-finite";
inline constexpr const char* kRefused = "refused";
inline constexpr const char* kInputNotFound = "input-not-found";
inline constexpr const char* kIo = "io";
inline constexpr const char* kUsage = "usage";
}  // namespace errc

}  // namespace storyalign

#endif  // STORYALIGN_ERROR_HPP_
