// Copyright 2026 The accentid authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ACCENTID_COMMON_ERROR_HPP_
#define ACCENTID_COMMON_ERROR_HPP_

#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace accentid {

// Stable error categories. The CLI maps these onto machine-readable error
// JSON, so codes are part of the external interface.
enum class ErrorCode {
  kInvalidArgument,  // caller violated a precondition
  kFormat,           // malformed file contents
  kUnsupported,      // well-formed but outside what we handle
  kIo,               // filesystem / OS failure
  kState,            // object used before it was ready
  kNumeric,          // non-finite values where finite ones are required
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

namespace detail {
[[noreturn]] void throw_error(ErrorCode code, const std::string& message);
}  // namespace detail

}  // namespace accentid

#define ACCENTID_CHECK(cond, code, msg)                                \
  do {                                                                 \
    if (!(cond)) {                                                     \
      std::ostringstream os_;                                          \
      os_ << msg;                                                      \
      ::accentid::detail::throw_error((code), os_.str());              \
    }                                                                  \
  } while (0)

#define ACCENTID_CHECK_ARG(cond, msg) \
  ACCENTID_CHECK(cond, ::accentid::ErrorCode::kInvalidArgument, msg)

#endif  // ACCENTID_COMMON_ERROR_HPP_
