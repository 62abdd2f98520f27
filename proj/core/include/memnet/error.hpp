// Copyright 2026 The MemNet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MEMNET_ERROR_HPP_
#define MEMNET_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace memnet {

// Broad failure classes. The CLI prints the category as the first token of
// its one-line error message, so the names are part of the tool's interface.
enum class ErrorKind {
  kShape,    // operand shapes or channel counts disagree
  kValue,    // argument outside its domain
  kNumeric,  // NaN/Inf appeared in a forward or backward pass
  kGraph,    // misuse of the autodiff tape
  kIo,       // file could not be opened/read/written
  kFormat,   // file contents are malformed
  kConfig,   // configuration is invalid or inconsistent
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace memnet

#endif  // MEMNET_ERROR_HPP_
