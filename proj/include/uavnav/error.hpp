// Copyright 2026 The uavnav Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace uavnav {

enum class ErrorCode {
  InvalidArgument,
  Io,
  Parse,
  Infeasible,
  Protocol,
  Network,
  Internal,
};

// Base exception of the core library. The C API maps the code onto a status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class ProtocolFault { Timeout, Malformed, VersionMismatch, Validation, Connection };

// Policy or peer broke the wire contract. The harness records these as a
// protocol-error outcome instead of failing the run.
class ProtocolError : public Error {
 public:
  ProtocolError(ProtocolFault fault, const std::string& what) : Error(ErrorCode::Protocol, what), fault_(fault) {}
  ProtocolFault fault() const noexcept { return fault_; }

 private:
  ProtocolFault fault_;
};

inline void require(bool cond, const std::string& what, ErrorCode code = ErrorCode::InvalidArgument) {
  if (!cond) throw Error(code, what);
}

}  // namespace uavnav
