// Copyright 2026 The wirecut Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wirecut {

enum class ErrorCode {
    InvalidArgument,
    InvalidCut,
    CutDoesNotSeparate,
    Capacity,
    Invariant,
    IncompleteInput,
    Schema,
    Io,
};

inline std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument:
            return "invalid-argument";
        case ErrorCode::InvalidCut:
            return "invalid-cut";
        case ErrorCode::CutDoesNotSeparate:
            return "cut-does-not-separate";
        case ErrorCode::Capacity:
            return "capacity";
        case ErrorCode::Invariant:
            return "invariant";
        case ErrorCode::IncompleteInput:
            return "incomplete-input";
        case ErrorCode::Schema:
            return "schema";
        case ErrorCode::Io:
            return "io";
    }
    return "unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
    }

    ErrorCode code() const noexcept {
        return code_;
    }

   private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &message) {
    throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string &message) {
    if (!condition) {
        fail(code, message);
    }
}

}  // namespace wirecut
