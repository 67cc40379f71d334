// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

namespace coauction {

enum class ErrorCode {
    InvalidArgument,
    Domain,
    DegenerateDensity,
    Bracket,
    Convergence,
    ConditionViolated,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, ErrorCode code, const std::string& what) {
    if (!ok) fail(code, what);
}

} // namespace coauction
