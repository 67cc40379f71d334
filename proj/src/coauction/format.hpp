// SPDX-License-Identifier: MIT
#pragma once

#include <charconv>
#include <string>

namespace coauction {

// Shortest round-trip decimal form; locale independent and deterministic.
inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace coauction
