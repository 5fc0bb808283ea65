#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>

#include <json.hpp>

namespace oasp {
namespace detail {

// Integral values print without a decimal point; everything else gets the
// shortest form that round-trips. Keeps CSV cells and JSON numbers stable
// across runs of the same build.
inline std::string format_number(double v) {
    if (v == std::floor(v) && std::abs(v) <= 1e15)
        return std::to_string(static_cast<long long>(v));
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

// Same idea for JSON: integer-valued rewards serialize as integers so integer
// instances round-trip bit-exactly.
inline nlohmann::json json_number(double v) {
    if (v == std::floor(v) && std::abs(v) <= 9.007199254740992e15)
        return static_cast<std::int64_t>(v);
    return v;
}

}  // namespace detail
}  // namespace oasp
