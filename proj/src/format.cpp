#include "tdelay/format.hpp"

#include <array>
#include <charconv>

namespace tdelay {

std::string format_roundtrip(double value)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

}  // namespace tdelay
