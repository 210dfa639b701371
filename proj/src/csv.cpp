#include "memfuzz/csv.hpp"

#include <array>
#include <charconv>

namespace memfuzz {

std::string format_double(double v)
{
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return {buf.data(), end};
}

std::string format_short(double v)
{
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), end};
}

} // namespace memfuzz
