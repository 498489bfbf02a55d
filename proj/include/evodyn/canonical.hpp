// canonical.hpp — byte-stable formatting helpers shared by serialization
// and config digests.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace evodyn {

// Shortest %.17g rendering; round-trips every double exactly.
std::string format_real17(double value);

std::uint64_t fnv1a64(std::string_view bytes);

// 16 lowercase hex digits.
std::string to_hex(std::uint64_t value);

}  // namespace evodyn
