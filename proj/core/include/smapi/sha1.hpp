#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace smapi {

// Minimal SHA-1, used only to derive 40-hex job identifiers. Not a security
// boundary.
std::string sha1_hex(std::string_view data);

} // namespace smapi
