#include "smapi/platform.hpp"

#include <algorithm>
#include <cctype>

namespace smapi {

std::string_view to_string(Platform p) {
    switch (p) {
    case Platform::Facebook:   return "facebook";
    case Platform::GooglePlus: return "googleplus";
    case Platform::Instagram:  return "instagram";
    case Platform::Twitter:    return "twitter";
    case Platform::YouTube:    return "youtube";
    }
    return "unknown";
}

std::optional<Platform> parse_platform(std::string_view name) {
    std::string lowered(name);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    lowered.erase(std::remove_if(lowered.begin(), lowered.end(),
                                 [](char c) { return c == '+' || c == ' ' || c == '-'; }),
                  lowered.end());
    if (lowered == "facebook") return Platform::Facebook;
    if (lowered == "googleplus" || lowered == "google") return Platform::GooglePlus;
    if (lowered == "instagram") return Platform::Instagram;
    if (lowered == "twitter") return Platform::Twitter;
    if (lowered == "youtube") return Platform::YouTube;
    return std::nullopt;
}

PlatformId::PlatformId(Platform platform, std::string_view native_id)
    : value_(std::string(to_string(platform)) + ":" + std::string(native_id)) {}

std::optional<Platform> PlatformId::platform() const {
    auto colon = value_.find(':');
    if (colon == std::string::npos) return std::nullopt;
    return parse_platform(std::string_view(value_).substr(0, colon));
}

std::string_view PlatformId::native_id() const {
    auto colon = value_.find(':');
    if (colon == std::string::npos) return {};
    return std::string_view(value_).substr(colon + 1);
}

} // namespace smapi
