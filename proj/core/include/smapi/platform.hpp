#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace smapi {

enum class Platform {
    Facebook,
    GooglePlus,
    Instagram,
    Twitter,
    YouTube,
};

inline constexpr std::array<Platform, 5> kAllPlatforms = {
    Platform::Facebook, Platform::GooglePlus, Platform::Instagram,
    Platform::Twitter,  Platform::YouTube,
};

std::string_view to_string(Platform p);

// Accepts the canonical lowercase names plus the spellings clients tend to
// send ("Google+", "YouTube", ...). Returns nullopt for unknown platforms.
std::optional<Platform> parse_platform(std::string_view name);

// Canonical "<platform>:<native_id>" identifier, e.g.
// "twitter:823724465664883940". The first ':' splits platform from native id;
// the raw text is kept so malformed ids surface as validation violations
// instead of parse failures.
class PlatformId {
public:
    PlatformId() = default;
    explicit PlatformId(std::string canonical) : value_(std::move(canonical)) {}
    PlatformId(Platform platform, std::string_view native_id);

    const std::string& str() const { return value_; }
    bool empty() const { return value_.empty(); }

    // nullopt when there is no ':' or the prefix names no known platform
    std::optional<Platform> platform() const;
    std::string_view native_id() const;

    bool valid() const { return platform().has_value() && !native_id().empty(); }

    bool operator==(const PlatformId&) const = default;
    auto operator<=>(const PlatformId&) const = default;

private:
    std::string value_;
};

} // namespace smapi
