#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "smapi/enriched_data.hpp"
#include "smapi/geo.hpp"
#include "smapi/platform.hpp"
#include "smapi/timestamp.hpp"

namespace smapi {

struct Actor {
    PlatformId id;
    std::string displayName;
    std::string type = "person";
    std::string url;
    std::optional<std::string> content; // profile description

    nlohmann::json extensions = nlohmann::json::object();

    bool operator==(const Actor&) const = default;
};

struct ActivityObject {
    PlatformId id;
    std::string type = "post";
    std::string content;
    std::string url;
    std::optional<Timestamp> startTime;
    std::optional<GeoPoint> location;
    std::optional<EnrichedData> enrichedData;

    nlohmann::json extensions = nlohmann::json::object();

    bool operator==(const ActivityObject&) const = default;
};

// One normalized social media item: verb + actor + object.
struct Activity {
    Actor actor;
    ActivityObject object;
    std::string verb = "post";

    nlohmann::json extensions = nlohmann::json::object();

    // canonical "<platform>:<native_id>" of the object
    const std::string& canonical_id() const { return object.id.str(); }
    std::int64_t start_epoch_ms() const {
        return object.startTime ? object.startTime->epoch_ms : 0;
    }

    bool operator==(const Activity&) const = default;
};

using ActivityPtr = std::shared_ptr<const Activity>;

struct ActivityCollection {
    std::vector<ActivityPtr> items;
    std::size_t totalItems = 0;
};

struct Violation {
    std::string field;
    std::string message;

    bool operator==(const Violation&) const = default;
};

struct ValidationResult {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Checks the schema invariants: platform-prefixed ids, actor/object platform
// agreement, coordinate ranges, media url presence, enrichment bounds.
// Violations are data, not failures.
ValidationResult validate_activity(const Activity& a);

} // namespace smapi
