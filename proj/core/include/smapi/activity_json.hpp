#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "smapi/activity.hpp"

namespace smapi {

// Document rendering follows the ActivityStreams 2.0 member names. Fields
// with no value are omitted, unknown keys captured at parse time are merged
// back in, and real numbers with integral values are written as integers so
// documents round-trip byte-identically.
nlohmann::json activity_to_json(const Activity& a);
nlohmann::json enriched_data_to_json(const EnrichedData& e);
nlohmann::json collection_to_json(const ActivityCollection& c);

// Refuses to serialize an activity that fails validate_activity.
std::string serialize_activity(const Activity& a);

// Throws SchemaError on malformed JSON, missing actor/object, or
// wrongly-typed members. Unknown keys land in the extension maps.
Activity parse_activity(std::string_view document);
Activity activity_from_json(const nlohmann::json& doc);
EnrichedData enriched_data_from_json(const nlohmann::json& doc);

ActivityCollection collection_from_json(const nlohmann::json& doc);

} // namespace smapi
