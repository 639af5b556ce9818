#pragma once

#include <optional>
#include <string>

#include <json.hpp>

namespace smapi {

// "place" object: latitude/longitude in decimal degrees, altitude accepted
// but unused downstream.
struct GeoPoint {
    double latitude = 0.0;
    double longitude = 0.0;
    std::optional<std::string> displayName;
    std::optional<double> altitude;
    std::string type = "place";

    nlohmann::json extensions = nlohmann::json::object();

    bool operator==(const GeoPoint&) const = default;
};

struct GeoCircle {
    double latitude = 0.0;
    double longitude = 0.0;
    double radius_km = 0.0;

    bool contains(double lat, double lon) const;

    bool operator==(const GeoCircle&) const = default;
};

// Great-circle distance in kilometers.
double haversine_km(double lat1, double lon1, double lat2, double lon2);

} // namespace smapi
