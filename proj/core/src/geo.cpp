#include "smapi/geo.hpp"

#include <cmath>

namespace smapi {

namespace {
constexpr double kEarthRadiusKm = 6371.0088;
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
} // namespace

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
    double phi1 = lat1 * kDegToRad;
    double phi2 = lat2 * kDegToRad;
    double dphi = (lat2 - lat1) * kDegToRad;
    double dlambda = (lon2 - lon1) * kDegToRad;
    double a = std::sin(dphi / 2) * std::sin(dphi / 2) +
               std::cos(phi1) * std::cos(phi2) * std::sin(dlambda / 2) * std::sin(dlambda / 2);
    return 2 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

bool GeoCircle::contains(double lat, double lon) const {
    return haversine_km(latitude, longitude, lat, lon) <= radius_km;
}

} // namespace smapi
