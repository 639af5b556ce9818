#include "smapi/activity.hpp"

#include <cctype>

namespace smapi {

std::string_view to_string(MediaType t) {
    switch (t) {
    case MediaType::Photo: return "photo";
    case MediaType::Video: return "video";
    case MediaType::Other: return "other";
    }
    return "other";
}

MediaType media_type_from_string(std::string_view s) {
    if (s == "photo") return MediaType::Photo;
    if (s == "video") return MediaType::Video;
    return MediaType::Other;
}

namespace {

void check_platform_id(const PlatformId& id, const std::string& field,
                       std::vector<Violation>& out) {
    if (id.empty()) {
        out.push_back({field, "id missing"});
        return;
    }
    if (id.str().find(':') == std::string::npos) {
        out.push_back({field, "id missing platform prefix"});
        return;
    }
    if (!id.platform()) {
        out.push_back({field, "id names an unknown platform"});
    }
    if (id.native_id().empty()) {
        out.push_back({field, "id has empty native id"});
    }
}

bool known_language(const std::string& code) {
    if (code == "und") return true;
    if (code.size() != 2) return false;
    return std::islower(static_cast<unsigned char>(code[0])) &&
           std::islower(static_cast<unsigned char>(code[1]));
}

void check_enriched(const EnrichedData& e, std::vector<Violation>& out) {
    auto non_negative = [&](const auto& opt, const char* field) {
        if (opt && *opt < 0) out.push_back({field, "must be non-negative"});
    };
    non_negative(e.absFearFactor, "object.enrichedData.absFearFactor");
    non_negative(e.absHappinessFactor, "object.enrichedData.absHappinessFactor");
    non_negative(e.numOfCharacters, "object.enrichedData.numOfCharacters");
    non_negative(e.numOfWords, "object.enrichedData.numOfWords");
    non_negative(e.numPunctuation, "object.enrichedData.numPunctuation");
    non_negative(e.entropy, "object.enrichedData.entropy");
    non_negative(e.numRetweets, "object.enrichedData.numRetweets");
    non_negative(e.numLikes, "object.enrichedData.numLikes");
    if (e.language && !known_language(*e.language)) {
        out.push_back({"object.enrichedData.language", "not an ISO-639-1 code or \"und\""});
    }
    if (e.tags) {
        for (const auto& t : *e.tags) {
            if (!t.empty() && t.front() == '#') {
                out.push_back({"object.enrichedData.tags", "tag keeps '#' prefix: " + t});
            }
        }
    }
    if (e.mentions) {
        for (const auto& m : *e.mentions) {
            if (!m.empty() && m.front() == '@') {
                out.push_back({"object.enrichedData.mentions", "mention keeps '@' prefix: " + m});
            }
        }
    }
    if (e.media && e.media->url.empty()) {
        out.push_back({"object.enrichedData.media.url", "url must be non-empty"});
    }
}

} // namespace

ValidationResult validate_activity(const Activity& a) {
    ValidationResult result;
    auto& out = result.violations;

    if (a.verb.empty()) out.push_back({"verb", "verb must be non-empty"});

    check_platform_id(a.actor.id, "actor.id", out);
    check_platform_id(a.object.id, "object.id", out);

    auto actor_platform = a.actor.id.platform();
    auto object_platform = a.object.id.platform();
    if (actor_platform && object_platform && *actor_platform != *object_platform) {
        out.push_back({"actor.id", "actor platform differs from object platform"});
    }

    if (!a.object.startTime) {
        out.push_back({"object.startTime", "startTime missing"});
    }

    if (a.object.location) {
        const auto& loc = *a.object.location;
        if (loc.latitude < -90.0 || loc.latitude > 90.0) {
            out.push_back({"object.location.latitude", "latitude out of range"});
        }
        if (loc.longitude < -180.0 || loc.longitude > 180.0) {
            out.push_back({"object.location.longitude", "longitude out of range"});
        }
    }

    if (a.object.enrichedData) check_enriched(*a.object.enrichedData, out);

    return result;
}

} // namespace smapi
