#include "smapi/activity_json.hpp"

#include <cmath>
#include <cstdint>
#include <set>

#include "smapi/errors.hpp"

namespace smapi {

using nlohmann::json;

namespace {

// integral doubles serialize as integers ("absFearFactor": 0, not 0.0)
json number(double v) {
    if (std::isfinite(v) && v == std::floor(v) &&
        std::abs(v) <= 9007199254740992.0) {
        return static_cast<std::int64_t>(v);
    }
    return v;
}

void merge_extensions(json& target, const json& extensions) {
    if (!extensions.is_object()) return;
    for (auto it = extensions.begin(); it != extensions.end(); ++it) {
        target[it.key()] = it.value();
    }
}

json collect_unknown(const json& source, const std::set<std::string>& known) {
    json out = json::object();
    for (auto it = source.begin(); it != source.end(); ++it) {
        if (!known.contains(it.key())) out[it.key()] = it.value();
    }
    return out;
}

[[noreturn]] void schema_fail(const std::string& field, const std::string& what) {
    throw SchemaError(field + ": " + what);
}

const json& require_object(const json& j, const char* key, const std::string& field) {
    auto it = j.find(key);
    if (it == j.end()) schema_fail(field, "missing");
    if (!it->is_object()) schema_fail(field, "expected an object");
    return *it;
}

std::string get_string(const json& j, const char* key, const std::string& field,
                       std::string fallback = {}) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_string()) schema_fail(field, "expected a string");
    return it->get<std::string>();
}

double get_number(const json& j, const char* key, const std::string& field) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) schema_fail(field, "expected a number");
    return it->get<double>();
}

std::optional<double> opt_number(const json& j, const char* key, const std::string& field) {
    auto it = j.find(key);
    if (it == j.end()) return std::nullopt;
    if (!it->is_number()) schema_fail(field, "expected a number");
    return it->get<double>();
}

std::optional<std::int64_t> opt_integer(const json& j, const char* key,
                                        const std::string& field) {
    auto it = j.find(key);
    if (it == j.end()) return std::nullopt;
    if (it->is_number_integer()) return it->get<std::int64_t>();
    if (it->is_number()) {
        double v = it->get<double>();
        if (v == std::floor(v)) return static_cast<std::int64_t>(v);
    }
    schema_fail(field, "expected an integer");
}

std::optional<std::string> opt_string(const json& j, const char* key,
                                      const std::string& field) {
    auto it = j.find(key);
    if (it == j.end()) return std::nullopt;
    if (!it->is_string()) schema_fail(field, "expected a string");
    return it->get<std::string>();
}

std::optional<std::vector<std::string>> opt_string_list(const json& j, const char* key,
                                                        const std::string& field) {
    auto it = j.find(key);
    if (it == j.end()) return std::nullopt;
    if (!it->is_array()) schema_fail(field, "expected an array of strings");
    std::vector<std::string> out;
    for (const auto& item : *it) {
        if (!item.is_string()) schema_fail(field, "expected an array of strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

json geo_to_json(const GeoPoint& g) {
    json j;
    if (g.displayName) j["displayName"] = *g.displayName;
    j["latitude"] = number(g.latitude);
    j["longitude"] = number(g.longitude);
    if (g.altitude) j["altitude"] = number(*g.altitude);
    j["type"] = g.type;
    merge_extensions(j, g.extensions);
    return j;
}

GeoPoint geo_from_json(const json& j, const std::string& field) {
    GeoPoint g;
    g.latitude = get_number(j, "latitude", field + ".latitude");
    g.longitude = get_number(j, "longitude", field + ".longitude");
    g.displayName = opt_string(j, "displayName", field + ".displayName");
    g.altitude = opt_number(j, "altitude", field + ".altitude");
    g.type = get_string(j, "type", field + ".type", "place");
    g.extensions = collect_unknown(j, {"latitude", "longitude", "displayName", "altitude", "type"});
    return g;
}

json media_to_json(const MediaAttachment& m) {
    json j;
    j["mediaType"] = m.mediaType;
    j["type"] = std::string(to_string(m.type));
    j["url"] = m.url;
    merge_extensions(j, m.extensions);
    return j;
}

MediaAttachment media_from_json(const json& j, const std::string& field) {
    MediaAttachment m;
    m.mediaType = get_string(j, "mediaType", field + ".mediaType");
    m.type = media_type_from_string(get_string(j, "type", field + ".type", "other"));
    m.url = get_string(j, "url", field + ".url");
    m.extensions = collect_unknown(j, {"mediaType", "type", "url"});
    return m;
}

json actor_to_json(const Actor& a) {
    json j;
    if (a.content) j["content"] = *a.content;
    j["displayName"] = a.displayName;
    j["id"] = a.id.str();
    j["type"] = a.type;
    j["url"] = a.url;
    merge_extensions(j, a.extensions);
    return j;
}

Actor actor_from_json(const json& j) {
    Actor a;
    a.id = PlatformId(get_string(j, "id", "actor.id"));
    a.displayName = get_string(j, "displayName", "actor.displayName");
    a.type = get_string(j, "type", "actor.type", "person");
    a.url = get_string(j, "url", "actor.url");
    a.content = opt_string(j, "content", "actor.content");
    a.extensions = collect_unknown(j, {"id", "displayName", "type", "url", "content"});
    return a;
}

const std::set<std::string> kEnrichedKeys = {
    "absFearFactor",  "absHappinessFactor", "convertedEmoticons", "convertedSlang",
    "embeddedUrls",   "language",           "tags",               "mentions",
    "media",          "numOfCharacters",    "numOfWords",         "avgWordLength",
    "wordsToSentencesRatio", "numPunctuation", "syllablesPerWord", "entropy",
    "numRetweets",    "numLikes",
};

} // namespace

json enriched_data_to_json(const EnrichedData& e) {
    json j = json::object();
    if (e.absFearFactor) j["absFearFactor"] = number(*e.absFearFactor);
    if (e.absHappinessFactor) j["absHappinessFactor"] = number(*e.absHappinessFactor);
    if (e.convertedEmoticons) j["convertedEmoticons"] = *e.convertedEmoticons;
    if (e.convertedSlang) j["convertedSlang"] = *e.convertedSlang;
    if (e.embeddedUrls) j["embeddedUrls"] = *e.embeddedUrls;
    if (e.language) j["language"] = *e.language;
    if (e.tags) j["tags"] = *e.tags;
    if (e.mentions) j["mentions"] = *e.mentions;
    if (e.media) j["media"] = media_to_json(*e.media);
    if (e.numOfCharacters) j["numOfCharacters"] = *e.numOfCharacters;
    if (e.numOfWords) j["numOfWords"] = *e.numOfWords;
    if (e.avgWordLength) j["avgWordLength"] = number(*e.avgWordLength);
    if (e.wordsToSentencesRatio) j["wordsToSentencesRatio"] = number(*e.wordsToSentencesRatio);
    if (e.numPunctuation) j["numPunctuation"] = *e.numPunctuation;
    if (e.syllablesPerWord) j["syllablesPerWord"] = number(*e.syllablesPerWord);
    if (e.entropy) j["entropy"] = number(*e.entropy);
    if (e.numRetweets) j["numRetweets"] = *e.numRetweets;
    if (e.numLikes) j["numLikes"] = *e.numLikes;
    merge_extensions(j, e.extensions);
    return j;
}

EnrichedData enriched_data_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("object.enrichedData: expected an object");
    const std::string f = "object.enrichedData";
    EnrichedData e;
    e.absFearFactor = opt_number(j, "absFearFactor", f + ".absFearFactor");
    e.absHappinessFactor = opt_number(j, "absHappinessFactor", f + ".absHappinessFactor");
    e.convertedEmoticons = opt_string(j, "convertedEmoticons", f + ".convertedEmoticons");
    e.convertedSlang = opt_string(j, "convertedSlang", f + ".convertedSlang");
    e.embeddedUrls = opt_string_list(j, "embeddedUrls", f + ".embeddedUrls");
    e.language = opt_string(j, "language", f + ".language");
    e.tags = opt_string_list(j, "tags", f + ".tags");
    e.mentions = opt_string_list(j, "mentions", f + ".mentions");
    if (auto it = j.find("media"); it != j.end()) {
        if (!it->is_object()) schema_fail(f + ".media", "expected an object");
        e.media = media_from_json(*it, f + ".media");
    }
    e.numOfCharacters = opt_integer(j, "numOfCharacters", f + ".numOfCharacters");
    e.numOfWords = opt_integer(j, "numOfWords", f + ".numOfWords");
    e.avgWordLength = opt_number(j, "avgWordLength", f + ".avgWordLength");
    e.wordsToSentencesRatio = opt_number(j, "wordsToSentencesRatio", f + ".wordsToSentencesRatio");
    e.numPunctuation = opt_integer(j, "numPunctuation", f + ".numPunctuation");
    e.syllablesPerWord = opt_number(j, "syllablesPerWord", f + ".syllablesPerWord");
    e.entropy = opt_number(j, "entropy", f + ".entropy");
    e.numRetweets = opt_integer(j, "numRetweets", f + ".numRetweets");
    e.numLikes = opt_integer(j, "numLikes", f + ".numLikes");
    e.extensions = collect_unknown(j, kEnrichedKeys);
    return e;
}

json activity_to_json(const Activity& a) {
    json j;
    j["actor"] = actor_to_json(a.actor);

    json obj;
    obj["content"] = a.object.content;
    if (a.object.enrichedData) obj["enrichedData"] = enriched_data_to_json(*a.object.enrichedData);
    obj["id"] = a.object.id.str();
    if (a.object.location) obj["location"] = geo_to_json(*a.object.location);
    if (a.object.startTime) obj["startTime"] = a.object.startTime->to_iso8601();
    obj["type"] = a.object.type;
    obj["url"] = a.object.url;
    merge_extensions(obj, a.object.extensions);
    j["object"] = obj;

    // "post" is the default verb and stays implicit, matching the wire format
    if (a.verb != "post") j["type"] = a.verb;
    merge_extensions(j, a.extensions);
    return j;
}

Activity activity_from_json(const json& doc) {
    if (!doc.is_object()) throw SchemaError("document: expected a JSON object");

    Activity a;
    a.actor = actor_from_json(require_object(doc, "actor", "actor"));

    const json& obj = require_object(doc, "object", "object");
    a.object.id = PlatformId(get_string(obj, "id", "object.id"));
    a.object.type = get_string(obj, "type", "object.type", "post");
    a.object.content = get_string(obj, "content", "object.content");
    a.object.url = get_string(obj, "url", "object.url");
    if (auto st = opt_string(obj, "startTime", "object.startTime")) {
        auto parsed = Timestamp::parse_iso8601(*st);
        if (!parsed) schema_fail("object.startTime", "not an ISO-8601 timestamp: " + *st);
        a.object.startTime = *parsed;
    }
    if (auto it = obj.find("location"); it != obj.end()) {
        if (!it->is_object()) schema_fail("object.location", "expected an object");
        a.object.location = geo_from_json(*it, "object.location");
    }
    if (auto it = obj.find("enrichedData"); it != obj.end()) {
        a.object.enrichedData = enriched_data_from_json(*it);
    }
    a.object.extensions = collect_unknown(
        obj, {"id", "type", "content", "url", "startTime", "location", "enrichedData"});

    a.verb = get_string(doc, "type", "type", "");
    if (a.verb.empty()) a.verb = get_string(doc, "verb", "verb", "post");
    a.extensions = collect_unknown(doc, {"actor", "object", "type", "verb"});
    return a;
}

Activity parse_activity(std::string_view document) {
    json doc = json::parse(document, nullptr, false);
    if (doc.is_discarded()) throw SchemaError("document: malformed JSON");
    return activity_from_json(doc);
}

std::string serialize_activity(const Activity& a) {
    auto validation = validate_activity(a);
    if (!validation.ok()) {
        std::string msg = "refusing to serialize invalid activity:";
        for (const auto& v : validation.violations) {
            msg += " [" + v.field + "] " + v.message + ";";
        }
        throw SchemaError(msg);
    }
    return activity_to_json(a).dump();
}

json collection_to_json(const ActivityCollection& c) {
    json j;
    j["type"] = "Collection";
    j["totalItems"] = c.totalItems;
    json items = json::array();
    for (const auto& a : c.items) items.push_back(activity_to_json(*a));
    j["items"] = items;
    return j;
}

ActivityCollection collection_from_json(const json& doc) {
    if (!doc.is_object()) throw SchemaError("collection: expected a JSON object");
    auto it = doc.find("items");
    if (it == doc.end() || !it->is_array()) throw SchemaError("collection.items: expected an array");
    ActivityCollection c;
    for (const auto& item : *it) {
        c.items.push_back(std::make_shared<Activity>(activity_from_json(item)));
    }
    c.totalItems = c.items.size();
    return c;
}

} // namespace smapi
