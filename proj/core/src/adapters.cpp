#include "smapi/adapters.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <mutex>
#include <sstream>

#include "smapi/errors.hpp"
#include "smapi/query.hpp"
#include "smapi/text.hpp"

namespace smapi {

using nlohmann::json;

PlatformCapabilities default_capabilities(Platform p) {
    using Op = QueryOperator;
    PlatformCapabilities caps;
    switch (p) {
    case Platform::Twitter:
        caps.operators = {Op::And, Op::Or, Op::Not, Op::Phrase};
        caps.nativeGeoFilter = true;
        caps.nativeTimeFilter = true;
        caps.maxResultsPerRequest = 100;
        break;
    case Platform::YouTube:
        caps.operators = {Op::And, Op::Or, Op::Not, Op::Phrase};
        caps.nativeGeoFilter = true;
        caps.nativeTimeFilter = true;
        caps.maxResultsPerRequest = 50;
        break;
    case Platform::GooglePlus:
        caps.operators = {Op::And, Op::Or, Op::Not, Op::Phrase};
        caps.nativeGeoFilter = false;
        caps.nativeTimeFilter = false;
        caps.maxResultsPerRequest = 20;
        break;
    case Platform::Facebook:
        caps.operators = {Op::And};
        caps.nativeGeoFilter = false;
        caps.nativeTimeFilter = true;
        caps.maxResultsPerRequest = 100;
        break;
    case Platform::Instagram:
        caps.operators = {};
        caps.keywordSearch = false;
        caps.nativeGeoFilter = false;
        caps.nativeTimeFilter = false;
        caps.maxResultsPerRequest = 33;
        break;
    }
    return caps;
}

namespace {

[[noreturn]] void mapping_fail(Platform p, const std::string& what) {
    throw SchemaError(std::string(to_string(p)) + " record: " + what);
}

std::string need_string(const json& j, const char* key, Platform p) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
        mapping_fail(p, std::string("missing or non-string \"") + key + "\"");
    }
    return it->get<std::string>();
}

const json* find_path(const json& j, std::initializer_list<const char*> path) {
    const json* cur = &j;
    for (const char* key : path) {
        if (!cur->is_object()) return nullptr;
        auto it = cur->find(key);
        if (it == cur->end()) return nullptr;
        cur = &*it;
    }
    return cur;
}

std::optional<std::int64_t> int_at(const json& j, std::initializer_list<const char*> path) {
    const json* v = find_path(j, path);
    if (!v) return std::nullopt;
    if (v->is_number_integer()) return v->get<std::int64_t>();
    if (v->is_number()) return static_cast<std::int64_t>(v->get<double>());
    if (v->is_string()) {
        try {
            return std::stoll(v->get<std::string>());
        } catch (...) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

std::optional<std::string> string_at(const json& j, std::initializer_list<const char*> path) {
    const json* v = find_path(j, path);
    if (!v || !v->is_string()) return std::nullopt;
    return v->get<std::string>();
}

std::optional<double> double_at(const json& j, std::initializer_list<const char*> path) {
    const json* v = find_path(j, path);
    if (!v || !v->is_number()) return std::nullopt;
    return v->get<double>();
}

// "Wed Feb 01 10:30:47 +0100 2017"
std::optional<Timestamp> parse_ctime_style(const std::string& s) {
    static const char* months[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                   "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    std::istringstream in(s);
    std::string dow, mon, offset;
    int day, year;
    char c1, c2;
    int hour, minute, second;
    in >> dow >> mon >> day >> hour >> c1 >> minute >> c2 >> second >> offset >> year;
    if (!in || c1 != ':' || c2 != ':') return std::nullopt;
    int month = 0;
    for (int i = 0; i < 12; ++i) {
        if (mon == months[i]) {
            month = i + 1;
            break;
        }
    }
    if (month == 0) return std::nullopt;
    if (offset.size() != 5 || (offset[0] != '+' && offset[0] != '-')) return std::nullopt;
    int oh = (offset[1] - '0') * 10 + (offset[2] - '0');
    int om = (offset[3] - '0') * 10 + (offset[4] - '0');
    int offset_minutes = oh * 60 + om;
    if (offset[0] == '-') offset_minutes = -offset_minutes;
    return Timestamp::from_civil(year, month, day, hour, minute, second, 0, offset_minutes);
}

std::vector<std::string> tags_of(const json& item) {
    std::vector<std::string> tags;
    if (auto it = item.find("tags"); it != item.end() && it->is_array()) {
        for (const auto& t : *it) {
            if (t.is_string()) tags.push_back(t.get<std::string>());
        }
    }
    return tags;
}

} // namespace

NativeView native_view(Platform p, const NativeItem& item) {
    NativeView v;
    switch (p) {
    case Platform::Twitter: {
        v.native_id = need_string(item, "id_str", p);
        v.body = need_string(item, "text", p);
        v.created = parse_ctime_style(need_string(item, "created_at", p));
        // GeoJSON point: [longitude, latitude]
        if (const json* coords = find_path(item, {"coordinates", "coordinates"});
            coords && coords->is_array() && coords->size() == 2) {
            v.latlon = {{(*coords)[1].get<double>(), (*coords)[0].get<double>()}};
        }
        break;
    }
    case Platform::Facebook: {
        v.native_id = need_string(item, "id", p);
        v.body = need_string(item, "message", p);
        v.created = Timestamp::parse_iso8601(need_string(item, "created_time", p));
        auto lat = double_at(item, {"place", "location", "latitude"});
        auto lon = double_at(item, {"place", "location", "longitude"});
        if (lat && lon) v.latlon = {{*lat, *lon}};
        break;
    }
    case Platform::Instagram: {
        v.native_id = need_string(item, "id", p);
        if (auto caption = string_at(item, {"caption", "text"})) v.body = *caption;
        // epoch seconds as a string
        std::string created = need_string(item, "created_time", p);
        try {
            v.created = Timestamp::from_epoch_seconds(std::stoll(created));
        } catch (...) {
            v.created = std::nullopt;
        }
        auto lat = double_at(item, {"location", "latitude"});
        auto lon = double_at(item, {"location", "longitude"});
        if (lat && lon) v.latlon = {{*lat, *lon}};
        v.tags = tags_of(item);
        break;
    }
    case Platform::GooglePlus: {
        v.native_id = need_string(item, "id", p);
        if (auto content = string_at(item, {"object", "content"})) v.body = *content;
        v.created = Timestamp::parse_iso8601(need_string(item, "published", p));
        if (auto geocode = string_at(item, {"geocode"})) {
            std::istringstream in(*geocode);
            double lat, lon;
            if (in >> lat >> lon) v.latlon = {{lat, lon}};
        }
        break;
    }
    case Platform::YouTube: {
        v.native_id = need_string(item, "id", p);
        if (auto desc = string_at(item, {"snippet", "description"})) v.body = *desc;
        if (auto published = string_at(item, {"snippet", "publishedAt"})) {
            v.created = Timestamp::parse_iso8601(*published);
        }
        auto lat = double_at(item, {"recordingDetails", "location", "latitude"});
        auto lon = double_at(item, {"recordingDetails", "location", "longitude"});
        if (lat && lon) v.latlon = {{*lat, *lon}};
        break;
    }
    }
    if (v.native_id.empty()) mapping_fail(p, "empty native id");
    if (!v.created) mapping_fail(p, "missing or unparseable creation timestamp");
    return v;
}

Activity map_native(Platform p, const NativeItem& item) {
    NativeView view = native_view(p, item);

    Activity a;
    a.object.id = PlatformId(p, view.native_id);
    a.object.content = view.body;
    a.object.startTime = view.created;

    EnrichedData enriched;

    switch (p) {
    case Platform::Twitter: {
        std::string user_id = need_string(item.at("user"), "id_str", p);
        std::string screen = string_at(item, {"user", "screen_name"}).value_or(user_id);
        a.actor.id = PlatformId(p, user_id);
        a.actor.displayName = string_at(item, {"user", "name"}).value_or("");
        a.actor.url = "https://twitter.com/" + screen;
        a.actor.content = string_at(item, {"user", "description"});
        a.object.url = "https://twitter.com/" + screen + "/status/" + view.native_id;
        if (view.latlon && item.contains("place")) {
            GeoPoint loc;
            loc.latitude = view.latlon->first;
            loc.longitude = view.latlon->second;
            loc.displayName = string_at(item, {"place", "full_name"});
            a.object.location = loc;
        } else if (view.latlon) {
            a.object.location = GeoPoint{view.latlon->first, view.latlon->second, {}, {}, "place", {}};
        }
        enriched.numRetweets = int_at(item, {"retweet_count"});
        enriched.numLikes = int_at(item, {"favorite_count"});
        if (auto followers = int_at(item, {"user", "followers_count"})) {
            enriched.extensions["numFollowers"] = *followers;
        }
        // entities.media is an array; take the first attachment if present
        if (const json* media = find_path(item, {"entities", "media"});
            media && media->is_array() && !media->empty()) {
            const json& m = media->front();
            MediaAttachment att;
            att.url = m.value("media_url", "");
            att.type = media_type_from_string(m.value("type", "photo"));
            att.mediaType = att.type == MediaType::Video ? "video/mp4" : "image/jpeg";
            if (!att.url.empty()) enriched.media = att;
        }
        break;
    }
    case Platform::Facebook: {
        std::string from_id = string_at(item, {"from", "id"}).value_or("");
        if (from_id.empty()) mapping_fail(p, "missing \"from.id\"");
        a.actor.id = PlatformId(p, from_id);
        a.actor.displayName = string_at(item, {"from", "name"}).value_or("");
        a.actor.url = "https://facebook.com/" + from_id;
        a.object.url = string_at(item, {"permalink_url"})
                           .value_or("https://facebook.com/" + view.native_id);
        if (view.latlon) {
            GeoPoint loc{view.latlon->first, view.latlon->second,
                         string_at(item, {"place", "name"}), {}, "place", {}};
            a.object.location = loc;
        }
        enriched.numLikes = int_at(item, {"like_count"});
        break;
    }
    case Platform::Instagram: {
        std::string user_id = string_at(item, {"user", "id"}).value_or("");
        if (user_id.empty()) mapping_fail(p, "missing \"user.id\"");
        std::string username = string_at(item, {"user", "username"}).value_or(user_id);
        a.actor.id = PlatformId(p, user_id);
        a.actor.displayName = string_at(item, {"user", "full_name"}).value_or(username);
        a.actor.url = "https://instagram.com/" + username;
        a.object.url = string_at(item, {"link"}).value_or("https://instagram.com/p/" + view.native_id);
        if (view.latlon) {
            GeoPoint loc{view.latlon->first, view.latlon->second,
                         string_at(item, {"location", "name"}), {}, "place", {}};
            a.object.location = loc;
        }
        enriched.numLikes = int_at(item, {"likes", "count"});
        if (auto url = string_at(item, {"images", "standard_resolution", "url"})) {
            enriched.media = MediaAttachment{"image/jpeg", MediaType::Photo, *url, {}};
        }
        break;
    }
    case Platform::GooglePlus: {
        std::string actor_id = string_at(item, {"actor", "id"}).value_or("");
        if (actor_id.empty()) mapping_fail(p, "missing \"actor.id\"");
        a.actor.id = PlatformId(p, actor_id);
        a.actor.displayName = string_at(item, {"actor", "displayName"}).value_or("");
        a.actor.url = string_at(item, {"actor", "url"}).value_or("");
        a.object.url = string_at(item, {"object", "url"}).value_or("");
        if (view.latlon) {
            GeoPoint loc{view.latlon->first, view.latlon->second,
                         string_at(item, {"placeName"}), {}, "place", {}};
            a.object.location = loc;
        }
        enriched.numLikes = int_at(item, {"plusoners", "totalItems"});
        break;
    }
    case Platform::YouTube: {
        std::string channel = string_at(item, {"snippet", "channelId"}).value_or("");
        if (channel.empty()) mapping_fail(p, "missing \"snippet.channelId\"");
        a.actor.id = PlatformId(p, channel);
        a.actor.displayName = string_at(item, {"snippet", "channelTitle"}).value_or("");
        a.actor.url = "https://youtube.com/channel/" + channel;
        a.object.url = "https://youtube.com/watch?v=" + view.native_id;
        if (view.latlon) {
            a.object.location = GeoPoint{view.latlon->first, view.latlon->second, {}, {}, "place", {}};
        }
        enriched.numLikes = int_at(item, {"statistics", "likeCount"});
        if (auto url = string_at(item, {"snippet", "thumbnails", "high", "url"})) {
            enriched.media = MediaAttachment{"image/jpeg", MediaType::Photo, *url, {}};
        }
        break;
    }
    }

    a.object.enrichedData = std::move(enriched);
    a.object.extensions["nativeData"] = item;
    return a;
}

std::shared_ptr<FixtureCorpus> FixtureCorpus::load_jsonl(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open fixture file: " + file.string());
    std::vector<NativeItem> items;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json item = json::parse(line, nullptr, false);
        if (item.is_discarded()) {
            throw ConfigError("malformed JSON at " + file.string() + ":" +
                              std::to_string(line_no));
        }
        items.push_back(std::move(item));
    }
    return std::make_shared<FixtureCorpus>(std::move(items));
}

void FixtureCorpus::append(NativeItem item) {
    std::unique_lock lock(mu_);
    items_.push_back(std::move(item));
}

std::size_t FixtureCorpus::size() const {
    std::shared_lock lock(mu_);
    return items_.size();
}

std::vector<NativeItem> FixtureCorpus::snapshot() const {
    std::shared_lock lock(mu_);
    return items_;
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string request_fingerprint(const NativeRequest& r) {
    std::string key = r.keywordString;
    if (r.geo) {
        key += "|g" + std::to_string(r.geo->latitude) + "," +
               std::to_string(r.geo->longitude) + "," + std::to_string(r.geo->radius_km);
    }
    if (r.window) {
        key += "|w" + std::to_string(r.window->since_ms.value_or(-1)) + "," +
               std::to_string(r.window->until_ms.value_or(-1));
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(key)));
    return buf;
}

bool has_operator_tokens(std::string_view s) {
    for (auto tok : text::whitespace_tokens(s)) {
        if (tok == "OR" || tok == "NOT" || tok == "AND") return true;
    }
    return s.find('"') != std::string_view::npos ||
           s.find('(') != std::string_view::npos ||
           s.find(')') != std::string_view::npos;
}

} // namespace

bool FixtureAdapter::native_match(const NativeRequest& request, const NativeView& view) const {
    if (request.window && view.created && !request.window->contains(view.created->epoch_ms)) {
        return false;
    }
    if (request.window && !view.created) return false;
    if (request.geo) {
        if (!view.latlon) return false;
        if (!request.geo->contains(view.latlon->first, view.latlon->second)) return false;
    }

    if (!caps_.keywordSearch) {
        const std::string wanted = text::ascii_lower(request.keywordString);
        return std::any_of(view.tags.begin(), view.tags.end(), [&](const std::string& t) {
            return text::ascii_lower(t) == wanted;
        });
    }
    if (caps_.full_boolean()) {
        QueryPtr ast = parse_query(request.keywordString);
        return evaluate_match(ast, view.body);
    }
    // conjunction-only: every keyword must appear
    for (auto tok : text::whitespace_tokens(request.keywordString)) {
        if (!text::contains_term(view.body, tok)) return false;
    }
    return true;
}

Page FixtureAdapter::fetch_page(const NativeRequest& request,
                                const std::optional<PageCursor>& cursor) const {
    if (request.keywordString.empty()) {
        throw CapabilityError("empty native request");
    }
    if (!caps_.keywordSearch) {
        if (request.keywordString.find_first_of(" \t\"()") != std::string::npos) {
            throw CapabilityError(std::string(to_string(platform_)) +
                                  " accepts a single tag per request, got: \"" +
                                  request.keywordString + "\"");
        }
    } else if (!caps_.full_boolean() && has_operator_tokens(request.keywordString)) {
        throw CapabilityError(std::string(to_string(platform_)) +
                              " supports plain keyword conjunction only, got: \"" +
                              request.keywordString + "\"");
    }
    if ((request.geo && !caps_.nativeGeoFilter) ||
        (request.window && !caps_.nativeTimeFilter)) {
        throw CapabilityError(std::string(to_string(platform_)) +
                              " does not filter natively by geo/time");
    }

    std::string fingerprint = request_fingerprint(request);
    std::size_t offset = 0;
    if (cursor) {
        auto colon = cursor->token.find(':');
        if (colon == std::string::npos || cursor->token.substr(0, colon) != fingerprint) {
            throw InvalidRequestError("unknown page cursor: " + cursor->token);
        }
        try {
            offset = std::stoull(cursor->token.substr(colon + 1));
        } catch (...) {
            throw InvalidRequestError("unknown page cursor: " + cursor->token);
        }
    }

    std::vector<NativeItem> matches;
    for (const auto& item : corpus_->snapshot()) {
        NativeView view;
        try {
            view = native_view(platform_, item);
        } catch (const SchemaError&) {
            continue; // unmappable records are invisible to search
        }
        if (native_match(request, view)) matches.push_back(item);
    }

    Page page;
    std::size_t end = std::min(matches.size(), offset + caps_.maxResultsPerRequest);
    for (std::size_t i = offset; i < end; ++i) page.items.push_back(std::move(matches[i]));
    if (end < matches.size()) {
        page.next = PageCursor{fingerprint + ":" + std::to_string(end)};
    }
    return page;
}

AdapterRegistry AdapterRegistry::load_fixture_dir(const std::filesystem::path& dir,
                                                  const MaxResultsOverrides& overrides) {
    std::map<Platform, std::shared_ptr<FixtureCorpus>> corpora;
    for (Platform p : kAllPlatforms) {
        auto file = dir / (std::string(to_string(p)) + ".jsonl");
        if (std::filesystem::exists(file)) {
            corpora[p] = FixtureCorpus::load_jsonl(file);
        }
    }
    if (corpora.empty()) {
        throw ConfigError("no fixture corpora found under " + dir.string());
    }
    return from_corpora(std::move(corpora), overrides);
}

AdapterRegistry AdapterRegistry::from_corpora(
    std::map<Platform, std::shared_ptr<FixtureCorpus>> corpora,
    const MaxResultsOverrides& overrides) {
    AdapterRegistry registry;
    for (auto& [platform, corpus] : corpora) {
        PlatformCapabilities caps = default_capabilities(platform);
        if (auto it = overrides.find(platform); it != overrides.end()) {
            caps.maxResultsPerRequest = it->second;
        }
        registry.adapters_[platform] =
            std::make_unique<FixtureAdapter>(platform, caps, std::move(corpus));
    }
    return registry;
}

const FixtureAdapter& AdapterRegistry::adapter(Platform p) const {
    auto it = adapters_.find(p);
    if (it == adapters_.end()) {
        throw NotFoundError("no adapter configured for platform " +
                            std::string(to_string(p)));
    }
    return *it->second;
}

} // namespace smapi
