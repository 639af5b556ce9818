#include "smapi/fixturegen.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "smapi/errors.hpp"

namespace smapi::fixtures {

using nlohmann::json;

namespace {

const std::vector<std::string> kKeywords = {
    "fire",    "flood",     "storm",   "rain",      "wind",    "earthquake",
    "rescue",  "police",    "ambulance", "hospital", "berlin",  "hamburg",
    "munich",  "cologne",   "dresden", "bridge",    "river",   "road",
    "power",   "outage",    "shelter", "volunteer", "warning", "alert",
    "drill",   "evacuation", "damage",  "injured",   "safe",    "help",
};

const std::vector<std::string> kCluster = {"siren", "horn", "whistle", "bell", "alarm"};

const std::vector<std::string> kFillerEn = {
    "the", "a",    "and[x]", "is",   "are",  "to",   "of",   "in",   "on",
    "at",  "this", "that",   "it",   "with", "for",  "was",  "near", "after",
    "before", "over", "under", "new", "still", "again", "today",
};

const std::vector<std::string> kFillerDe = {
    "der", "die",  "das",  "und",  "ist",  "sind", "zu",    "von",  "im",
    "auf", "mit",  "für",  "nach", "bei",  "einer", "mehr", "sehr", "wir",
    "sie", "auch", "noch", "heute", "jetzt", "hier", "wieder",
};

const std::vector<std::string> kSentimentWords = {
    "scared", "afraid", "panic",  "danger",  "happy",  "glad",
    "relief", "thanks", "gefahr", "angst",   "freude", "danke",
};

const std::vector<std::string> kEmoticons = {":)", ":(", ":D", ";)", "<3"};
const std::vector<std::string> kSlangWords = {"lol", "omg", "btw", "thx", "asap"};

const std::vector<std::string> kMentionPool = {
    "bzberlin",   "feuerwehr112", "polizeibericht", "redcrossde",
    "stadtwerke", "newsdesk24",   "helfernetz",     "wetterkanal",
};

struct City {
    const char* name;
    double lat;
    double lon;
};

const std::vector<City> kCities = {
    {"Berlin, Deutschland", 52.520008, 13.404954},
    {"Hamburg, Deutschland", 53.551086, 9.993682},
    {"München, Deutschland", 48.137154, 11.576124},
    {"Siegen, Deutschland", 50.874980, 8.024311},
    {"Köln, Deutschland", 50.937531, 6.960279},
};

const std::vector<std::pair<const char*, const char*>> kAuthors = {
    {"Stadt Berlin", "stadtberlin"},     {"Feuerwehr Siegen", "fw_siegen"},
    {"Weather Watch", "weatherwatch"},   {"News Desk", "newsdesk24"},
    {"Anna Keller", "annakeller"},       {"Jonas Weber", "jonasweber"},
    {"City Updates", "cityupdates"},     {"Hochwasser Info", "hw_info"},
    {"Rescue Watch", "rescuewatch"},     {"Verkehrslage", "verkehrslage"},
    {"Maria Lang", "marialang"},         {"Tom Fischer", "tomfischer"},
    {"Blaulicht Report", "blaulichtrep"}, {"Storm Tracker", "stormtracker"},
    {"Nachbarschaftshilfe", "nh_hilfe"}, {"Daily Bulletin", "dailybulletin"},
};

std::string pick(const std::vector<std::string>& pool, std::mt19937_64& rng) {
    return pool[rng() % pool.size()];
}

// "and[x]" markers keep reserved-looking words out of fillers
std::string filler_word(bool german, std::mt19937_64& rng) {
    const auto& pool = german ? kFillerDe : kFillerEn;
    std::string w = pick(pool, rng);
    auto bracket = w.find('[');
    if (bracket != std::string::npos) w.erase(bracket);
    return w;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() % 1000000) / 1000000.0);
}

bool chance(std::mt19937_64& rng, double p) { return uniform(rng, 0, 1) < p; }

std::string random_slug(std::mt19937_64& rng, std::size_t len) {
    static const char alphabet[] =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
    std::string out;
    for (std::size_t i = 0; i < len; ++i) out.push_back(alphabet[rng() % 62]);
    return out;
}

struct Draft {
    std::string body;
    std::vector<std::string> tags;
    Timestamp created;
    std::optional<std::pair<double, double>> latlon;
    std::optional<std::string> place;
    std::size_t author;
};

Draft draft_item(Platform p, std::mt19937_64& rng, const GeneratorOptions& options) {
    Draft d;
    bool german = chance(rng, 0.5);
    bool cluster = chance(rng, 0.07);

    std::vector<std::string> words;
    std::size_t keyword_count = cluster ? 0 : rng() % 5; // 0..4
    for (std::size_t i = 0; i < keyword_count; ++i) words.push_back(pick(kKeywords, rng));
    if (cluster) {
        words.insert(words.end(), kCluster.begin(), kCluster.end());
        if (chance(rng, 0.5)) words.push_back(pick(kKeywords, rng));
    }

    if (p == Platform::Instagram) {
        // hashtag-only captions: tag search and text search coincide
        if (words.empty()) words.push_back(pick(kKeywords, rng));
        std::string caption;
        for (const auto& w : words) {
            if (std::find(d.tags.begin(), d.tags.end(), w) != d.tags.end()) continue;
            if (!caption.empty()) caption += ' ';
            caption += '#' + w;
            d.tags.push_back(w);
        }
        if (chance(rng, 0.2)) caption += ' ' + pick(kEmoticons, rng);
        d.body = caption;
    } else {
        std::size_t filler_count = 4 + rng() % 6;
        for (std::size_t i = 0; i < filler_count; ++i) {
            words.push_back(filler_word(german, rng));
        }
        if (chance(rng, 0.3)) words.push_back(pick(kSentimentWords, rng));
        if (chance(rng, 0.15)) words.push_back(pick(kSlangWords, rng));
        std::shuffle(words.begin(), words.end(), rng);

        std::size_t sentence_count = 1 + rng() % 3;
        std::size_t per_sentence = std::max<std::size_t>(1, words.size() / sentence_count);
        std::string body;
        static const char terminators[] = {'.', '!', '?'};
        for (std::size_t s = 0, w = 0; s < sentence_count && w < words.size(); ++s) {
            std::string sentence;
            std::size_t end = (s + 1 == sentence_count) ? words.size()
                                                        : std::min(words.size(), w + per_sentence);
            for (; w < end; ++w) {
                if (!sentence.empty()) sentence += ' ';
                sentence += words[w];
            }
            if (!sentence.empty()) {
                sentence[0] = static_cast<char>(
                    std::toupper(static_cast<unsigned char>(sentence[0])));
                if (!body.empty()) body += ' ';
                body += sentence;
                body += terminators[rng() % 3];
            }
        }
        if (chance(rng, 0.25)) body += " @" + pick(kMentionPool, rng);
        if (chance(rng, 0.35)) {
            body += " #" + pick(kKeywords, rng);
            if (chance(rng, 0.4)) body += " #" + pick(kKeywords, rng);
        }
        if (chance(rng, 0.15)) body += ' ' + pick(kEmoticons, rng);
        if (chance(rng, 0.3)) {
            const char* domain = "example.org";
            switch (p) {
            case Platform::Twitter:    domain = "t.co"; break;
            case Platform::Facebook:   domain = "fb.me"; break;
            case Platform::GooglePlus: domain = "goo.gl"; break;
            case Platform::YouTube:    domain = "youtu.be"; break;
            default: break;
            }
            body += " https://" + std::string(domain) + "/" + random_slug(rng, 9);
        }
        d.body = body;
    }

    std::int64_t at = options.base_time_ms +
                      static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(
                                                    std::max<std::int64_t>(options.time_span_ms, 1)));
    int offset_minutes = (p == Platform::Twitter || p == Platform::Facebook) ? 60 : 0;
    d.created = Timestamp{at - at % 1000, offset_minutes};

    if (chance(rng, 0.55)) {
        const City& city = kCities[rng() % kCities.size()];
        d.latlon = {{city.lat + uniform(rng, -0.25, 0.25),
                     city.lon + uniform(rng, -0.25, 0.25)}};
        d.place = city.name;
    }
    d.author = rng() % kAuthors.size();
    return d;
}

std::string month_name(unsigned m) {
    static const char* names[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                  "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    return names[m - 1];
}

// "Wed Feb 01 10:30:47 +0100 2017"; the weekday is not parsed back, a fixed
// token keeps the format shape
std::string ctime_style(const Timestamp& t) {
    std::int64_t local_ms = t.epoch_ms + static_cast<std::int64_t>(t.offset_minutes) * 60'000;
    std::int64_t days = local_ms / 86'400'000;
    std::int64_t rem = local_ms % 86'400'000;
    if (rem < 0) {
        rem += 86'400'000;
        days -= 1;
    }
    int year;
    unsigned month, day;
    civil::civil_from_days(days, year, month, day);
    int total_s = static_cast<int>(rem / 1000);
    static const char* dows[] = {"Thu", "Fri", "Sat", "Sun", "Mon", "Tue", "Wed"};
    const char* dow = dows[((days % 7) + 7) % 7];
    char sign = t.offset_minutes < 0 ? '-' : '+';
    int off = std::abs(t.offset_minutes);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s %s %02u %02d:%02d:%02d %c%02d%02d %d", dow,
                  month_name(month).c_str(), day, total_s / 3600, (total_s / 60) % 60,
                  total_s % 60, sign, off / 60, off % 60, year);
    return buf;
}

std::string iso_basic_offset(const Timestamp& t) {
    // facebook style: "2017-02-01T10:30:47+0100"
    std::string iso = t.to_iso8601(); // ...SS.mmm+HH:MM
    std::string head = iso.substr(0, 19);
    std::string off = iso.substr(23);
    off.erase(std::remove(off.begin(), off.end(), ':'), off.end());
    return head + off;
}

json build_item(Platform p, std::size_t index, const Draft& d) {
    const auto& [author_name, author_handle] = kAuthors[d.author];
    json item;
    switch (p) {
    case Platform::Twitter: {
        item["id_str"] = std::to_string(823724465664000000LL + static_cast<long long>(index) * 977);
        item["text"] = d.body;
        item["created_at"] = ctime_style(d.created);
        json user;
        user["id_str"] = std::to_string(84430424000LL + static_cast<long long>(d.author));
        user["name"] = author_name;
        user["screen_name"] = author_handle;
        user["description"] = "Updates und Meldungen";
        user["followers_count"] = 50 + (index * 137) % 40000;
        item["user"] = user;
        item["retweet_count"] = (index * 7) % 45;
        item["favorite_count"] = (index * 11) % 220;
        if (d.latlon) {
            item["coordinates"] = {{"type", "Point"},
                                   {"coordinates", {d.latlon->second, d.latlon->first}}};
            item["place"] = {{"full_name", *d.place}};
        }
        if (index % 4 == 0) {
            item["entities"] = {{"media",
                                 {{{"media_url", "https://pbs.example.com/media/" +
                                                     std::to_string(index)},
                                   {"type", "photo"}}}}};
        }
        break;
    }
    case Platform::Facebook: {
        std::string page_id = std::to_string(100200300LL + static_cast<long long>(d.author));
        item["id"] = page_id + "_" + std::to_string(500000000LL + static_cast<long long>(index));
        item["message"] = d.body;
        item["created_time"] = iso_basic_offset(d.created);
        item["from"] = {{"id", page_id}, {"name", author_name}};
        item["permalink_url"] = "https://facebook.com/" + page_id + "/posts/" +
                                std::to_string(500000000LL + static_cast<long long>(index));
        item["like_count"] = (index * 13) % 510;
        if (d.latlon) {
            item["place"] = {{"name", *d.place},
                             {"location",
                              {{"latitude", d.latlon->first}, {"longitude", d.latlon->second}}}};
        }
        break;
    }
    case Platform::Instagram: {
        std::string user_id = std::to_string(8271000 + d.author);
        item["id"] = std::to_string(1442893000LL + static_cast<long long>(index) * 13) + "_" + user_id;
        item["caption"] = {{"text", d.body}};
        item["created_time"] = std::to_string(d.created.epoch_ms / 1000);
        item["user"] = {{"id", user_id},
                        {"username", author_handle},
                        {"full_name", author_name}};
        item["link"] = "https://instagram.com/p/B" + std::to_string(index);
        item["likes"] = {{"count", (index * 17) % 800}};
        item["tags"] = d.tags;
        item["images"] = {{"standard_resolution",
                           {{"url", "https://scontent.example.com/p/" + std::to_string(index)}}}};
        if (d.latlon) {
            item["location"] = {{"latitude", d.latlon->first},
                                {"longitude", d.latlon->second},
                                {"name", *d.place}};
        }
        break;
    }
    case Platform::GooglePlus: {
        item["id"] = "z13" + std::to_string(4000000000LL + static_cast<long long>(index) * 31);
        item["verb"] = "post";
        item["object"] = {{"content", d.body},
                          {"url", "https://plus.google.com/posts/" + std::to_string(index)}};
        item["published"] = d.created.to_iso8601();
        item["actor"] = {{"id", std::to_string(108760000000LL + static_cast<long long>(d.author))},
                         {"displayName", author_name},
                         {"url", "https://plus.google.com/+" + std::string(author_handle)}};
        item["plusoners"] = {{"totalItems", (index * 3) % 120}};
        if (d.latlon) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.8f %.8f", d.latlon->first, d.latlon->second);
            item["geocode"] = buf;
            item["placeName"] = *d.place;
        }
        break;
    }
    case Platform::YouTube: {
        static const char vid_alphabet[] =
            "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";
        std::string vid;
        std::size_t x = index * 2654435761u + 12345;
        for (int i = 0; i < 11; ++i) {
            vid.push_back(vid_alphabet[x % 64]);
            x = x / 64 + (x % 64) * 997 + 31;
        }
        item["id"] = vid;
        json snippet;
        snippet["publishedAt"] = d.created.to_iso8601();
        snippet["channelId"] = "UC" + std::to_string(770000000 + d.author);
        snippet["channelTitle"] = author_name;
        snippet["description"] = d.body;
        snippet["thumbnails"] = {{"high", {{"url", "https://i.ytimg.example.com/vi/" + vid +
                                                       "/hqdefault.jpg"}}}};
        item["snippet"] = snippet;
        item["statistics"] = {{"likeCount", std::to_string((index * 19) % 4000)},
                              {"viewCount", std::to_string((index * 211) % 90000)}};
        if (d.latlon) {
            item["recordingDetails"] = {{"location",
                                         {{"latitude", d.latlon->first},
                                          {"longitude", d.latlon->second}}}};
        }
        break;
    }
    }
    return item;
}

} // namespace

const std::vector<std::string>& keyword_vocabulary() { return kKeywords; }

const std::vector<std::string>& cooccurring_keywords() { return kCluster; }

std::vector<NativeItem> generate(Platform p, const GeneratorOptions& options) {
    std::mt19937_64 rng(options.seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<int>(p) + 1)));
    std::vector<NativeItem> items;
    items.reserve(options.items_per_platform);
    for (std::size_t i = 0; i < options.items_per_platform; ++i) {
        items.push_back(build_item(p, i, draft_item(p, rng, options)));
    }
    return items;
}

std::map<Platform, std::shared_ptr<FixtureCorpus>> generate_corpora(
    const GeneratorOptions& options) {
    std::map<Platform, std::shared_ptr<FixtureCorpus>> corpora;
    for (Platform p : kAllPlatforms) {
        corpora[p] = std::make_shared<FixtureCorpus>(generate(p, options));
    }
    return corpora;
}

void write_fixture_files(const std::filesystem::path& dir, const GeneratorOptions& options) {
    std::filesystem::create_directories(dir);
    for (Platform p : kAllPlatforms) {
        auto path = dir / (std::string(to_string(p)) + ".jsonl");
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw ConfigError("cannot write fixture file: " + path.string());
        for (const auto& item : generate(p, options)) {
            out << item.dump() << '\n';
        }
    }
}

NativeItem plain_item(Platform p, const std::string& native_id, const std::string& text,
                      const Timestamp& created,
                      std::optional<std::pair<double, double>> latlon,
                      std::vector<std::string> tags) {
    json item;
    switch (p) {
    case Platform::Twitter:
        item["id_str"] = native_id;
        item["text"] = text;
        item["created_at"] = ctime_style(created);
        item["user"] = {{"id_str", "7001"}, {"name", "Fixture User"},
                        {"screen_name", "fixtureuser"}, {"followers_count", 10}};
        item["retweet_count"] = 0;
        item["favorite_count"] = 0;
        if (latlon) {
            item["coordinates"] = {{"type", "Point"},
                                   {"coordinates", {latlon->second, latlon->first}}};
            item["place"] = {{"full_name", "Fixture Place"}};
        }
        break;
    case Platform::Facebook:
        item["id"] = "7001_" + native_id;
        item["message"] = text;
        item["created_time"] = iso_basic_offset(created);
        item["from"] = {{"id", "7001"}, {"name", "Fixture Page"}};
        item["like_count"] = 0;
        if (latlon) {
            item["place"] = {{"name", "Fixture Place"},
                             {"location",
                              {{"latitude", latlon->first}, {"longitude", latlon->second}}}};
        }
        break;
    case Platform::Instagram:
        item["id"] = native_id + "_7001";
        item["caption"] = {{"text", text}};
        item["created_time"] = std::to_string(created.epoch_ms / 1000);
        item["user"] = {{"id", "7001"}, {"username", "fixtureuser"},
                        {"full_name", "Fixture User"}};
        item["likes"] = {{"count", 0}};
        item["tags"] = tags;
        if (latlon) {
            item["location"] = {{"latitude", latlon->first},
                                {"longitude", latlon->second},
                                {"name", "Fixture Place"}};
        }
        break;
    case Platform::GooglePlus:
        item["id"] = native_id;
        item["object"] = {{"content", text}, {"url", "https://plus.example.com/" + native_id}};
        item["published"] = created.to_iso8601();
        item["actor"] = {{"id", "7001"}, {"displayName", "Fixture User"},
                         {"url", "https://plus.example.com/+fixture"}};
        if (latlon) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.8f %.8f", latlon->first, latlon->second);
            item["geocode"] = buf;
            item["placeName"] = "Fixture Place";
        }
        break;
    case Platform::YouTube:
        item["id"] = native_id;
        item["snippet"] = {{"publishedAt", created.to_iso8601()},
                           {"channelId", "UC7001"},
                           {"channelTitle", "Fixture Channel"},
                           {"description", text}};
        item["statistics"] = {{"likeCount", "0"}};
        if (latlon) {
            item["recordingDetails"] = {{"location",
                                         {{"latitude", latlon->first},
                                          {"longitude", latlon->second}}}};
        }
        break;
    }
    return item;
}

} // namespace smapi::fixtures
