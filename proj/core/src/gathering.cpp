#include "smapi/gathering.hpp"

#include <algorithm>

#include "smapi/errors.hpp"
#include "smapi/query.hpp"
#include "smapi/sha1.hpp"

namespace smapi {

using nlohmann::json;

GatheringService::GatheringService(const AdapterRegistry& adapters, BudgetLedger& budgets,
                                   ActivityStore& store, const Enricher& enricher,
                                   const Clock& clock, GatheringOptions options)
    : adapters_(adapters), budgets_(budgets), store_(store), enricher_(enricher),
      clock_(clock), options_(options) {}

namespace {

void check_common(const std::string& keyword, const std::vector<Platform>& platforms,
                  const std::optional<double>& lat, const std::optional<double>& lon,
                  const std::optional<double>& radius,
                  std::map<std::string, std::string>& fields) {
    if (keyword.empty()) fields["keyword"] = "required";
    if (platforms.empty()) fields["platforms"] = "required";
    if (lat.has_value() != lon.has_value()) {
        fields[lat ? "longitude" : "latitude"] = "latitude and longitude must be given together";
    }
    if (lat && (*lat < -90.0 || *lat > 90.0)) fields["latitude"] = "out of range [-90, 90]";
    if (lon && (*lon < -180.0 || *lon > 180.0)) fields["longitude"] = "out of range [-180, 180]";
    if (radius) {
        if (!lat || !lon) {
            fields["radius"] = "radius requires latitude and longitude";
        } else if (*radius <= 0.0) {
            fields["radius"] = "must be positive";
        }
    }
}

} // namespace

void GatheringService::validate(const SearchRequest& r) {
    std::map<std::string, std::string> fields;
    check_common(r.keyword, r.platforms, r.latitude, r.longitude, r.radius_km, fields);
    if (r.since_s && r.until_s && *r.since_s > *r.until_s) {
        fields["since"] = "since must not exceed until";
    }
    if (!fields.empty()) throw InvalidRequestError("invalid search request", fields);
}

void GatheringService::validate(const CrawlJobSpec& s) {
    std::map<std::string, std::string> fields;
    check_common(s.keyword, s.platforms, s.latitude, s.longitude, s.radius_km, fields);
    if (s.waitBetweenRequests_ms < 1000) {
        fields["waitBetweenRequests"] = "below minimum interval (1000 ms)";
    }
    if (s.start_s && s.end_s && *s.end_s <= *s.start_s) {
        fields["end"] = "end must be after start";
    }
    if (!fields.empty()) throw InvalidRequestError("invalid crawl job spec", fields);
}

json GatheringService::spec_to_json(const SearchRequest& r) {
    json j;
    j["keyword"] = r.keyword;
    json platforms = json::array();
    for (auto p : r.platforms) platforms.push_back(std::string(to_string(p)));
    j["platforms"] = platforms;
    if (r.since_s) j["since"] = *r.since_s;
    if (r.until_s) j["until"] = *r.until_s;
    if (r.latitude) j["latitude"] = *r.latitude;
    if (r.longitude) j["longitude"] = *r.longitude;
    if (r.radius_km) j["radius"] = *r.radius_km;
    return j;
}

json GatheringService::spec_to_json(const CrawlJobSpec& s) {
    json j;
    j["keyword"] = s.keyword;
    json platforms = json::array();
    for (auto p : s.platforms) platforms.push_back(std::string(to_string(p)));
    j["platforms"] = platforms;
    j["waitBetweenRequests"] = s.waitBetweenRequests_ms;
    if (s.start_s) j["start"] = *s.start_s;
    if (s.end_s) j["end"] = *s.end_s;
    if (s.latitude) j["latitude"] = *s.latitude;
    if (s.longitude) j["longitude"] = *s.longitude;
    if (s.radius_km) j["radius"] = *s.radius_km;
    return j;
}

std::string GatheringService::derive_job_id(const json& spec, std::int64_t created_ms,
                                            std::uint64_t nonce) {
    return sha1_hex(spec.dump() + ":" + std::to_string(created_ms) + ":" +
                    std::to_string(nonce));
}

std::optional<GeoCircle> GatheringService::circle_of(const std::optional<double>& lat,
                                                     const std::optional<double>& lon,
                                                     const std::optional<double>& radius_km) const {
    if (!lat || !lon) return std::nullopt;
    return GeoCircle{*lat, *lon, radius_km.value_or(options_.default_radius_km)};
}

PlatformOutcome GatheringService::gather_platform(const std::string& jobId, Platform platform,
                                                  const Dnf& dnf,
                                                  const std::optional<GeoCircle>& geo,
                                                  const std::optional<TimeWindow>& window) {
    PlatformOutcome outcome;
    outcome.platform = platform;

    RewritePlan plan;
    const FixtureAdapter* adapter = nullptr;
    try {
        adapter = &adapters_.adapter(platform);
        plan = rewrite_for_platform(dnf, adapter->capabilities(), geo, window);
    } catch (const Error& e) {
        outcome.skipped = true;
        outcome.diagnostic = e.what();
        store_.add_diagnostic(jobId, std::string(to_string(platform)) + ": " + e.what());
        return outcome;
    }

    std::vector<ActivityPtr> mapped;
    for (const auto& request : plan.nativeRequests) {
        std::optional<PageCursor> cursor;
        for (;;) {
            try {
                budgets_.consume(platform, 1);
            } catch (const QuotaExceededError& e) {
                outcome.truncated = true;
                outcome.diagnostic = e.what();
                store_.add_diagnostic(jobId, std::string(to_string(platform)) +
                                                 ": truncated by quota, retry in " +
                                                 std::to_string(e.retry_after_ms()) + " ms");
                break;
            }
            ++outcome.requestUnits;
            Page page = adapter->fetch_page(request, cursor);
            outcome.fetched += page.items.size();
            for (const auto& item : page.items) {
                try {
                    mapped.push_back(
                        std::make_shared<Activity>(map_native(platform, item)));
                } catch (const SchemaError& e) {
                    ++outcome.mappingErrors;
                    store_.add_diagnostic(jobId, std::string(to_string(platform)) +
                                                     ": unmappable item skipped: " + e.what());
                }
            }
            if (!page.next) break;
            cursor = page.next;
        }
        if (outcome.truncated) break;
    }

    // restore what the platform could not filter natively
    std::vector<ActivityPtr> accepted;
    for (const auto& a : mapped) {
        if (plan.postFilter.mustMatch &&
            !evaluate_match(plan.postFilter.mustMatch, a->object.content)) {
            continue;
        }
        if (plan.postFilter.window &&
            !plan.postFilter.window->contains(a->start_epoch_ms())) {
            continue;
        }
        if (plan.postFilter.geo) {
            if (!a->object.location) continue;
            if (!plan.postFilter.geo->contains(a->object.location->latitude,
                                               a->object.location->longitude)) {
                continue;
            }
        }
        accepted.push_back(std::make_shared<Activity>(enricher_.enrich(*a)));
    }
    outcome.matched = accepted.size();

    InsertResult inserted = store_.insert_activities(jobId, accepted);
    outcome.inserted = inserted.inserted;
    outcome.duplicates = inserted.duplicates;

    store_.add_counts(jobId, 0, 0, outcome.mappingErrors);
    if (outcome.requestUnits > 0) {
        store_.add_request_units(jobId, platform, outcome.requestUnits);
    }
    return outcome;
}

SearchOutcome GatheringService::run_search(const SearchRequest& request) {
    validate(request);

    QueryPtr ast = parse_query(request.keyword);
    Dnf dnf = to_dnf(ast);

    std::int64_t now = clock_.now_ms();
    json spec = spec_to_json(request);
    std::string jobId = derive_job_id(spec, now, nonce_.fetch_add(1));
    store_.create_job(jobId, JobKind::Search, spec, JobState::Running);

    auto geo = circle_of(request.latitude, request.longitude, request.radius_km);
    std::optional<TimeWindow> window;
    if (request.since_s || request.until_s) {
        TimeWindow w;
        if (request.since_s) w.since_ms = *request.since_s * 1000;
        if (request.until_s) w.until_ms = *request.until_s * 1000;
        window = w;
    }

    SearchOutcome outcome;
    outcome.jobId = jobId;
    for (Platform p : request.platforms) {
        outcome.platforms.push_back(gather_platform(jobId, p, dnf, geo, window));
    }

    bool any_fetch = std::any_of(outcome.platforms.begin(), outcome.platforms.end(),
                                 [](const PlatformOutcome& o) { return o.fetched > 0 || o.requestUnits > 0; });
    bool all_quota_blocked = !outcome.platforms.empty() &&
                             std::all_of(outcome.platforms.begin(), outcome.platforms.end(),
                                         [](const PlatformOutcome& o) {
                                             return o.truncated && o.requestUnits == 0;
                                         });
    store_.set_state(jobId, JobState::Completed);
    if (!any_fetch && all_quota_blocked) {
        throw QuotaExceededError("all platforms quota-exhausted before any fetch", 0);
    }

    std::size_t total = store_.job_activity_count(jobId);
    outcome.collection = total > 0 ? store_.load_page(jobId, total, 0) : ActivityCollection{};
    return outcome;
}

std::string GatheringService::start_crawl(const CrawlJobSpec& spec) {
    validate(spec);
    std::int64_t now = clock_.now_ms();
    json spec_json = spec_to_json(spec);
    std::string jobId = derive_job_id(spec_json, now, nonce_.fetch_add(1));
    store_.create_job(jobId, JobKind::Crawl, spec_json, JobState::Pending);
    return jobId;
}

namespace {

CrawlJobSpec spec_from_json(const json& j) {
    CrawlJobSpec spec;
    spec.keyword = j.value("keyword", "");
    if (auto it = j.find("platforms"); it != j.end()) {
        for (const auto& p : *it) {
            if (auto parsed = parse_platform(p.get<std::string>())) {
                spec.platforms.push_back(*parsed);
            }
        }
    }
    spec.waitBetweenRequests_ms = j.value("waitBetweenRequests", 10000LL);
    if (j.contains("start")) spec.start_s = j["start"].get<std::int64_t>();
    if (j.contains("end")) spec.end_s = j["end"].get<std::int64_t>();
    if (j.contains("latitude")) spec.latitude = j["latitude"].get<double>();
    if (j.contains("longitude")) spec.longitude = j["longitude"].get<double>();
    if (j.contains("radius")) spec.radius_km = j["radius"].get<double>();
    return spec;
}

} // namespace

JobRecord GatheringService::crawl_tick(const std::string& jobId) {
    std::lock_guard tick_lock(tick_mu_);

    JobRecord record = store_.job(jobId);
    if (record.kind != JobKind::Crawl) {
        throw ConflictError("job " + jobId + " is not a crawl job");
    }
    if (record.state == JobState::Completed || record.state == JobState::Failed ||
        record.state == JobState::Cancelled) {
        return record;
    }

    CrawlJobSpec spec = spec_from_json(record.spec);
    std::int64_t now = clock_.now_ms();

    if (record.state == JobState::Pending) {
        if (spec.start_s && now < *spec.start_s * 1000) return record; // not started yet
        record = store_.set_state(jobId, JobState::Running);
    }
    if (spec.end_s && now > *spec.end_s * 1000) {
        return store_.set_state(jobId, JobState::Completed);
    }
    if (record.lastTickAt_ms > 0 && now < record.lastTickAt_ms + spec.waitBetweenRequests_ms) {
        return record; // interval not elapsed
    }

    QueryPtr ast;
    Dnf dnf;
    try {
        ast = parse_query(spec.keyword);
        dnf = to_dnf(ast);
    } catch (const Error& e) {
        store_.add_diagnostic(jobId, std::string("query rejected: ") + e.what());
        return store_.set_state(jobId, JobState::Failed);
    }

    // incremental window with a one-interval overlap so boundary items are
    // never lost; dedup absorbs the replays
    TimeWindow window;
    if (auto newest = store_.newest_start_ms(jobId)) {
        window.since_ms = *newest - spec.waitBetweenRequests_ms;
        if (spec.start_s) {
            window.since_ms = std::max(*window.since_ms, *spec.start_s * 1000);
        }
    } else if (spec.start_s) {
        window.since_ms = *spec.start_s * 1000;
    }
    if (spec.end_s) window.until_ms = *spec.end_s * 1000;

    auto geo = circle_of(spec.latitude, spec.longitude, spec.radius_km);
    std::optional<TimeWindow> window_opt;
    if (window.since_ms || window.until_ms) window_opt = window;

    for (Platform p : spec.platforms) {
        gather_platform(jobId, p, dnf, geo, window_opt);
    }
    store_.record_tick(jobId, now);
    return store_.job(jobId);
}

std::size_t GatheringService::tick_due_jobs() {
    std::size_t rounds = 0;
    for (const auto& record : store_.list_jobs()) {
        if (record.kind != JobKind::Crawl) continue;
        if (record.state != JobState::Pending && record.state != JobState::Running) continue;
        std::int64_t before = record.lastTickAt_ms;
        try {
            JobRecord after = crawl_tick(record.jobId);
            if (after.lastTickAt_ms != before) ++rounds;
        } catch (const Error&) {
            // tick failures surface through job diagnostics
        }
    }
    return rounds;
}

JobRecord GatheringService::stop_crawl(const std::string& jobId) {
    JobRecord record = store_.job(jobId);
    if (record.state == JobState::Pending || record.state == JobState::Running) {
        return store_.set_state(jobId, JobState::Cancelled);
    }
    return record; // stopping a finished job is a no-op
}

JobRecord GatheringService::job_status(const std::string& jobId) const {
    return store_.job(jobId);
}

std::vector<JobRecord> GatheringService::list_jobs() const { return store_.list_jobs(); }

} // namespace smapi
