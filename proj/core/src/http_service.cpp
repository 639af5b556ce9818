#include "smapi/http_service.hpp"

#include <chrono>

#include <httplib.h>
#include <json.hpp>

#include "smapi/activity_json.hpp"
#include "smapi/errors.hpp"
#include "smapi/quality.hpp"
#include "smapi/query_plan.hpp"

namespace smapi {

using nlohmann::json;

namespace {

int status_of(const Error& e) {
    switch (e.code()) {
    case ErrorCode::InvalidRequest:
    case ErrorCode::QueryParse:
    case ErrorCode::UnsupportedQuery:
    case ErrorCode::Capability:
    case ErrorCode::Schema:
        return 400;
    case ErrorCode::NotFound:
        return 404;
    case ErrorCode::Conflict:
        return 409;
    case ErrorCode::QuotaExceeded:
        return 503;
    case ErrorCode::Config:
    case ErrorCode::Storage:
    case ErrorCode::Internal:
        return 500;
    }
    return 500;
}

const char* code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidRequest: return "invalid_request";
    case ErrorCode::QueryParse:     return "query_parse_error";
    case ErrorCode::UnsupportedQuery: return "unsupported_query";
    case ErrorCode::Capability:     return "capability_error";
    case ErrorCode::QuotaExceeded:  return "quota_exceeded";
    case ErrorCode::NotFound:       return "not_found";
    case ErrorCode::Conflict:       return "conflict";
    case ErrorCode::Schema:         return "schema_error";
    case ErrorCode::Config:         return "config_error";
    case ErrorCode::Storage:        return "storage_error";
    case ErrorCode::Internal:       return "internal_error";
    }
    return "internal_error";
}

void fail(httplib::Response& res, const Error& e) {
    json body;
    body["error"] = code_name(e.code());
    body["message"] = e.what();
    if (const auto* invalid = dynamic_cast<const InvalidRequestError*>(&e)) {
        if (!invalid->fields().empty()) {
            json fields = json::object();
            for (const auto& [field, message] : invalid->fields()) fields[field] = message;
            body["fields"] = fields;
        }
    }
    if (const auto* quota = dynamic_cast<const QuotaExceededError*>(&e)) {
        res.set_header("Retry-After",
                       std::to_string((quota->retry_after_ms() + 999) / 1000));
    }
    res.status = status_of(e);
    res.set_content(body.dump(), "application/json");
}

void fail_custom(httplib::Response& res, int status, const std::string& error,
                 const std::string& message, json fields = {}) {
    json body;
    body["error"] = error;
    body["message"] = message;
    if (!fields.empty()) body["fields"] = fields;
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        fail(res, e);
    } catch (const std::exception& e) {
        fail_custom(res, 500, "internal_error", e.what());
    }
}

// Table 6 types since/until as Long but start/end as String; both arrive as
// Unix-time integers, number or numeric string.
std::optional<std::int64_t> unix_time_field(const json& j, const char* key,
                                            std::map<std::string, std::string>& fields) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (it->is_number_integer()) return it->get<std::int64_t>();
    if (it->is_number()) return static_cast<std::int64_t>(it->get<double>());
    if (it->is_string()) {
        try {
            std::size_t consumed = 0;
            std::int64_t v = std::stoll(it->get<std::string>(), &consumed);
            if (consumed == it->get<std::string>().size()) return v;
        } catch (...) {
        }
    }
    fields[key] = "expected a Unix time integer";
    return std::nullopt;
}

std::optional<double> double_field(const json& j, const char* key,
                                   std::map<std::string, std::string>& fields) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (it->is_number()) return it->get<double>();
    fields[key] = "expected a number";
    return std::nullopt;
}

std::vector<Platform> platforms_field(const json& j,
                                      std::map<std::string, std::string>& fields) {
    std::vector<Platform> platforms;
    auto it = j.find("platforms");
    if (it == j.end()) {
        fields["platforms"] = "required";
        return platforms;
    }
    if (!it->is_array()) {
        fields["platforms"] = "expected an array of platform names";
        return platforms;
    }
    for (const auto& entry : *it) {
        if (!entry.is_string()) {
            fields["platforms"] = "expected an array of platform names";
            return platforms;
        }
        auto platform = parse_platform(entry.get<std::string>());
        if (!platform) {
            fields["platforms"] = "unknown platform: " + entry.get<std::string>();
            return platforms;
        }
        platforms.push_back(*platform);
    }
    return platforms;
}

json parse_body(const httplib::Request& req) {
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded()) {
        throw InvalidRequestError("request body is not valid JSON");
    }
    return body;
}

bool is_json_content(const httplib::Request& req) {
    auto value = req.get_header_value("Content-Type");
    return value.find("application/json") != std::string::npos;
}

SearchRequest search_request_from(const json& body) {
    std::map<std::string, std::string> fields;
    SearchRequest request;
    if (auto it = body.find("keyword"); it != body.end() && it->is_string()) {
        request.keyword = it->get<std::string>();
    } else {
        fields["keyword"] = "required";
    }
    request.platforms = platforms_field(body, fields);
    request.since_s = unix_time_field(body, "since", fields);
    request.until_s = unix_time_field(body, "until", fields);
    request.latitude = double_field(body, "latitude", fields);
    request.longitude = double_field(body, "longitude", fields);
    request.radius_km = double_field(body, "radius", fields);
    if (!fields.empty()) throw InvalidRequestError("invalid search request", fields);
    return request;
}

CrawlJobSpec crawl_spec_from(const json& payload) {
    std::map<std::string, std::string> fields;
    auto it = payload.find("gathering");
    if (it == payload.end() || !it->is_object()) {
        throw InvalidRequestError("payload must carry a \"gathering\" object",
                                  {{"gathering", "required"}});
    }
    const json& g = *it;
    CrawlJobSpec spec;
    if (auto kw = g.find("keyword"); kw != g.end() && kw->is_string()) {
        spec.keyword = kw->get<std::string>();
    } else {
        fields["keyword"] = "required";
    }
    spec.platforms = platforms_field(g, fields);
    if (auto wait = g.find("waitBetweenRequests"); wait != g.end()) {
        if (wait->is_number_integer()) {
            spec.waitBetweenRequests_ms = wait->get<std::int64_t>();
        } else {
            fields["waitBetweenRequests"] = "expected milliseconds as an integer";
        }
    } else {
        fields["waitBetweenRequests"] = "required";
    }
    spec.start_s = unix_time_field(g, "start", fields);
    spec.end_s = unix_time_field(g, "end", fields);
    spec.latitude = double_field(g, "latitude", fields);
    spec.longitude = double_field(g, "longitude", fields);
    spec.radius_km = double_field(g, "radius", fields);
    if (!fields.empty()) throw InvalidRequestError("invalid crawl payload", fields);
    return spec;
}

} // namespace

HttpService::HttpService(GatheringService& gathering, ActivityStore& store,
                         const Enricher& enricher, ServiceConfig config)
    : gathering_(gathering), store_(store), enricher_(enricher), config_(std::move(config)),
      server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

HttpService::~HttpService() { stop(); }

void HttpService::install_routes() {
    auto& svr = *server_;

    svr.Post("/SocialMediaAPI/crawlService",
             [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                     if (!is_json_content(req)) {
                         fail_custom(res, 415, "unsupported_media_type",
                                     "Content-Type must be application/json");
                         return;
                     }
                     CrawlJobSpec spec = crawl_spec_from(parse_body(req));
                     std::string jobId = gathering_.start_crawl(spec);
                     json body;
                     body["crawljobId"] = jobId;
                     res.status = 201;
                     res.set_content(body.dump(), "application/json");
                 });
             });

    svr.Get("/SocialMediaAPI/crawlService/allJobs",
            [this](const httplib::Request&, httplib::Response& res) {
                guarded(res, [&] {
                    json body = json::array();
                    for (const auto& record : store_.list_jobs()) {
                        body.push_back(job_to_json(record, /*include_spec=*/false));
                    }
                    res.set_content(body.dump(), "application/json");
                });
            });

    svr.Get(R"(/SocialMediaAPI/crawlService/([0-9a-f]{40})/status)",
            [this](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                    json body = job_to_json(store_.job(req.matches[1]));
                    res.set_content(body.dump(), "application/json");
                });
            });

    svr.Post(R"(/SocialMediaAPI/crawlService/([0-9a-f]{40})/stop)",
             [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                     json body = job_to_json(gathering_.stop_crawl(req.matches[1]));
                     res.set_content(body.dump(), "application/json");
                 });
             });

    svr.Get(R"(/SocialMediaAPI/crawlService/([0-9a-f]{40}))",
            [this](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                    long long count = static_cast<long long>(config_.default_page_count);
                    long long offset = 0;
                    try {
                        if (req.has_param("count")) count = std::stoll(req.get_param_value("count"));
                        if (req.has_param("offset")) offset = std::stoll(req.get_param_value("offset"));
                    } catch (...) {
                        throw InvalidRequestError("count/offset must be integers");
                    }
                    if (count < 1) {
                        throw InvalidRequestError("count must be at least 1",
                                                  {{"count", "must be >= 1"}});
                    }
                    if (offset < 0) {
                        throw InvalidRequestError("offset must not be negative",
                                                  {{"offset", "must be >= 0"}});
                    }
                    auto page = store_.load_page(req.matches[1],
                                                 static_cast<std::size_t>(count),
                                                 static_cast<std::size_t>(offset));
                    res.set_content(collection_to_json(page).dump(), "application/json");
                });
            });

    svr.Post("/SocialMediaAPI/searchService",
             [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                     json body = parse_body(req);
                     SearchRequest request = search_request_from(body);
                     SearchOutcome outcome = gathering_.run_search(request);

                     std::string truncated, skipped;
                     for (const auto& platform : outcome.platforms) {
                         if (platform.truncated) {
                             if (!truncated.empty()) truncated += ',';
                             truncated += to_string(platform.platform);
                         }
                         if (platform.skipped) {
                             if (!skipped.empty()) skipped += ',';
                             skipped += to_string(platform.platform);
                         }
                     }
                     if (!truncated.empty()) res.set_header("X-Truncated-Platforms", truncated);
                     if (!skipped.empty()) res.set_header("X-Skipped-Platforms", skipped);
                     res.set_header("X-Job-Id", outcome.jobId);

                     json payload;
                     if (auto weights = body.find("weightProfile"); weights != body.end()) {
                         if (!weights->is_object()) {
                             throw InvalidRequestError(
                                 "weightProfile must map method ids to weights",
                                 {{"weightProfile", "expected an object"}});
                         }
                         WeightProfile profile;
                         for (auto w = weights->begin(); w != weights->end(); ++w) {
                             if (!w.value().is_number()) {
                                 throw InvalidRequestError(
                                     "weightProfile must map method ids to numbers",
                                     {{w.key(), "expected a number"}});
                             }
                             profile.weights[w.key()] = w.value().get<double>();
                         }
                         QueryContext query_ctx;
                         for (const auto& disjunct : to_dnf(parse_query(request.keyword)).disjuncts) {
                             for (const auto& literal : disjunct.positive) {
                                 if (!literal.is_phrase) query_ctx.terms.push_back(literal.literal_text);
                             }
                         }
                         CorpusContext ctx = CorpusContext::build(outcome.collection.items, query_ctx);
                         auto ranked = rank_activities(outcome.collection.items, profile, ctx,
                                                       query_ctx);
                         json items = json::array();
                         for (const auto& entry : ranked) {
                             json doc = activity_to_json(*entry.activity);
                             doc["qualityScore"] = entry.score;
                             items.push_back(std::move(doc));
                         }
                         payload["type"] = "Collection";
                         payload["totalItems"] = items.size();
                         payload["items"] = std::move(items);
                     } else {
                         payload = collection_to_json(outcome.collection);
                     }
                     res.set_content(payload.dump(), "application/json");
                 });
             });

    svr.Post("/SocialMediaAPI/enrichment",
             [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                     json body = parse_body(req);
                     if (!body.is_array()) {
                         throw InvalidRequestError("body must be an array of activities");
                     }
                     std::vector<Activity> activities;
                     std::map<std::string, std::string> fields;
                     for (std::size_t i = 0; i < body.size(); ++i) {
                         try {
                             Activity a = activity_from_json(body[i]);
                             auto validation = validate_activity(a);
                             if (!validation.ok()) {
                                 fields[std::to_string(i)] =
                                     validation.violations.front().field + ": " +
                                     validation.violations.front().message;
                                 continue;
                             }
                             activities.push_back(std::move(a));
                         } catch (const SchemaError& e) {
                             fields[std::to_string(i)] = e.what();
                         }
                     }
                     if (!fields.empty()) {
                         throw InvalidRequestError("batch contains invalid activities", fields);
                     }
                     json out = json::array();
                     for (const auto& a : activities) {
                         out.push_back(activity_to_json(enricher_.enrich(a)));
                     }
                     res.set_content(out.dump(), "application/json");
                 });
             });
}

void HttpService::scheduler_loop() {
    while (!stopping_.load()) {
        gathering_.tick_due_jobs();
        std::this_thread::sleep_for(std::chrono::milliseconds(200));
    }
}

bool HttpService::serve() {
    scheduler_ = std::thread([this] { scheduler_loop(); });
    bool ok = server_->listen(config_.host, config_.port);
    stopping_.store(true);
    if (scheduler_.joinable()) scheduler_.join();
    return ok;
}

int HttpService::start_async() {
    int port = server_->bind_to_any_port("127.0.0.1");
    if (port <= 0) throw ConfigError("cannot bind an ephemeral port");
    listener_ = std::thread([this] { server_->listen_after_bind(); });
    scheduler_ = std::thread([this] { scheduler_loop(); });
    server_->wait_until_ready();
    return port;
}

void HttpService::stop() {
    if (stopping_.exchange(true)) {
        if (listener_.joinable()) listener_.join();
        if (scheduler_.joinable()) scheduler_.join();
        return;
    }
    if (server_) server_->stop();
    if (listener_.joinable()) listener_.join();
    if (scheduler_.joinable()) scheduler_.join();
}

} // namespace smapi
