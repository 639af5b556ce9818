// Operator CLI: serve the REST API, issue searches and crawl commands
// against a running instance, export job datasets, inspect query plans, and
// regenerate fixture corpora.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "smapi/adapters.hpp"
#include "smapi/enrichment.hpp"
#include "smapi/errors.hpp"
#include "smapi/fixturegen.hpp"
#include "smapi/gathering.hpp"
#include "smapi/http_service.hpp"
#include "smapi/query.hpp"
#include "smapi/query_plan.hpp"
#include "smapi/service_config.hpp"
#include "smapi/storage.hpp"

using nlohmann::json;

namespace {

std::vector<smapi::Platform> parse_platform_list(const std::string& csv) {
    std::vector<smapi::Platform> platforms;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t comma = csv.find(',', start);
        std::string name = csv.substr(start, comma == std::string::npos ? comma : comma - start);
        if (!name.empty()) {
            auto p = smapi::parse_platform(name);
            if (!p) throw CLI::ValidationError("platforms", "unknown platform: " + name);
            platforms.push_back(*p);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return platforms;
}

struct Remote {
    std::string host = "127.0.0.1";
    int port = 8750;
};

json request_json(const Remote& remote, const std::string& method, const std::string& path,
                  const json* body = nullptr) {
    httplib::Client client(remote.host, remote.port);
    client.set_read_timeout(120, 0);
    httplib::Result result;
    if (method == "GET") {
        result = client.Get(path);
    } else {
        result = client.Post(path, body ? body->dump() : std::string("{}"),
                             "application/json");
    }
    if (!result) {
        throw smapi::Error(smapi::ErrorCode::Internal,
                           "cannot reach " + remote.host + ":" + std::to_string(remote.port));
    }
    json parsed = json::parse(result->body, nullptr, false);
    if (result->status >= 300) {
        std::string message = parsed.is_object() && parsed.contains("message")
                                  ? parsed["message"].get<std::string>()
                                  : result->body;
        throw smapi::Error(smapi::ErrorCode::Internal,
                           "HTTP " + std::to_string(result->status) + ": " + message);
    }
    if (parsed.is_discarded()) {
        throw smapi::Error(smapi::ErrorCode::Internal, "non-JSON response from service");
    }
    return parsed;
}

int run_serve(const std::string& config_path, std::optional<int> port_override) {
    smapi::ServiceConfig config = config_path.empty()
                                      ? smapi::ServiceConfig::defaults()
                                      : smapi::ServiceConfig::load(config_path);
    config.apply_env_overrides();
    if (port_override) config.port = *port_override;

    auto adapters = smapi::AdapterRegistry::load_fixture_dir(config.fixture_dir,
                                                             config.max_results_overrides);
    auto enricher = smapi::Enricher(smapi::EnrichmentConfig::load(config.enrichment_dir));

    static smapi::SystemClock clock;
    smapi::BudgetLedger budgets(config.budgets, clock);
    smapi::ActivityStore store(clock, config.store_path);
    smapi::GatheringService gathering(adapters, budgets, store, enricher, clock,
                                      {config.default_radius_km});
    smapi::HttpService service(gathering, store, enricher, config);

    std::printf("smapi: serving on %s:%d (fixtures: %s, store: %s)\n", config.host.c_str(),
                config.port, config.fixture_dir.string().c_str(),
                config.store_path.empty() ? "in-memory" : config.store_path.string().c_str());
    std::fflush(stdout);
    return service.serve() ? 0 : 1;
}

void add_geo_options(CLI::App* cmd, std::optional<double>& lat, std::optional<double>& lon,
                     std::optional<double>& radius) {
    cmd->add_option("--latitude,--lat", lat, "center latitude (decimal degrees)");
    cmd->add_option("--longitude,--lon", lon, "center longitude (decimal degrees)");
    cmd->add_option("--radius", radius, "radius in kilometers");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cross-platform social media gathering service"};
    app.require_subcommand(1);

    Remote remote;
    app.add_option("--host", remote.host, "service host for client commands");
    app.add_option("--port", remote.port, "service port for client commands");

    // serve
    auto* serve = app.add_subcommand("serve", "start the REST service");
    std::string config_path;
    std::optional<int> serve_port;
    serve->add_option("--config", config_path, "service config JSON file");
    serve->add_option("--serve-port", serve_port, "listen port override");

    // search
    auto* search = app.add_subcommand("search", "run a one-time search");
    std::string keyword, platforms_csv = "twitter,facebook,instagram,googleplus,youtube";
    std::optional<std::int64_t> since, until;
    std::optional<double> lat, lon, radius;
    std::string weight_profile;
    search->add_option("--keyword", keyword, "query string")->required();
    search->add_option("--platforms", platforms_csv, "comma-separated platform list");
    search->add_option("--since", since, "lower bound, Unix time seconds");
    search->add_option("--until", until, "upper bound, Unix time seconds");
    add_geo_options(search, lat, lon, radius);
    search->add_option("--weight-profile", weight_profile,
                       "JSON weight map for quality ranking");

    // crawl
    auto* crawl = app.add_subcommand("crawl", "manage crawl jobs");
    crawl->require_subcommand(1);
    auto* crawl_start = crawl->add_subcommand("start", "initialize a crawl job");
    std::string crawl_keyword, crawl_platforms = "twitter,facebook,instagram,googleplus,youtube";
    std::int64_t wait_ms = 10000;
    std::optional<std::int64_t> start_s, end_s;
    std::optional<double> crawl_lat, crawl_lon, crawl_radius;
    crawl_start->add_option("--keyword", crawl_keyword, "query string")->required();
    crawl_start->add_option("--platforms", crawl_platforms, "comma-separated platform list");
    crawl_start->add_option("--wait", wait_ms, "milliseconds between gathering rounds");
    crawl_start->add_option("--start", start_s, "job start, Unix time seconds");
    crawl_start->add_option("--end", end_s, "job end, Unix time seconds");
    add_geo_options(crawl_start, crawl_lat, crawl_lon, crawl_radius);

    auto* crawl_stop = crawl->add_subcommand("stop", "cancel a crawl job");
    std::string stop_id;
    crawl_stop->add_option("jobId", stop_id, "crawl job id")->required();

    auto* crawl_list = crawl->add_subcommand("list", "list all jobs");

    auto* crawl_status = crawl->add_subcommand("status", "show one job record");
    std::string status_id;
    crawl_status->add_option("jobId", status_id, "job id")->required();

    // export
    auto* export_cmd = app.add_subcommand("export", "write a job's activities to a file");
    std::string export_id, export_format = "jsonl", export_out;
    export_cmd->add_option("jobId", export_id, "job id")->required();
    export_cmd->add_option("--format", export_format, "jsonl | as2")
        ->check(CLI::IsMember({"jsonl", "as2"}));
    export_cmd->add_option("--out", export_out, "output file")->required();

    // explain
    auto* explain = app.add_subcommand("explain", "print per-platform rewrite plans");
    std::string explain_query, explain_platforms = "twitter,facebook,instagram,googleplus,youtube";
    std::size_t pages = 1;
    explain->add_option("query", explain_query, "query string")->required();
    explain->add_option("--platform,--platforms", explain_platforms,
                        "comma-separated platform list");
    explain->add_option("--pages", pages, "pages fetched per native request");

    // fixtures
    auto* fixtures = app.add_subcommand("fixtures", "generate fixture corpora");
    std::string fixtures_out = "data/fixtures";
    std::uint64_t seed = smapi::fixtures::GeneratorOptions{}.seed;
    std::size_t count = smapi::fixtures::GeneratorOptions{}.items_per_platform;
    fixtures->add_option("--out", fixtures_out, "output directory");
    fixtures->add_option("--seed", seed, "generator seed");
    fixtures->add_option("--count", count, "items per platform");

    CLI11_PARSE(app, argc, argv);

    try {
        if (serve->parsed()) {
            return run_serve(config_path, serve_port);
        }

        if (search->parsed()) {
            json body;
            body["keyword"] = keyword;
            json platform_names = json::array();
            for (auto p : parse_platform_list(platforms_csv)) {
                platform_names.push_back(std::string(smapi::to_string(p)));
            }
            body["platforms"] = platform_names;
            if (since) body["since"] = *since;
            if (until) body["until"] = *until;
            if (lat) body["latitude"] = *lat;
            if (lon) body["longitude"] = *lon;
            if (radius) body["radius"] = *radius;
            if (!weight_profile.empty()) {
                json weights = json::parse(weight_profile, nullptr, false);
                if (weights.is_discarded() || !weights.is_object()) {
                    throw smapi::InvalidRequestError("--weight-profile must be a JSON object");
                }
                body["weightProfile"] = weights;
            }
            json result = request_json(remote, "POST", "/SocialMediaAPI/searchService", &body);
            std::cout << result.dump(2) << std::endl;
            return 0;
        }

        if (crawl_start->parsed()) {
            json gathering;
            gathering["keyword"] = crawl_keyword;
            json platform_names = json::array();
            for (auto p : parse_platform_list(crawl_platforms)) {
                platform_names.push_back(std::string(smapi::to_string(p)));
            }
            gathering["platforms"] = platform_names;
            gathering["waitBetweenRequests"] = wait_ms;
            if (start_s) gathering["start"] = *start_s;
            if (end_s) gathering["end"] = *end_s;
            if (crawl_lat) gathering["latitude"] = *crawl_lat;
            if (crawl_lon) gathering["longitude"] = *crawl_lon;
            if (crawl_radius) gathering["radius"] = *crawl_radius;
            json payload;
            payload["gathering"] = gathering;
            json result = request_json(remote, "POST", "/SocialMediaAPI/crawlService", &payload);
            std::cout << result["crawljobId"].get<std::string>() << std::endl;
            return 0;
        }

        if (crawl_stop->parsed()) {
            json result = request_json(remote, "POST",
                                       "/SocialMediaAPI/crawlService/" + stop_id + "/stop");
            std::cout << result.dump(2) << std::endl;
            return 0;
        }

        if (crawl_list->parsed()) {
            json result = request_json(remote, "GET", "/SocialMediaAPI/crawlService/allJobs");
            std::cout << result.dump(2) << std::endl;
            return 0;
        }

        if (crawl_status->parsed()) {
            json result = request_json(remote, "GET",
                                       "/SocialMediaAPI/crawlService/" + status_id + "/status");
            std::cout << result.dump(2) << std::endl;
            return 0;
        }

        if (export_cmd->parsed()) {
            json items = json::array();
            std::size_t offset = 0;
            const std::size_t page_size = 500;
            for (;;) {
                json page = request_json(remote, "GET",
                                         "/SocialMediaAPI/crawlService/" + export_id +
                                             "?count=" + std::to_string(page_size) +
                                             "&offset=" + std::to_string(offset));
                const auto& page_items = page.at("items");
                for (const auto& item : page_items) items.push_back(item);
                if (page_items.size() < page_size) break;
                offset += page_size;
            }
            std::ofstream out(export_out, std::ios::trunc);
            if (!out) {
                throw smapi::Error(smapi::ErrorCode::Storage, "cannot write " + export_out);
            }
            if (export_format == "jsonl") {
                for (const auto& item : items) out << item.dump() << '\n';
            } else {
                json collection;
                collection["type"] = "Collection";
                collection["totalItems"] = items.size();
                collection["items"] = items;
                out << collection.dump(2) << '\n';
            }
            std::printf("wrote %zu activities to %s\n", items.size(), export_out.c_str());
            return 0;
        }

        if (explain->parsed()) {
            smapi::QueryPtr ast = smapi::parse_query(explain_query);
            smapi::Dnf dnf = smapi::to_dnf(ast);
            std::printf("query: %s\n", smapi::query_to_string(ast).c_str());
            std::printf("disjuncts: %zu\n\n", dnf.disjuncts.size());
            for (auto p : parse_platform_list(explain_platforms)) {
                auto caps = smapi::default_capabilities(p);
                std::printf("%s:\n", std::string(smapi::to_string(p)).c_str());
                try {
                    auto plan = smapi::rewrite_for_platform(dnf, caps);
                    for (const auto& request : plan.nativeRequests) {
                        std::printf("  native request [%zu]: %s\n", request.conjunctIndex,
                                    request.keywordString.c_str());
                    }
                    if (plan.postFilter.mustMatch) {
                        std::printf("  residual post-filter: %s\n",
                                    smapi::query_to_string(plan.postFilter.mustMatch).c_str());
                    }
                    std::printf("  request units: %zu (x %zu pages = %zu)\n",
                                plan.estimatedRequestUnits, pages,
                                smapi::estimate_cost(plan, pages));
                } catch (const smapi::Error& e) {
                    std::printf("  unsupported: %s\n", e.what());
                }
                std::printf("\n");
            }
            return 0;
        }

        if (fixtures->parsed()) {
            smapi::fixtures::GeneratorOptions options;
            options.seed = seed;
            options.items_per_platform = count;
            smapi::fixtures::write_fixture_files(fixtures_out, options);
            std::printf("wrote %zu items per platform to %s\n", count, fixtures_out.c_str());
            return 0;
        }
    } catch (const smapi::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
