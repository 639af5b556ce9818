#include "smapi/service_config.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "smapi/errors.hpp"

namespace smapi {

using nlohmann::json;

ServiceConfig ServiceConfig::defaults() {
    ServiceConfig config;
    // capacities are configuration, not platform claims
    config.budgets[Platform::Twitter] = {180, 900'000};
    config.budgets[Platform::Facebook] = {200, 3'600'000};
    config.budgets[Platform::Instagram] = {200, 3'600'000};
    config.budgets[Platform::GooglePlus] = {100, 900'000};
    config.budgets[Platform::YouTube] = {100, 900'000};
    return config;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file: " + file.string());
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ConfigError("config file is not a JSON object: " + file.string());
    }

    ServiceConfig config = defaults();
    config.host = doc.value("host", config.host);
    config.port = doc.value("port", config.port);
    if (doc.contains("fixtureDir")) config.fixture_dir = doc["fixtureDir"].get<std::string>();
    if (doc.contains("enrichmentDir")) {
        config.enrichment_dir = doc["enrichmentDir"].get<std::string>();
    }
    if (doc.contains("storePath")) config.store_path = doc["storePath"].get<std::string>();
    config.default_radius_km = doc.value("defaultRadiusKm", config.default_radius_km);
    config.default_page_count = doc.value("defaultPageCount", config.default_page_count);

    if (auto it = doc.find("budgets"); it != doc.end()) {
        if (!it->is_object()) throw ConfigError("\"budgets\" must be an object");
        for (auto b = it->begin(); b != it->end(); ++b) {
            auto platform = parse_platform(b.key());
            if (!platform) throw ConfigError("unknown platform in budgets: " + b.key());
            BudgetLedger::Limits limits;
            limits.capacity = b.value().value("capacity", limits.capacity);
            if (b.value().contains("windowSeconds")) {
                limits.window_ms = b.value()["windowSeconds"].get<std::int64_t>() * 1000;
            }
            config.budgets[*platform] = limits;
        }
    }
    if (auto it = doc.find("maxResultsPerRequest"); it != doc.end()) {
        if (!it->is_object()) throw ConfigError("\"maxResultsPerRequest\" must be an object");
        for (auto m = it->begin(); m != it->end(); ++m) {
            auto platform = parse_platform(m.key());
            if (!platform) {
                throw ConfigError("unknown platform in maxResultsPerRequest: " + m.key());
            }
            config.max_results_overrides[*platform] = m.value().get<std::size_t>();
        }
    }
    return config;
}

void ServiceConfig::apply_env_overrides() {
    if (const char* v = std::getenv("SMAPI_PORT")) port = std::atoi(v);
    if (const char* v = std::getenv("SMAPI_FIXTURE_DIR")) fixture_dir = v;
    if (const char* v = std::getenv("SMAPI_ENRICHMENT_DIR")) enrichment_dir = v;
    if (const char* v = std::getenv("SMAPI_STORE_PATH")) store_path = v;
}

} // namespace smapi
